//! Where a region comes from: a grid file or a builder spec such as
//! `rect:2,3`.

use std::path::Path;

use tilepar_core::region::{
    d_region, half_region, half_region_odd, half_region_pruned, holey_square, holey_square_odd,
    rectangle, t_region,
};
use tilepar_core::{parse_region, Error, Region};

pub const BUILDERS: &[(&str, usize)] = &[
    ("rect", 2),
    ("holey", 2),
    ("holeyodd", 2),
    ("half", 2),
    ("halfodd", 2),
    ("hprime", 2),
    ("t", 3),
    ("d", 3),
];

/// Build the region named by `name:arg,arg[,arg]`.
pub fn build(spec: &str) -> Result<Region, Error> {
    let bad = |msg: String| Error::InvalidArgument(msg);
    let (name, args) = spec
        .split_once(':')
        .ok_or_else(|| bad(format!("builder spec {spec:?} must look like name:a,b")))?;
    let arity = BUILDERS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, a)| *a)
        .ok_or_else(|| {
            let names: Vec<&str> = BUILDERS.iter().map(|(n, _)| *n).collect();
            bad(format!(
                "unknown builder {name:?}; expected one of {}",
                names.join(", ")
            ))
        })?;
    let args = args
        .split(',')
        .map(|a| {
            a.trim()
                .parse::<i32>()
                .map_err(|_| bad(format!("bad integer {a:?} in {spec:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if args.len() != arity {
        return Err(bad(format!(
            "{name} takes {arity} arguments, got {}",
            args.len()
        )));
    }
    match name {
        "rect" => rectangle(args[0], args[1]),
        "holey" => holey_square(args[0], args[1]),
        "holeyodd" => holey_square_odd(args[0], args[1]),
        "half" => half_region(args[0], args[1]),
        "halfodd" => half_region_odd(args[0], args[1]),
        "hprime" => half_region_pruned(args[0], args[1]),
        "t" => t_region(args[0], args[1], args[2]),
        "d" => d_region(args[0], args[1], args[2]),
        _ => unreachable!("checked against BUILDERS"),
    }
}

pub fn is_builder_spec(text: &str) -> bool {
    text.split_once(':')
        .is_some_and(|(name, _)| BUILDERS.iter().any(|(n, _)| *n == name))
}

pub fn read_file(path: &Path) -> Result<Region, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    let region = parse_region(&text)?;
    if region.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "{} holds no cells",
            path.display()
        )));
    }
    Ok(region)
}

/// Resolve the `start` source of a trace: a builder spec, or a file path
/// taken relative to `base` when it is not absolute.
pub fn resolve(source: &str, base: Option<&Path>) -> Result<Region, Error> {
    if is_builder_spec(source) {
        return build(source);
    }
    let path = Path::new(source);
    match base {
        Some(dir) if path.is_relative() && !path.exists() => read_file(&dir.join(path)),
        _ => read_file(path),
    }
}
