use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tilepar_core::corpus::{complete_levels, theorem_cases};
use tilepar_core::count::{count_via_matching, enumerate_tilings, DEFAULT_W_MAX};
use tilepar_core::families::{
    family_cases, full_rect_script, holey_cases, holey_odd_cases, rect_cases, schedule_script,
    Family, RectBounds,
};
use tilepar_core::grid::render_with;
use tilepar_core::reduce::ScriptStep;
use tilepar_core::region::Cell;
use tilepar_core::trace::verify_record;
use tilepar_core::{
    count_tilings_with, emit_region, find_corners, is_walled_at, parity_tilings_with,
    reduce_to_trace, CaseResult, CountOptions, Error, ReductionTrace, Region, Side, StCorner,
    Strategy, Summary, TraceRecord,
};

mod source;

#[derive(Parser)]
#[command(
    name = "tilepar",
    version,
    about = "Domino tiling counts and parity reductions"
)]
struct Cli {
    /// Output style; `json` prints one object per line.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Exact number of domino tilings.
    Count {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        guard: Guard,
        #[arg(long, value_enum, default_value_t = Method::Profile)]
        method: Method,
        /// Stop enumeration after this many tilings.
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
    /// Parity of the number of tilings.
    Parity {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        guard: Guard,
    },
    /// List corners with completeness and walls.
    Corners {
        #[command(flatten)]
        input: Input,
    },
    /// Reduce a region by strip rewrites and print the trace.
    Reduce {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        plan: Plan,
    },
    /// Replay a trace file against its start region.
    VerifyTrace {
        trace: PathBuf,
        /// Start region file, overriding the trace's `start` line.
        #[arg(long, conflicts_with = "gen")]
        region: Option<PathBuf>,
        /// Start region builder spec, overriding the trace's `start` line.
        #[arg(long)]
        gen: Option<String>,
    },
    /// Run a family of checks and report one line per case.
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_n: Option<u32>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_k: Option<u32>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        max_p: u32,
        /// Bounds of the direct rectangle parity table.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        max_rows: u32,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
        max_cols: u32,
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u32).range(1..))]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        guard: Guard,
    },
    /// Draw a region, optionally marking corner apexes or one reduction step.
    Render {
        #[command(flatten)]
        input: Input,
        /// Mark corner apexes with `*`.
        #[arg(long)]
        corners: bool,
        /// Mark the cells removed by this step of the reduction with `o`.
        #[arg(long)]
        step: Option<usize>,
        #[command(flatten)]
        plan: Plan,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Region file in the `#`/`.` grid format.
    file: Option<PathBuf>,
    /// Builder spec: rect:R,C holey:M,N holeyodd:M,N half:M,N halfodd:M,N
    /// hprime:M,N t:I,J,P d:I,J,P.
    #[arg(long)]
    gen: Option<String>,
}

impl Input {
    fn load(&self) -> Result<(Region, String), Error> {
        match (&self.file, &self.gen) {
            (Some(path), _) => Ok((source::read_file(path)?, path.display().to_string())),
            (_, Some(spec)) => Ok((source::build(spec)?, spec.clone())),
            _ => unreachable!("clap requires one input"),
        }
    }
}

#[derive(Args)]
struct Guard {
    /// Widest profile the transfer-matrix count accepts.
    #[arg(long, default_value_t = DEFAULT_W_MAX)]
    w_max: usize,
}

impl Guard {
    fn options(&self) -> CountOptions {
        CountOptions { w_max: self.w_max }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Profile,
    Enumerate,
    Matching,
}

#[derive(Args)]
struct Plan {
    #[arg(long, value_enum, default_value_t = StrategyName::WallGreedy, conflicts_with = "script")]
    strategy: StrategyName,
    /// Scripted strip schedule for an `n k x n (k+1)` rectangle: one round,
    /// or every round down to the empty region.
    #[arg(long, value_enum)]
    script: Option<ScriptName>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyName {
    WallGreedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScriptName {
    #[value(alias = "cor42")]
    Schedule,
    Full,
}

impl Plan {
    fn strategy(&self, region: &Region) -> Result<Strategy, Error> {
        let Some(script) = self.script else {
            return Ok(match self.strategy {
                StrategyName::WallGreedy => Strategy::WallGreedy,
            });
        };
        let (k, n) = rect_shape(region)?;
        let steps: Vec<ScriptStep> = match script {
            ScriptName::Schedule => schedule_script(k, n),
            ScriptName::Full => full_rect_script(k, n),
        };
        Ok(Strategy::Scripted(steps))
    }
}

/// `(k, n)` for a full rectangle with `kn` rows and `(k+1)n` columns.
fn rect_shape(region: &Region) -> Result<(usize, usize), Error> {
    let (cols, rows) = region.dimensions();
    let not_rect = || {
        Error::InvalidArgument(format!(
            "the schedule needs a kn x (k+1)n rectangle, got {} cells in a {rows}x{cols} box",
            region.len()
        ))
    };
    if region.len() != rows * cols || cols <= rows || rows % (cols - rows) != 0 {
        return Err(not_rect());
    }
    let n = cols - rows;
    Ok((rows / n, n))
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Holey,
    HoleyOdd,
    Rect,
    Tfamily,
    Dfamily,
    Theorem,
}

enum Outcome {
    Done,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Write one chunk to stdout; a closed pipe (e.g. `| head`) ends the run quietly.
fn out(text: &str) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(text.as_bytes()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

fn emit(format: Format, text: impl AsRef<str>, value: Value) {
    match format {
        Format::Text => out(&format!("{}\n", text.as_ref())),
        Format::Json => out(&format!("{value}\n")),
    }
}

fn cell_json(c: Cell) -> Value {
    json!([c.x, c.y])
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let format = cli.format;
    match &cli.command {
        Command::Count {
            input,
            guard,
            method,
            cap,
        } => {
            let (region, _) = input.load()?;
            let count = match method {
                Method::Profile => count_tilings_with(&region, &guard.options())?.to_string(),
                Method::Matching => count_via_matching(&region)?.to_string(),
                Method::Enumerate => {
                    let found = enumerate_tilings(&region, *cap)?;
                    if found.truncated {
                        return Err(Error::ResourceLimit(format!(
                            "more than {cap} tilings; raise --cap"
                        )));
                    }
                    found.tilings.len().to_string()
                }
            };
            emit(format, &count, json!({ "count": count }));
        }
        Command::Parity { input, guard } => {
            let (region, _) = input.load()?;
            let parity = parity_tilings_with(&region, &guard.options())?;
            emit(
                format,
                parity.to_string(),
                json!({ "parity": parity.bit() }),
            );
        }
        Command::Corners { input } => {
            let (region, _) = input.load()?;
            for corner in find_corners(&region) {
                print_corner(format, &region, &corner);
            }
        }
        Command::Reduce { input, plan } => {
            let (region, name) = input.load()?;
            let trace = reduce_to_trace(&region, &plan.strategy(&region)?)?;
            print_trace(format, &trace, &name);
        }
        Command::VerifyTrace { trace, region, gen } => {
            let text = std::fs::read_to_string(trace).map_err(|e| {
                Error::InvalidArgument(format!("cannot read {}: {e}", trace.display()))
            })?;
            let record = TraceRecord::parse(&text)?;
            let start = match (region, gen) {
                (Some(path), _) => source::read_file(path)?,
                (_, Some(spec)) => source::build(spec)?,
                _ => source::resolve(&record.source, trace.parent())?,
            };
            let report = verify_record(&start, &record);
            for check in &report.checks {
                let label = if check.index == 0 {
                    "final".to_string()
                } else {
                    check.index.to_string()
                };
                let verdict = if check.passed { "PASS" } else { "FAIL" };
                emit(
                    format,
                    format!("CHECK {label} {verdict} {}", check.message),
                    json!({ "check": label, "result": verdict, "message": check.message }),
                );
            }
            return Ok(if report.all_pass() {
                Outcome::Done
            } else {
                Outcome::Failed
            });
        }
        Command::Verify {
            target,
            max_n,
            max_k,
            max_p,
            max_rows,
            max_cols,
            trials,
            seed,
            guard,
        } => {
            let opts = guard.options();
            let cases = match target {
                Target::Holey => holey_cases(max_n.unwrap_or(5) as i32, &opts),
                Target::HoleyOdd => holey_odd_cases(max_n.unwrap_or(4) as i32, &opts),
                Target::Rect => rect_cases(
                    RectBounds {
                        max_rows: *max_rows as usize,
                        max_cols: *max_cols as usize,
                        sched_k: max_k.unwrap_or(4) as usize,
                        sched_n: max_n.unwrap_or(3) as usize,
                    },
                    &opts,
                ),
                Target::Tfamily => {
                    family_cases(Family::T, max_k.unwrap_or(4) as i32, *max_p as i32, &opts)
                }
                Target::Dfamily => {
                    family_cases(Family::D, max_k.unwrap_or(4) as i32, *max_p as i32, &opts)
                }
                Target::Theorem => theorem_cases(*trials as usize, *seed, &opts),
            };
            return Ok(print_cases(format, &cases));
        }
        Command::Render {
            input,
            corners,
            step,
            plan,
        } => {
            let (region, _) = input.load()?;
            let apexes: Vec<Cell> = if *corners {
                find_corners(&region).iter().map(StCorner::apex).collect()
            } else {
                Vec::new()
            };
            let removed: Vec<Cell> = match step {
                Some(n) => {
                    let trace = reduce_to_trace(&region, &plan.strategy(&region)?)?;
                    let s = n
                        .checked_sub(1)
                        .and_then(|i| trace.steps.get(i))
                        .ok_or_else(|| {
                            Error::InvalidArgument(format!(
                                "the trace has {} steps",
                                trace.steps.len()
                            ))
                        })?;
                    s.removed.clone()
                }
                None => Vec::new(),
            };
            let picture = if apexes.is_empty() && removed.is_empty() {
                emit_region(&region)
            } else {
                render_with(&region, |c| {
                    if apexes.contains(&c) {
                        Some('*')
                    } else if removed.contains(&c) {
                        Some('o')
                    } else {
                        region.contains(c).then_some('#')
                    }
                })
            };
            let picture = picture.trim_end_matches('\n');
            emit(
                format,
                picture,
                json!({ "rows": picture.lines().collect::<Vec<_>>() }),
            );
        }
    }
    Ok(Outcome::Done)
}

fn print_corner(format: Format, region: &Region, corner: &StCorner) {
    let level = complete_levels(region, corner)
        .into_iter()
        .max()
        .unwrap_or(0);
    let walled = match (
        is_walled_at(region, corner, Side::S),
        is_walled_at(region, corner, Side::T),
    ) {
        (true, true) => "both",
        (true, false) => "s",
        (false, true) => "t",
        (false, false) => "none",
    };
    emit(
        format,
        format!("{corner} complete_up_to={level} walled={walled}"),
        json!({
            "s": corner.s,
            "t": corner.t,
            "p": corner.p,
            "apex": cell_json(corner.apex()),
            "orient": corner.frame.orientation.index(),
            "complete_up_to": level,
            "walled": walled,
        }),
    );
}

fn print_trace(format: Format, trace: &ReductionTrace, name: &str) {
    let record = trace.to_record(name);
    match format {
        Format::Text => out(&record.to_text()),
        Format::Json => {
            out(&format!("{}\n", json!({ "start": name })));
            for (n, step) in record.steps.iter().enumerate() {
                let removed: Vec<Value> = step.removed.iter().map(|c| cell_json(*c)).collect();
                out(&format!(
                    "{}\n",
                    json!({
                        "step": n + 1,
                        "kind": step.kind.name(),
                        "apex": cell_json(step.apex),
                        "orient": step.orientation.index(),
                        "s": step.s,
                        "t": step.t,
                        "p": step.p,
                        "k": step.k,
                        "removed": removed,
                    })
                ));
            }
            if let Some(t) = &record.terminal {
                out(&format!("{}\n", json!({ "terminal": t })));
            }
            out(&format!("{}\n", json!({ "parity": record.parity.bit() })));
        }
    }
}

fn print_cases(format: Format, cases: &[CaseResult]) -> Outcome {
    for case in cases {
        emit(
            format,
            case.to_string(),
            json!({
                "case": case.name,
                "params": case.params,
                "expected": case.expected,
                "got": case.got,
                "result": if case.passed { "PASS" } else { "FAIL" },
            }),
        );
    }
    let summary = Summary::of(cases);
    emit(
        format,
        summary.to_string(),
        json!({ "summary": { "total": summary.total, "passed": summary.passed, "failed": summary.failed() } }),
    );
    if summary.failed() == 0 {
        Outcome::Done
    } else {
        Outcome::Failed
    }
}
