//! Seeded random regions with complete corners, and the parity identity
//! checked on every corner of each.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::corner::{corner_in_frame, find_corners, is_complete_up_to, StCorner};
use crate::count::{parity_tilings_with, CountOptions, Parity};
use crate::error::Result;
use crate::reduce::{even_by_double_wall, reduce_open, reduce_wall, StepKind};
use crate::region::{d_region, rectangle, t_region, Cell, Region};
use crate::report::CaseResult;

pub const CORPUS_MAX_CELLS: usize = 26;

/// Every corner of `region` in both leg orders.
pub fn all_corners(region: &Region) -> Vec<StCorner> {
    let mut out = Vec::new();
    for c in find_corners(region) {
        out.push(c);
        let t = c.transposed();
        if corner_in_frame(region, t.frame, t.p) == Some(t) && t != c {
            out.push(t);
        }
    }
    out
}

/// Levels `k` at which the corner is complete.
pub fn complete_levels(region: &Region, corner: &StCorner) -> Vec<usize> {
    let lo = if corner.p == 1 { 1 } else { 2 };
    (lo..=corner.min_leg())
        .filter(|&k| is_complete_up_to(region, corner, k).unwrap_or(false))
        .collect()
}

fn has_deep_corner(region: &Region) -> bool {
    all_corners(region)
        .iter()
        .any(|c| complete_levels(region, c).iter().any(|&k| k >= 2))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremFailure {
    pub kind: StepKind,
    pub corner: StCorner,
    pub k: usize,
    pub expected: Parity,
    pub got: Parity,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TheoremReport {
    pub checks: usize,
    pub failures: Vec<TheoremFailure>,
}

/// Check the open rewrite at every complete level of every corner, and the
/// wall and double-wall rewrites wherever they apply, against direct parity.
pub fn theorem_checks(region: &Region, opts: &CountOptions) -> Result<TheoremReport> {
    let whole = parity_tilings_with(region, opts)?;
    let mut report = TheoremReport::default();
    let mut record = |kind, corner: StCorner, k, got: Parity| {
        report.checks += 1;
        if got != whole {
            report.failures.push(TheoremFailure {
                kind,
                corner,
                k,
                expected: whole,
                got,
            });
        }
    };
    for corner in all_corners(region) {
        for k in complete_levels(region, &corner) {
            let (a, b) = reduce_open(region, &corner, k)?;
            let got = term_parity(&a, opts)? ^ term_parity(&b, opts)?;
            record(StepKind::Open, corner, k, got);
        }
        if let Ok(rest) = reduce_wall(region, &corner) {
            record(
                StepKind::Wall,
                corner,
                corner.s,
                parity_tilings_with(&rest, opts)?,
            );
        }
        if even_by_double_wall(region, &corner).is_ok() {
            record(StepKind::Even, corner, corner.s, Parity::Even);
        }
    }
    Ok(report)
}

fn term_parity(term: &crate::reduce::Term, opts: &CountOptions) -> Result<Parity> {
    match term.region() {
        Some(r) => parity_tilings_with(r, opts),
        None => Ok(Parity::Even),
    }
}

fn damage(rng: &mut ChaCha8Rng, region: Region, max_removed: usize) -> Region {
    let mut cells: Vec<Cell> = region.cells().collect();
    let removed = rng.gen_range(0..=max_removed);
    cells.shuffle(rng);
    Region::new(cells.into_iter().skip(removed))
}

fn random_box(rng: &mut ChaCha8Rng) -> Region {
    let rows = rng.gen_range(2..=5);
    let cols = rng.gen_range(3..=6);
    damage(rng, rectangle(rows, cols).expect("positive"), 4)
}

fn random_staircase(rng: &mut ChaCha8Rng) -> Region {
    let i = rng.gen_range(1..=4);
    let j = rng.gen_range(1..=4);
    let p = rng.gen_range(1..=3);
    let base = if rng.gen_bool(0.5) {
        t_region(i, j, p)
    } else {
        d_region(i, j, p)
    };
    damage(rng, base.expect("positive"), 3)
}

fn random_union(rng: &mut ChaCha8Rng) -> Region {
    let mut region = Region::empty();
    for _ in 0..rng.gen_range(2..=3) {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=5);
        let dx = rng.gen_range(0..4);
        let dy = rng.gen_range(0..4);
        let r = rectangle(rows, cols).expect("positive").translate((dx, dy));
        region = region.union(&r);
    }
    region
}

/// Deterministic stream of regions of at most [`CORPUS_MAX_CELLS`] cells,
/// each with a corner complete up to some `k >= 2`.
pub fn random_regions(count: usize, seed: u64) -> Vec<Region> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let region = match out.len() % 3 {
            0 => random_box(&mut rng),
            1 => random_staircase(&mut rng),
            _ => random_union(&mut rng),
        };
        if region.is_empty() || region.len() > CORPUS_MAX_CELLS || !has_deep_corner(&region) {
            continue;
        }
        out.push(region.normalized());
    }
    out
}

pub fn theorem_cases(trials: usize, seed: u64, opts: &CountOptions) -> Vec<CaseResult> {
    let regions = random_regions(trials, seed);
    regions
        .par_iter()
        .enumerate()
        .map(|(n, region)| {
            let label = format!("seed={seed},trial={n},cells={}", region.len());
            match theorem_checks(region, opts) {
                Ok(r) => {
                    let got = match r.failures.first() {
                        None => format!("checks={}", r.checks),
                        Some(f) => format!(
                            "{}@({{{},{}}};{})apex={}orient={}k={}:{}",
                            f.kind,
                            f.corner.s,
                            f.corner.t,
                            f.corner.p,
                            f.corner.apex(),
                            f.corner.frame.orientation.index(),
                            f.k,
                            f.got
                        ),
                    };
                    CaseResult::judged(
                        "theorem",
                        label,
                        "identity",
                        got,
                        r.failures.is_empty() && r.checks > 0,
                    )
                }
                Err(e) => CaseResult::judged(
                    "theorem",
                    label,
                    "identity",
                    format!("error({e})").replace(' ', "_"),
                    false,
                ),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_is_deterministic_and_bounded() {
        let a = random_regions(20, 7);
        let b = random_regions(20, 7);
        assert_eq!(
            a.iter().map(|r| r.cell_set().clone()).collect::<Vec<_>>(),
            b.iter().map(|r| r.cell_set().clone()).collect::<Vec<_>>()
        );
        assert!(a
            .iter()
            .all(|r| r.len() <= CORPUS_MAX_CELLS && has_deep_corner(r)));
    }

    #[test]
    fn identity_can_fail_below_completeness() {
        let r = crate::grid::parse_region("###\n###\n##.\n#..\n###").unwrap();
        let c = all_corners(&r)
            .into_iter()
            .find(|c| c.apex() == Cell::new(0, 0) && (c.s, c.t, c.p) == (3, 5, 1))
            .unwrap();
        assert!(!is_complete_up_to(&r, &c, 3).unwrap());
        let (a, b) = crate::reduce::open_strips(&c, 3);
        let part = |cells: &[Cell]| {
            r.remove_cells(cells)
                .map(|x| crate::count::parity_tilings(&x).unwrap())
                .unwrap_or(Parity::Even)
        };
        let whole = crate::count::parity_tilings(&r).unwrap();
        assert_ne!(part(&a.cells) ^ part(&b.cells), whole);
        assert!(theorem_checks(&r, &CountOptions::default())
            .unwrap()
            .failures
            .is_empty());
    }

    #[test]
    fn rectangle_identity_holds() {
        let r = rectangle(4, 5).unwrap();
        let report = theorem_checks(&r, &CountOptions::default()).unwrap();
        assert!(report.checks > 0);
        assert!(report.failures.is_empty(), "{:?}", report.failures);
    }
}
