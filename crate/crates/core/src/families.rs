//! End-to-end checks for the region families: the holey-square
//! factorization, the odd rectangles `N(kn,(k+1)n)` with their strip
//! schedule, and the parity tables for the staircase regions `T` and `D`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;

use crate::count::{count_tilings_with, parity_tilings_with, CountOptions, Parity, TilingCount};
use crate::error::{Error, Result};
use crate::reduce::{
    reduce_to_trace, BoxCorner, BoxSide, CornerLocator, ReductionTrace, ScriptStep, Strategy,
};
use crate::region::{
    d_region, half_region, half_region_odd, half_region_odd_pruned, half_region_pruned,
    holey_square, holey_square_odd, rectangle, t_region, Cell, Region,
};
use crate::report::CaseResult;
use crate::trace::verify_trace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoleyReport {
    pub m: i32,
    pub n: i32,
    pub full: TilingCount,
    pub half: TilingCount,
    pub pruned: TilingCount,
    /// The odd factor `2k + 1`, equal to the half-region count.
    pub odd_factor: BigUint,
    pub passed: bool,
}

impl HoleyReport {
    fn new(m: i32, n: i32, full: TilingCount, half: TilingCount, pruned: TilingCount) -> Self {
        let h = half.value();
        let predicted = (BigUint::one() << (n - m) as usize) * h * h;
        let passed = *full.value() == predicted && h.is_odd() && half == pruned;
        HoleyReport {
            m,
            n,
            odd_factor: h.clone(),
            full,
            half,
            pruned,
            passed,
        }
    }

    pub fn k(&self) -> BigUint {
        (&self.odd_factor - BigUint::one().min(self.odd_factor.clone())) >> 1
    }
}

/// Count the holey square and its halves and check
/// `#full = 2^(n-m) * #half^2` with `#half` odd and `#half = #half'`.
pub fn verify_holey(m: i32, n: i32, opts: &CountOptions) -> Result<HoleyReport> {
    let full = count_tilings_with(&holey_square(m, n)?, opts)?;
    let half = count_tilings_with(&half_region(m, n)?, opts)?;
    let pruned = count_tilings_with(&half_region_pruned(m, n)?, opts)?;
    Ok(HoleyReport::new(m, n, full, half, pruned))
}

/// As [`verify_holey`] for the odd holey square, using the alternating
/// diagonal cut of [`half_region_odd`].
pub fn verify_holey_odd(m: i32, n: i32, opts: &CountOptions) -> Result<HoleyReport> {
    let full = count_tilings_with(&holey_square_odd(m, n)?, opts)?;
    let half = count_tilings_with(&half_region_odd(m, n)?, opts)?;
    let pruned = count_tilings_with(&half_region_odd_pruned(m, n)?, opts)?;
    Ok(HoleyReport::new(m, n, full, half, pruned))
}

/// How many cells one application removes from one side of the rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduleRow {
    pub application: usize,
    pub side: BoxSide,
    pub removed: usize,
}

/// The strip schedule that carries `N(kn, (k+1)n)` to
/// `N(k(n-1), (k+1)(n-1))`: `2k` applications, two rows each, cycling
/// through the upper-left, upper-right, lower-right and lower-left corners.
/// Empty when `n = 1`.
pub fn rect_schedule(k: usize, n: usize) -> Vec<ScheduleRow> {
    if k == 0 || n <= 1 {
        return Vec::new();
    }
    let mut rows = Vec::with_capacity(4 * k);
    for app in 1..=2 * k {
        let j = app.div_ceil(4);
        let (first, second) = match app % 4 {
            1 => {
                let len = (k + 2 - 2 * j) * n;
                ((BoxSide::Left, len), (BoxSide::Top, len + 1))
            }
            2 => {
                let len = (2 * j - 1) * (n - 1);
                ((BoxSide::Top, len), (BoxSide::Right, len + 1))
            }
            3 => {
                let len = (k + 1 - 2 * j) * n;
                ((BoxSide::Right, len), (BoxSide::Bottom, len + 1))
            }
            _ => {
                let len = 2 * j * (n - 1);
                ((BoxSide::Left, len + 1), (BoxSide::Bottom, len))
            }
        };
        for (side, removed) in [first, second] {
            rows.push(ScheduleRow {
                application: app,
                side,
                removed,
            });
        }
    }
    rows
}

fn box_corner(a: BoxSide, b: BoxSide) -> BoxCorner {
    use BoxSide::*;
    match (a.min(b), a.max(b)) {
        (Left, Top) => BoxCorner::UpperLeft,
        (Top, Right) => BoxCorner::UpperRight,
        (Right, Bottom) => BoxCorner::LowerRight,
        _ => BoxCorner::LowerLeft,
    }
}

/// Script for one round of the schedule: each application is a wall
/// rewrite whose s-leg is the side losing fewer cells.
pub fn schedule_script(k: usize, n: usize) -> Vec<ScriptStep> {
    rect_schedule(k, n)
        .chunks(2)
        .map(|pair| {
            let (a, b) = (pair[0], pair[1]);
            let s_side = if a.removed < b.removed {
                a.side
            } else {
                b.side
            };
            ScriptStep::wall(CornerLocator::BoxCorner {
                corner: box_corner(a.side, b.side),
                s_side,
            })
        })
        .collect()
}

/// `N(k, k+1) -> N(k-1, k) -> ... -> N(1, 2) -> empty`, one wall rewrite
/// per step with the short left side as the s-leg.
pub fn staircase_chain_script(k: usize) -> Vec<ScriptStep> {
    (0..k)
        .map(|_| {
            ScriptStep::wall(CornerLocator::BoxCorner {
                corner: BoxCorner::UpperLeft,
                s_side: BoxSide::Left,
            })
        })
        .collect()
}

/// Every round of the schedule from `n` down to `1`, then the staircase
/// chain: carries `N(kn,(k+1)n)` to the empty region.
pub fn full_rect_script(k: usize, n: usize) -> Vec<ScriptStep> {
    let mut script = Vec::new();
    for level in (2..=n).rev() {
        script.extend(schedule_script(k, level));
    }
    script.extend(staircase_chain_script(k));
    script
}

/// `N(kn,(k+1)n)` after the first round of the schedule: the rows and
/// columns stripped off by the schedule, in the start coordinates.
pub fn schedule_remainder(k: usize, n: usize) -> Region {
    let (rows, cols) = ((k * n) as i32, ((k + 1) * n) as i32);
    let (top, bottom, left, right) = if k.is_multiple_of(2) {
        let j = (k / 2) as i32;
        (j, j, j + 1, j)
    } else {
        let j = k.div_ceil(2) as i32;
        (j, j - 1, j, j)
    };
    (left..cols - right)
        .flat_map(|x| (bottom..rows - top).map(move |y| Cell::new(x, y)))
        .collect()
}

#[derive(Debug, Clone)]
pub struct RectReport {
    pub k: usize,
    pub n: usize,
    /// Full chain from `N(kn,(k+1)n)` to the empty region.
    pub trace: ReductionTrace,
    /// Every step of the first round removed the lengths in the schedule.
    pub schedule_matches: bool,
    /// After the first round the remainder is `N(k(n-1), (k+1)(n-1))` in
    /// the expected position.
    pub remainder_matches: bool,
    /// Independent replay of the trace passed.
    pub replay_ok: bool,
    /// Direct parity of `N(kn,(k+1)n)`, when within the counting guard.
    pub oracle_parity: Option<Parity>,
}

impl RectReport {
    pub fn passed(&self) -> bool {
        self.schedule_matches
            && self.remainder_matches
            && self.replay_ok
            && self.trace.parity == Parity::Odd
            && self.oracle_parity.is_none_or(|p| p == Parity::Odd)
    }
}

/// Run the strip schedule on `N(kn,(k+1)n)` as scripted wall rewrites, then
/// keep going to the empty region, and compare with the direct parity.
pub fn verify_rect(k: usize, n: usize, opts: &CountOptions) -> Result<RectReport> {
    if k == 0 || n == 0 {
        return Err(Error::invalid("k and n must be positive"));
    }
    let start = rectangle((k * n) as i32, ((k + 1) * n) as i32)?;
    let round = schedule_script(k, n);
    let trace = reduce_to_trace(&start, &Strategy::Scripted(full_rect_script(k, n)))?;

    let rows = rect_schedule(k, n);
    let schedule_matches = trace.steps.iter().zip(rows.chunks(2)).all(|(step, pair)| {
        let s = step.corner.s;
        let mut expected = [pair[0].removed, pair[1].removed];
        expected.sort();
        expected == [s, s + 1]
    });
    let remainder_matches = if round.is_empty() {
        true
    } else {
        trace.steps[round.len() - 1]
            .result
            .as_ref()
            .is_some_and(|r| r.same_cells(&schedule_remainder(k, n)))
    };
    let replay_ok = verify_trace(&trace).all_pass();
    let oracle_parity = match parity_tilings_with(&start, opts) {
        Ok(p) => Some(p),
        Err(Error::ResourceLimit(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(RectReport {
        k,
        n,
        trace,
        schedule_matches,
        remainder_matches,
        replay_ok,
        oracle_parity,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    T,
    D,
}

impl Family {
    pub fn variants(self) -> std::ops::RangeInclusive<u8> {
        match self {
            Family::T => 1..=7,
            Family::D => 1..=5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::T => "T",
            Family::D => "D",
        }
    }

    /// Width `j` of the top row for table item `variant` at size `k`.
    pub fn top_width(self, k: i32, variant: u8) -> Result<i32> {
        let j = match (self, variant) {
            (_, 1) => k,
            (_, 2) => k + 1,
            (_, 3) => k + 2,
            (_, 4) => 2 * k - 1,
            (Family::T, 5) => 2 * k,
            (Family::T, 6) | (Family::D, 5) => 2 * k + 1,
            (Family::T, 7) => 2 * k + 2,
            _ => {
                return Err(Error::invalid(format!(
                    "{} has no table item {variant}",
                    self.name()
                )))
            }
        };
        Ok(j)
    }

    /// The region `T(k, j, p)` or `D(k, j, p)` for table item `variant`.
    pub fn region(self, k: i32, p: i32, variant: u8) -> Result<Region> {
        let j = self.top_width(k, variant)?;
        match self {
            Family::T => t_region(k, j, p),
            Family::D => d_region(k, j, p),
        }
    }

    pub fn claim(self, k: i32, p: i32, variant: u8) -> Result<Parity> {
        match self {
            Family::T => t_parity_claim(k, p, variant),
            Family::D => d_parity_claim(k, p, variant),
        }
    }
}

fn check_kp(k: i32, p: i32) -> Result<()> {
    if k < 1 || p < 1 {
        return Err(Error::invalid(format!(
            "k and p must be positive, got k={k}, p={p}"
        )));
    }
    Ok(())
}

/// Closed-form parity of `T(k, j, p)` for the seven table items
/// `j = k, k+1, k+2, 2k-1, 2k, 2k+1, 2k+2`.
pub fn t_parity_claim(k: i32, p: i32, variant: u8) -> Result<Parity> {
    check_kp(k, p)?;
    let even_k = k % 2 == 0;
    let odd = match variant {
        1 => false,
        2 => p == 1 || !even_k,
        3 => even_k,
        4 => false,
        5 => true,
        6 => false,
        7 => true,
        _ => return Err(Error::invalid(format!("T has no table item {variant}"))),
    };
    Ok(Parity::from(odd))
}

/// Closed-form parity of `D(k, j, p)` for the five table items
/// `j = k, k+1, k+2, 2k-1, 2k+1`.
pub fn d_parity_claim(k: i32, p: i32, variant: u8) -> Result<Parity> {
    check_kp(k, p)?;
    let odd = match variant {
        1 => false,
        2 => true,
        3 => false,
        4 => k % 2 == 0,
        5 => false,
        _ => return Err(Error::invalid(format!("D has no table item {variant}"))),
    };
    Ok(Parity::from(odd))
}

/// Parity of the `rows x cols` rectangle from the closed rule: odd exactly
/// when `gcd(rows + 1, cols + 1) = 1`.
pub fn rectangle_parity(rows: u64, cols: u64) -> Parity {
    Parity::from((rows + 1).gcd(&(cols + 1)) == 1)
}

pub fn holey_cases(max_n: i32, opts: &CountOptions) -> Vec<CaseResult> {
    holey_like_cases("holey", max_n, opts, verify_holey)
}

pub fn holey_odd_cases(max_n: i32, opts: &CountOptions) -> Vec<CaseResult> {
    holey_like_cases("holey-odd", max_n, opts, verify_holey_odd)
}

fn holey_like_cases(
    name: &str,
    max_n: i32,
    opts: &CountOptions,
    verify: fn(i32, i32, &CountOptions) -> Result<HoleyReport>,
) -> Vec<CaseResult> {
    let params: Vec<(i32, i32)> = (1..=max_n)
        .flat_map(|n| (0..n).map(move |m| (m, n)))
        .collect();
    params
        .par_iter()
        .map(|&(m, n)| {
            let label = format!("m={m},n={n}");
            match verify(m, n, opts) {
                Ok(r) => CaseResult::judged(
                    name,
                    label,
                    format!("2^{}*odd^2", n - m),
                    format!("{}=2^{}*{}^2,half'={}", r.full, n - m, r.half, r.pruned),
                    r.passed,
                ),
                Err(e) => CaseResult::judged(name, label, "count", error_word(&e), false),
            }
        })
        .collect()
}

/// Bounds for [`rect_cases`]: the direct parity table covers
/// `kn <= max_rows`, `(k+1)n <= max_cols`; the schedule covers
/// `k <= sched_k`, `n <= sched_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RectBounds {
    pub max_rows: usize,
    pub max_cols: usize,
    pub sched_k: usize,
    pub sched_n: usize,
}

impl Default for RectBounds {
    fn default() -> Self {
        RectBounds {
            max_rows: 6,
            max_cols: 12,
            sched_k: 4,
            sched_n: 3,
        }
    }
}

fn error_word(e: &Error) -> String {
    format!("error({e})").replace(' ', "_")
}

pub fn rect_cases(bounds: RectBounds, opts: &CountOptions) -> Vec<CaseResult> {
    let mut params = Vec::new();
    for k in 1..=bounds.max_rows {
        for n in 1..=bounds.max_rows {
            if k * n <= bounds.max_rows && (k + 1) * n <= bounds.max_cols {
                params.push(("rect-parity", k, n));
            }
        }
    }
    for k in 1..=bounds.sched_k {
        for n in 1..=bounds.sched_n {
            params.push(("rect-schedule", k, n));
        }
    }
    params
        .par_iter()
        .map(|&(name, k, n)| {
            let label = format!("k={k},n={n}");
            if name == "rect-parity" {
                let region = rectangle((k * n) as i32, ((k + 1) * n) as i32).expect("positive");
                return match parity_tilings_with(&region, opts) {
                    Ok(p) => CaseResult::new(name, label, "1", p.to_string()),
                    Err(e) => CaseResult::judged(name, label, "1", error_word(&e), false),
                };
            }
            let steps = if n > 1 { 2 * k } else { 0 };
            let expected = format!(
                "steps={steps},remainder=N({},{}),parity=1",
                k * (n - 1),
                (k + 1) * (n - 1)
            );
            match verify_rect(k, n, opts) {
                Ok(r) => CaseResult::judged(
                    name,
                    label,
                    expected,
                    format!(
                        "steps={},schedule={},remainder={},replay={},parity={},oracle={}",
                        rect_schedule(k, n).len() / 2,
                        ok_word(r.schedule_matches),
                        ok_word(r.remainder_matches),
                        ok_word(r.replay_ok),
                        r.trace.parity,
                        r.oracle_parity
                            .map_or("skipped".to_string(), |p| p.to_string())
                    ),
                    r.passed(),
                ),
                Err(e) => CaseResult::judged(name, label, expected, error_word(&e), false),
            }
        })
        .collect()
}

fn ok_word(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "bad"
    }
}

#[derive(Debug, Clone, Copy)]
enum FamilyCase {
    Item(u8, i32, i32),
    /// `#T(1,2,p) = 1`.
    TOne(i32),
    /// `#T(k,k+1,p)` and `#T(k-1,k+1,p-1)` have the same parity.
    TStep(i32, i32),
    /// `#D(2,3,p)` is odd.
    DOdd(i32),
}

fn parity_word(region: &Region, opts: &CountOptions) -> String {
    parity_tilings_with(region, opts).map_or_else(|e| error_word(&e), |p| p.to_string())
}

/// Every table item of `family` for `k <= max_k`, `p <= max_p` against the
/// direct parity, plus the small counts and recursions the table rests on.
pub fn family_cases(
    family: Family,
    max_k: i32,
    max_p: i32,
    opts: &CountOptions,
) -> Vec<CaseResult> {
    let mut params = Vec::new();
    for variant in family.variants() {
        for k in 1..=max_k {
            for p in 1..=max_p {
                params.push(FamilyCase::Item(variant, k, p));
            }
        }
    }
    for p in 1..=max_p {
        match family {
            Family::T => params.push(FamilyCase::TOne(p)),
            Family::D => params.push(FamilyCase::DOdd(p)),
        }
    }
    if family == Family::T {
        for k in 2..=max_k {
            for p in 2..=max_p {
                params.push(FamilyCase::TStep(k, p));
            }
        }
    }
    let name = format!("{}family", family.name().to_lowercase());
    params
        .par_iter()
        .map(|&case| match case {
            FamilyCase::Item(variant, k, p) => {
                let j = family.top_width(k, variant).expect("variant in range");
                let label = format!("item={variant},k={k},j={j},p={p}");
                let claim = family.claim(k, p, variant).expect("arguments in range");
                let region = family.region(k, p, variant).expect("arguments in range");
                let got = parity_word(&region, opts);
                let mut result = CaseResult::new(&name, label, claim.to_string(), got);
                if region.len() % 2 == 1 && claim != Parity::Even {
                    result.passed = false;
                }
                result
            }
            FamilyCase::TOne(p) => {
                let t = t_region(1, 2, p).expect("positive");
                let got =
                    count_tilings_with(&t, opts).map_or_else(|e| error_word(&e), |c| c.to_string());
                CaseResult::new("tcount", format!("i=1,j=2,p={p}"), "1", got)
            }
            FamilyCase::TStep(k, p) => {
                let a = t_region(k, k + 1, p).expect("positive");
                let b = t_region(k - 1, k + 1, p - 1).expect("positive");
                CaseResult::new(
                    "tstep",
                    format!("k={k},p={p}"),
                    parity_word(&b, opts),
                    parity_word(&a, opts),
                )
            }
            FamilyCase::DOdd(p) => {
                let d = d_region(2, 3, p).expect("positive");
                CaseResult::new(
                    "dparity",
                    format!("i=2,j=3,p={p}"),
                    "1",
                    parity_word(&d, opts),
                )
            }
        })
        .collect()
}
