//! The parity theorem as region rewrites.
//!
//! For a corner that is complete up to `k`, the parity of the region equals
//! the XOR of the parities of the two regions left after removing the
//! `({k,k+1};p)`-strip and the `({k+1,k};p)`-strip ([`reduce_open`]). When
//! the s-leg is walled and the corner is complete up to `s`, only the first
//! of these can occur ([`reduce_wall`]); when both legs have length `s` and
//! both are walled, neither can, so the count is even
//! ([`even_by_double_wall`]).

use std::fmt;

use crate::corner::{
    corner_in_frame, is_complete_up_to, is_walled_at, strip_in_frame, Side, StCorner, Strip,
};
use crate::count::{parity_tilings, Parity};
use crate::error::{Error, Result};
use crate::region::{Cell, Region};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    Open,
    Wall,
    Even,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::Open => "open",
            StepKind::Wall => "wall",
            StepKind::Even => "even",
        }
    }

    pub fn parse(s: &str) -> Option<StepKind> {
        match s {
            "open" => Some(StepKind::Open),
            "wall" => Some(StepKind::Wall),
            "even" => Some(StepKind::Even),
            _ => None,
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One side of the open rewrite. A strip that does not fit inside the
/// region contributes nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Region(Region),
    Zero,
}

impl Term {
    pub fn parity(&self) -> Result<Parity> {
        match self {
            Term::Region(r) => parity_tilings(r),
            Term::Zero => Ok(Parity::Even),
        }
    }

    pub fn region(&self) -> Option<&Region> {
        match self {
            Term::Region(r) => Some(r),
            Term::Zero => None,
        }
    }
}

/// Check that `corner` really is a corner of `region`, with the recorded
/// leg lengths.
pub(crate) fn check_corner(region: &Region, corner: &StCorner) -> Result<()> {
    match corner_in_frame(region, corner.frame, corner.p) {
        Some(found) if found == *corner => Ok(()),
        Some(found) => Err(Error::precondition(format!(
            "corner legs are ({},{}), not ({},{})",
            found.s, found.t, corner.s, corner.t
        ))),
        None => Err(Error::precondition(format!(
            "{corner} is not a corner of the region"
        ))),
    }
}

fn require_complete(region: &Region, corner: &StCorner, k: usize) -> Result<()> {
    if is_complete_up_to(region, corner, k)? {
        Ok(())
    } else {
        Err(Error::precondition(format!(
            "{corner} is not complete up to {k}"
        )))
    }
}

/// Region minus the strip, or `None` when some strip cell is absent.
fn without(region: &Region, strip: &Strip) -> Option<Region> {
    region.remove_cells(&strip.cells).ok()
}

/// The two strips of the open rewrite: `k` then `k + 1` cells along the
/// s-leg.
pub fn open_strips(corner: &StCorner, k: usize) -> (Strip, Strip) {
    (
        strip_in_frame(&corner.frame, corner.p, k, k + 1),
        strip_in_frame(&corner.frame, corner.p, k + 1, k),
    )
}

pub fn wall_strip(corner: &StCorner) -> Strip {
    strip_in_frame(&corner.frame, corner.p, corner.s, corner.s + 1)
}

pub(crate) fn check_open(region: &Region, corner: &StCorner, k: usize) -> Result<()> {
    check_corner(region, corner)?;
    if k == 0 || k > corner.min_leg() {
        return Err(Error::invalid(format!(
            "k = {k} is outside 1..={} for {corner}",
            corner.min_leg()
        )));
    }
    if k == 1 && corner.p > 1 {
        return Err(Error::invalid(format!(
            "k = 1 requires p = 1, corner has p = {}",
            corner.p
        )));
    }
    require_complete(region, corner, k)
}

/// Apply the open rewrite at `corner` with level `k`.
pub fn reduce_open(region: &Region, corner: &StCorner, k: usize) -> Result<(Term, Term)> {
    check_open(region, corner, k)?;
    let (a, b) = open_strips(corner, k);
    let term = |strip: &Strip| without(region, strip).map_or(Term::Zero, Term::Region);
    Ok((term(&a), term(&b)))
}

pub(crate) fn check_wall(region: &Region, corner: &StCorner) -> Result<()> {
    check_corner(region, corner)?;
    if corner.s > corner.t {
        return Err(Error::precondition(format!(
            "wall rewrite needs s <= t, corner has s={} t={}",
            corner.s, corner.t
        )));
    }
    require_complete(region, corner, corner.s)?;
    if !is_walled_at(region, corner, Side::S) {
        return Err(Error::precondition(format!("{corner} is not walled at s")));
    }
    Ok(())
}

/// Apply the wall rewrite: remove the `({s,s+1};p)`-strip.
pub fn reduce_wall(region: &Region, corner: &StCorner) -> Result<Region> {
    check_wall(region, corner)?;
    let strip = wall_strip(corner);
    region.remove_cells(&strip.cells).map_err(|_| {
        Error::precondition(format!(
            "the ({{{},{}}};{}) strip does not fit",
            corner.s,
            corner.s + 1,
            corner.p
        ))
    })
}

/// Certificate that a region has an even number of tilings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvenCertificate {
    pub corner: StCorner,
}

pub(crate) fn check_even(region: &Region, corner: &StCorner) -> Result<()> {
    check_corner(region, corner)?;
    if corner.s != corner.t {
        return Err(Error::precondition(format!(
            "double wall needs s = t, corner has s={} t={}",
            corner.s, corner.t
        )));
    }
    require_complete(region, corner, corner.s)?;
    for side in [Side::S, Side::T] {
        if !is_walled_at(region, corner, side) {
            return Err(Error::precondition(format!(
                "{corner} is not walled at {side}"
            )));
        }
    }
    Ok(())
}

pub fn even_by_double_wall(region: &Region, corner: &StCorner) -> Result<EvenCertificate> {
    check_even(region, corner)?;
    Ok(EvenCertificate { corner: *corner })
}

/// Which term of an open rewrite a trace continues with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    #[default]
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub kind: StepKind,
    pub corner: StCorner,
    pub k: usize,
    /// Cells removed on the branch the trace continues with; empty for
    /// `Even`.
    pub removed: Vec<Cell>,
    /// For `Open`, the term not followed. It becomes a terminal of the trace.
    pub side_term: Option<Term>,
    /// Region after the step; `None` for `Even`, which ends the trace.
    pub result: Option<Region>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub start: Region,
    pub steps: Vec<ReductionStep>,
    /// Region the trace stopped at, unless it ended with an `Even` step.
    pub terminal: Option<Region>,
    pub parity: Parity,
}

impl ReductionTrace {
    /// Terminal regions with their parities: side terms of open steps, then
    /// the final region. An `Even` ending contributes a zero parity.
    pub fn terminal_parities(&self) -> Result<Vec<Parity>> {
        let mut out = Vec::new();
        for step in &self.steps {
            if let Some(term) = &step.side_term {
                out.push(term.parity()?);
            }
        }
        match &self.terminal {
            Some(r) => out.push(parity_tilings(r)?),
            None => out.push(Parity::Even),
        }
        Ok(out)
    }
}

fn combine(parities: &[Parity]) -> Parity {
    parities.iter().fold(Parity::Even, |acc, p| acc ^ *p)
}

/// Where a scripted step acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CornerLocator {
    /// An explicit frame; the leg lengths are measured on the current region.
    Frame {
        apex: Cell,
        orientation: crate::symmetry::Symmetry,
        p: usize,
    },
    /// The `p = 1` corner at one corner of the current bounding box, with the
    /// s-leg on the named side of the box.
    BoxCorner { corner: BoxCorner, s_side: BoxSide },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxCorner {
    UpperLeft,
    UpperRight,
    LowerRight,
    LowerLeft,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoxSide {
    Left,
    Top,
    Right,
    Bottom,
}

impl fmt::Display for BoxSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoxSide::Left => "Left",
            BoxSide::Top => "Top",
            BoxSide::Right => "Right",
            BoxSide::Bottom => "Bottom",
        })
    }
}

impl CornerLocator {
    pub fn resolve(&self, region: &Region) -> Result<StCorner> {
        use crate::corner::CornerFrame;
        use crate::symmetry::Symmetry;
        match *self {
            CornerLocator::Frame {
                apex,
                orientation,
                p,
            } => corner_in_frame(region, CornerFrame::new(apex, orientation), p).ok_or_else(|| {
                Error::precondition(format!(
                    "no p={p} corner at apex {apex} with orientation {}",
                    orientation.index()
                ))
            }),
            CornerLocator::BoxCorner { corner, s_side } => {
                let (lo, hi) = region
                    .bounds()
                    .ok_or_else(|| Error::precondition("the region is empty"))?;
                let (row, leftmost, horizontal, vertical) = match corner {
                    BoxCorner::UpperLeft => (hi.y, true, (1, 0), (0, -1)),
                    BoxCorner::UpperRight => (hi.y, false, (-1, 0), (0, -1)),
                    BoxCorner::LowerRight => (lo.y, false, (-1, 0), (0, 1)),
                    BoxCorner::LowerLeft => (lo.y, true, (1, 0), (0, 1)),
                };
                let xs = region.cells().filter(|c| c.y == row).map(|c| c.x);
                let x = if leftmost { xs.min() } else { xs.max() }.expect("row is occupied");
                let apex = Cell::new(x, row);
                let (s_dir, t_dir) = match s_side {
                    BoxSide::Left | BoxSide::Right => (vertical, horizontal),
                    BoxSide::Top | BoxSide::Bottom => (horizontal, vertical),
                };
                let orientation = Symmetry::from_axes(s_dir, t_dir).expect("perpendicular axes");
                corner_in_frame(region, CornerFrame::new(apex, orientation), 1)
                    .ok_or_else(|| Error::precondition(format!("no convex corner at {apex}")))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScriptStep {
    pub kind: StepKind,
    pub at: CornerLocator,
    /// Level for `Open`; ignored otherwise.
    pub k: usize,
    pub follow: Branch,
}

impl ScriptStep {
    pub fn wall(at: CornerLocator) -> Self {
        ScriptStep {
            kind: StepKind::Wall,
            at,
            k: 0,
            follow: Branch::First,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    /// Apply the wall rewrite, or finish with a double-wall certificate, at
    /// the first qualifying corner until none qualifies.
    WallGreedy,
    Scripted(Vec<ScriptStep>),
}

/// Whether a region is trivially finished: empty, odd, or color-unbalanced.
fn is_settled(region: &Region) -> bool {
    region.is_empty() || region.len() % 2 == 1 || region.color_imbalance() != 0
}

fn qualifies(region: &Region, corner: &StCorner, kind: StepKind) -> bool {
    match kind {
        StepKind::Even => check_even(region, corner).is_ok(),
        StepKind::Wall => check_wall(region, corner).is_ok(),
        StepKind::Open => false,
    }
}

/// First `(kind, corner)` the wall-greedy strategy would apply.
pub fn first_wall_move(region: &Region) -> Option<(StepKind, StCorner)> {
    for corner in crate::corner::find_corners(region) {
        for frame in [corner, corner.transposed()] {
            for kind in [StepKind::Even, StepKind::Wall] {
                if qualifies(region, &frame, kind) {
                    return Some((kind, frame));
                }
            }
        }
    }
    None
}

fn wall_step(region: &Region, corner: StCorner) -> Result<ReductionStep> {
    let result = reduce_wall(region, &corner)?;
    Ok(ReductionStep {
        kind: StepKind::Wall,
        corner,
        k: corner.s,
        removed: wall_strip(&corner).cells,
        side_term: None,
        result: Some(result),
    })
}

fn even_step(region: &Region, corner: StCorner) -> Result<ReductionStep> {
    even_by_double_wall(region, &corner)?;
    Ok(ReductionStep {
        kind: StepKind::Even,
        corner,
        k: corner.s,
        removed: Vec::new(),
        side_term: None,
        result: None,
    })
}

fn open_step(region: &Region, corner: StCorner, k: usize, follow: Branch) -> Result<ReductionStep> {
    let (a, b) = reduce_open(region, &corner, k)?;
    let (strip_a, strip_b) = open_strips(&corner, k);
    let (kept, kept_strip, other) = match follow {
        Branch::First => (a, strip_a, b),
        Branch::Second => (b, strip_b, a),
    };
    let Term::Region(result) = kept else {
        return Err(Error::precondition(format!(
            "the followed term at {corner} with k={k} is zero"
        )));
    };
    Ok(ReductionStep {
        kind: StepKind::Open,
        corner,
        k,
        removed: kept_strip.cells,
        side_term: Some(other),
        result: Some(result),
    })
}

/// Reduce `region` to terminal regions and record the steps.
pub fn reduce_to_trace(region: &Region, strategy: &Strategy) -> Result<ReductionTrace> {
    let mut current = region.clone();
    let mut steps = Vec::new();
    let mut ended_even = false;
    match strategy {
        Strategy::WallGreedy => {
            while !is_settled(&current) {
                let Some((kind, corner)) = first_wall_move(&current) else {
                    break;
                };
                let step = match kind {
                    StepKind::Even => even_step(&current, corner)?,
                    _ => wall_step(&current, corner)?,
                };
                if let Some(next) = &step.result {
                    current = next.clone();
                } else {
                    ended_even = true;
                }
                steps.push(step);
                if ended_even {
                    break;
                }
            }
        }
        Strategy::Scripted(script) => {
            for (index, script_step) in script.iter().enumerate() {
                let apply = || -> Result<ReductionStep> {
                    if ended_even {
                        return Err(Error::precondition(
                            "the trace already ended with an even step",
                        ));
                    }
                    let corner = script_step.at.resolve(&current)?;
                    match script_step.kind {
                        StepKind::Wall => wall_step(&current, corner),
                        StepKind::Even => even_step(&current, corner),
                        StepKind::Open => {
                            open_step(&current, corner, script_step.k, script_step.follow)
                        }
                    }
                };
                let step = apply().map_err(|e| e.at_step(index + 1))?;
                match &step.result {
                    Some(next) => current = next.clone(),
                    None => ended_even = true,
                }
                steps.push(step);
            }
        }
    }
    let mut trace = ReductionTrace {
        start: region.clone(),
        steps,
        terminal: (!ended_even).then_some(current),
        parity: Parity::Even,
    };
    trace.parity = combine(&trace.terminal_parities()?);
    Ok(trace)
}
