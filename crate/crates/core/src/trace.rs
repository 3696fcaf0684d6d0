//! Line-oriented trace format and trace verification.
//!
//! ```text
//! start <source>
//! step 1: wall apex=(0,3) orient=5 s=4 t=6 p=1 k=4 removed=[(0,3),(0,2),...]
//! terminal ###/###
//! parity 1
//! ```
//!
//! Cells are in the coordinates of the start region. Verification replays
//! every step against the start region, so a trace is checked without
//! trusting anything it claims.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::corner::{CornerFrame, StCorner};
use crate::count::{parity_tilings, Parity};
use crate::error::{Error, Result};
use crate::grid::{emit_region, parse_region};
use crate::reduce::{
    check_even, check_open, check_wall, open_strips, wall_strip, ReductionTrace, StepKind, Term,
};
use crate::region::{Cell, Region};
use crate::symmetry::Symmetry;

/// Parity identities are checked by direct counting up to this many cells.
pub const PARITY_CHECK_MAX_CELLS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub kind: StepKind,
    pub apex: Cell,
    pub orientation: Symmetry,
    pub s: usize,
    pub t: usize,
    pub p: usize,
    pub k: usize,
    pub removed: Vec<Cell>,
}

impl StepRecord {
    pub fn corner(&self) -> StCorner {
        StCorner {
            s: self.s,
            t: self.t,
            p: self.p,
            frame: CornerFrame::new(self.apex, self.orientation),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub source: String,
    pub steps: Vec<StepRecord>,
    /// Shape of the final region, rows top first joined by `/`; `-` for
    /// the empty region. Absent when the trace ends with an `Even` step.
    pub terminal: Option<String>,
    pub parity: Parity,
}

/// One-line picture of a region: grid rows joined by `/`.
pub fn compact_grid(region: &Region) -> String {
    if region.is_empty() {
        return "-".into();
    }
    emit_region(region).lines().collect::<Vec<_>>().join("/")
}

fn parse_compact(text: &str) -> Result<Region> {
    if text == "-" {
        return Ok(Region::empty());
    }
    parse_region(&text.replace('/', "\n"))
}

impl ReductionTrace {
    pub fn records(&self) -> Vec<StepRecord> {
        self.steps
            .iter()
            .map(|step| StepRecord {
                kind: step.kind,
                apex: step.corner.frame.apex,
                orientation: step.corner.frame.orientation,
                s: step.corner.s,
                t: step.corner.t,
                p: step.corner.p,
                k: step.k,
                removed: step.removed.clone(),
            })
            .collect()
    }

    pub fn to_record(&self, source: &str) -> TraceRecord {
        TraceRecord {
            source: source.to_string(),
            steps: self.records(),
            terminal: self.terminal.as_ref().map(compact_grid),
            parity: self.parity,
        }
    }
}

fn cell_list(cells: &[Cell]) -> String {
    let inner: Vec<String> = cells.iter().map(Cell::to_string).collect();
    format!("[{}]", inner.join(","))
}

impl TraceRecord {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "start {}", self.source).unwrap();
        for (n, step) in self.steps.iter().enumerate() {
            writeln!(
                out,
                "step {}: {} apex={} orient={} s={} t={} p={} k={} removed={}",
                n + 1,
                step.kind,
                step.apex,
                step.orientation.index(),
                step.s,
                step.t,
                step.p,
                step.k,
                cell_list(&step.removed)
            )
            .unwrap();
        }
        if let Some(t) = &self.terminal {
            writeln!(out, "terminal {t}").unwrap();
        }
        writeln!(out, "parity {}", self.parity).unwrap();
        out
    }

    pub fn parse(text: &str) -> Result<TraceRecord> {
        let mut source = None;
        let mut steps = Vec::new();
        let mut terminal = None;
        let mut parity = None;
        for (line_no, raw) in text.lines().enumerate() {
            let line_no = line_no + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let err = |column: usize, message: &str| Error::Parse {
                line: line_no,
                column,
                message: message.to_string(),
            };
            if parity.is_some() {
                return Err(err(1, "content after the parity footer"));
            }
            if let Some(rest) = line.strip_prefix("start ") {
                if source.is_some() || !steps.is_empty() {
                    return Err(err(1, "duplicate start header"));
                }
                source = Some(rest.trim().to_string());
            } else if let Some(rest) = line.strip_prefix("step ") {
                if source.is_none() {
                    return Err(err(1, "step before the start header"));
                }
                let step = parse_step(rest).map_err(|m| err(1, &m))?;
                if step.0 != steps.len() + 1 {
                    return Err(err(6, "steps must be numbered consecutively from 1"));
                }
                steps.push(step.1);
            } else if let Some(rest) = line.strip_prefix("terminal ") {
                if source.is_none() || terminal.is_some() {
                    return Err(err(1, "misplaced terminal line"));
                }
                let shape = rest.trim();
                parse_compact(shape)
                    .map_err(|_| err(10, "terminal must be grid rows joined by `/`"))?;
                terminal = Some(shape.to_string());
            } else if let Some(rest) = line.strip_prefix("parity ") {
                let bit = rest
                    .trim()
                    .parse::<u8>()
                    .ok()
                    .and_then(Parity::from_bit)
                    .ok_or_else(|| err(8, "parity must be 0 or 1"))?;
                parity = Some(bit);
            } else {
                return Err(err(1, "expected `start`, `step`, `terminal` or `parity`"));
            }
        }
        let source = source.ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: "missing start header".into(),
        })?;
        let parity = parity.ok_or_else(|| Error::Parse {
            line: text.lines().count().max(1),
            column: 1,
            message: "missing parity footer".into(),
        })?;
        Ok(TraceRecord {
            source,
            steps,
            terminal,
            parity,
        })
    }
}

fn parse_cell(text: &str) -> std::result::Result<Cell, String> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| format!("bad cell {text:?}"))?;
    let (x, y) = inner
        .split_once(',')
        .ok_or_else(|| format!("bad cell {text:?}"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<i32>()
            .map_err(|_| format!("bad coordinate {v:?}"))
    };
    Ok(Cell::new(parse(x)?, parse(y)?))
}

fn parse_cells(text: &str) -> std::result::Result<Vec<Cell>, String> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| format!("bad cell list {text:?}"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split("),")
        .map(|piece| {
            let piece = piece.trim();
            if piece.ends_with(')') {
                parse_cell(piece)
            } else {
                parse_cell(&format!("{piece})"))
            }
        })
        .collect()
}

fn parse_step(rest: &str) -> std::result::Result<(usize, StepRecord), String> {
    let (number, body) = rest
        .split_once(':')
        .ok_or("missing `:` after step number")?;
    let number: usize = number.trim().parse().map_err(|_| "bad step number")?;
    let mut words = body.split_whitespace();
    let kind = words
        .next()
        .and_then(StepKind::parse)
        .ok_or("step kind must be open, wall or even")?;
    let mut field = |name: &str| -> std::result::Result<String, String> {
        let word = words.next().ok_or(format!("missing field {name}"))?;
        word.strip_prefix(name)
            .and_then(|w| w.strip_prefix('='))
            .map(str::to_string)
            .ok_or(format!("expected field {name}, found {word:?}"))
    };
    let number_field =
        |v: String, name: &str| v.parse::<usize>().map_err(|_| format!("bad {name}"));
    let apex = parse_cell(&field("apex")?)?;
    let orientation = field("orient")?
        .parse::<u8>()
        .ok()
        .and_then(Symmetry::from_index)
        .ok_or("orient must be 0..7")?;
    let s = number_field(field("s")?, "s")?;
    let t = number_field(field("t")?, "t")?;
    let p = number_field(field("p")?, "p")?;
    let k = number_field(field("k")?, "k")?;
    let removed = parse_cells(&field("removed")?)?;
    if words.next().is_some() {
        return Err("unexpected trailing fields".into());
    }
    Ok((
        number,
        StepRecord {
            kind,
            apex,
            orientation,
            s,
            t,
            p,
            k,
            removed,
        },
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepCheck {
    /// 1-based step number; 0 for the final parity check.
    pub index: usize,
    pub passed: bool,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub checks: Vec<StepCheck>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&StepCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let label = if c.index == 0 {
                "parity".to_string()
            } else {
                format!("step {}", c.index)
            };
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{label}: {verdict} {}", c.message).unwrap();
        }
        out
    }
}

fn same_set(a: &[Cell], b: &[Cell]) -> bool {
    a.len() == b.len() && a.iter().collect::<BTreeSet<_>>() == b.iter().collect::<BTreeSet<_>>()
}

fn small_parity(region: &Region) -> Option<Parity> {
    (region.len() <= PARITY_CHECK_MAX_CELLS)
        .then(|| parity_tilings(region).ok())
        .flatten()
}

/// Outcome of replaying one step.
struct Replayed {
    next: Option<Region>,
    side: Option<Term>,
    message: String,
}

fn replay_step(current: &Region, record: &StepRecord) -> Result<Replayed> {
    let corner = record.corner();
    match record.kind {
        StepKind::Wall => {
            check_wall(current, &corner)?;
            if record.k != corner.s {
                return Err(Error::precondition(format!(
                    "wall step must have k = s = {}",
                    corner.s
                )));
            }
            let strip = wall_strip(&corner);
            if !same_set(&strip.cells, &record.removed) {
                return Err(Error::precondition(
                    "removed cells differ from the wall strip",
                ));
            }
            let next = current
                .remove_cells(&strip.cells)
                .map_err(|_| Error::precondition("the wall strip does not fit"))?;
            let message = match (small_parity(current), small_parity(&next)) {
                (Some(a), Some(b)) if a != b => {
                    return Err(Error::precondition(format!("parity {a} became {b}")))
                }
                (Some(a), Some(_)) => format!("parity {a} preserved"),
                _ => "preconditions hold; region too large for a parity check".into(),
            };
            Ok(Replayed {
                next: Some(next),
                side: None,
                message,
            })
        }
        StepKind::Open => {
            check_open(current, &corner, record.k)?;
            let (a, b) = open_strips(&corner, record.k);
            let (kept, other) = if same_set(&a.cells, &record.removed) {
                (a, b)
            } else if same_set(&b.cells, &record.removed) {
                (b, a)
            } else {
                return Err(Error::precondition(
                    "removed cells match neither open strip",
                ));
            };
            let next = current
                .remove_cells(&kept.cells)
                .map_err(|_| Error::precondition("the followed strip does not fit"))?;
            let side = current
                .remove_cells(&other.cells)
                .map_or(Term::Zero, Term::Region);
            let side_parity = match &side {
                Term::Zero => Some(Parity::Even),
                Term::Region(r) => small_parity(r),
            };
            let message = match (small_parity(current), small_parity(&next), side_parity) {
                (Some(whole), Some(x), Some(y)) if whole != (x ^ y) => {
                    return Err(Error::precondition(format!(
                        "parity {whole} != {x} xor {y}"
                    )))
                }
                (Some(whole), Some(x), Some(y)) => format!("parity {whole} = {x} xor {y}"),
                _ => "preconditions hold; region too large for a parity check".into(),
            };
            Ok(Replayed {
                next: Some(next),
                side: Some(side),
                message,
            })
        }
        StepKind::Even => {
            check_even(current, &corner)?;
            if !record.removed.is_empty() {
                return Err(Error::precondition("an even step removes no cells"));
            }
            let message = match small_parity(current) {
                Some(Parity::Odd) => return Err(Error::precondition("region has odd parity")),
                Some(Parity::Even) => "parity 0 confirmed".into(),
                None => "preconditions hold; region too large for a parity check".into(),
            };
            Ok(Replayed {
                next: None,
                side: None,
                message,
            })
        }
    }
}

/// Replay `steps` from `start` and compare the combined terminal parity
/// with `claimed`.
pub fn verify_records(start: &Region, steps: &[StepRecord], claimed: Parity) -> VerifyReport {
    verify_records_with_terminal(start, steps, None, claimed)
}

/// Replay a parsed trace, also checking its `terminal` line when present.
pub fn verify_record(start: &Region, record: &TraceRecord) -> VerifyReport {
    verify_records_with_terminal(
        start,
        &record.steps,
        record.terminal.as_deref(),
        record.parity,
    )
}

fn verify_records_with_terminal(
    start: &Region,
    steps: &[StepRecord],
    terminal: Option<&str>,
    claimed: Parity,
) -> VerifyReport {
    let mut report = VerifyReport::default();
    let mut current = Some(start.clone());
    let mut terminals = Vec::new();
    for (n, record) in steps.iter().enumerate() {
        let index = n + 1;
        let Some(region) = current.take() else {
            report.checks.push(StepCheck {
                index,
                passed: false,
                message: "step after the trace ended".into(),
            });
            continue;
        };
        match replay_step(&region, record) {
            Ok(done) => {
                report.checks.push(StepCheck {
                    index,
                    passed: true,
                    message: done.message,
                });
                if let Some(side) = done.side {
                    terminals.push(side);
                }
                current = done.next;
                if current.is_none() {
                    terminals.push(Term::Zero);
                }
            }
            Err(e) => {
                report.checks.push(StepCheck {
                    index,
                    passed: false,
                    message: e.to_string(),
                });
                for later in index + 1..=steps.len() {
                    report.checks.push(StepCheck {
                        index: later,
                        passed: false,
                        message: "not checked: an earlier step failed".into(),
                    });
                }
                report.checks.push(StepCheck {
                    index: 0,
                    passed: false,
                    message: "not checked: a step failed".into(),
                });
                return report;
            }
        }
    }
    if let Some(shape) = terminal {
        let matches = match (&current, parse_compact(shape)) {
            (Some(region), Ok(expected)) => *region == expected,
            _ => false,
        };
        report.checks.push(StepCheck {
            index: 0,
            passed: matches,
            message: if matches {
                format!("terminal region is {shape}")
            } else {
                format!("terminal region differs from {shape}")
            },
        });
    }
    if let Some(region) = current {
        terminals.push(Term::Region(region));
    }
    let combined = terminals
        .iter()
        .map(Term::parity)
        .try_fold(Parity::Even, |acc, p| p.map(|p| acc ^ p));
    let check = match combined {
        Ok(p) if p == claimed => StepCheck {
            index: 0,
            passed: true,
            message: format!("terminals combine to parity {p}"),
        },
        Ok(p) => StepCheck {
            index: 0,
            passed: false,
            message: format!("terminals combine to parity {p}, trace claims {claimed}"),
        },
        Err(e) => StepCheck {
            index: 0,
            passed: false,
            message: format!("terminal parity unavailable: {e}"),
        },
    };
    report.checks.push(check);
    report
}

pub fn verify_trace(trace: &ReductionTrace) -> VerifyReport {
    verify_record(&trace.start, &trace.to_record(""))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::{reduce_to_trace, Strategy};
    use crate::region::{half_region_pruned, rectangle};

    fn greedy(region: &Region) -> ReductionTrace {
        reduce_to_trace(region, &Strategy::WallGreedy).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let trace = greedy(&half_region_pruned(1, 3).unwrap());
        let record = trace.to_record("hprime:1,3");
        let text = record.to_text();
        assert!(text.starts_with("start hprime:1,3\nstep 1: wall apex="));
        assert!(text.ends_with("parity 1\n"));
        assert!(text.contains("\nterminal "));
        assert_eq!(TraceRecord::parse(&text).unwrap(), record);
    }

    #[test]
    fn greedy_traces_verify() {
        for region in [
            half_region_pruned(1, 3).unwrap(),
            rectangle(3, 4).unwrap(),
            rectangle(2, 2).unwrap(),
        ] {
            let report = verify_trace(&greedy(&region));
            assert!(report.all_pass(), "{}", report.to_text());
        }
    }

    #[test]
    fn perturbed_strip_is_caught() {
        let trace = greedy(&rectangle(3, 4).unwrap());
        let mut records = trace.records();
        let cell = records[0].removed[0];
        records[0].removed[0] = cell.offset((1, 1));
        let report = verify_records(&trace.start, &records, trace.parity);
        assert_eq!(report.first_failure().unwrap().index, 1);
    }

    #[test]
    fn fake_wall_is_caught() {
        // A 2x4 rectangle's long leg is not walled at length 2.
        let r = rectangle(2, 4).unwrap();
        let record = StepRecord {
            kind: StepKind::Wall,
            apex: Cell::new(0, 0),
            orientation: Symmetry::IDENTITY,
            s: 2,
            t: 2,
            p: 1,
            k: 2,
            removed: vec![Cell::new(1, 0), Cell::new(0, 0), Cell::new(0, 1)],
        };
        let report = verify_records(&r, &[record], Parity::Odd);
        let failure = report.first_failure().unwrap();
        assert_eq!(failure.index, 1);
        assert!(
            failure.message.contains("precondition"),
            "{}",
            failure.message
        );
    }

    #[test]
    fn wrong_claimed_parity_is_caught() {
        let trace = greedy(&rectangle(3, 4).unwrap());
        let report = verify_records(&trace.start, &trace.records(), trace.parity ^ Parity::Odd);
        assert_eq!(report.first_failure().unwrap().index, 0);
    }

    #[test]
    fn parse_errors() {
        assert!(TraceRecord::parse("parity 1\n").is_err());
        assert!(TraceRecord::parse("start x\n").is_err());
        assert!(TraceRecord::parse(
            "start x\nstep 2: wall apex=(0,0) orient=0 s=1 t=1 p=1 k=1 removed=[]\nparity 1"
        )
        .is_err());
        assert!(TraceRecord::parse(
            "start x\nstep 1: slide apex=(0,0) orient=0 s=1 t=1 p=1 k=1 removed=[]\nparity 1"
        )
        .is_err());
        let ok = TraceRecord::parse(
            "start x\nstep 1: even apex=(0,0) orient=0 s=1 t=1 p=1 k=1 removed=[]\nparity 0",
        )
        .unwrap();
        assert_eq!(ok.steps[0].removed, Vec::<Cell>::new());
    }
}
