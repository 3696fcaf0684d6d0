//! Corner structures: `({s,t};p)`-corners, the strips that hug them, walls
//! and k-completeness.
//!
//! Everything is computed in a canonical frame where the corner's legs run
//! along `+x` (the s-side) and `+y` (the t-side). The frame's apex is the
//! canonical origin. For `p = 1` the apex is the corner cell itself. For
//! `p >= 2` the apex is the empty lattice cell at the corner of the
//! staircase's bounding box, and the staircase reads:
//!
//! ```text
//!   t-leg   (0, p-1), (0, p), ...                 up the left edge
//!   outer   (p-1-q, q)   for q in 0..p            p convex cells
//!   inner   (p-1-q, q+1) for q in 0..p-1          fillers between them
//!   s-leg   (p-1, 0), (p, 0), ...                 along the bottom edge
//! ```
//!
//! Cells below or to the left of each outer cell are absent.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::region::{Cell, Region};
use crate::symmetry::Symmetry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CornerFrame {
    pub apex: Cell,
    pub orientation: Symmetry,
}

impl CornerFrame {
    pub fn new(apex: Cell, orientation: Symmetry) -> Self {
        CornerFrame { apex, orientation }
    }

    /// Region cell at canonical offset `(u, v)`.
    pub fn at(&self, u: i32, v: i32) -> Cell {
        self.apex.offset(self.orientation.apply((u, v)))
    }

    /// Same apex, legs exchanged.
    pub fn transposed(&self) -> CornerFrame {
        CornerFrame::new(self.apex, Symmetry::TRANSPOSE.compose(self.orientation))
    }

    /// The frame one layer inward along the diagonal.
    pub fn shifted_inward(&self) -> CornerFrame {
        CornerFrame::new(self.at(1, 1), self.orientation)
    }

    /// Unordered pair of leg directions; identifies the geometric corner
    /// together with the apex.
    fn leg_key(&self) -> [(i32, i32); 2] {
        let mut dirs = [
            self.orientation.apply((1, 0)),
            self.orientation.apply((0, 1)),
        ];
        dirs.sort();
        dirs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    S,
    T,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::S => "s",
            Side::T => "t",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StCorner {
    pub s: usize,
    pub t: usize,
    pub p: usize,
    pub frame: CornerFrame,
}

impl StCorner {
    pub fn transposed(&self) -> StCorner {
        StCorner {
            s: self.t,
            t: self.s,
            p: self.p,
            frame: self.frame.transposed(),
        }
    }

    pub fn min_leg(&self) -> usize {
        self.s.min(self.t)
    }

    pub fn apex(&self) -> Cell {
        self.frame.apex
    }
}

impl fmt::Display for StCorner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({{{},{}}};{}) apex={} orient={}",
            self.s,
            self.t,
            self.p,
            self.frame.apex,
            self.frame.orientation.index()
        )
    }
}

/// The cells of an `({i,j};p)`-strip in walking order: from the far end of
/// the s-leg, around the staircase, out to the far end of the t-leg.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strip {
    pub i: usize,
    pub j: usize,
    pub p: usize,
    pub cells: Vec<Cell>,
}

impl Strip {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Canonical offsets of an `({i,j};p)`-strip, `i + j + 2p - 3` of them.
pub(crate) fn strip_offsets(p: usize, i: usize, j: usize) -> Vec<(i32, i32)> {
    debug_assert!(p >= 1 && i >= 1 && j >= 1);
    let (p, i, j) = (p as i32, i as i32, j as i32);
    let mut out = Vec::with_capacity((i + j + 2 * p - 3) as usize);
    out.extend((0..i).rev().map(|a| (p - 1 + a, 0)));
    for q in 0..p - 1 {
        out.push((p - 1 - q, q + 1));
        if q < p - 2 {
            out.push((p - 2 - q, q + 1));
        }
    }
    let t_start = if p == 1 { 1 } else { 0 };
    out.extend((t_start..j).map(|b| (0, p - 1 + b)));
    out
}

pub(crate) fn strip_in_frame(frame: &CornerFrame, p: usize, i: usize, j: usize) -> Strip {
    Strip {
        i,
        j,
        p,
        cells: strip_offsets(p, i, j)
            .into_iter()
            .map(|(u, v)| frame.at(u, v))
            .collect(),
    }
}

/// Length of the boundary run starting at canonical `(u, v)` and stepping
/// by `dir`, where `outside` (relative to each run cell) must be absent.
fn run_length(
    region: &Region,
    frame: &CornerFrame,
    (u, v): (i32, i32),
    dir: (i32, i32),
    outside: (i32, i32),
) -> usize {
    let mut n = 0;
    loop {
        let (a, b) = (u + dir.0 * n, v + dir.1 * n);
        if !region.contains(frame.at(a, b))
            || region.contains(frame.at(a + outside.0, b + outside.1))
        {
            return n as usize;
        }
        n += 1;
    }
}

/// The `({s,t};p)`-corner with the given frame and staircase size, if the
/// region has one there. `s` and `t` are the maximal leg lengths.
pub fn corner_in_frame(region: &Region, frame: CornerFrame, p: usize) -> Option<StCorner> {
    if p == 0 {
        return None;
    }
    let has = |u: i32, v: i32| region.contains(frame.at(u, v));
    let pi = p as i32;
    for q in 0..pi {
        let (u, v) = (pi - 1 - q, q);
        if !has(u, v) || has(u, v - 1) || has(u - 1, v) {
            return None;
        }
    }
    for q in 0..pi - 1 {
        if !has(pi - 1 - q, q + 1) {
            return None;
        }
    }
    let s = run_length(region, &frame, (pi - 1, 0), (1, 0), (0, -1));
    let t = run_length(region, &frame, (0, pi - 1), (0, 1), (-1, 0));
    if p >= 2 && s.min(t) < 2 {
        return None;
    }
    Some(StCorner { s, t, p, frame })
}

/// Starting from a convex cell whose up-leg has length one, walk the unit
/// staircase toward `-x, +y` and return its size `p` if it ends in a leg of
/// length at least two.
fn staircase_size(region: &Region, start: Cell, orientation: Symmetry) -> Option<usize> {
    let frame = CornerFrame::new(start, orientation);
    let has = |u: i32, v: i32| region.contains(frame.at(u, v));
    let mut steps = 0;
    loop {
        let (u, v) = (-steps, steps);
        if !has(u, v + 1) {
            return None;
        }
        if !has(u - 1, v + 1) {
            return (steps > 0).then_some(steps as usize + 1);
        }
        if has(u - 2, v + 1) {
            return None;
        }
        steps += 1;
    }
}

/// Apex, unordered leg directions and staircase size.
type CornerKey = (Cell, [(i32, i32); 2], usize);

/// Every maximal corner of the region, one entry per geometric corner,
/// ordered by apex and then orientation index. Of the two frames describing
/// a corner the one with the smaller orientation index is reported.
pub fn find_corners(region: &Region) -> Vec<StCorner> {
    let mut found: BTreeMap<CornerKey, StCorner> = BTreeMap::new();
    let mut keep = |corner: StCorner| {
        let key = (corner.frame.apex, corner.frame.leg_key(), corner.p);
        found
            .entry(key)
            .and_modify(|existing| {
                if corner.frame.orientation < existing.frame.orientation {
                    *existing = corner;
                }
            })
            .or_insert(corner);
    };
    for cell in region.cells() {
        for g in Symmetry::all() {
            let frame = CornerFrame::new(cell, g);
            let Some(corner) = corner_in_frame(region, frame, 1) else {
                continue;
            };
            keep(corner);
            if corner.s >= 2 && corner.t == 1 {
                if let Some(p) = staircase_size(region, cell, g) {
                    let apex = frame.at(-(p as i32 - 1), 0);
                    if let Some(c) = corner_in_frame(region, CornerFrame::new(apex, g), p) {
                        keep(c);
                    }
                }
            }
        }
    }
    let mut out: Vec<StCorner> = found.into_values().collect();
    out.sort_by_key(|c| (c.frame.apex, c.frame.orientation));
    out
}

/// The `({i,j};p)`-strip of `corner`, with `i` cells along the s-leg and
/// `j` along the t-leg.
pub fn extract_strip(region: &Region, corner: &StCorner, i: usize, j: usize) -> Result<Strip> {
    if i == 0 || j == 0 || i > corner.s || j > corner.t {
        return Err(Error::invalid(format!(
            "strip ({{{i},{j}}};{}) does not fit corner {corner}",
            corner.p
        )));
    }
    let strip = strip_in_frame(&corner.frame, corner.p, i, j);
    if let Some(missing) = strip.cells.iter().find(|c| !region.contains(**c)) {
        return Err(Error::NotApplicable(*missing));
    }
    Ok(strip)
}

/// Whether the leg on `side` ends in another convex corner, which happens
/// exactly when the cell just past the end of the leg is absent.
pub fn is_walled_at(region: &Region, corner: &StCorner, side: Side) -> bool {
    let p = corner.p as i32;
    let beyond = match side {
        Side::S => corner.frame.at(p - 1 + corner.s as i32, 0),
        Side::T => corner.frame.at(0, p - 1 + corner.t as i32),
    };
    !region.contains(beyond)
}

/// Whether the corner is complete up to `k`.
///
/// `k = 1` is accepted for `p = 1` corners and is always true. Otherwise
/// `2 <= k <= min(s, t)` is required.
pub fn is_complete_up_to(region: &Region, corner: &StCorner, k: usize) -> Result<bool> {
    if k == 1 && corner.p == 1 {
        return Ok(true);
    }
    if k < 2 || k > corner.min_leg() {
        return Err(Error::invalid(format!(
            "completeness level {k} is outside 2..={} for corner {corner}",
            corner.min_leg()
        )));
    }
    Ok(complete_up_to(region, corner, k))
}

fn complete_up_to(region: &Region, corner: &StCorner, k: usize) -> bool {
    (2..=k).all(|i| i_complete(region, corner, i))
}

fn i_complete(region: &Region, corner: &StCorner, i: usize) -> bool {
    if i == 2 {
        return corner.min_leg() >= 2;
    }
    let frame = corner.frame;
    let p = corner.p;
    let reach = (p + i - 2) as i32;
    let c = strip_in_frame(&frame, p, i, i);
    let x = frame.at(reach, 1);
    let y = frame.at(1, reach);
    let mut examined: Vec<Cell> = c.cells.clone();

    // (1) a flanking cell forces the whole next layer
    if region.contains(x) || region.contains(y) {
        let inner = strip_in_frame(&frame.shifted_inward(), p, i - 1, i - 1);
        if inner.cells.iter().any(|cell| !region.contains(*cell)) {
            return false;
        }
        examined.extend(&inner.cells);
    }
    examined.extend([x, y].iter().filter(|cell| region.contains(**cell)));

    // (3) the examined cells form a grid-graph patch
    if !is_grid_patch(region, &examined) {
        return false;
    }

    // (2) the corner left behind by removing C
    let Ok(rest) = region.remove_cells(&c.cells) else {
        return false;
    };
    match corner_in_frame(&rest, frame.shifted_inward(), p) {
        Some(next) if i >= 4 && i - 2 <= next.min_leg() => complete_up_to(&rest, &next, i - 2),
        _ => true,
    }
}

/// Every pair of coordinate-adjacent cells in `cells` must be joined in the
/// region's dual graph. Regions here are plain cell sets without slits, so
/// this holds whenever the cells belong to the region.
fn is_grid_patch(region: &Region, cells: &[Cell]) -> bool {
    cells.iter().all(|c| region.contains(*c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{half_region_pruned, rectangle, t_region};

    fn region(rows: &[&str]) -> Region {
        crate::grid::parse_region(&rows.join("\n")).unwrap()
    }

    #[test]
    fn strip_offsets_have_the_right_size_and_are_connected() {
        for p in 1..=5 {
            for i in 1..=5 {
                for j in 1..=5 {
                    let cells = strip_offsets(p, i, j);
                    assert_eq!(cells.len(), i + j + 2 * p - 3, "p={p} i={i} j={j}");
                    for w in cells.windows(2) {
                        let (a, b) = (w[0], w[1]);
                        assert_eq!((a.0 - b.0).abs() + (a.1 - b.1).abs(), 1);
                    }
                    let mut sorted = cells.clone();
                    sorted.sort();
                    sorted.dedup();
                    assert_eq!(sorted.len(), cells.len());
                }
            }
        }
    }

    #[test]
    fn rectangle_corners() {
        let r = rectangle(3, 5).unwrap();
        let corners = find_corners(&r);
        assert_eq!(corners.len(), 4);
        for c in &corners {
            assert_eq!(c.p, 1);
            let mut legs = [c.s, c.t];
            legs.sort();
            assert_eq!(legs, [3, 5]);
            assert!(is_complete_up_to(&r, c, 3).unwrap());
            assert!(is_walled_at(&r, c, Side::S));
            assert!(is_walled_at(&r, c, Side::T));
        }
    }

    #[test]
    fn single_cell_has_four_corners() {
        let r = rectangle(1, 1).unwrap();
        let corners = find_corners(&r);
        assert_eq!(corners.len(), 4);
        assert!(corners.iter().all(|c| c.s == 1 && c.t == 1 && c.p == 1));
    }

    #[test]
    fn staircase_corner_of_t_region() {
        let t = t_region(2, 5, 4).unwrap();
        let corners = find_corners(&t);
        let stairs: Vec<_> = corners.iter().filter(|c| c.p == 4).collect();
        assert_eq!(stairs.len(), 2);
        for c in stairs {
            let mut legs = [c.s, c.t];
            legs.sort();
            assert_eq!(legs, [2, 5]);
            let strip = extract_strip(&t, c, 2, 2).unwrap();
            assert_eq!(strip.len(), 9);
        }
    }

    #[test]
    fn extract_strip_on_rectangle() {
        let r = rectangle(4, 5).unwrap();
        let c = find_corners(&r)[0];
        let c = if c.s == 4 { c } else { c.transposed() };
        let strip = extract_strip(&r, &c, 2, 3).unwrap();
        assert_eq!(strip.len(), 4);
        assert!(strip.cells.contains(&c.apex()));
        assert!(extract_strip(&r, &c, 5, 1).is_err());
    }

    #[test]
    fn missing_strip_cell_is_reported() {
        let r = region(&["#..", "###"]);
        let corner =
            corner_in_frame(&r, CornerFrame::new(Cell::new(0, 0), Symmetry::IDENTITY), 1).unwrap();
        assert_eq!((corner.s, corner.t), (3, 2));
        let damaged = r.remove_cells(&[Cell::new(0, 1)]).unwrap();
        match extract_strip(&damaged, &corner, 2, 2) {
            Err(Error::NotApplicable(cell)) => assert_eq!(cell, Cell::new(0, 1)),
            other => panic!("expected not-applicable, got {other:?}"),
        }
    }

    #[test]
    fn three_complete_shapes() {
        // Canonical lower-left corner with legs of length 3: once either
        // flanking cell (2,1) or (1,2) exists, all of (1,1), (2,1), (1,2) must.
        let ok = [
            region(&["#..", "#..", "###"]),
            region(&["#..", "##.", "###"]),
            region(&["##.", "###", "###"]),
        ];
        let frame = CornerFrame::new(Cell::new(0, 0), Symmetry::IDENTITY);
        for r in &ok {
            let c = corner_in_frame(r, frame, 1).unwrap();
            assert!(is_complete_up_to(r, &c, 3).unwrap(), "{r:?}");
        }
        for bad in [
            region(&["#..", "#.#", "###"]),
            region(&["#..", "###", "###"]),
        ] {
            let c = corner_in_frame(&bad, frame, 1).unwrap();
            assert_eq!(c.min_leg(), 3);
            assert!(!is_complete_up_to(&bad, &c, 3).unwrap(), "{bad:?}");
            assert!(is_complete_up_to(&bad, &c, 2).unwrap());
        }
    }

    #[test]
    fn completeness_argument_range() {
        let r = rectangle(3, 3).unwrap();
        let c = find_corners(&r)[0];
        assert!(is_complete_up_to(&r, &c, 1).unwrap());
        assert!(is_complete_up_to(&r, &c, 4).is_err());
        assert!(is_complete_up_to(&r, &c, 0).is_err());
    }

    #[test]
    fn pruned_half_region_corner() {
        let h = half_region_pruned(1, 3).unwrap();
        let frame = CornerFrame::new(Cell::new(0, 0), Symmetry::IDENTITY);
        let c = corner_in_frame(&h, frame, 1).unwrap();
        assert_eq!((c.s, c.t), (4, 5));
        assert!(is_complete_up_to(&h, &c, 4).unwrap());
        assert!(is_walled_at(&h, &c, Side::S));
        assert!(is_walled_at(&h, &c, Side::T));
    }

    #[test]
    fn concave_leg_end_is_not_a_wall() {
        // L shape: the bottom leg of the top-left arm ends at a concave turn.
        let r = region(&["##..", "##..", "####", "####"]);
        let frame = CornerFrame::new(Cell::new(0, 3), Symmetry::FLIP_Y);
        let c = corner_in_frame(&r, frame, 1).unwrap();
        assert_eq!((c.s, c.t), (2, 4));
        assert!(is_walled_at(&r, &c, Side::T));
        let right_arm = CornerFrame::new(Cell::new(1, 3), Symmetry::ROTATE_180);
        let c = corner_in_frame(&r, right_arm, 1).unwrap();
        assert_eq!((c.s, c.t), (2, 2));
        assert!(is_walled_at(&r, &c, Side::S));
        assert!(!is_walled_at(&r, &c, Side::T));
    }
}
