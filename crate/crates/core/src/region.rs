//! Finite regions of unit cells on the integer grid, and the region families
//! used throughout the crate.
//!
//! A cell `(x, y)` is the unit square `[x, x+1] x [y, y+1]`; `y` grows upward.
//! Builders always return normalized regions (minimum `x` and `y` are zero).
//! Operations that remove cells keep the parent's coordinates so that cells
//! named in reduction traces stay meaningful; equality ignores translation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::symmetry::Symmetry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Cell { x, y }
    }

    pub fn offset(self, (dx, dy): (i32, i32)) -> Cell {
        Cell::new(self.x + dx, self.y + dy)
    }

    pub fn neighbors(self) -> [Cell; 4] {
        [
            self.offset((1, 0)),
            self.offset((-1, 0)),
            self.offset((0, 1)),
            self.offset((0, -1)),
        ]
    }

    pub fn is_adjacent(self, other: Cell) -> bool {
        (self.x - other.x).abs() + (self.y - other.y).abs() == 1
    }

    /// Checkerboard color: `true` for cells with even `x + y`.
    pub fn is_black(self) -> bool {
        (self.x + self.y).rem_euclid(2) == 0
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl From<(i32, i32)> for Cell {
    fn from((x, y): (i32, i32)) -> Self {
        Cell::new(x, y)
    }
}

/// Two edge-adjacent cells, stored in sorted order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domino {
    first: Cell,
    second: Cell,
}

impl Domino {
    pub fn new(a: Cell, b: Cell) -> Result<Self> {
        if !a.is_adjacent(b) {
            return Err(Error::invalid(format!("{a} and {b} are not edge-adjacent")));
        }
        let (first, second) = if a < b { (a, b) } else { (b, a) };
        Ok(Domino { first, second })
    }

    pub fn cells(&self) -> [Cell; 2] {
        [self.first, self.second]
    }

    pub fn is_horizontal(&self) -> bool {
        self.first.y == self.second.y
    }
}

/// A set of dominoes. Whether it tiles a given region is checked by
/// [`Tiling::is_tiling_of`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tiling {
    dominoes: Vec<Domino>,
}

impl Tiling {
    pub fn new(mut dominoes: Vec<Domino>) -> Self {
        dominoes.sort();
        Tiling { dominoes }
    }

    pub fn dominoes(&self) -> &[Domino] {
        &self.dominoes
    }

    pub fn is_tiling_of(&self, region: &Region) -> bool {
        let mut covered = BTreeSet::new();
        for domino in &self.dominoes {
            for cell in domino.cells() {
                if !region.contains(cell) || !covered.insert(cell) {
                    return false;
                }
            }
        }
        covered.len() == region.len()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Region {
    cells: BTreeSet<Cell>,
}

impl Region {
    pub fn new(cells: impl IntoIterator<Item = Cell>) -> Self {
        Region {
            cells: cells.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Region::default()
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells.iter().copied()
    }

    pub fn cell_set(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.contains(&cell)
    }

    /// Lower-left and upper-right cells of the bounding box.
    pub fn bounds(&self) -> Option<(Cell, Cell)> {
        let first = *self.cells.first()?;
        let (mut lo, mut hi) = (first, first);
        for c in &self.cells {
            lo.x = lo.x.min(c.x);
            lo.y = lo.y.min(c.y);
            hi.x = hi.x.max(c.x);
            hi.y = hi.y.max(c.y);
        }
        Some((lo, hi))
    }

    /// Bounding box size as `(columns, rows)`.
    pub fn dimensions(&self) -> (usize, usize) {
        match self.bounds() {
            Some((lo, hi)) => ((hi.x - lo.x + 1) as usize, (hi.y - lo.y + 1) as usize),
            None => (0, 0),
        }
    }

    pub fn translate(&self, (dx, dy): (i32, i32)) -> Region {
        Region::new(self.cells().map(|c| c.offset((dx, dy))))
    }

    pub fn normalized(&self) -> Region {
        match self.bounds() {
            Some((lo, _)) => self.translate((-lo.x, -lo.y)),
            None => Region::empty(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.bounds().is_none_or(|(lo, _)| lo.x == 0 && lo.y == 0)
    }

    /// Apply a square symmetry and normalize.
    pub fn transform(&self, symmetry: Symmetry) -> Region {
        Region::new(self.cells().map(|c| symmetry.apply_cell((c.x, c.y)).into())).normalized()
    }

    /// Remove `cells`, all of which must belong to the region. Coordinates of
    /// the remaining cells are unchanged.
    pub fn remove_cells(&self, cells: &[Cell]) -> Result<Region> {
        if let Some(missing) = cells.iter().find(|c| !self.contains(**c)) {
            return Err(Error::invalid(format!(
                "cell {missing} is not in the region"
            )));
        }
        let mut out = self.cells.clone();
        for c in cells {
            out.remove(c);
        }
        Ok(Region { cells: out })
    }

    pub fn union(&self, other: &Region) -> Region {
        Region {
            cells: self.cells.union(&other.cells).copied().collect(),
        }
    }

    pub fn is_disjoint(&self, other: &Region) -> bool {
        self.cells.is_disjoint(&other.cells)
    }

    /// Same cell set, compared without normalizing.
    pub fn same_cells(&self, other: &Region) -> bool {
        self.cells == other.cells
    }

    /// Black minus white cells under the checkerboard coloring.
    pub fn color_imbalance(&self) -> i64 {
        self.cells()
            .map(|c| if c.is_black() { 1 } else { -1 })
            .sum()
    }

    /// Edges of the dual graph: pairs of edge-adjacent cells, each listed
    /// once with the smaller cell first.
    pub fn dual_adjacency(&self) -> Vec<(Cell, Cell)> {
        let mut edges = Vec::new();
        for c in self.cells() {
            for n in [c.offset((1, 0)), c.offset((0, 1))] {
                if self.contains(n) {
                    edges.push((c, n));
                }
            }
        }
        edges
    }

    /// Connected components of the dual graph, in order of their smallest cell.
    pub fn components(&self) -> Vec<Region> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.cells() {
            if seen.contains(&start) {
                continue;
            }
            let mut component = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(c) = queue.pop_front() {
                component.insert(c);
                for n in c.neighbors() {
                    if self.contains(n) && seen.insert(n) {
                        queue.push_back(n);
                    }
                }
            }
            out.push(Region { cells: component });
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Cells grouped by row, top row first, each row sorted by `x`.
    pub fn rows(&self) -> BTreeMap<i32, Vec<i32>> {
        let mut rows: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
        for c in self.cells() {
            rows.entry(c.y).or_default().push(c.x);
        }
        rows
    }
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        if self.len() != other.len() {
            return false;
        }
        match (self.bounds(), other.bounds()) {
            (None, None) => true,
            (Some((a, _)), Some((b, _))) => {
                let (dx, dy) = (b.x - a.x, b.y - a.y);
                self.cells().all(|c| other.contains(c.offset((dx, dy))))
            }
            _ => false,
        }
    }
}

impl Eq for Region {}

impl Hash for Region {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let lo = self.bounds().map(|(lo, _)| lo).unwrap_or(Cell::new(0, 0));
        self.len().hash(state);
        for c in self.cells() {
            (c.x - lo.x, c.y - lo.y).hash(state);
        }
    }
}

impl FromIterator<Cell> for Region {
    fn from_iter<I: IntoIterator<Item = Cell>>(iter: I) -> Self {
        Region::new(iter)
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}

/// The `rows x cols` rectangle `N(rows, cols)`.
pub fn rectangle(rows: i32, cols: i32) -> Result<Region> {
    require(rows >= 1 && cols >= 1, || {
        format!("rectangle dimensions must be positive, got {rows}x{cols}")
    })?;
    Ok((0..cols)
        .flat_map(|x| (0..rows).map(move |y| Cell::new(x, y)))
        .collect())
}

fn check_holey(m: i32, n: i32) -> Result<()> {
    require(m >= 0 && n > m, || {
        format!("holey square needs n > m >= 0, got m={m}, n={n}")
    })
}

/// The `2n x 2n` square with the centered `2m x 2m` block removed.
pub fn holey_square(m: i32, n: i32) -> Result<Region> {
    check_holey(m, n)?;
    let hole = (n - m)..(n + m);
    Ok((0..2 * n)
        .flat_map(|x| (0..2 * n).map(move |y| Cell::new(x, y)))
        .filter(|c| !(hole.contains(&c.x) && hole.contains(&c.y)))
        .collect())
}

/// The `(2n+1) x (2n+1)` square with the centered `(2m+1) x (2m+1)` block removed.
pub fn holey_square_odd(m: i32, n: i32) -> Result<Region> {
    check_holey(m, n)?;
    let hole = (n - m)..=(n + m);
    Ok((0..=2 * n)
        .flat_map(|x| (0..=2 * n).map(move |y| Cell::new(x, y)))
        .filter(|c| !(hole.contains(&c.x) && hole.contains(&c.y)))
        .collect())
}

/// The lower half `H(m, n)` of the holey square under the jagged cut.
///
/// The cut consists of the horizontal unit-pair segments at height
/// `2n - (2t+1)` over `[2t, 2t+2]` joined by vertical segments at `x = 2n - 2t`,
/// so column `x` keeps the cells below height `2n - 2*(x/2) - 1`.
pub fn half_region(m: i32, n: i32) -> Result<Region> {
    let full = holey_square(m, n)?;
    Ok(full
        .cells()
        .filter(|c| c.y < 2 * n - 2 * (c.x / 2) - 1)
        .collect())
}

/// Lower half of the odd holey square.
///
/// Cells strictly below the anti-diagonal `x + y = 2n` belong to it; the
/// anti-diagonal cells outside the hole alternate between the halves, the
/// first (top-left) one going to the upper half.
pub fn half_region_odd(m: i32, n: i32) -> Result<Region> {
    let full = holey_square_odd(m, n)?;
    let diagonal: Vec<Cell> = (0..=2 * n)
        .map(|x| Cell::new(x, 2 * n - x))
        .filter(|c| full.contains(*c))
        .collect();
    let lower_diagonal: BTreeSet<Cell> = diagonal.iter().copied().skip(1).step_by(2).collect();
    Ok(full
        .cells()
        .filter(|c| c.x + c.y < 2 * n || lower_diagonal.contains(c))
        .collect())
}

/// The two cells of maximal `x` in the bottom row: the domino forced in
/// every tiling of a half region.
pub fn forced_domino(half: &Region) -> Option<[Cell; 2]> {
    let (lo, _) = half.bounds()?;
    let mut bottom: Vec<Cell> = half.cells().filter(|c| c.y == lo.y).collect();
    bottom.sort();
    let n = bottom.len();
    (n >= 2).then(|| [bottom[n - 2], bottom[n - 1]])
}

fn prune(half: Region) -> Result<Region> {
    let cells =
        forced_domino(&half).ok_or_else(|| Error::invalid("half region has no bottom domino"))?;
    half.remove_cells(&cells)
}

/// `H'(m, n)`: [`half_region`] without its forced bottom-right domino.
pub fn half_region_pruned(m: i32, n: i32) -> Result<Region> {
    prune(half_region(m, n)?)
}

pub fn half_region_odd_pruned(m: i32, n: i32) -> Result<Region> {
    prune(half_region_odd(m, n)?)
}

/// Rows listed top to bottom, each centered on a common vertical axis.
/// Consecutive widths must share parity.
fn stacked_rows(widths: &[i32]) -> Region {
    let widest = widths.iter().copied().max().unwrap_or(0);
    let height = widths.len() as i32;
    widths
        .iter()
        .enumerate()
        .flat_map(|(row, &w)| {
            let y = height - 1 - row as i32;
            let start = (widest - w) / 2;
            (start..start + w).map(move |x| Cell::new(x, y))
        })
        .collect()
}

fn check_staircase(i: i32, j: i32, p: i32) -> Result<()> {
    require(i >= 1 && j >= 1 && p >= 1, || {
        format!("staircase parameters must be positive, got i={i}, j={j}, p={p}")
    })
}

/// `T(i, j, p)`: rows `j, j+2, ..., j+2(p-1)` from the top, the last width
/// repeated `i` times.
pub fn t_region(i: i32, j: i32, p: i32) -> Result<Region> {
    check_staircase(i, j, p)?;
    let mut widths: Vec<i32> = (0..p - 1).map(|r| j + 2 * r).collect();
    widths.extend(std::iter::repeat_n(j + 2 * (p - 1), i as usize));
    Ok(stacked_rows(&widths))
}

/// `D(i, j, p)`: like [`t_region`] with the staircase mirrored below.
pub fn d_region(i: i32, j: i32, p: i32) -> Result<Region> {
    check_staircase(i, j, p)?;
    let top: Vec<i32> = (0..p - 1).map(|r| j + 2 * r).collect();
    let mut widths = top.clone();
    widths.extend(std::iter::repeat_n(j + 2 * (p - 1), i as usize));
    widths.extend(top.iter().rev());
    Ok(stacked_rows(&widths))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_widths(r: &Region) -> Vec<usize> {
        r.rows().values().rev().map(Vec::len).collect()
    }

    #[test]
    fn rectangles() {
        let bar = rectangle(1, 2).unwrap();
        assert_eq!(bar, Region::new([Cell::new(0, 0), Cell::new(1, 0)]));
        let r = rectangle(2, 3).unwrap();
        assert_eq!(r.len(), 6);
        assert_eq!(r.dimensions(), (3, 2));
        assert_eq!(rectangle(4, 6).unwrap().len(), 24);
        assert!(rectangle(0, 3).is_err());
        assert!(rectangle(2, -1).is_err());
    }

    #[test]
    fn holey_squares() {
        assert_eq!(holey_square(1, 2).unwrap().len(), 12);
        assert_eq!(holey_square(2, 5).unwrap().len(), 84);
        assert_eq!(holey_square(0, 3).unwrap(), rectangle(6, 6).unwrap());
        assert!(holey_square(2, 2).is_err());
        assert!(holey_square(-1, 2).is_err());
        assert_eq!(holey_square_odd(0, 1).unwrap().len(), 8);
        assert_eq!(holey_square_odd(1, 2).unwrap().len(), 16);
        assert!(holey_square_odd(3, 1).is_err());
        let odd = holey_square_odd(1, 2).unwrap();
        assert_eq!(odd.transform(Symmetry::ROTATE_90), odd);
    }

    #[test]
    fn holey_square_has_all_eight_symmetries() {
        for n in 1..=5 {
            for m in 0..n {
                let h = holey_square(m, n).unwrap();
                for g in Symmetry::all() {
                    assert!(h.transform(g).same_cells(&h), "m={m} n={n} g={g}");
                }
            }
        }
    }

    #[test]
    fn half_regions_partition_the_holey_square() {
        for n in 1..=5 {
            for m in 0..n {
                let full = holey_square(m, n).unwrap();
                let lower = half_region(m, n).unwrap();
                let side = 2 * n - 1;
                let upper: Region = lower
                    .cells()
                    .map(|c| Cell::new(side - c.x, side - c.y))
                    .collect();
                assert!(lower.is_disjoint(&upper), "m={m} n={n}");
                assert!(lower.union(&upper).same_cells(&full), "m={m} n={n}");
            }
        }
        assert_eq!(half_region(2, 5).unwrap().len(), 42);
        assert_eq!(half_region(1, 2).unwrap().len(), 6);
    }

    #[test]
    fn odd_half_regions_partition_the_odd_holey_square() {
        for n in 1..=5 {
            for m in 0..n {
                let full = holey_square_odd(m, n).unwrap();
                let lower = half_region_odd(m, n).unwrap();
                let side = 2 * n;
                let upper: Region = lower
                    .cells()
                    .map(|c| Cell::new(side - c.x, side - c.y))
                    .collect();
                assert!(lower.is_disjoint(&upper), "m={m} n={n}");
                assert!(lower.union(&upper).same_cells(&full), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn pruning_removes_an_adjacent_pair() {
        let half = half_region(2, 5).unwrap();
        let [a, b] = forced_domino(&half).unwrap();
        assert!(a.is_adjacent(b));
        assert_eq!(half_region_pruned(2, 5).unwrap().len(), 40);
        // Small case written out by hand: an L of six cells.
        let expected =
            Region::new([(0, 0), (0, 1), (0, 2), (1, 0), (2, 0), (3, 0)].map(Cell::from));
        assert!(half_region(1, 2).unwrap().same_cells(&expected));
    }

    #[test]
    fn staircase_regions() {
        assert_eq!(row_widths(&t_region(2, 5, 4).unwrap()), [5, 7, 9, 11, 11]);
        assert_eq!(
            row_widths(&d_region(2, 5, 4).unwrap()),
            [5, 7, 9, 11, 11, 9, 7, 5]
        );
        assert_eq!(t_region(3, 4, 1).unwrap(), rectangle(3, 4).unwrap());
        assert_eq!(d_region(3, 4, 1).unwrap(), rectangle(3, 4).unwrap());
        assert_eq!(t_region(1, 2, 1).unwrap().len(), 2);
        assert_eq!(d_region(2, 3, 2).unwrap().len(), 16);
        let d = d_region(2, 5, 4).unwrap();
        assert!(d.transform(Symmetry::FLIP_Y).same_cells(&d));
        // Rows stay centered: the top row of T(2,5,4) starts 3 cells in.
        let t = t_region(2, 5, 4).unwrap();
        assert_eq!(t.rows()[&4], vec![3, 4, 5, 6, 7]);
        assert!(t_region(0, 1, 1).is_err());
    }

    #[test]
    fn staircase_cell_counts_match_row_sums() {
        for i in 1..=4 {
            for j in 1..=6 {
                for p in 1..=4 {
                    let steps: i32 = (0..p - 1).map(|r| j + 2 * r).sum();
                    let full = i * (j + 2 * (p - 1));
                    assert_eq!(t_region(i, j, p).unwrap().len() as i32, steps + full);
                    assert_eq!(d_region(i, j, p).unwrap().len() as i32, 2 * steps + full);
                }
            }
        }
    }

    #[test]
    fn transforms_and_graph_primitives() {
        let r = rectangle(2, 3).unwrap();
        assert_eq!(r.transform(Symmetry::ROTATE_90), rectangle(3, 2).unwrap());
        assert!(r.transform(Symmetry::ROTATE_90).is_normalized());
        assert!(holey_square(1, 3).unwrap().is_connected());
        assert_eq!(
            rectangle(1, 2).unwrap().dual_adjacency(),
            vec![(Cell::new(0, 0), Cell::new(1, 0))]
        );
        let split = Region::new([Cell::new(0, 0), Cell::new(2, 0)]);
        assert_eq!(split.components().len(), 2);
        assert!(r.remove_cells(&[Cell::new(5, 5)]).is_err());
        let removed = r.remove_cells(&[Cell::new(0, 0)]).unwrap();
        assert_eq!(removed.len(), 5);
        assert!(!removed.is_normalized() || removed.contains(Cell::new(1, 0)));
    }

    #[test]
    fn equality_ignores_translation() {
        let a = rectangle(2, 2).unwrap();
        assert_eq!(a.translate((5, -3)), a);
        assert_ne!(a, rectangle(1, 4).unwrap());
        assert_eq!(Region::empty(), Region::empty());
    }

    #[test]
    fn tilings_and_dominoes() {
        assert!(Domino::new(Cell::new(0, 0), Cell::new(1, 1)).is_err());
        let d = Domino::new(Cell::new(1, 0), Cell::new(0, 0)).unwrap();
        assert!(d.is_horizontal());
        let t = Tiling::new(vec![d]);
        assert!(t.is_tiling_of(&rectangle(1, 2).unwrap()));
        assert!(!t.is_tiling_of(&rectangle(2, 2).unwrap()));
    }
}
