//! Exact tiling counts.
//!
//! [`count_tilings`] and [`parity_tilings`] run the same broken-profile
//! dynamic program, accumulating either big integers or bits. The two
//! oracles, [`enumerate_tilings`] and [`count_via_matching`], share no code
//! with it and exist to check it.

use std::collections::HashMap;
use std::fmt;
use std::ops::BitXor;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::region::{Cell, Domino, Region, Tiling};

/// Default limit on the profile width of the counting DP.
pub const DEFAULT_W_MAX: usize = 20;
/// Hard limit on masks held in a `u32`.
const MASK_BITS: usize = 32;
pub const ENUMERATION_MAX_CELLS: usize = 28;
pub const MATCHING_MAX_CELLS: usize = 36;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TilingCount(BigUint);

impl TilingCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn parity(&self) -> Parity {
        Parity::from(self.0.is_odd())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl From<u64> for TilingCount {
    fn from(v: u64) -> Self {
        TilingCount(BigUint::from(v))
    }
}

impl From<BigUint> for TilingCount {
    fn from(v: BigUint) -> Self {
        TilingCount(v)
    }
}

impl fmt::Display for TilingCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Option<Parity> {
        match bit {
            0 => Some(Parity::Even),
            1 => Some(Parity::Odd),
            _ => None,
        }
    }
}

impl From<bool> for Parity {
    fn from(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl BitXor for Parity {
    type Output = Parity;
    fn bitxor(self, rhs: Parity) -> Parity {
        Parity::from(self != rhs)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    pub w_max: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            w_max: DEFAULT_W_MAX,
        }
    }
}

/// Values the profile DP can accumulate.
trait Weight: Clone {
    fn none() -> Self;
    fn unit() -> Self;
    fn accumulate(&mut self, other: &Self);
    fn vanishes(&self) -> bool;
    fn product(self, other: Self) -> Self;
}

impl Weight for BigUint {
    fn none() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn accumulate(&mut self, other: &Self) {
        *self += other;
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn product(self, other: Self) -> Self {
        self * other
    }
}

/// An element of GF(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Gf2(bool);

impl Weight for Gf2 {
    fn none() -> Self {
        Gf2(false)
    }
    fn unit() -> Self {
        Gf2(true)
    }
    fn accumulate(&mut self, other: &Self) {
        self.0 ^= other.0;
    }
    fn vanishes(&self) -> bool {
        !self.0
    }
    fn product(self, other: Self) -> Self {
        Gf2(self.0 && other.0)
    }
}

/// Row masks of a connected region, laid out so the profile runs along the
/// narrower axis. Bit `x` of `rows[y]` is set when the cell is present.
struct Board {
    width: usize,
    rows: Vec<u32>,
}

impl Board {
    fn new(region: &Region, w_max: usize) -> Result<Board> {
        let Some((lo, _)) = region.bounds() else {
            return Ok(Board {
                width: 0,
                rows: Vec::new(),
            });
        };
        let (cols, rows) = region.dimensions();
        let transpose = cols > rows;
        let (width, height) = if transpose {
            (rows, cols)
        } else {
            (cols, rows)
        };
        let limit = w_max.min(MASK_BITS);
        if width > limit {
            return Err(Error::ResourceLimit(format!(
                "profile width {width} exceeds the limit of {limit}"
            )));
        }
        let mut masks = vec![0u32; height];
        for c in region.cells() {
            let (u, v) = ((c.x - lo.x) as usize, (c.y - lo.y) as usize);
            let (x, y) = if transpose { (v, u) } else { (u, v) };
            masks[y] |= 1 << x;
        }
        Ok(Board { width, rows: masks })
    }

    fn present(&self, x: usize, y: usize) -> bool {
        y < self.rows.len() && x < self.width && self.rows[y] & (1 << x) != 0
    }

    /// Broken-profile DP. Bit `x` of a state means the cell at column `x` in
    /// the current scan position is already covered by a domino placed from
    /// an earlier cell.
    fn run<W: Weight>(&self) -> W {
        let mut states: HashMap<u32, W> = HashMap::from([(0, W::unit())]);
        for y in 0..self.rows.len() {
            for x in 0..self.width {
                let bit = 1u32 << x;
                let mut next: HashMap<u32, W> = HashMap::with_capacity(states.len() * 2);
                let mut push = |mask: u32, w: &W| {
                    next.entry(mask)
                        .and_modify(|acc| acc.accumulate(w))
                        .or_insert_with(|| w.clone());
                };
                for (&mask, w) in &states {
                    if !self.present(x, y) || mask & bit != 0 {
                        push(mask & !bit, w);
                        continue;
                    }
                    if self.present(x, y + 1) {
                        push(mask | bit, w);
                    }
                    if self.present(x + 1, y) && mask & (bit << 1) == 0 {
                        push(mask | (bit << 1), w);
                    }
                }
                next.retain(|_, w| !w.vanishes());
                states = next;
            }
        }
        states.remove(&0).unwrap_or_else(W::none)
    }
}

fn count_generic<W: Weight>(region: &Region, opts: &CountOptions) -> Result<W> {
    if region.len() % 2 == 1 || region.color_imbalance() != 0 {
        // Still enforce the width guard so callers see a consistent contract.
        for comp in region.components() {
            Board::new(&comp, opts.w_max)?;
        }
        return Ok(W::none());
    }
    let boards = region
        .components()
        .iter()
        .map(|comp| Board::new(comp, opts.w_max))
        .collect::<Result<Vec<_>>>()?;
    let mut total = W::unit();
    for board in boards {
        let w: W = board.run();
        if w.vanishes() {
            return Ok(W::none());
        }
        total = total.product(w);
    }
    Ok(total)
}

/// Exact number of domino tilings.
pub fn count_tilings(region: &Region) -> Result<TilingCount> {
    count_tilings_with(region, &CountOptions::default())
}

pub fn count_tilings_with(region: &Region, opts: &CountOptions) -> Result<TilingCount> {
    count_generic::<BigUint>(region, opts).map(TilingCount)
}

/// Parity of the number of tilings, computed over GF(2).
pub fn parity_tilings(region: &Region) -> Result<Parity> {
    parity_tilings_with(region, &CountOptions::default())
}

pub fn parity_tilings_with(region: &Region, opts: &CountOptions) -> Result<Parity> {
    count_generic::<Gf2>(region, opts).map(|g| Parity::from(g.0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub tilings: Vec<Tiling>,
    /// More than `cap` tilings exist; only the first `cap` were kept.
    pub truncated: bool,
}

/// List the tilings of a small region by backtracking, covering the
/// smallest uncovered cell first.
pub fn enumerate_tilings(region: &Region, cap: usize) -> Result<Enumeration> {
    if region.len() > ENUMERATION_MAX_CELLS {
        return Err(Error::ResourceLimit(format!(
            "enumeration is limited to {ENUMERATION_MAX_CELLS} cells, region has {}",
            region.len()
        )));
    }
    if cap == 0 {
        return Err(Error::invalid("enumeration cap must be positive"));
    }
    let mut out = Enumeration {
        tilings: Vec::new(),
        truncated: false,
    };
    let mut uncovered = region.cell_set().clone();
    let mut placed = Vec::new();
    backtrack(&mut uncovered, &mut placed, cap, &mut out);
    Ok(out)
}

fn backtrack(
    uncovered: &mut std::collections::BTreeSet<Cell>,
    placed: &mut Vec<Domino>,
    cap: usize,
    out: &mut Enumeration,
) {
    if out.truncated {
        return;
    }
    let Some(&cell) = uncovered.first() else {
        if out.tilings.len() == cap {
            out.truncated = true;
        } else {
            out.tilings.push(Tiling::new(placed.clone()));
        }
        return;
    };
    uncovered.remove(&cell);
    for partner in [cell.offset((1, 0)), cell.offset((0, 1))] {
        if uncovered.remove(&partner) {
            placed.push(Domino::new(cell, partner).expect("neighbors are adjacent"));
            backtrack(uncovered, placed, cap, out);
            placed.pop();
            uncovered.insert(partner);
        }
    }
    uncovered.insert(cell);
}

/// Count perfect matchings of the dual graph by recursion on the set of
/// uncovered cells, memoized on that set.
pub fn count_via_matching(region: &Region) -> Result<TilingCount> {
    let n = region.len();
    if n > MATCHING_MAX_CELLS {
        return Err(Error::ResourceLimit(format!(
            "matching oracle is limited to {MATCHING_MAX_CELLS} cells, region has {n}"
        )));
    }
    let cells: Vec<Cell> = region.cells().collect();
    let index: HashMap<Cell, usize> = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let neighbors: Vec<u64> = cells
        .iter()
        .map(|c| {
            c.neighbors()
                .iter()
                .filter_map(|nb| index.get(nb))
                .fold(0u64, |acc, &j| acc | (1 << j))
        })
        .collect();
    let full = (1u64 << n) - 1;
    let mut memo = HashMap::new();
    Ok(TilingCount(matchings(full, &neighbors, &mut memo)))
}

fn matchings(remaining: u64, neighbors: &[u64], memo: &mut HashMap<u64, BigUint>) -> BigUint {
    if remaining == 0 {
        return BigUint::one();
    }
    if let Some(v) = memo.get(&remaining) {
        return v.clone();
    }
    let i = remaining.trailing_zeros() as usize;
    let rest = remaining & !(1 << i);
    let mut total = BigUint::zero();
    let mut partners = neighbors[i] & rest;
    while partners != 0 {
        let j = partners.trailing_zeros();
        partners &= partners - 1;
        total += matchings(rest & !(1 << j), neighbors, memo);
    }
    memo.insert(remaining, total.clone());
    total
}
