//! The dihedral group of the square acting on cell coordinates and offsets.

use std::fmt;

/// One of the eight symmetries of the square, stored as an integer 2x2
/// matrix `[[a, b], [c, d]]` acting on column vectors `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symmetry(u8);

const MATRICES: [[i32; 4]; 8] = [
    [1, 0, 0, 1],   // identity
    [0, -1, 1, 0],  // rotate 90 counterclockwise
    [-1, 0, 0, -1], // rotate 180
    [0, 1, -1, 0],  // rotate 270
    [-1, 0, 0, 1],  // reflect across the vertical axis
    [0, 1, 1, 0],   // reflect across y = x
    [1, 0, 0, -1],  // reflect across the horizontal axis
    [0, -1, -1, 0], // reflect across y = -x
];

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry(0);
    pub const ROTATE_90: Symmetry = Symmetry(1);
    pub const ROTATE_180: Symmetry = Symmetry(2);
    pub const ROTATE_270: Symmetry = Symmetry(3);
    pub const FLIP_X: Symmetry = Symmetry(4);
    pub const TRANSPOSE: Symmetry = Symmetry(5);
    pub const FLIP_Y: Symmetry = Symmetry(6);
    pub const ANTI_TRANSPOSE: Symmetry = Symmetry(7);

    pub fn all() -> impl Iterator<Item = Symmetry> {
        (0..8).map(Symmetry)
    }

    pub fn from_index(index: u8) -> Option<Symmetry> {
        (index < 8).then_some(Symmetry(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    fn matrix(self) -> [i32; 4] {
        MATRICES[self.0 as usize]
    }

    /// Apply to an offset (a difference of cell coordinates).
    pub fn apply(self, (x, y): (i32, i32)) -> (i32, i32) {
        let [a, b, c, d] = self.matrix();
        (a * x + b * y, c * x + d * y)
    }

    /// Apply to a unit cell about the origin, mapping the square
    /// `[x, x+1] x [y, y+1]` to its image square.
    pub fn apply_cell(self, (x, y): (i32, i32)) -> (i32, i32) {
        let (u, v) = self.apply((2 * x + 1, 2 * y + 1));
        ((u - 1) / 2, (v - 1) / 2)
    }

    pub fn compose(self, then: Symmetry) -> Symmetry {
        let [a1, b1, c1, d1] = self.matrix();
        let [a2, b2, c2, d2] = then.matrix();
        let m = [
            a2 * a1 + b2 * c1,
            a2 * b1 + b2 * d1,
            c2 * a1 + d2 * c1,
            c2 * b1 + d2 * d1,
        ];
        Symmetry::from_matrix(m)
    }

    pub fn inverse(self) -> Symmetry {
        Symmetry::all()
            .find(|g| self.compose(*g) == Symmetry::IDENTITY)
            .expect("group element has an inverse")
    }

    /// The symmetry sending `(1, 0)` to `x_axis` and `(0, 1)` to `y_axis`.
    /// Both arguments must be distinct non-opposite unit axis vectors.
    pub fn from_axes(x_axis: (i32, i32), y_axis: (i32, i32)) -> Option<Symmetry> {
        Symmetry::all().find(|g| g.apply((1, 0)) == x_axis && g.apply((0, 1)) == y_axis)
    }

    fn from_matrix(m: [i32; 4]) -> Symmetry {
        let index = MATRICES
            .iter()
            .position(|candidate| *candidate == m)
            .expect("closed under composition");
        Symmetry(index as u8)
    }

    pub fn name(self) -> &'static str {
        match self.0 {
            0 => "identity",
            1 => "rotate90",
            2 => "rotate180",
            3 => "rotate270",
            4 => "flip-x",
            5 => "transpose",
            6 => "flip-y",
            _ => "anti-transpose",
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
