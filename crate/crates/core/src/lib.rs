//! Domino tilings of grid regions: exact counts, parity by strip
//! reduction at staircase corners, and the region families built on it.

pub mod corner;
pub mod corpus;
pub mod count;
pub mod error;
pub mod families;
pub mod grid;
pub mod reduce;
pub mod region;
pub mod report;
pub mod symmetry;
pub mod trace;

pub use corner::{
    find_corners, is_complete_up_to, is_walled_at, CornerFrame, Side, StCorner, Strip,
};
pub use count::{
    count_tilings, count_tilings_with, parity_tilings, parity_tilings_with, CountOptions, Parity,
    TilingCount,
};
pub use error::{Error, Result};
pub use grid::{emit_region, parse_region};
pub use reduce::{
    reduce_open, reduce_to_trace, reduce_wall, ReductionTrace, StepKind, Strategy, Term,
};
pub use region::{Cell, Domino, Region, Tiling};
pub use report::{CaseResult, Summary};
pub use symmetry::Symmetry;
pub use trace::{verify_record, verify_trace, TraceRecord, VerifyReport};
