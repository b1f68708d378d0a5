//! Self-contracted curves in CAT(0) model spaces: geometry, proximal
//! gradient curves, verification of self-contraction and length-bound audits.

// Negated float comparisons reject NaN on purpose.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::too_many_arguments
)]

pub mod bounds;
pub mod curve;
pub mod error;
pub mod flow;
pub mod four_point;
pub mod io;
pub mod metric;
pub mod quad;
pub mod spaces;
pub mod verify;

pub use curve::{curve_length, Curve, Mode, Sample};
pub use error::{Error, Result};
pub use spaces::{Point, Space, SpaceKind};
