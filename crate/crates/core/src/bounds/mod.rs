//! Widths, directional decrease, and length bounds for self-contracted
//! curves.

pub mod audit;
pub mod decrease;
pub mod generate;
pub mod width;

pub use audit::{
    book_length_bound, euclidean_length_bound, generic_cat0_audit, generic_cat0_bound, tree_length_bound,
    unrectifiable_witness, BoundReport, AUDIT_TOLERANCE,
};
pub use decrease::{
    directional_decrease_check, perturb_direction, perturbed_basepoint_check, tail_cover_center, tail_directions,
    BasepointProbe,
};
pub use generate::{book_spine_jump_curve, random_self_contracted, spider_jump_curve, GenMode};
pub use width::{convex_hull, mean_width, projection_extent, WidthConfig, WidthMethod, WidthReport, WidthTarget};
