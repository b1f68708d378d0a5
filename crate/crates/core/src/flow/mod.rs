//! Proximal gradient curves of quasi-convex objectives.

pub mod objective;
pub mod probe;
pub mod resolvent;
pub mod run;

pub use objective::{builtin_objectives, objective_by_name, ConvexityClass, Domain, ObjectiveFn, ObjectiveKind};
pub use probe::{quasiconvexity_probe, ProbeReport};
pub use resolvent::{moreau_yosida, resolvent, ResolventResult, ResolventStatus, SolverConfig};
pub use run::{constant_schedule, discrete_gradient_curve, geodesic_interpolation, GradientCurveRun, RunStop};
