//! Mean curvature flow laboratory core.
//!
//! Evolves closed plane curves and rotationally symmetric hypersurfaces by
//! mean curvature flow and verifies, on discrete data, the differential
//! Harnack inequality with pinched-convexity correction terms, its
//! integrated spacetime form, and the monotonicity / diameter / pinching
//! diagnostics behind the shrinking-sphere characterization of ancient
//! solutions.
//!
//! Modules:
//! * [`frame`] — discrete geometry kernel (curvatures from samples),
//! * [`oracle`] — closed-form exact solutions used as ground truth,
//! * [`flow`] — explicit RK4 evolution with curvature- and grid-limited
//!   adaptive steps,
//! * [`harnack`] — Harnack quantity evaluation, its minimization in the
//!   tangent direction, path energies and the integrated bound,
//! * [`diagnostics`] — pinching ratios, diameter laws, sphere-condition
//!   reports, flatness profiles and blow-up rescaling,
//! * [`sampling`] — seeded generators for randomized checks.

pub mod diagnostics;
pub mod error;
pub mod fd;
pub mod fixtures;
pub mod flow;
pub mod frame;
pub mod harnack;
pub mod history;
pub mod oracle;
pub mod parallel;
pub mod sampling;
pub mod spline;
pub mod vec2;

pub use error::{Error, Result};
pub use frame::{
    build_curve_frame, build_open_curve_frame, build_rotational_frame, diameter,
    resample_arclength, FlowFrame, FramePoint, FrameRep, FrameStats, Topology,
};
pub use history::FlowHistory;
pub use vec2::Vec2;
