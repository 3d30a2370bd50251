//! Discrete chordal Loewner evolution.
//!
//! A [`DrivingPath`] is turned into a curve by composing elementary
//! vertical-slit maps, one per grid step. The same maps push marked points
//! forward ([`evolve_point`]), so the curve and the point flow always agree on
//! the discretisation.

mod driving;
mod hull;
pub(crate) mod slit;
mod trace;

pub use driving::{sample_driving, DrivingPath};
pub use hull::{semidisc_map, semidisc_support};
pub use trace::{
    centered_map, evolve_point, first_hits, hull_exit_time, hull_support, trace_curve, CurveTrace,
    Interval, MapState,
};
pub(crate) use trace::segment_distance;

/// A point counts as swallowed once `|Z - ΔU|² < 4·cap·(1 + SWALLOW_MARGIN)`.
pub const SWALLOW_MARGIN: f64 = 0.5;
