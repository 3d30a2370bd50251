//! Chordal SLE simulation and Green's-function estimation.
//!
//! - [`math`]: exponents, the kernel `P_y`, comparison functions `F` and the
//!   one-point Green's function `G`.
//! - [`loewner`]: driving paths, slit-map curve tracing and point flows.
//! - [`estimator`]: Monte Carlo visit probabilities, rescaled Green's
//!   functions, martingale and importance-sampling estimators.
//! - [`lab`]: experiment configs, result tables and SVG rendering.

pub mod error;
pub mod estimator;
pub mod lab;
pub mod loewner;
pub mod math;
pub mod rng;

pub use error::{Error, Result};
pub use num_complex::Complex64;
