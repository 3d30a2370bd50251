//! Monte Carlo estimation of visit probabilities and Green's functions.
//!
//! Sample `i` of every routine draws from its own random stream
//! ([`crate::rng::sample_rng`]), and partial results are merged in sample
//! order, so outputs are bit-identical for any number of worker threads.
//! Use [`with_workers`] to choose that number.

mod par;
mod scenario;
mod visit;
pub(crate) mod walker;
mod weight;

pub use par::{with_workers, CHUNK};
pub use scenario::{
    GreenEstimate, OrderedHitRecord, Scenario, DEFAULT_DT, DEFAULT_REL_STEP, DEFAULT_SAMPLES,
    DEFAULT_TRUNCATION,
};
pub use visit::{
    bound_ratio, calibrate_c_hat, convergence_sweep, estimate_visit_prob, hit_records, rescaled_green,
    sample_record, scaling_check, visit_sweep, BoundRatio, CHatEstimate, VisitEstimate,
};
pub use walker::NEAR_FACTOR;
pub use weight::{ghat_two_point, martingale_test, rn_weight, MartingaleRatio, MARTINGALE_GUARD};
