use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::walker::StepRule;
use crate::error::{Error, Result};
use crate::math::{Kappa, PointConfig};

pub const DEFAULT_SAMPLES: u64 = 10_000;
pub const DEFAULT_DT: f64 = 2.5e-5;
pub const DEFAULT_REL_STEP: f64 = 0.3;
pub const DEFAULT_TRUNCATION: f64 = 20.0;

/// A Monte Carlo visit-probability experiment.
///
/// Each sample runs the curve until `t_max = (M·max|z_k|)² / 2`, which is
/// enough for the hull to leave the disc of radius `M·max|z_k|`. Steps are
/// adaptive (see [`rel_step`](Self::rel_step)) with `dt` as the smallest
/// capacity increment.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub kappa: Kappa,
    pub config: PointConfig,
    pub radii: Vec<f64>,
    pub n_samples: u64,
    pub dt: f64,
    /// Slit height of a step relative to `|Z_t(z)|` of the nearest pending point.
    pub rel_step: f64,
    pub truncation_factor: f64,
    pub master_seed: u64,
}

impl Scenario {
    /// A scenario with default sampling parameters; check with [`validate`](Self::validate).
    pub fn new(kappa: Kappa, points: &[Complex64], radii: &[f64]) -> Result<Self> {
        let s = Scenario {
            kappa,
            config: PointConfig::new(points)?,
            radii: radii.to_vec(),
            n_samples: DEFAULT_SAMPLES,
            dt: DEFAULT_DT,
            rel_step: DEFAULT_REL_STEP,
            truncation_factor: DEFAULT_TRUNCATION,
            master_seed: 0,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_samples(mut self, n: u64) -> Self {
        self.n_samples = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_rel_step(mut self, rel_step: f64) -> Self {
        self.rel_step = rel_step;
        self
    }

    pub fn with_truncation(mut self, m: f64) -> Self {
        self.truncation_factor = m;
        self
    }

    pub fn with_radii(mut self, radii: &[f64]) -> Self {
        self.radii = radii.to_vec();
        self
    }

    pub fn points(&self) -> &[Complex64] {
        self.config.points()
    }

    pub fn validate(&self) -> Result<()> {
        check_radii(&self.config, &self.radii)?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.rel_step > 0.0 && self.rel_step <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "rel_step must lie in (0, 1], got {}",
                self.rel_step
            )));
        }
        if !(self.truncation_factor.is_finite() && self.truncation_factor >= 2.0) {
            return Err(Error::Precondition(format!(
                "truncation factor must be at least 2, got {}",
                self.truncation_factor
            )));
        }
        if let Some(k) = self.points().iter().position(|z| !(z.im > 0.0)) {
            return Err(Error::BoundaryPoint(format!("point {k} is on the real line")));
        }
        Ok(())
    }

    pub fn horizon(&self) -> f64 {
        let rmax = self.points().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let m = self.truncation_factor * rmax;
        0.5 * m * m
    }

    pub(crate) fn step_rule(&self) -> StepRule {
        StepRule::adaptive(self.rel_step, self.dt)
    }

    /// `∏ r_k^{d-2}`.
    pub fn rescale_factor(&self, radii: &[f64]) -> f64 {
        let e = self.kappa.dim() - 2.0;
        radii.iter().map(|r| r.powf(e)).product()
    }
}

pub(crate) fn check_radii(cfg: &PointConfig, radii: &[f64]) -> Result<()> {
    if radii.len() != cfg.len() {
        return Err(Error::InvalidArgument(format!(
            "{} radii given for {} points",
            radii.len(),
            cfg.len()
        )));
    }
    for (k, (&r, &d)) in radii.iter().zip(cfg.dmin()).enumerate() {
        if !(r > 0.0 && r < d) {
            return Err(Error::Precondition(format!(
                "radius {k} must lie in (0, d_{k}) = (0, {d}), got {r}"
            )));
        }
    }
    Ok(())
}

/// A Monte Carlo estimate. `mean` is `None` when no samples were drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreenEstimate {
    pub mean: Option<f64>,
    pub stderr: Option<f64>,
    pub n_samples: u64,
    /// Hits for probabilities; samples with a nonzero weight for weighted estimates.
    pub n_hits: u64,
    pub truncation_factor: f64,
    /// Whether `∏ r_k^{d-2}` has been applied.
    pub rescaled: bool,
}

impl GreenEstimate {
    pub(crate) fn binomial(hits: u64, n: u64, truncation_factor: f64) -> Self {
        let (mean, stderr) = if n == 0 {
            (None, None)
        } else {
            let p = hits as f64 / n as f64;
            (Some(p), Some((p * (1.0 - p) / n as f64).sqrt()))
        };
        GreenEstimate { mean, stderr, n_samples: n, n_hits: hits, truncation_factor, rescaled: false }
    }

    pub(crate) fn rescale(mut self, factor: f64) -> Self {
        self.mean = self.mean.map(|m| m * factor);
        self.stderr = self.stderr.map(|s| s * factor);
        self.rescaled = true;
        self
    }

    /// The mean, or an error if it is undefined.
    pub fn value(&self) -> Result<f64> {
        self.mean
            .ok_or_else(|| Error::Precondition("estimate from zero samples has no mean".into()))
    }

    pub fn stderr_or_zero(&self) -> f64 {
        self.stderr.unwrap_or(0.0)
    }
}

/// Visit order of one sample. Only points that were hit appear, earliest
/// first; simultaneous hits are ordered by point index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderedHitRecord {
    pub permutation: Vec<usize>,
    pub hit_times: Vec<f64>,
    pub all_hit: bool,
}

impl OrderedHitRecord {
    pub(crate) fn from_hits(hits: &[Option<f64>]) -> Self {
        let mut seen: Vec<(f64, usize)> =
            hits.iter().enumerate().filter_map(|(k, t)| t.map(|t| (t, k))).collect();
        seen.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        OrderedHitRecord {
            permutation: seen.iter().map(|p| p.1).collect(),
            hit_times: seen.iter().map(|p| p.0).collect(),
            all_hit: seen.len() == hits.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Kappa {
        Kappa::new(8.0 / 3.0).unwrap()
    }

    #[test]
    fn radius_beyond_neighbour_distance_rejected() {
        let e = Scenario::new(k(), &[Complex64::new(0.0, 1.0)], &[10.0]).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)));
        assert!(Scenario::new(k(), &[Complex64::new(0.0, 1.0)], &[0.0]).is_err());
        assert!(Scenario::new(k(), &[Complex64::new(0.0, 1.0)], &[0.1, 0.1]).is_err());
    }

    #[test]
    fn truncation_below_two_rejected() {
        let s = Scenario::new(k(), &[Complex64::new(0.0, 1.0)], &[0.1]).unwrap().with_truncation(1.5);
        assert!(matches!(s.validate(), Err(Error::Precondition(_))));
    }

    #[test]
    fn horizon_uses_farthest_point() {
        let s = Scenario::new(k(), &[Complex64::new(0.0, 1.0), Complex64::new(0.0, 2.0)], &[0.1, 0.1]).unwrap();
        assert!((s.horizon() - 800.0).abs() < 1e-9);
    }

    #[test]
    fn empty_estimate_has_no_mean() {
        let e = GreenEstimate::binomial(0, 0, 20.0);
        assert_eq!(e.mean, None);
        assert!(e.value().is_err());
        let r = GreenEstimate::binomial(3, 10, 20.0).rescale(2.0);
        assert_eq!(r.mean, Some(0.6));
        assert!(r.rescaled);
    }

    #[test]
    fn visit_order_breaks_ties_by_index() {
        let rec = OrderedHitRecord::from_hits(&[Some(0.5), Some(0.2), Some(0.5)]);
        assert_eq!(rec.permutation, vec![1, 0, 2]);
        assert!(rec.all_hit);
        let rec = OrderedHitRecord::from_hits(&[None, Some(0.1)]);
        assert_eq!(rec.permutation, vec![1]);
        assert!(!rec.all_hit);
    }
}
