use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::Kappa;

/// A sampled driving function on a time grid.
///
/// `u[i]` is the driving value at `times[i]` relative to `origin`, so
/// `u[0] = 0` and `U(times[i]) = origin + u[i]`. Grids built by
/// [`sample_driving`] are uniform with spacing `dt`; the Monte Carlo walker
/// produces non-uniform grids, for which `dt` records the finest step allowed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrivingPath {
    pub(crate) kappa: Kappa,
    pub(crate) seed: u64,
    pub(crate) dt: f64,
    pub(crate) origin: f64,
    pub(crate) times: Vec<f64>,
    pub(crate) u: Vec<f64>,
}

impl DrivingPath {
    /// Builds a path from an explicit grid. `times` must start at 0 and
    /// increase strictly; `u` must start at 0 and have the same length.
    pub fn from_grid(kappa: Kappa, seed: u64, dt: f64, times: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if times.is_empty() || times.len() != u.len() {
            return Err(Error::InvalidArgument(format!(
                "grid has {} times and {} driving values",
                times.len(),
                u.len()
            )));
        }
        if times[0] != 0.0 || u[0] != 0.0 {
            return Err(Error::InvalidArgument("grid must start at t = 0 with U = 0".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument("grid times must increase strictly".into()));
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("driving values must be finite".into()));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        Ok(DrivingPath { kappa, seed, dt, origin: 0.0, times, u })
    }

    /// Uniform grid with the driving function given by `f` (which must vanish at 0).
    pub fn from_fn(kappa: Kappa, t_max: f64, dt: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let n = step_count(t_max, dt)?;
        let times: Vec<f64> = (0..=n).map(|i| i as f64 * dt).collect();
        let u = times.iter().map(|&t| f(t)).collect();
        DrivingPath::from_grid(kappa, 0, dt, times, u)
    }

    /// The same path with the whole driving function raised by `c`. The hull
    /// is translated by `c`; no map parameter changes.
    pub fn shifted(&self, c: f64) -> Self {
        DrivingPath { origin: self.origin + c, ..self.clone() }
    }

    pub fn kappa(&self) -> &Kappa {
        &self.kappa
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Driving values relative to `origin`.
    pub fn increments_base(&self) -> &[f64] {
        &self.u
    }

    /// Absolute driving value at grid index `i`.
    pub fn value(&self, i: usize) -> f64 {
        self.origin + self.u[i]
    }

    pub fn n_steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn duration(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Capacity increment (time length) of step `i`.
    #[inline]
    pub(crate) fn cap(&self, i: usize) -> f64 {
        self.times[i + 1] - self.times[i]
    }

    /// Driving increment of step `i`.
    #[inline]
    pub(crate) fn du(&self, i: usize) -> f64 {
        self.u[i + 1] - self.u[i]
    }

    /// Number of whole steps completed by time `t`.
    pub fn steps_until(&self, t: f64) -> usize {
        let tol = 1e-9 * self.dt.min(1.0);
        self.times.partition_point(|&s| s <= t + tol).saturating_sub(1)
    }
}

fn step_count(t_max: f64, dt: f64) -> Result<usize> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::InvalidArgument(format!("t_max must be positive, got {t_max}")));
    }
    if dt > t_max {
        return Err(Error::InvalidArgument(format!("dt = {dt} exceeds t_max = {t_max}")));
    }
    // ceil, ignoring the last-ulp noise in t_max / dt
    let ratio = t_max / dt;
    let n = if (ratio - ratio.round()).abs() < 1e-9 * ratio { ratio.round() } else { ratio.ceil() };
    Ok(n as usize)
}

/// Samples `U_t = sqrt(κ) B_t` on a uniform grid of `ceil(t_max/dt)` steps.
pub fn sample_driving(kappa: Kappa, t_max: f64, dt: f64, seed: u64) -> Result<DrivingPath> {
    let n = step_count(t_max, dt)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sd = (kappa.kappa() * dt).sqrt();
    let mut u = Vec::with_capacity(n + 1);
    u.push(0.0);
    let mut cur = 0.0;
    for _ in 0..n {
        let xi: f64 = StandardNormal.sample(&mut rng);
        cur += sd * xi;
        u.push(cur);
    }
    let times = (0..=n).map(|i| i as f64 * dt).collect();
    Ok(DrivingPath { kappa, seed, dt, origin: 0.0, times, u })
}
