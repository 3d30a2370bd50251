use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::slit::{near_slit, slit_forward, slit_inverse};
use super::DrivingPath;
use crate::error::{Error, Result};

/// A traced curve: the driving path plus the tip `γ(t_i)` after every step.
///
/// Tip `i` is `g_{t_i}^{-1}(U_{t_i})`, obtained by pushing 0 back through the
/// inverse slit maps of steps `i-1, ..., 0`. Computing every tip therefore
/// costs `O(N²)` map evaluations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTrace {
    pub(crate) driving: DrivingPath,
    pub(crate) tips: Vec<Complex64>,
}

/// Image of a point under `g_t`, or the state frozen at the step where the
/// point came within the slit scale of the driving value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapState {
    pub time: f64,
    /// `g_t(z)`.
    pub g: Complex64,
    /// `g_t'(z)`.
    pub gprime: Complex64,
    pub swallowed: bool,
    pub swallow_time: Option<f64>,
}

/// A closed real interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Pushes `zeta` (centered coordinates at time `times[end]`) back to the
/// original plane, i.e. applies the inverse maps of steps `end-1, ..., 0`.
pub(crate) fn pull_back(path: &DrivingPath, mut zeta: Complex64, end: usize) -> Complex64 {
    for i in (0..end).rev() {
        zeta = slit_inverse(zeta, path.cap(i)) + path.du(i);
    }
    zeta + path.origin
}

/// Centered image after `steps` steps.
pub(crate) struct Flow {
    pub w: Complex64,
    pub gprime: Complex64,
    /// Step index at which the point was caught by the slit.
    pub swallowed_at: Option<usize>,
}

pub(crate) fn flow_point(path: &DrivingPath, z: Complex64, steps: usize) -> Flow {
    let mut w = z - path.origin;
    let mut gprime = Complex64::new(1.0, 0.0);
    if w == Complex64::new(0.0, 0.0) {
        return Flow { w, gprime, swallowed_at: Some(0) };
    }
    for i in 0..steps {
        let cap = path.cap(i);
        let shifted = w - path.du(i);
        if near_slit(shifted, cap) {
            return Flow { w, gprime, swallowed_at: Some(i) };
        }
        let next = slit_forward(shifted, cap);
        gprime *= shifted / next;
        w = next;
    }
    Flow { w, gprime, swallowed_at: None }
}

pub(crate) fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let s = s.clamp(0.0, 1.0);
    (p - (a + ab * s)).norm()
}

/// Traces the curve generated by `path`.
pub fn trace_curve(path: &DrivingPath) -> CurveTrace {
    let n = path.n_steps();
    let mut tips = Vec::with_capacity(n + 1);
    tips.push(Complex64::new(path.origin, 0.0));
    for j in 1..=n {
        tips.push(pull_back(path, Complex64::new(0.0, 0.0), j));
    }
    CurveTrace { driving: path.clone(), tips }
}

fn check_time(path: &DrivingPath, t: f64) -> Result<()> {
    if !(t >= 0.0) || t > path.duration() * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "time {t} outside [0, {}]",
            path.duration()
        )));
    }
    Ok(())
}

/// `g_t(z)` and `g_t'(z)` along the same steps that trace the curve.
pub fn evolve_point(path: &DrivingPath, z: Complex64, t: f64) -> Result<MapState> {
    check_time(path, t)?;
    if !(z.im >= 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("{z} is not in the closed upper half-plane")));
    }
    let steps = path.steps_until(t);
    let flow = flow_point(path, z, steps);
    let at = flow.swallowed_at.unwrap_or(steps);
    Ok(MapState {
        time: path.times[at],
        g: flow.w + path.value(at),
        gprime: flow.gprime,
        swallowed: flow.swallowed_at.is_some(),
        swallow_time: flow.swallowed_at.map(|i| path.times[i]),
    })
}

/// `Z_t(z) = g_t(z) - U_t`. Fails if `z` has been swallowed by time `t`.
pub fn centered_map(path: &DrivingPath, z: Complex64, t: f64) -> Result<Complex64> {
    let st = evolve_point(path, z, t)?;
    if let Some(s) = st.swallow_time {
        return Err(Error::Domain(format!("{z} swallowed at t = {s}")));
    }
    Ok(st.g - path.value(path.steps_until(t)))
}

impl CurveTrace {
    pub fn driving(&self) -> &DrivingPath {
        &self.driving
    }

    pub fn tips(&self) -> &[Complex64] {
        &self.tips
    }

    pub fn times(&self) -> &[f64] {
        &self.driving.times
    }

    pub fn duration(&self) -> f64 {
        self.driving.duration()
    }

    /// The tip at the last grid time not after `t`.
    pub fn tip_at(&self, t: f64) -> Complex64 {
        self.tips[self.driving.steps_until(t)]
    }

    /// `max |γ(s) - γ(0)|` over grid times `s <= t`.
    pub fn hull_radius(&self, t: f64) -> f64 {
        let n = self.driving.steps_until(t);
        let o = self.tips[0];
        self.tips[..=n].iter().map(|p| (p - o).norm()).fold(0.0, f64::max)
    }

    /// The trace with the driving function raised by `c`: tips move by `c`.
    pub fn shifted(&self, c: f64) -> CurveTrace {
        CurveTrace {
            driving: self.driving.shifted(c),
            tips: self.tips.iter().map(|p| p + c).collect(),
        }
    }

    pub fn evolve_point(&self, z: Complex64, t: f64) -> Result<MapState> {
        evolve_point(&self.driving, z, t)
    }

    /// Real part of `iY (g_t(iY) - iY)` at `z = γ(0) + iY`; tends to
    /// `hcap(K_t) = 2t` as `Y → ∞` with relative error `O((rad/Y)²)`.
    pub fn fitted_capacity(&self, t: f64, y_far: f64) -> Result<f64> {
        let z = self.tips[0] + Complex64::new(0.0, y_far);
        let st = self.evolve_point(z, t)?;
        Ok(((st.g - z) * Complex64::new(0.0, y_far)).re)
    }
}

/// First grid time at which the tip leaves the disc `|z| <= rho`.
pub fn hull_exit_time(trace: &CurveTrace, rho: f64) -> Result<Option<f64>> {
    if !(rho > 0.0) {
        return Err(Error::InvalidArgument(format!("rho must be positive, got {rho}")));
    }
    Ok(trace
        .tips
        .iter()
        .position(|p| p.norm() > rho)
        .map(|i| trace.driving.times[i]))
}

/// The interval `S_{K_t}` onto which `g_t` sends the hull.
///
/// Tracked exactly through the steps: the new slit at the driving value
/// covers `[U - 2 sqrt(cap), U + 2 sqrt(cap)]`, and the old endpoints move
/// as real points under the slit map.
pub fn hull_support(trace: &CurveTrace, t: f64) -> Result<Interval> {
    let path = &trace.driving;
    check_time(path, t)?;
    let n = path.steps_until(t);
    // endpoints relative to the current driving value
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for i in 0..n {
        let cap = path.cap(i);
        let du = path.du(i);
        let (l, h) = (lo - du, hi - du);
        let half = 2.0 * cap.sqrt();
        lo = if l < 0.0 { -(l * l + 4.0 * cap).sqrt() } else { -half };
        hi = if h > 0.0 { (h * h + 4.0 * cap).sqrt() } else { half };
    }
    let u = path.value(n);
    Ok(Interval { lo: lo + u, hi: hi + u })
}

/// For each target, the first grid time at which the polyline through the
/// tips comes within the matching radius, or `None`.
pub fn first_hits(trace: &CurveTrace, targets: &[Complex64], radii: &[f64]) -> Result<Vec<Option<f64>>> {
    if targets.len() != radii.len() {
        return Err(Error::InvalidArgument(format!(
            "{} targets but {} radii",
            targets.len(),
            radii.len()
        )));
    }
    if let Some(r) = radii.iter().find(|r| !(**r > 0.0)) {
        return Err(Error::InvalidArgument(format!("radii must be positive, got {r}")));
    }
    let times = &trace.driving.times;
    Ok(targets
        .iter()
        .zip(radii)
        .map(|(&z, &r)| {
            if (trace.tips[0] - z).norm() <= r {
                return Some(times[0]);
            }
            trace
                .tips
                .windows(2)
                .position(|w| segment_distance(z, w[0], w[1]) <= r)
                .map(|i| times[i + 1])
        })
        .collect())
}
