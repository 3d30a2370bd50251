//! Martingale observables of the one-point Green's function.
//!
//! For an interior point `z`, `M_t = |g_t'(z)|^{2-d} G(Z_t(z))` is a local
//! martingale until `z` is swallowed or reached. Normalised by `M_0 = G(z)`
//! it is the density that tilts the curve towards `z`. Every ratio here is
//! computed from the `ĉ`-free shape of `G`, so `ĉ` cancels exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::par::{chunked, mean_stderr};
use super::scenario::{GreenEstimate, DEFAULT_REL_STEP, DEFAULT_TRUNCATION};
use super::walker::{StepRule, Walker};
use crate::error::{Error, Result};
use crate::loewner::{evolve_point, first_hits, trace_curve, DrivingPath};
use crate::math::{check_c_hat, green_one_point, ln_green_shape, Kappa};
use crate::rng::sample_rng;

/// Stop radius of the martingale test, relative to `Im z`.
pub const MARTINGALE_GUARD: f64 = 0.1;

fn check_interior(name: &str, z: Complex64) -> Result<()> {
    if !(z.im > 0.0 && z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Precondition(format!("{name} must be an interior point, got {z}")));
    }
    Ok(())
}

/// `ln(M_t / M_0)` from the centered image and `ln |g_t'(z)|`.
#[inline]
fn ln_weight(k: &Kappa, z: Complex64, w: Complex64, ln_dg: f64) -> f64 {
    k.interior_exponent() * ln_dg + ln_green_shape(k, w) - ln_green_shape(k, z)
}

/// `M_τ / G(z)` along a fixed path, with `τ` the first time the curve comes
/// within `stop_radius` of `z`. Zero if that never happens on the path or if
/// `z` is swallowed first.
pub fn rn_weight(path: &DrivingPath, z: Complex64, stop_radius: f64, k: &Kappa, c_hat: f64) -> Result<f64> {
    check_c_hat(c_hat)?;
    check_interior("z", z)?;
    if !(stop_radius > 0.0 && stop_radius < z.norm()) {
        return Err(Error::Precondition(format!(
            "stop radius must lie in (0, |z|) = (0, {}), got {stop_radius}",
            z.norm()
        )));
    }
    let trace = trace_curve(path);
    let Some(tau) = first_hits(&trace, &[z], &[stop_radius])?[0] else {
        return Ok(0.0);
    };
    let st = evolve_point(path, z, tau)?;
    if st.swallowed {
        return Ok(0.0);
    }
    let w = st.g - path.value(path.steps_until(tau));
    Ok(ln_weight(k, z, w, st.gprime.norm().ln()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MartingaleRatio {
    pub t: f64,
    /// `Ê[M_{t∧τ}] / M_0`.
    pub ratio: f64,
    pub stderr: f64,
}

/// `Ê[M_{t∧τ}] / M_0` at each requested time, where `τ` is the first time the
/// curve comes within `0.1 Im z` of `z`. Uses uniform steps of `dt`. A point
/// swallowed before `t∧τ` contributes 0.
pub fn martingale_test(
    k: &Kappa,
    c_hat: f64,
    z: Complex64,
    times: &[f64],
    n: u64,
    dt: f64,
    seed: u64,
) -> Result<Vec<MartingaleRatio>> {
    check_c_hat(c_hat)?;
    check_interior("z", z)?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::InvalidArgument("times must be finite and >= 0".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("martingale test needs at least one sample".into()));
    }
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
    let horizon = times.iter().copied().fold(0.0, f64::max);
    let guard = MARTINGALE_GUARD * z.im;
    let m = times.len();

    let parts = chunked(
        n,
        || (vec![0.0; m], vec![0.0; m]),
        |(sum, sum_sq), i| {
            let mut w = Walker::new(*k, StepRule::uniform(dt), horizon, sample_rng(seed, i));
            w.track(z, false, Some((guard, guard)));
            let mut frozen: Option<f64> = None;
            for &j in &order {
                while frozen.is_none() && w.time() < times[j].min(horizon) {
                    w.step_toward(times[j]);
                    let p = w.point(0);
                    if !p.alive() {
                        frozen = Some(0.0);
                    } else if p.hit_time(guard).is_some() {
                        frozen = Some(ln_weight(k, z, p.w, p.ln_dg).exp());
                    }
                }
                let v = frozen.unwrap_or_else(|| {
                    let p = w.point(0);
                    ln_weight(k, z, p.w, p.ln_dg).exp()
                });
                sum[j] += v;
                sum_sq[j] += v * v;
            }
        },
    );
    let (mut sum, mut sum_sq) = (vec![0.0; m], vec![0.0; m]);
    for (s, q) in parts {
        for j in 0..m {
            sum[j] += s[j];
            sum_sq[j] += q[j];
        }
    }
    Ok((0..m)
        .map(|j| {
            let (ratio, stderr) = mean_stderr(sum[j], sum_sq[j], n).expect("n > 0");
            MartingaleRatio { t: times[j], ratio, stderr }
        })
        .collect())
}

/// Importance-sampled two-point Green's function
/// `Ĝ(z₁, z₂) = G(z₁) E[(M_τ/M_0) · |g_τ'(z₂)|^{2-d} G(Z_τ(z₂))]`, where `τ`
/// is the first time the curve comes within `rho1` of `z₁`. The weight
/// `M_τ/M_0` turns ordinary samples into samples of the curve conditioned
/// to pass through `z₁`. Samples that never reach `z₁`, or that swallow
/// `z₂` first, contribute 0.
#[allow(clippy::too_many_arguments)]
pub fn ghat_two_point(
    k: &Kappa,
    c_hat: f64,
    z1: Complex64,
    z2: Complex64,
    rho1: f64,
    n: u64,
    dt: f64,
    seed: u64,
) -> Result<GreenEstimate> {
    check_c_hat(c_hat)?;
    check_interior("z1", z1)?;
    check_interior("z2", z2)?;
    if z1 == z2 {
        return Err(Error::Precondition("z1 and z2 coincide".into()));
    }
    let limit = (z1 - z2).norm().min(z1.norm());
    if !(rho1 > 0.0 && rho1 < limit) {
        return Err(Error::Precondition(format!("rho1 must lie in (0, {limit}), got {rho1}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let g1 = green_one_point(k, c_hat, z1)?.value;
    let rmax = z1.norm().max(z2.norm()) * DEFAULT_TRUNCATION;
    let horizon = 0.5 * rmax * rmax;
    let rule = StepRule::adaptive(DEFAULT_REL_STEP, dt);

    let parts = chunked(
        n,
        || (0.0, 0.0, 0u64),
        |(sum, sum_sq, nz), i| {
            let mut w = Walker::new(*k, rule, horizon, sample_rng(seed, i));
            w.track(z1, true, Some((rho1, rho1)));
            w.track(z2, true, None);
            while w.time() < horizon && w.point(0).alive() && w.point(0).hit_time(rho1).is_none() {
                w.step_toward(horizon);
            }
            let (p1, p2) = (w.point(0), w.point(1));
            if p1.alive() && p1.hit_time(rho1).is_some() && p2.alive() {
                let ln_term = ln_weight(k, z1, p1.w, p1.ln_dg)
                    + k.interior_exponent() * p2.ln_dg
                    + ln_green_shape(k, p2.w);
                let v = c_hat * ln_term.exp();
                *sum += v;
                *sum_sq += v * v;
                *nz += 1;
            }
        },
    );
    let (sum, sum_sq, hits) = parts
        .into_iter()
        .fold((0.0, 0.0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let (mean, stderr) = mean_stderr(sum, sum_sq, n).unzip();
    Ok(GreenEstimate {
        mean: mean.map(|m| g1 * m),
        stderr: stderr.map(|s| g1 * s),
        n_samples: n,
        n_hits: hits,
        truncation_factor: DEFAULT_TRUNCATION,
        rescaled: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loewner::sample_driving;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn k83() -> Kappa {
        Kappa::new(8.0 / 3.0).unwrap()
    }

    #[test]
    fn weight_preconditions() {
        let k = k83();
        let p = sample_driving(k, 1.0, 1e-3, 0).unwrap();
        assert!(matches!(rn_weight(&p, c(0.0, 1.0), 1.0, &k, 1.0), Err(Error::Precondition(_))));
        assert!(rn_weight(&p, c(0.0, 1.0), 0.1, &k, 0.0).is_err());
        assert!(rn_weight(&p, c(1.0, 0.0), 0.1, &k, 1.0).is_err());
    }

    #[test]
    fn weight_is_one_at_time_zero() {
        let k = k83();
        let z = c(0.3, 1.0);
        assert_eq!(ln_weight(&k, z, z, 0.0), 0.0);
    }

    #[test]
    fn weight_on_zero_driving_path() {
        // the vertical slit reaches i/2 at t = 1/16
        let k = k83();
        let p = DrivingPath::from_fn(k, 1.0, 1e-4, |_| 0.0).unwrap();
        let z = c(0.0, 1.0);
        let w = rn_weight(&p, z, 0.5, &k, 1.0).unwrap();
        let tau = trace_curve(&p).tips().iter().position(|t| (t - z).norm() <= 0.5).unwrap();
        let t = p.times()[tau];
        // Z_t(i) = i sqrt(1 - 4t), g_t'(i) = 1/sqrt(1 - 4t); on the axis G ∝ y^{d-2}
        let s = (1.0 - 4.0 * t).sqrt();
        let expect = s.powf(k.dim() - 2.0) * s.powf(-(k.interior_exponent()));
        assert!((w - expect).abs() < 1e-6 * expect, "{w} vs {expect}");
        assert_eq!(rn_weight(&p, c(5.0, 1.0), 0.5, &k, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn c_hat_cancels() {
        let k = k83();
        for seed in 0..3 {
            let p = sample_driving(k, 2.0, 1e-3, seed).unwrap();
            let z = c(0.2, 0.8);
            assert_eq!(rn_weight(&p, z, 0.3, &k, 1.0).unwrap(), rn_weight(&p, z, 0.3, &k, 7.5).unwrap());
        }
        let a = martingale_test(&k, 1.0, c(1.0, 1.0), &[0.05], 50, 1e-3, 1).unwrap();
        let b = martingale_test(&k, 3.0, c(1.0, 1.0), &[0.05], 50, 1e-3, 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn martingale_at_zero_is_exactly_one() {
        let k = k83();
        let r = martingale_test(&k, 1.0, c(1.0, 1.0), &[0.0, 0.02], 64, 1e-3, 2).unwrap();
        assert_eq!(r[0].ratio, 1.0);
        assert_eq!(r[0].stderr, 0.0);
        assert!((r[1].ratio - 1.0).abs() < 0.1);
    }

    #[test]
    fn ghat_scales_with_c_hat_squared() {
        let k = k83();
        let a = ghat_two_point(&k, 1.0, c(0.0, 1.0), c(0.0, 2.0), 0.2, 64, 1e-4, 4).unwrap();
        let b = ghat_two_point(&k, 2.0, c(0.0, 1.0), c(0.0, 2.0), 0.2, 64, 1e-4, 4).unwrap();
        let (a, b) = (a.mean.unwrap(), b.mean.unwrap());
        assert!(a > 0.0);
        assert!((b / a - 4.0).abs() < 1e-12);
    }

    #[test]
    fn ghat_preconditions() {
        let k = k83();
        let z1 = c(0.0, 1.0);
        assert!(ghat_two_point(&k, 1.0, z1, z1, 0.1, 1, 1e-4, 0).is_err());
        assert!(ghat_two_point(&k, 1.0, z1, c(0.0, 1.2), 0.3, 1, 1e-4, 0).is_err());
        assert!(ghat_two_point(&k, 1.0, z1, c(0.0, 0.0), 0.1, 1, 1e-4, 0).is_err());
    }
}
