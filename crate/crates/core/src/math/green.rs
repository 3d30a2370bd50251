use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kernel::{ln_p_y_unchecked, p_y_ratio, LOG_SPACE_THRESHOLD};
use super::{Kappa, PointConfig};
use crate::error::{Error, Result};

/// Default normalisation of the one-point Green's function. The true constant
/// is not known in closed form here; see `estimator::calibrate_c_hat`.
pub const DEFAULT_C_HAT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreenKind {
    FWithRadii,
    FLimit,
    GOnePoint,
    GhatEstimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenValue {
    pub value: f64,
    pub kind: GreenKind,
}

impl GreenValue {
    fn new(value: f64, kind: GreenKind) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Domain(format!("{kind:?} evaluated to {value}")));
        }
        Ok(GreenValue { value, kind })
    }
}

pub(crate) fn check_c_hat(c_hat: f64) -> Result<()> {
    if !(c_hat.is_finite() && c_hat > 0.0) {
        return Err(Error::InvalidArgument(format!("c_hat must be positive, got {c_hat}")));
    }
    Ok(())
}

/// `F(z; r) = ∏ P_{y_k}(r_k) / P_{y_k}(l_k)`.
pub fn f_radii(k: &Kappa, cfg: &PointConfig, radii: &[f64]) -> Result<GreenValue> {
    if radii.len() != cfg.len() {
        return Err(Error::InvalidArgument(format!(
            "{} radii given for {} points",
            radii.len(),
            cfg.len()
        )));
    }
    if let Some(r) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
        return Err(Error::InvalidArgument(format!("radii must be positive, got {r}")));
    }
    let value = if k.alpha() > LOG_SPACE_THRESHOLD {
        cfg.y()
            .iter()
            .zip(cfg.l())
            .zip(radii)
            .map(|((&y, &l), &r)| ln_p_y_unchecked(k, y, r) - ln_p_y_unchecked(k, y, l))
            .sum::<f64>()
            .exp()
    } else {
        cfg.y()
            .iter()
            .zip(cfg.l())
            .zip(radii)
            .map(|((&y, &l), &r)| p_y_ratio(k, y, r, l))
            .product()
    };
    GreenValue::new(value, GreenKind::FWithRadii)
}

/// The `r → 0` limit `F(z) = ∏ y_k^{α-(2-d)} / P_{y_k}(l_k)`; interior points only.
pub fn f_limit(k: &Kappa, cfg: &PointConfig) -> Result<GreenValue> {
    if let Some(j) = cfg.y().iter().position(|&y| y <= 0.0) {
        return Err(Error::BoundaryPoint(format!(
            "point {j} = {} is on the real line",
            cfg.points()[j]
        )));
    }
    let e = k.excess_exponent();
    let ln: f64 = cfg
        .y()
        .iter()
        .zip(cfg.l())
        .map(|(&y, &l)| e * y.ln() - ln_p_y_unchecked(k, y, l))
        .sum();
    let value = if k.alpha() > LOG_SPACE_THRESHOLD {
        ln.exp()
    } else {
        cfg.y()
            .iter()
            .zip(cfg.l())
            .map(|(&y, &l)| y.powf(e) / super::kernel::p_y_unchecked(k, y, l))
            .product()
    };
    GreenValue::new(value, GreenKind::FLimit)
}

/// `ĉ-free` part of the one-point Green's function,
/// `(Im z)^{d-2+α} |z|^{-α}`, as a logarithm.
#[inline]
pub(crate) fn ln_green_shape(k: &Kappa, z: Complex64) -> f64 {
    (k.dim() - 2.0 + k.alpha()) * z.im.ln() - k.alpha() * z.norm().ln()
}

/// `G(z) = ĉ (Im z)^{d-2+α} |z|^{-α}`.
pub fn green_one_point(k: &Kappa, c_hat: f64, z: Complex64) -> Result<GreenValue> {
    check_c_hat(c_hat)?;
    if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("G(z) needs Im z > 0, got {z}")));
    }
    let value = if k.alpha() > LOG_SPACE_THRESHOLD {
        c_hat * ln_green_shape(k, z).exp()
    } else {
        c_hat * z.im.powf(k.dim() - 2.0 + k.alpha()) * z.norm().powf(-k.alpha())
    };
    GreenValue::new(value, GreenKind::GOnePoint)
}

/// Residual of the one-point Green's function in the second-order PDE that
/// the Green's function satisfies (n = 1),
///
/// ```text
/// (κ/2) G_xx + G_x 2x/(x²+y²) - G_y 2y/(x²+y²) - 2(2-d) G (x²-y²)/(x²+y²)²
/// ```
///
/// with derivatives taken by central differences of width `step`.
pub fn pde_residual_1pt(k: &Kappa, c_hat: f64, z: Complex64, step: f64) -> Result<f64> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    if !(z.im > step) {
        return Err(Error::Domain(format!(
            "finite differences at {z} with step {step} leave the half-plane"
        )));
    }
    let g = |dx: f64, dy: f64| -> Result<f64> {
        Ok(green_one_point(k, c_hat, z + Complex64::new(dx, dy))?.value)
    };
    let g0 = g(0.0, 0.0)?;
    let gxp = g(step, 0.0)?;
    let gxm = g(-step, 0.0)?;
    let gyp = g(0.0, step)?;
    let gym = g(0.0, -step)?;
    let gx = (gxp - gxm) / (2.0 * step);
    let gy = (gyp - gym) / (2.0 * step);
    let gxx = (gxp - 2.0 * g0 + gxm) / (step * step);

    let (x, y) = (z.re, z.im);
    let s = x * x + y * y;
    Ok(0.5 * k.kappa() * gxx + gx * 2.0 * x / s - gy * 2.0 * y / s
        - 2.0 * k.interior_exponent() * g0 * (x * x - y * y) / (s * s))
}
