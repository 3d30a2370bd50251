//! The comparison kernel `P_y`.
//!
//! For `y >= 0` the kernel is `y^(α-(2-d)) x^(2-d)` when `x <= y` and `x^α`
//! when `x >= y`. It interpolates between interior decay (exponent `2-d`) and
//! boundary decay (exponent `α`). The two branches agree at `x = y`; the first
//! branch is used there.

use super::Kappa;
use crate::error::{Error, Result};

/// Exponents larger than this are evaluated through logarithms.
pub(crate) const LOG_SPACE_THRESHOLD: f64 = 50.0;

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::Domain(format!("{name} must be finite and >= 0, got {v}")));
    }
    Ok(())
}

/// `ln P_y(x)`; `-inf` when the kernel vanishes.
pub fn ln_p_y(k: &Kappa, y: f64, x: f64) -> Result<f64> {
    check_nonneg("y", y)?;
    check_nonneg("x", x)?;
    Ok(ln_p_y_unchecked(k, y, x))
}

pub(crate) fn ln_p_y_unchecked(k: &Kappa, y: f64, x: f64) -> f64 {
    if x <= y {
        if x == 0.0 {
            return f64::NEG_INFINITY;
        }
        k.excess_exponent() * y.ln() + k.interior_exponent() * x.ln()
    } else {
        k.alpha() * x.ln()
    }
}

pub fn p_y(k: &Kappa, y: f64, x: f64) -> Result<f64> {
    check_nonneg("y", y)?;
    check_nonneg("x", x)?;
    Ok(p_y_unchecked(k, y, x))
}

pub(crate) fn p_y_unchecked(k: &Kappa, y: f64, x: f64) -> f64 {
    if k.alpha() > LOG_SPACE_THRESHOLD {
        return ln_p_y_unchecked(k, y, x).exp();
    }
    if x <= y {
        y.powf(k.excess_exponent()) * x.powf(k.interior_exponent())
    } else {
        x.powf(k.alpha())
    }
}

/// `P_y(x1) / P_y(x2)`, evaluated so that huge exponents cannot overflow.
pub(crate) fn p_y_ratio(k: &Kappa, y: f64, x1: f64, x2: f64) -> f64 {
    if k.alpha() > LOG_SPACE_THRESHOLD {
        (ln_p_y_unchecked(k, y, x1) - ln_p_y_unchecked(k, y, x2)).exp()
    } else {
        p_y_unchecked(k, y, x1) / p_y_unchecked(k, y, x2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k83() -> Kappa {
        Kappa::new(8.0 / 3.0).unwrap()
    }

    #[test]
    fn boundary_branch_on_real_line() {
        assert!((p_y(&k83(), 0.0, 2.0).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn branches_meet_at_diagonal() {
        assert!((p_y(&k83(), 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let k = Kappa::new(1.3).unwrap();
        for y in [0.1f64, 0.7, 3.0, 11.0] {
            let lo = y.powf(k.excess_exponent()) * y.powf(k.interior_exponent());
            let hi = y.powf(k.alpha());
            let v = p_y(&k, y, y).unwrap();
            assert!((v - lo).abs() <= 1e-13 * v && (v - hi).abs() <= 1e-13 * v);
        }
    }

    #[test]
    fn interior_branch_hand_value() {
        // 2^(α-(2-d)) * 1^(2-d) with α = 2, 2-d = 2/3
        let v = p_y(&k83(), 2.0, 1.0).unwrap();
        assert!((v - 2f64.powf(4.0 / 3.0)).abs() < 1e-14);
        assert!((v - 2.5198421).abs() < 1e-6);
    }

    #[test]
    fn negative_arguments_rejected() {
        assert!(matches!(p_y(&k83(), -1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(p_y(&k83(), 1.0, -1e-300), Err(Error::Domain(_))));
        assert!(ln_p_y(&k83(), 1.0, f64::NAN).is_err());
    }

    #[test]
    fn zero_argument_is_zero() {
        assert_eq!(p_y(&k83(), 1.0, 0.0).unwrap(), 0.0);
        assert_eq!(p_y(&k83(), 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(ln_p_y(&k83(), 0.0, 0.0).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn ratio_survives_huge_alpha() {
        // κ = 0.1 gives α = 79
        let k = Kappa::new(0.1).unwrap();
        let r = p_y_ratio(&k, 0.0, 1e4, 2e4);
        assert!((r.ln() - 79.0 * 0.5f64.ln()).abs() < 1e-10);
        assert!(p_y_unchecked(&k, 0.0, 1e4).is_infinite());
    }
}
