use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The SLE parameter together with the two exponents derived from it.
///
/// `dim` is the Hausdorff dimension `1 + κ/8` of the trace and `alpha` the
/// boundary exponent `8/κ - 1`. Both are fixed by `kappa`; the only way to
/// build a value is [`Kappa::new`], which checks `0 < κ < 8`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kappa {
    kappa: f64,
    dim: f64,
    alpha: f64,
}

impl Kappa {
    pub fn new(kappa: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa <= 0.0 || kappa >= 8.0 {
            return Err(Error::Domain(format!(
                "kappa must satisfy 0 < kappa < 8 (the trace is space filling for kappa >= 8), got {kappa}"
            )));
        }
        Ok(Kappa {
            kappa,
            dim: 1.0 + kappa / 8.0,
            alpha: 8.0 / kappa - 1.0,
        })
    }

    #[inline]
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Hausdorff dimension `d`.
    #[inline]
    pub fn dim(&self) -> f64 {
        self.dim
    }

    /// Boundary exponent `α`.
    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Interior decay exponent `2 - d`.
    #[inline]
    pub fn interior_exponent(&self) -> f64 {
        2.0 - self.dim
    }

    /// `α - (2 - d)`, the power of `y` in the interior branch of `P_y`.
    #[inline]
    pub fn excess_exponent(&self) -> f64 {
        self.alpha - (2.0 - self.dim)
    }
}

impl<'de> Deserialize<'de> for Kappa {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            kappa: f64,
        }
        let raw = Raw::deserialize(de)?;
        Kappa::new(raw.kappa).map_err(serde::de::Error::custom)
    }
}

/// Shorthand for [`Kappa::new`].
pub fn kappa_params(kappa: f64) -> Result<Kappa> {
    Kappa::new(kappa)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents_at_eight_thirds() {
        let k = Kappa::new(8.0 / 3.0).unwrap();
        assert!((k.dim() - 4.0 / 3.0).abs() < 1e-15);
        assert!((k.alpha() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exponents_at_two() {
        let k = Kappa::new(2.0).unwrap();
        assert_eq!(k.dim(), 1.25);
        assert_eq!(k.alpha(), 3.0);
    }

    #[test]
    fn rejects_space_filling_and_nonpositive() {
        for bad in [8.0, 9.0, 0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(Kappa::new(bad), Err(Error::Domain(_))), "{bad}");
        }
    }

    #[test]
    fn exponent_relations_hold_across_range() {
        for i in 1..800 {
            let k = Kappa::new(i as f64 * 0.01).unwrap();
            assert!(k.dim() > 1.0 && k.dim() < 2.0);
            assert!(k.alpha() > 2.0 - k.dim());
        }
    }

    #[test]
    fn serde_round_trip_validates() {
        let k: Kappa = serde_json::from_str(r#"{"kappa": 2.0}"#).unwrap();
        assert_eq!(k.alpha(), 3.0);
        assert!(serde_json::from_str::<Kappa>(r#"{"kappa": 8.5}"#).is_err());
        let s = serde_json::to_string(&k).unwrap();
        let back: Kappa = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
    }
}
