use num_complex::Complex64;

use super::Interval;
use crate::error::{Error, Result};

/// Mapping-out function of the closed semi-disc of radius `r` about `x0`:
/// `z + r² / (z - x0)`. Its capacity is `r²` and its support
/// `[x0 - 2r, x0 + 2r]`.
pub fn semidisc_map(x0: f64, r: f64, z: Complex64) -> Result<Complex64> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let w = z - x0;
    if w == Complex64::new(0.0, 0.0) {
        return Err(Error::Singular(format!("semi-disc map is singular at its centre {x0}")));
    }
    Ok(z + r * r / w)
}

pub fn semidisc_support(x0: f64, r: f64) -> Interval {
    Interval { lo: x0 - 2.0 * r, hi: x0 + 2.0 * r }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hand_values() {
        assert_eq!(semidisc_map(0.0, 1.0, c(0.0, 1.0)).unwrap(), c(0.0, 0.0));
        assert!((semidisc_map(0.0, 1.0, c(0.0, 2.0)).unwrap() - c(0.0, 1.5)).norm() < 1e-15);
        assert!((semidisc_map(0.0, 1.0, c(3.0, 0.0)).unwrap() - c(10.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!(matches!(semidisc_map(0.5, 1.0, c(0.5, 0.0)), Err(Error::Singular(_))));
    }

    #[test]
    fn boundary_lands_on_support() {
        let s = semidisc_support(0.0, 1.0);
        assert_eq!((s.lo, s.hi), (-2.0, 2.0));
        for i in 0..=50 {
            let th = std::f64::consts::PI * i as f64 / 50.0;
            let w = semidisc_map(0.0, 1.0, Complex64::from_polar(1.0, th)).unwrap();
            assert!(w.im.abs() < 1e-14);
            assert!(s.contains(w.re * (1.0 - 1e-15)));
        }
    }

    #[test]
    fn capacity_is_r_squared() {
        let y = 1e3;
        let z = c(0.7, y);
        let g = semidisc_map(0.7, 1.3, z).unwrap();
        assert!((((g - z) * c(0.0, y)).re - 1.69).abs() < 1e-9);
    }
}
