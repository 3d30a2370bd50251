use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// An ordered tuple of marked points in the closed upper half-plane together
/// with the distances that the comparison functions are built from.
///
/// With `z_0 = 0`:
/// - `l[k]` is the distance from `z_k` to the earlier points `z_0..z_{k-1}`,
/// - `dmin[k]` the distance to every other point including `z_0`,
/// - `y[k] = Im z_k` and `r[k] = min(dmin[k], y[k])`,
/// - `q = max_k |z_k| / dmin[k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointConfig {
    points: Vec<Complex64>,
    l: Vec<f64>,
    dmin: Vec<f64>,
    y: Vec<f64>,
    r: Vec<f64>,
    q: f64,
}

impl PointConfig {
    pub fn new(points: &[Complex64]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidConfiguration("no points given".into()));
        }
        for (k, z) in points.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::InvalidConfiguration(format!("point {k} is not finite")));
            }
            if z.im < 0.0 {
                return Err(Error::InvalidConfiguration(format!(
                    "point {k} = {z} lies below the real line"
                )));
            }
            if *z == Complex64::new(0.0, 0.0) {
                return Err(Error::InvalidConfiguration(format!(
                    "point {k} coincides with the curve's starting point 0"
                )));
            }
        }
        let n = points.len();
        for j in 0..n {
            for k in j + 1..n {
                if points[j] == points[k] {
                    return Err(Error::InvalidConfiguration(format!(
                        "points {j} and {k} coincide at {}",
                        points[j]
                    )));
                }
            }
        }

        let mut l = Vec::with_capacity(n);
        let mut dmin = Vec::with_capacity(n);
        for (k, zk) in points.iter().enumerate() {
            let lk = points[..k]
                .iter()
                .map(|zj| (zk - zj).norm())
                .fold(zk.norm(), f64::min);
            let dk = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, zj)| (zk - zj).norm())
                .fold(zk.norm(), f64::min);
            l.push(lk);
            dmin.push(dk);
        }
        let y: Vec<f64> = points.iter().map(|z| z.im).collect();
        let r = dmin.iter().zip(&y).map(|(d, y)| d.min(*y)).collect();
        let q = points
            .iter()
            .zip(&dmin)
            .map(|(z, d)| z.norm() / d)
            .fold(f64::NEG_INFINITY, f64::max);

        Ok(PointConfig {
            points: points.to_vec(),
            l,
            dmin,
            y,
            r,
            q,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Distances to earlier points, `l_k`.
    pub fn l(&self) -> &[f64] {
        &self.l
    }

    /// Distances to all other points, `d_k`.
    pub fn dmin(&self) -> &[f64] {
        &self.dmin
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// `R_k = d_k ∧ y_k`.
    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The same configuration with points listed in the order `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        if perm.len() != self.len() {
            return Err(Error::InvalidArgument("permutation length mismatch".into()));
        }
        for &p in perm {
            if p >= self.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
        }
        let pts: Vec<_> = perm.iter().map(|&p| self.points[p]).collect();
        PointConfig::new(&pts)
    }

    /// The configuration scaled by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {lambda}")));
        }
        let pts: Vec<_> = self.points.iter().map(|z| z * lambda).collect();
        PointConfig::new(&pts)
    }
}

/// Shorthand for [`PointConfig::new`].
pub fn config_quantities(points: &[Complex64]) -> Result<PointConfig> {
    PointConfig::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_points_on_imaginary_axis() {
        let cfg = PointConfig::new(&[c(0.0, 1.0), c(0.0, 2.0)]).unwrap();
        assert_eq!(cfg.l(), &[1.0, 1.0]);
        assert_eq!(cfg.dmin(), &[1.0, 1.0]);
        assert_eq!(cfg.y(), &[1.0, 2.0]);
        assert_eq!(cfg.r(), &[1.0, 1.0]);
        assert_eq!(cfg.q(), 2.0);
    }

    #[test]
    fn single_point() {
        let cfg = PointConfig::new(&[c(0.0, 1.0)]).unwrap();
        assert_eq!(cfg.l(), &[1.0]);
        assert_eq!(cfg.dmin(), &[1.0]);
        assert_eq!(cfg.r(), &[1.0]);
        assert_eq!(cfg.q(), 1.0);
    }

    #[test]
    fn rejects_duplicates_origin_and_lower_half_plane() {
        let dup = PointConfig::new(&[c(0.0, 1.0), c(0.0, 1.0)]);
        assert!(matches!(dup, Err(Error::InvalidConfiguration(_))));
        assert!(PointConfig::new(&[c(0.0, 0.0)]).is_err());
        assert!(PointConfig::new(&[c(1.0, -0.5)]).is_err());
        assert!(PointConfig::new(&[]).is_err());
    }

    #[test]
    fn boundary_points_allowed() {
        let cfg = PointConfig::new(&[c(2.0, 0.0)]).unwrap();
        assert_eq!(cfg.r(), &[0.0]);
    }

    fn upper_point() -> impl Strategy<Value = Complex64> {
        (-5.0..5.0f64, 0.01..5.0f64).prop_map(|(x, y)| c(x, y))
    }

    proptest! {
        #[test]
        fn ordering_of_distances(pts in prop::collection::vec(upper_point(), 1..6)) {
            let cfg = PointConfig::new(&pts).unwrap();
            prop_assert!(cfg.q() >= 1.0);
            prop_assert_eq!(cfg.l()[0], pts[0].norm());
            for k in 0..cfg.len() {
                prop_assert!(cfg.r()[k] <= cfg.dmin()[k]);
                prop_assert!(cfg.dmin()[k] <= cfg.l()[k]);
            }
        }
    }
}
