//! Elementary vertical-slit maps.
//!
//! Over one step the driving function is held at its new value, so the
//! centered map solves Loewner's equation exactly: a point at `w` (relative to
//! the new driving value) moves to `sqrt(w² + 4·cap)`. That map removes a
//! vertical slit of height `2·sqrt(cap)` and adds exactly `2·cap` to the
//! half-plane capacity.

use num_complex::Complex64;

/// Square root of `v` on the closed upper half-plane. When the result is real
/// its sign follows `hint` (the point being mapped), so real points stay on
/// their side of the slit.
#[inline]
pub(crate) fn upper_sqrt(v: Complex64, hint: Complex64) -> Complex64 {
    let s = v.sqrt();
    if s.im < 0.0 || (s.im == 0.0 && s.re * hint.re < 0.0) {
        -s
    } else {
        s
    }
}

/// Forward map of a point already shifted by the driving increment.
#[inline]
pub(crate) fn slit_forward(w: Complex64, cap: f64) -> Complex64 {
    upper_sqrt(w * w + 4.0 * cap, w)
}

/// Inverse map `ζ ↦ sqrt(ζ² - 4·cap)`; sends 0 to the slit tip `2i·sqrt(cap)`.
#[inline]
pub(crate) fn slit_inverse(zeta: Complex64, cap: f64) -> Complex64 {
    upper_sqrt(zeta * zeta - 4.0 * cap, zeta)
}

/// True when `w` (shifted) is too close to the slit base to be mapped safely:
/// `|w|² < 4·cap·(1 + margin)`.
#[inline]
pub(crate) fn near_slit(w: Complex64, cap: f64) -> bool {
    w.norm_sqr() < 4.0 * cap * (1.0 + super::SWALLOW_MARGIN)
}
