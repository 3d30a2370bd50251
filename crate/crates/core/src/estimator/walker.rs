//! Online Loewner walker used by every Monte Carlo routine.
//!
//! The walker samples the driving function one step at a time and pushes a
//! handful of tracked points forward. Two things keep a sample cheap:
//!
//! 1. **Adaptive steps.** With a relative step `ε`, the capacity of the next
//!    step is `(ε·|Z_t(z)|)² / 4` for the nearest pending target, so the new
//!    slit is `ε·|Z_t(z)|` tall. The step length is decided before the
//!    increment is drawn, so the driving values are exact Brownian samples at
//!    the grid times. A floor `dt_min` bounds the number of steps near
//!    swallowing. Under `z ↦ λz` the rule is scale covariant.
//!
//! 2. **Screened tip computation.** Distances are measured to the polyline
//!    through the tips, and each tip costs a backward pass through the slit
//!    maps. By Koebe's quarter theorem the hull stays at distance at least
//!    `crad/4` from `z`, where `crad = 2 Im Z_t(z) / |g_t'(z)|` is the
//!    conformal radius. So tips are only computed once `crad/4` falls below
//!    `NEAR_FACTOR·r`. Inside that window the backward pass stops as soon as the
//!    growth theorem, applied to the map at an earlier step, certifies that
//!    the tip is farther than `NEAR_FACTOR·r` from `z`. A segment with a
//!    certified endpoint is skipped.
//!
//! Each watched point keeps a distance profile: the times at which the
//! running minimum of the polyline distance decreased, with the new minimum.
//! Hit times for every radius up to the watch radius follow from it, which
//! gives exact monotonicity in the radius.

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::loewner::slit::{slit_forward, slit_inverse};
use crate::loewner::segment_distance;
use crate::math::Kappa;
use crate::rng::SampleRng;

/// Tips are computed once `crad/4 <= NEAR_FACTOR·r`, and a tip certified to
/// lie farther than `NEAR_FACTOR·r` is skipped.
pub const NEAR_FACTOR: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRule {
    /// Relative slit height; `None` gives uniform steps of `dt_min`.
    pub rel_step: Option<f64>,
    pub dt_min: f64,
}

impl StepRule {
    pub fn uniform(dt: f64) -> Self {
        StepRule { rel_step: None, dt_min: dt }
    }

    pub fn adaptive(rel_step: f64, dt_min: f64) -> Self {
        StepRule { rel_step: Some(rel_step), dt_min }
    }
}

#[derive(Debug, Clone)]
struct Watch {
    r_watch: f64,
    r_stop: f64,
    best: f64,
    events: Vec<(f64, f64)>,
    prev_tip: Option<Complex64>,
    /// Centered image and conformal radius after each step.
    hist: Vec<(Complex64, f64)>,
    done: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct Tracked {
    pub z: Complex64,
    /// `Z_t(z)`.
    pub w: Complex64,
    /// `ln |g_t'(z)|`.
    pub ln_dg: f64,
    pub swallowed_at: Option<f64>,
    steer: bool,
    watch: Option<Watch>,
}

impl Tracked {
    pub fn alive(&self) -> bool {
        self.swallowed_at.is_none()
    }

    fn crad(&self) -> f64 {
        2.0 * self.w.im / self.ln_dg.exp()
    }

    fn pending(&self) -> bool {
        self.alive() && self.watch.as_ref().is_none_or(|w| !w.done)
    }

    /// Time of the first approach within `r`, from the distance profile.
    pub fn hit_time(&self, r: f64) -> Option<f64> {
        self.watch
            .as_ref()
            .and_then(|w| w.events.iter().find(|e| e.1 <= r).map(|e| e.0))
    }
}

pub(crate) struct Walker {
    kappa: Kappa,
    rule: StepRule,
    horizon: f64,
    rng: SampleRng,
    time: f64,
    u: f64,
    times: Vec<f64>,
    us: Vec<f64>,
    caps: Vec<f64>,
    dus: Vec<f64>,
    points: Vec<Tracked>,
}

impl Walker {
    pub fn new(kappa: Kappa, rule: StepRule, horizon: f64, rng: SampleRng) -> Self {
        Walker {
            kappa,
            rule,
            horizon,
            rng,
            time: 0.0,
            u: 0.0,
            times: vec![0.0],
            us: vec![0.0],
            caps: Vec::new(),
            dus: Vec::new(),
            points: Vec::new(),
        }
    }

    /// Adds a point. `watch = Some((r_watch, r_stop))` records its distance
    /// profile down to `r_stop`, resolving every radius in `[r_stop, r_watch]`.
    pub fn track(&mut self, z: Complex64, steer: bool, watch: Option<(f64, f64)>) -> usize {
        debug_assert!(self.caps.is_empty(), "points must be added before stepping");
        let watch = watch.map(|(r_watch, r_stop)| Watch {
            r_watch,
            r_stop,
            best: z.norm(),
            events: Vec::new(),
            prev_tip: Some(Complex64::new(0.0, 0.0)),
            hist: vec![(z, 2.0 * z.im)],
            done: z.norm() <= r_stop,
        });
        self.points.push(Tracked { z, w: z, ln_dg: 0.0, swallowed_at: None, steer, watch });
        self.points.len() - 1
    }

    pub fn point(&self, k: usize) -> &Tracked {
        &self.points[k]
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    #[cfg(test)]
    pub fn n_steps(&self) -> usize {
        self.caps.len()
    }

    pub fn finished(&self) -> bool {
        self.time >= self.horizon || !self.points.iter().any(Tracked::pending)
    }

    fn next_cap(&self, limit: f64) -> f64 {
        let cap = match self.rule.rel_step {
            None => self.rule.dt_min,
            Some(eps) => {
                let near = self
                    .points
                    .iter()
                    .filter(|p| p.steer && p.pending())
                    .map(|p| p.w.norm())
                    .fold(f64::INFINITY, f64::min);
                let h = eps * near;
                (0.25 * h * h).max(self.rule.dt_min)
            }
        };
        let room = limit - self.time;
        // avoid leaving a sliver before the limit
        if cap >= room || room - cap < 1e-9 * room {
            room
        } else {
            cap
        }
    }

    /// One step, never crossing `limit` (capped by the horizon).
    pub fn step_toward(&mut self, limit: f64) {
        let limit = limit.min(self.horizon);
        let cap = self.next_cap(limit);
        if !(cap > 0.0) {
            self.time = limit;
            return;
        }
        let xi: f64 = StandardNormal.sample(&mut self.rng);
        let du = (self.kappa.kappa() * cap).sqrt() * xi;
        let t_before = self.time;

        // No safety disc around the slit base: for κ <= 4 an interior point
        // is never swallowed, and such a disc kills points sitting in fjords.
        for p in self.points.iter_mut().filter(|p| p.alive()) {
            let shifted = p.w - du;
            let next = slit_forward(shifted, cap);
            if !(next.im > 0.0) {
                p.swallowed_at = Some(t_before);
                continue;
            }
            p.ln_dg += shifted.norm().ln() - next.norm().ln();
            p.w = next;
        }

        self.caps.push(cap);
        self.dus.push(du);
        self.time = if limit - (t_before + cap) < 1e-12 * limit.max(1.0) { limit } else { t_before + cap };
        self.u += du;
        self.times.push(self.time);
        self.us.push(self.u);

        for k in 0..self.points.len() {
            self.update_watch(k);
        }
    }

    /// Steps until the horizon or until every watched point is resolved.
    pub fn run(&mut self) {
        while !self.finished() {
            self.step_toward(self.horizon);
        }
    }

    /// Steps until `t` exactly (or the horizon), regardless of watch status.
    #[cfg(test)]
    pub fn advance_to(&mut self, t: f64) {
        let t = t.min(self.horizon);
        while self.time < t {
            self.step_toward(t);
        }
    }

    /// Tip after `j` steps, or `None` if certified farther than `cutoff`
    /// from point `k`.
    fn certified_tip(&self, j: usize, k: usize, cutoff: f64) -> Option<Complex64> {
        let hist = &self.points[k].watch.as_ref().unwrap().hist;
        let mut zeta = Complex64::new(0.0, 0.0);
        for m in (0..j).rev() {
            zeta = slit_inverse(zeta, self.caps[m]) + self.dus[m];
            let (w, crad) = hist[m];
            if crad > 4.0 * cutoff {
                let u = ((zeta - w) / (zeta - w.conj())).norm();
                if crad * u / ((1.0 + u) * (1.0 + u)) > cutoff {
                    return None;
                }
            }
        }
        Some(zeta)
    }

    fn update_watch(&mut self, k: usize) {
        let j = self.caps.len();
        let t = self.time;
        let (alive, w, crad) = {
            let p = &self.points[k];
            (p.alive(), p.w, p.crad())
        };
        let Some(watch) = self.points[k].watch.as_mut() else { return };
        if watch.done {
            return;
        }
        if !alive {
            watch.done = true;
            return;
        }
        watch.hist.push((w, crad));
        let cutoff = NEAR_FACTOR * watch.best.min(watch.r_watch);
        if crad / 4.0 > cutoff {
            watch.prev_tip = None;
            return;
        }
        let had_prev = watch.prev_tip;
        let z = self.points[k].z;
        let tip = self.certified_tip(j, k, cutoff);
        let prev = match (tip, had_prev) {
            (Some(_), None) if j >= 1 => self.certified_tip(j - 1, k, cutoff),
            _ => had_prev,
        };
        let d = match (tip, prev) {
            (Some(b), Some(a)) => Some(segment_distance(z, a, b)),
            (Some(b), None) => Some((b - z).norm()),
            _ => None,
        };
        let watch = self.points[k].watch.as_mut().unwrap();
        watch.prev_tip = tip;
        if let Some(d) = d {
            if d < watch.best {
                watch.best = d;
                if d <= watch.r_watch {
                    watch.events.push((t, d));
                }
                if d <= watch.r_stop {
                    watch.done = true;
                }
            }
        }
    }

    /// The driving function sampled so far, as a (non-uniform) grid.
    #[cfg(test)]
    pub fn driving_path(&self, seed: u64) -> crate::loewner::DrivingPath {
        crate::loewner::DrivingPath::from_grid(self.kappa, seed, self.rule.dt_min, self.times.clone(), self.us.clone())
            .expect("walker grid is valid by construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loewner::{evolve_point, first_hits, trace_curve};
    use crate::rng::sample_rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn walker_flow_matches_reference_maps() {
        let k = Kappa::new(8.0 / 3.0).unwrap();
        for seed in 0..5 {
            let mut w = Walker::new(k, StepRule::adaptive(0.2, 1e-5), 2.0, sample_rng(seed, 0));
            let a = w.track(c(0.5, 1.0), true, None);
            let b = w.track(c(-1.0, 0.4), false, None);
            w.advance_to(2.0);
            let path = w.driving_path(seed);
            for idx in [a, b] {
                let p = w.point(idx);
                let st = evolve_point(&path, p.z, 2.0).unwrap();
                // the reference also drops points close to the slit base
                if p.alive() && !st.swallowed {
                    let z_ref = st.g - path.value(path.n_steps());
                    assert!((z_ref - p.w).norm() < 1e-10);
                    assert!((st.gprime.norm().ln() - p.ln_dg).abs() < 1e-9);
                } else if !p.alive() {
                    assert!(st.swallowed);
                }
            }
        }
    }

    #[test]
    fn screened_hits_match_full_trace() {
        let k = Kappa::new(8.0 / 3.0).unwrap();
        let z = c(0.3, 1.0);
        let radii = [0.4, 0.2, 0.1];
        let mut agree = 0;
        let total = 60;
        for seed in 0..total {
            let mut w = Walker::new(k, StepRule::adaptive(0.15, 1e-5), 3.0, sample_rng(100 + seed, 0));
            let i = w.track(z, true, Some((0.4, 0.1)));
            w.run();
            let tr = trace_curve(&w.driving_path(seed));
            let full = first_hits(&tr, &[z, z, z], &radii).unwrap();
            let online: Vec<_> = radii.iter().map(|&r| w.point(i).hit_time(r)).collect();
            if full == online {
                agree += 1;
            }
        }
        assert_eq!(agree, total);
    }

    #[test]
    fn uniform_rule_lands_on_checkpoints() {
        let k = Kappa::new(2.0).unwrap();
        let mut w = Walker::new(k, StepRule::uniform(0.03), 1.0, sample_rng(1, 1));
        w.track(c(0.0, 1.0), false, None);
        w.advance_to(0.1);
        assert_eq!(w.time(), 0.1);
        assert_eq!(w.n_steps(), 4);
        w.advance_to(5.0);
        assert_eq!(w.time(), 1.0);
    }
}
