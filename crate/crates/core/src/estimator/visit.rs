use std::collections::BTreeMap;

use num_complex::Complex64;

use super::par::chunked;
use super::scenario::{check_radii, GreenEstimate, OrderedHitRecord, Scenario};
use super::walker::Walker;
use crate::error::{Error, Result};
use crate::math::{f_radii, ln_green_shape, Kappa};
use crate::rng::{mix, sample_rng};

/// Salt for the second arm of [`scaling_check`].
const SCALE_SALT: u64 = 0x5CA1E;
/// Permutation tables are only built up to this many points.
const MAX_ORDERED_POINTS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct VisitEstimate {
    pub radii: Vec<f64>,
    /// Probability that every disc is visited, in any order.
    pub unordered: GreenEstimate,
    /// Probability of each visit order. Sums to `unordered` exactly.
    pub per_permutation: BTreeMap<Vec<usize>, GreenEstimate>,
}

/// Runs sample `index`, resolving hits for every radius in `[r_stop, r_watch]`.
fn run_sample(s: &Scenario, r_watch: &[f64], r_stop: &[f64], index: u64) -> Walker {
    let mut w = Walker::new(s.kappa, s.step_rule(), s.horizon(), sample_rng(s.master_seed, index));
    for (k, &z) in s.points().iter().enumerate() {
        w.track(z, true, Some((r_watch[k], r_stop[k])));
    }
    w.run();
    w
}

fn hits_at(w: &Walker, radii: &[f64]) -> Vec<Option<f64>> {
    radii.iter().enumerate().map(|(k, &r)| w.point(k).hit_time(r)).collect()
}

/// Visit record of sample `index` at the scenario's radii.
pub fn sample_record(s: &Scenario, index: u64) -> Result<OrderedHitRecord> {
    s.validate()?;
    let w = run_sample(s, &s.radii, &s.radii, index);
    Ok(OrderedHitRecord::from_hits(&hits_at(&w, &s.radii)))
}

/// Visit records of every sample, in sample order.
pub fn hit_records(s: &Scenario) -> Result<Vec<OrderedHitRecord>> {
    s.validate()?;
    Ok(chunked(s.n_samples, Vec::new, |v: &mut Vec<OrderedHitRecord>, i| {
        let w = run_sample(s, &s.radii, &s.radii, i);
        v.push(OrderedHitRecord::from_hits(&hits_at(&w, &s.radii)))
    })
    .into_iter()
    .flatten()
    .collect())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn check_schedule(s: &Scenario, schedule: &[Vec<f64>]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::InvalidArgument("radius schedule is empty".into()));
    }
    for radii in schedule {
        check_radii(&s.config, radii)?;
    }
    for (i, pair) in schedule.windows(2).enumerate() {
        if pair[1].iter().zip(&pair[0]).any(|(b, a)| b > a) {
            return Err(Error::InvalidArgument(format!(
                "schedule entry {} increases a radius of entry {i}",
                i + 1
            )));
        }
    }
    if s.config.len() > MAX_ORDERED_POINTS {
        return Err(Error::InvalidArgument(format!(
            "visit orders are tabulated for at most {MAX_ORDERED_POINTS} points"
        )));
    }
    Ok(())
}

#[derive(Clone, Default)]
struct Counts {
    all: u64,
    ordered: BTreeMap<Vec<usize>, u64>,
}

/// Raw visit probabilities for each entry of a decreasing radius schedule.
///
/// All entries share the same samples, so each estimate is non-decreasing
/// in every radius sample by sample.
pub fn visit_sweep(s: &Scenario, schedule: &[Vec<f64>]) -> Result<Vec<VisitEstimate>> {
    s.validate()?;
    check_schedule(s, schedule)?;
    let n = s.config.len();
    let r_watch = &schedule[0];
    let r_stop = &schedule[schedule.len() - 1];
    let parts = chunked(
        s.n_samples,
        || vec![Counts::default(); schedule.len()],
        |acc, i| {
            let w = run_sample(s, r_watch, r_stop, i);
            for (c, radii) in acc.iter_mut().zip(schedule) {
                let rec = OrderedHitRecord::from_hits(&hits_at(&w, radii));
                if rec.all_hit {
                    c.all += 1;
                    *c.ordered.entry(rec.permutation).or_insert(0) += 1;
                }
            }
        },
    );
    let mut total = vec![Counts::default(); schedule.len()];
    for part in parts {
        for (t, c) in total.iter_mut().zip(part) {
            t.all += c.all;
            for (p, v) in c.ordered {
                *t.ordered.entry(p).or_insert(0) += v;
            }
        }
    }
    Ok(total
        .into_iter()
        .zip(schedule)
        .map(|(c, radii)| VisitEstimate {
            radii: radii.clone(),
            unordered: GreenEstimate::binomial(c.all, s.n_samples, s.truncation_factor),
            per_permutation: permutations(n)
                .into_iter()
                .map(|p| {
                    let hits = c.ordered.get(&p).copied().unwrap_or(0);
                    (p, GreenEstimate::binomial(hits, s.n_samples, s.truncation_factor))
                })
                .collect(),
        })
        .collect())
}

pub fn estimate_visit_prob(s: &Scenario) -> Result<VisitEstimate> {
    Ok(visit_sweep(s, std::slice::from_ref(&s.radii))?.remove(0))
}

/// `∏ r_k^{d-2} · P[every disc visited]`.
pub fn rescaled_green(s: &Scenario) -> Result<GreenEstimate> {
    let e = estimate_visit_prob(s)?;
    Ok(e.unordered.rescale(s.rescale_factor(&s.radii)))
}

/// One rescaled estimate per schedule entry, from a single set of samples.
pub fn convergence_sweep(s: &Scenario, schedule: &[Vec<f64>]) -> Result<Vec<GreenEstimate>> {
    Ok(visit_sweep(s, schedule)?
        .into_iter()
        .map(|e| {
            let f = s.rescale_factor(&e.radii);
            e.unordered.rescale(f)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRatio {
    /// `p̂ / F(z; r)`; 0 when there were no hits.
    pub ratio: f64,
    pub stderr: f64,
    pub f: f64,
    pub estimate: GreenEstimate,
    /// Set when no sample hit, so the ratio carries no information.
    pub low_sample: bool,
}

pub(crate) fn bound_ratio_of(s: &Scenario, e: &VisitEstimate) -> Result<BoundRatio> {
    let f = f_radii(&s.kappa, &s.config, &e.radii)?.value;
    let p = e.unordered.mean.unwrap_or(0.0);
    Ok(BoundRatio {
        ratio: p / f,
        stderr: e.unordered.stderr_or_zero() / f,
        f,
        estimate: e.unordered.clone(),
        low_sample: e.unordered.n_hits == 0,
    })
}

/// Raw visit probability divided by the comparison function `F(z; r)`.
pub fn bound_ratio(s: &Scenario) -> Result<BoundRatio> {
    let e = estimate_visit_prob(s)?;
    bound_ratio_of(s, &e)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CHatEstimate {
    pub value: f64,
    pub stderr: f64,
}

/// Estimates the normalisation of the one-point Green's function from
/// `r^{d-2} P[dist(z, γ) <= r] ≈ ĉ (Im z)^{d-2+α} |z|^{-α}`.
pub fn calibrate_c_hat(k: Kappa, z: Complex64, r: f64, n: u64, dt: f64, seed: u64) -> Result<CHatEstimate> {
    if !(z.im > 0.0) {
        return Err(Error::Precondition(format!("calibration point must be interior, got {z}")));
    }
    if !(r > 0.0 && r < z.im) {
        return Err(Error::Precondition(format!("calibration radius must lie in (0, Im z), got {r}")));
    }
    let s = Scenario::new(k, &[z], &[r])?.with_samples(n).with_dt(dt).with_seed(seed);
    let e = rescaled_green(&s)?;
    if e.n_hits == 0 {
        return Err(Error::CalibrationFailed(format!("no sample came within {r} of {z}")));
    }
    let shape = ln_green_shape(&k, z).exp();
    Ok(CHatEstimate { value: e.value()? / shape, stderr: e.stderr_or_zero() / shape })
}

/// Raw visit probabilities for `(z, r)` and `(λz, λr)` on independent seeds.
/// The second arm scales `dt` by `λ²` too, so both arms run the same
/// discrete scheme up to the similarity.
pub fn scaling_check(s: &Scenario, lambda: f64) -> Result<(GreenEstimate, GreenEstimate)> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {lambda}")));
    }
    s.validate()?;
    let scaled_points: Vec<Complex64> = s.points().iter().map(|z| z * lambda).collect();
    let scaled_radii: Vec<f64> = s.radii.iter().map(|r| r * lambda).collect();
    let t = Scenario::new(s.kappa, &scaled_points, &scaled_radii)?
        .with_samples(s.n_samples)
        .with_dt(s.dt * lambda * lambda)
        .with_rel_step(s.rel_step)
        .with_truncation(s.truncation_factor)
        .with_seed(mix(s.master_seed, SCALE_SALT));
    Ok((estimate_visit_prob(s)?.unordered, estimate_visit_prob(&t)?.unordered))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::with_workers;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn k83() -> Kappa {
        Kappa::new(8.0 / 3.0).unwrap()
    }

    #[test]
    fn permutation_table() {
        assert_eq!(permutations(1), vec![vec![0]]);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[0], vec![0, 1, 2]);
    }

    #[test]
    fn zero_samples_flag_undefined_mean() {
        let s = Scenario::new(k83(), &[c(0.0, 1.0)], &[0.4]).unwrap().with_samples(0);
        let e = estimate_visit_prob(&s).unwrap();
        assert_eq!(e.unordered.n_samples, 0);
        assert_eq!(e.unordered.mean, None);
    }

    #[test]
    fn partition_identity_two_points() {
        let s = Scenario::new(k83(), &[c(0.0, 1.0), c(0.5, 2.0)], &[0.3, 0.3])
            .unwrap()
            .with_samples(400)
            .with_seed(3);
        let e = estimate_visit_prob(&s).unwrap();
        let sum: u64 = e.per_permutation.values().map(|g| g.n_hits).sum();
        assert_eq!(sum, e.unordered.n_hits);
        assert!(e.unordered.n_hits > 0);
        assert_eq!(e.per_permutation.len(), 2);
    }

    #[test]
    fn sweep_is_monotone_and_matches_single_runs() {
        let s = Scenario::new(k83(), &[c(0.3, 1.0)], &[0.3]).unwrap().with_samples(300).with_seed(9);
        let schedule = vec![vec![0.3], vec![0.2], vec![0.1]];
        let sweep = visit_sweep(&s, &schedule).unwrap();
        for pair in sweep.windows(2) {
            assert!(pair[1].unordered.n_hits <= pair[0].unordered.n_hits);
        }
        for (e, radii) in sweep.iter().zip(&schedule) {
            let single = estimate_visit_prob(&s.clone().with_radii(radii)).unwrap();
            assert_eq!(single.unordered.n_hits, e.unordered.n_hits);
        }
        let one = convergence_sweep(&s, &schedule[..1]).unwrap();
        assert_eq!(one, vec![rescaled_green(&s).unwrap()]);
    }

    #[test]
    fn schedule_errors() {
        let s = Scenario::new(k83(), &[c(0.0, 1.0)], &[0.3]).unwrap().with_samples(1);
        assert!(matches!(convergence_sweep(&s, &[]), Err(Error::InvalidArgument(_))));
        assert!(matches!(convergence_sweep(&s, &[vec![1.5]]), Err(Error::Precondition(_))));
        assert!(convergence_sweep(&s, &[vec![0.1], vec![0.2]]).is_err());
    }

    #[test]
    fn records_do_not_depend_on_worker_count() {
        let s = Scenario::new(k83(), &[c(0.0, 1.0), c(1.0, 1.5)], &[0.3, 0.2])
            .unwrap()
            .with_samples(600)
            .with_seed(11);
        let a = with_workers(1, || hit_records(&s)).unwrap().unwrap();
        let b = with_workers(4, || hit_records(&s)).unwrap().unwrap();
        assert_eq!(a, b);
        assert_eq!(a[17], sample_record(&s, 17).unwrap());
        for r in a.iter().filter(|r| r.all_hit) {
            assert!(r.hit_times.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn rescaling_is_bookkeeping() {
        let s = Scenario::new(k83(), &[c(0.0, 1.0)], &[0.2]).unwrap().with_samples(200).with_seed(1);
        let raw = estimate_visit_prob(&s).unwrap().unordered;
        let resc = rescaled_green(&s).unwrap();
        assert!(resc.rescaled && !raw.rescaled);
        assert_eq!(resc.mean.unwrap(), raw.mean.unwrap() * 0.2f64.powf(k83().dim() - 2.0));
    }

    #[test]
    fn calibration_errors() {
        let k = k83();
        assert!(matches!(calibrate_c_hat(k, c(0.0, 1.0), 1.2, 10, 1e-4, 0), Err(Error::Precondition(_))));
        // a tiny disc far out is essentially never hit with two samples
        let e = calibrate_c_hat(k, c(30.0, 0.5), 1e-4, 2, 1e-4, 0);
        assert!(matches!(e, Err(Error::CalibrationFailed(_))));
    }

    #[test]
    fn bound_ratio_flags_zero_hits() {
        let s = Scenario::new(k83(), &[c(30.0, 0.5)], &[1e-4]).unwrap().with_samples(2);
        let b = bound_ratio(&s).unwrap();
        assert!(b.low_sample);
        assert_eq!(b.ratio, 0.0);
        assert!(b.f > 0.0);
    }
}
