use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::{ExperimentConfig, ExperimentKind};
use super::output::{emit_results, Format, ResultRow};
use super::svg::{render_traces, Disc, RenderOptions};
use crate::error::{Error, Result};
use crate::estimator::{
    calibrate_c_hat, ghat_two_point, martingale_test, scaling_check, visit_sweep, with_workers, MARTINGALE_GUARD,
};
use crate::loewner::{hull_support, sample_driving, trace_curve, CurveTrace, DrivingPath};
use crate::math::{f_radii, green_one_point, pde_residual_1pt, Kappa, DEFAULT_C_HAT};
use crate::rng::{mix, sample_rng};

/// Environment variable that replaces the default output directory.
pub const OUTPUT_DIR_ENV: &str = "SLE_LAB_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "sle-lab-out";

const CALIBRATION_SALT: u64 = 1;
const GHAT_SALT: u64 = 2;
const GHAT_SWAP_SALT: u64 = 3;
const RENDER_SALT: u64 = 0x5E6;
const HULL_SALT: u64 = 0x4811;
const DEFAULT_HULL_TRACES: usize = 20;
const DEFAULT_HULL_T: f64 = 0.5;
const HULL_TEST_POINTS: usize = 100;
const DEFAULT_RENDER_TRACES: usize = 5;
/// Render traces use at most this many steps.
const RENDER_STEPS: f64 = 4000.0;

/// Curves saved next to a rendering, re-traced by `render`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceFile {
    pub paths: Vec<DrivingPath>,
    pub discs: Vec<Disc>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub rows: Vec<ResultRow>,
    pub summary: Value,
    pub csv: PathBuf,
    pub json: PathBuf,
    pub summary_path: PathBuf,
    pub svg: Option<PathBuf>,
    pub traces: Option<PathBuf>,
}

/// `output_dir` from the config, else the environment override, else the default.
pub fn output_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output_dir
        .clone()
        .or_else(|| std::env::var(OUTPUT_DIR_ENV).ok().filter(|s| !s.is_empty()))
        .unwrap_or_else(|| DEFAULT_OUTPUT_DIR.into())
        .into()
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    k: Kappa,
}

impl Ctx<'_> {
    fn row(&self, suffix: &str, points: &[Complex64], radii: &[f64], n: u64, seed: u64) -> ResultRow {
        let id = if suffix.is_empty() {
            self.cfg.experiment_id.clone()
        } else {
            format!("{}:{suffix}", self.cfg.experiment_id)
        };
        ResultRow {
            experiment_id: id,
            kappa: self.cfg.kappa,
            n_points: points.len(),
            points: points.iter().map(|z| [z.re, z.im]).collect(),
            radii: radii.to_vec(),
            n_samples: n,
            dt: self.cfg.dt,
            truncation_factor: self.cfg.truncation_factor,
            seed,
            raw_p: None,
            stderr: None,
            rescaled: None,
            ratio_to_f: None,
            wall_ms: None,
        }
    }

    fn wall(&self, since: Instant) -> Option<f64> {
        self.cfg.record_wall_time.then(|| since.elapsed().as_secs_f64() * 1e3)
    }

    fn c_hat(&self) -> f64 {
        self.cfg.c_hat.unwrap_or(DEFAULT_C_HAT)
    }
}

fn sweep(cx: &Ctx) -> Result<(Vec<ResultRow>, Value)> {
    let cfg = cx.cfg;
    let schedule = cfg.radius_schedule().expect("validated");
    let s = cfg.scenario(&schedule[0])?;
    let start = Instant::now();
    let est = visit_sweep(&s, &schedule)?;
    let wall = cx.wall(start);
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for (i, e) in est.iter().enumerate() {
        let f = f_radii(&cx.k, &s.config, &e.radii)?.value;
        let factor = s.rescale_factor(&e.radii);
        let p = e.unordered.mean;
        let mut row = cx.row(&format!("r{i}"), s.points(), &e.radii, s.n_samples, s.master_seed);
        row.raw_p = p;
        row.stderr = e.unordered.stderr;
        row.rescaled = p.map(|p| p * factor);
        row.ratio_to_f = p.map(|p| p / f);
        row.wall_ms = wall;
        rows.push(row);
        let ordered_sum: u64 = e.per_permutation.values().map(|g| g.n_hits).sum();
        entries.push(json!({
            "radii": e.radii,
            "hits": e.unordered.n_hits,
            "raw_p": p,
            "stderr": e.unordered.stderr,
            "rescaled": p.map(|p| p * factor),
            "rescaled_stderr": e.unordered.stderr.map(|s| s * factor),
            "F": f,
            "ratio_to_F": p.map(|p| p / f),
            "low_sample": e.unordered.n_hits == 0,
            "partition_identity": ordered_sum == e.unordered.n_hits,
            "ordered": e.per_permutation.iter().map(|(perm, g)| json!({
                "order": perm,
                "hits": g.n_hits,
                "rescaled": g.mean.map(|m| m * factor),
            })).collect::<Vec<_>>(),
        }));
    }
    Ok((rows, json!({ "levels": entries })))
}

fn martingale(cx: &Ctx) -> Result<(Vec<ResultRow>, Value)> {
    let cfg = cx.cfg;
    let z = cfg.complex_points()[0];
    let times = cfg.times.clone().expect("validated");
    let start = Instant::now();
    let res = martingale_test(&cx.k, cx.c_hat(), z, &times, cfg.n_samples, cfg.dt, cfg.master_seed)?;
    let wall = cx.wall(start);
    let guard = MARTINGALE_GUARD * z.im;
    let rows = res
        .iter()
        .map(|m| {
            let mut row = cx.row(&format!("t={}", m.t), &[z], &[guard], cfg.n_samples, cfg.master_seed);
            row.raw_p = Some(m.ratio);
            row.stderr = Some(m.stderr);
            row.wall_ms = wall;
            row
        })
        .collect();
    Ok((rows, json!({ "guard_radius": guard, "ratios": res })))
}

fn ghat_crosscheck(cx: &Ctx) -> Result<(Vec<ResultRow>, Value)> {
    let cfg = cx.cfg;
    let pts = cfg.complex_points();
    let (z1, z2) = (pts[0], pts[1]);
    let radii = cfg.radius_schedule().expect("validated")[0].clone();
    let rho = cfg.rho.expect("validated");
    let n = cfg.n_samples;
    let mut rows = Vec::new();

    let start = Instant::now();
    let (c_hat, c_hat_se) = match cfg.c_hat {
        Some(c) => (c, 0.0),
        None => {
            let seed = mix(cfg.master_seed, CALIBRATION_SALT);
            let c = calibrate_c_hat(cx.k, z1, radii[0], n, cfg.dt, seed)?;
            let mut row = cx.row("calibration", &[z1], &radii[..1], n, seed);
            row.rescaled = Some(c.value);
            row.stderr = Some(c.stderr);
            row.wall_ms = cx.wall(start);
            rows.push(row);
            (c.value, c.stderr)
        }
    };

    let start = Instant::now();
    let s = cfg.scenario(&radii)?;
    let direct = visit_sweep(&s, std::slice::from_ref(&radii))?.remove(0);
    let factor = s.rescale_factor(&radii);
    let wall = cx.wall(start);
    let ordered = &direct.per_permutation[&vec![0, 1]];
    let swapped = &direct.per_permutation[&vec![1, 0]];
    for (name, g) in [("ordered_12", ordered), ("ordered_21", swapped), ("unordered", &direct.unordered)] {
        let mut row = cx.row(name, &pts, &radii, n, cfg.master_seed);
        row.raw_p = g.mean;
        row.stderr = g.stderr;
        row.rescaled = g.mean.map(|m| m * factor);
        row.wall_ms = wall;
        rows.push(row);
    }

    let mut ghat = Vec::new();
    for (name, a, b, salt) in [("ghat_12", z1, z2, GHAT_SALT), ("ghat_21", z2, z1, GHAT_SWAP_SALT)] {
        let start = Instant::now();
        let seed = mix(cfg.master_seed, salt);
        let g = ghat_two_point(&cx.k, c_hat, a, b, rho, n, cfg.dt, seed)?;
        let mut row = cx.row(name, &[a, b], &[rho], n, seed);
        row.rescaled = g.mean;
        row.stderr = g.stderr;
        row.wall_ms = cx.wall(start);
        rows.push(row);
        ghat.push(g);
    }
    let direct_12 = ordered.mean.map(|m| m * factor);
    let direct_12_se = ordered.stderr.map(|s| s * factor);
    let summary = json!({
        "c_hat": c_hat,
        "c_hat_stderr": c_hat_se,
        "rho": rho,
        "direct_ordered_12": direct_12,
        "direct_ordered_12_stderr": direct_12_se,
        "direct_unordered": direct.unordered.mean.map(|m| m * factor),
        "direct_unordered_stderr": direct.unordered.stderr.map(|s| s * factor),
        "ghat_12": ghat[0].mean,
        "ghat_12_stderr": ghat[0].stderr,
        "ghat_21": ghat[1].mean,
        "ghat_21_stderr": ghat[1].stderr,
        "ratio_ghat_to_direct": ghat[0].mean.zip(direct_12).map(|(g, d)| g / d),
    });
    Ok((rows, summary))
}

fn scaling(cx: &Ctx) -> Result<(Vec<ResultRow>, Value)> {
    let cfg = cx.cfg;
    let radii = cfg.radius_schedule().expect("validated")[0].clone();
    let lambda = cfg.lambda.expect("validated");
    let s = cfg.scenario(&radii)?;
    let start = Instant::now();
    let (a, b) = scaling_check(&s, lambda)?;
    let wall = cx.wall(start);
    let mut base = cx.row("base", s.points(), &radii, s.n_samples, s.master_seed);
    base.raw_p = a.mean;
    base.stderr = a.stderr;
    base.wall_ms = wall;
    let pts: Vec<Complex64> = s.points().iter().map(|z| z * lambda).collect();
    let rad: Vec<f64> = radii.iter().map(|r| r * lambda).collect();
    let mut scaled = cx.row("scaled", &pts, &rad, s.n_samples, mix(s.master_seed, 0x5CA1E));
    scaled.dt = cfg.dt * lambda * lambda;
    scaled.raw_p = b.mean;
    scaled.stderr = b.stderr;
    scaled.wall_ms = wall;
    let combined = (a.stderr_or_zero().powi(2) + b.stderr_or_zero().powi(2)).sqrt();
    let diff = a.mean.zip(b.mean).map(|(x, y)| (x - y).abs());
    let summary = json!({
        "lambda": lambda,
        "p_base": a.mean,
        "p_scaled": b.mean,
        "abs_difference": diff,
        "combined_stderr": combined,
    });
    Ok((vec![base, scaled], summary))
}

fn pde_check(cx: &Ctx) -> Result<(Vec<ResultRow>, Value)> {
    let cfg = cx.cfg;
    let step = cfg.step.unwrap_or(1e-4);
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for (i, z) in cfg.complex_points().into_iter().enumerate() {
        let start = Instant::now();
        let g = green_one_point(&cx.k, cx.c_hat(), z)?.value;
        let res = pde_residual_1pt(&cx.k, cx.c_hat(), z, step)?;
        let mut row = cx.row(&format!("z{i}"), &[z], &[], 0, cfg.master_seed);
        row.rescaled = Some(g);
        row.wall_ms = cx.wall(start);
        rows.push(row);
        out.push(json!({ "point": [z.re, z.im], "G": g, "residual": res, "relative_residual": (res / g).abs() }));
    }
    Ok((rows, json!({ "step": step, "points": out })))
}

/// Bounds for maps of hulls inside a semi-disc, checked on one trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HullCheck {
    pub rho: f64,
    /// `hcap / ρ²`, at most 1.
    pub capacity_ratio: f64,
    /// `max |g(z) - z| / (3ρ)` over points outside the hull.
    pub displacement_ratio: f64,
    /// `max |g(z) - z| / (2|z - x₀| (ρ/|z - x₀|)²)` over `|z - x₀| >= 5ρ`.
    pub far_displacement_ratio: f64,
    /// `max |Im g(z) - Im z| / (Im z · 4 (ρ/|z - x₀|)²)` over `|z - x₀| >= 5ρ`.
    pub far_height_ratio: f64,
    /// `max |g'(z) - 1| / (5 (ρ/|z - x₀|)²)` over `|z - x₀| >= 5ρ`.
    pub far_derivative_ratio: f64,
    pub support_contains_driving: bool,
    pub points_tested: usize,
}

/// Checks the hull-map bounds on `trace` at its final time, with `ρ` the
/// largest tip distance from `x₀ = 0` enlarged by 2% to cover the hull
/// between tips.
pub fn hull_check(trace: &CurveTrace, n_points: usize, seed: u64) -> Result<HullCheck> {
    let t = trace.duration();
    let rho = 1.02 * trace.hull_radius(t);
    let mut rng = sample_rng(seed, 0);
    let mut c = HullCheck {
        rho,
        capacity_ratio: 2.0 * t / (rho * rho),
        displacement_ratio: 0.0,
        far_displacement_ratio: 0.0,
        far_height_ratio: 0.0,
        far_derivative_ratio: 0.0,
        support_contains_driving: false,
        points_tested: 0,
    };
    let mut tested = 0;
    while tested < n_points {
        let theta = std::f64::consts::PI * rng.random_range(0.01..0.99);
        let near = rng.random_range(1.05..10.0) * rho;
        let far = rng.random_range(5.0..25.0) * rho;
        let zn = Complex64::from_polar(near, theta);
        let zf = Complex64::from_polar(far, theta);
        let sn = trace.evolve_point(zn, t)?;
        let sf = trace.evolve_point(zf, t)?;
        if sn.swallowed || sf.swallowed {
            continue;
        }
        tested += 1;
        c.displacement_ratio = c.displacement_ratio.max((sn.g - zn).norm() / (3.0 * rho));
        let q = (rho / far).powi(2);
        c.far_displacement_ratio = c.far_displacement_ratio.max((sf.g - zf).norm() / (2.0 * far * q));
        c.far_height_ratio = c.far_height_ratio.max((sf.g.im - zf.im).abs() / (zf.im * 4.0 * q));
        c.far_derivative_ratio = c.far_derivative_ratio.max((sf.gprime - 1.0).norm() / (5.0 * q));
    }
    c.points_tested = tested;
    let path = trace.driving();
    c.support_contains_driving = hull_support(trace, t)?.contains(path.value(path.n_steps()));
    Ok(c)
}

fn hull_checks(cx: &Ctx) -> Result<(Vec<ResultRow>, Value)> {
    let cfg = cx.cfg;
    let t = cfg.t_max.unwrap_or(DEFAULT_HULL_T);
    let n = cfg.n_traces.unwrap_or(DEFAULT_HULL_TRACES);
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for i in 0..n as u64 {
        let start = Instant::now();
        let seed = mix(cfg.master_seed, HULL_SALT + i);
        let tr = trace_curve(&sample_driving(cx.k, t, cfg.dt, seed)?);
        let c = hull_check(&tr, HULL_TEST_POINTS, seed)?;
        let mut row = cx.row(&format!("trace{i}"), &[], &[c.rho], c.points_tested as u64, seed);
        row.wall_ms = cx.wall(start);
        rows.push(row);
        checks.push(c);
    }
    let worst = |f: fn(&HullCheck) -> f64| checks.iter().map(f).fold(0.0, f64::max);
    let summary = json!({
        "t": t,
        "traces": checks,
        "max_capacity_ratio": worst(|c| c.capacity_ratio),
        "max_displacement_ratio": worst(|c| c.displacement_ratio),
        "max_far_displacement_ratio": worst(|c| c.far_displacement_ratio),
        "max_far_height_ratio": worst(|c| c.far_height_ratio),
        "max_far_derivative_ratio": worst(|c| c.far_derivative_ratio),
        "support_contains_driving": checks.iter().all(|c| c.support_contains_driving),
    });
    Ok((rows, summary))
}

/// Rows and summary for a validated config, on the current thread pool.
pub fn compute(cfg: &ExperimentConfig) -> Result<(Vec<ResultRow>, Value)> {
    cfg.check()?;
    let cx = Ctx { cfg, k: Kappa::new(cfg.kappa)? };
    match cfg.kind {
        ExperimentKind::OnePointConvergence | ExperimentKind::TwoPointBounds => sweep(&cx),
        ExperimentKind::Martingale => martingale(&cx),
        ExperimentKind::GhatCrosscheck => ghat_crosscheck(&cx),
        ExperimentKind::Scaling => scaling(&cx),
        ExperimentKind::PdeCheck => pde_check(&cx),
        ExperimentKind::HullChecks => hull_checks(&cx),
    }
}

fn render_paths(cfg: &ExperimentConfig, k: Kappa) -> Result<TraceFile> {
    let pts = cfg.complex_points();
    let rmax = pts.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let t = cfg.t_max.unwrap_or(if rmax > 0.0 { 2.0 * rmax * rmax } else { DEFAULT_HULL_T });
    let dt = cfg.dt.max(t / RENDER_STEPS);
    let n = cfg.n_traces.unwrap_or(DEFAULT_RENDER_TRACES);
    let paths = (0..n as u64)
        .map(|i| sample_driving(k, t, dt, mix(cfg.master_seed, RENDER_SALT + i)))
        .collect::<Result<Vec<_>>>()?;
    let radii = cfg.radius_schedule().and_then(|s| s.first().cloned()).unwrap_or_default();
    let discs = pts
        .iter()
        .zip(radii.iter().chain(std::iter::repeat(&0.0)))
        .filter(|(_, r)| **r > 0.0)
        .map(|(z, r)| Disc { center: [z.re, z.im], radius: *r })
        .collect();
    Ok(TraceFile { paths, discs })
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Runs the experiment on a pool of `cfg.workers` threads and writes
/// `<id>.csv`, `<id>.json` and `<id>.summary.json` (plus `<id>.svg` and
/// `<id>.traces.json` when rendering) into [`output_dir`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.check()?;
    let dir = output_dir(cfg);
    std::fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let start = Instant::now();
    let (rows, results) = with_workers(cfg.workers, || compute(cfg))??;
    let id = &cfg.experiment_id;
    let csv = dir.join(format!("{id}.csv"));
    let json_path = dir.join(format!("{id}.json"));
    emit_results(&rows, Format::Csv, &csv)?;
    emit_results(&rows, Format::Json, &json_path)?;

    let (mut svg, mut traces) = (None, None);
    if cfg.render {
        let file = render_paths(cfg, Kappa::new(cfg.kappa)?)?;
        let tr_path = dir.join(format!("{id}.traces.json"));
        write(&tr_path, &serde_json::to_string(&file).map_err(|e| Error::Io(e.to_string()))?)?;
        let svg_path = dir.join(format!("{id}.svg"));
        render_trace_file(&tr_path, &svg_path, &RenderOptions::default())?;
        svg = Some(svg_path);
        traces = Some(tr_path);
    }

    let mut summary = json!({
        "experiment_id": id,
        "kind": cfg.kind,
        "config": cfg,
        "rows": rows.len(),
        "results": results,
    });
    if cfg.record_wall_time {
        summary["wall_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
    }
    let summary_path = dir.join(format!("{id}.summary.json"));
    write(&summary_path, &(serde_json::to_string_pretty(&summary).expect("json value") + "\n"))?;
    Ok(RunReport { rows, summary, csv, json: json_path, summary_path, svg, traces })
}

/// Re-traces the curves of a trace file and renders them to `out`.
pub fn render_trace_file(input: &Path, out: &Path, opts: &RenderOptions) -> Result<()> {
    let text = std::fs::read_to_string(input).map_err(|e| Error::Io(format!("{}: {e}", input.display())))?;
    let file: TraceFile =
        serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", input.display())))?;
    let traces = file
        .paths
        .into_iter()
        .map(|p| {
            let checked = DrivingPath::from_grid(p.kappa, p.seed, p.dt, p.times, p.u)?;
            Ok(trace_curve(&checked.shifted(p.origin)))
        })
        .collect::<Result<Vec<_>>>()?;
    render_traces(&traces, &file.discs, out, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_point(dir: &Path) -> ExperimentConfig {
        let mut c = ExperimentConfig::new("conv", ExperimentKind::OnePointConvergence, 8.0 / 3.0);
        c.points = vec![[0.0, 1.0]];
        c.schedule = Some(vec![vec![0.4], vec![0.2], vec![0.1]]);
        c.n_samples = 200;
        c.output_dir = Some(dir.to_string_lossy().into_owned());
        c
    }

    #[test]
    fn sweep_writes_three_rows_and_summary() {
        let dir = tempfile::tempdir().unwrap();
        let rep = run_experiment(&one_point(dir.path())).unwrap();
        let csv = std::fs::read_to_string(&rep.csv).unwrap();
        assert_eq!(csv.lines().count(), 4);
        assert!(rep.summary_path.exists());
        assert_eq!(rep.summary["results"]["levels"].as_array().unwrap().len(), 3);
        let p: Vec<f64> = rep.rows.iter().map(|r| r.raw_p.unwrap()).collect();
        assert!(p[0] >= p[1] && p[1] >= p[2]);
    }

    #[test]
    fn same_config_same_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = one_point(dir.path());
        c.record_wall_time = false;
        let a = std::fs::read(run_experiment(&c).unwrap().csv).unwrap();
        c.workers = 3;
        let b = std::fs::read(run_experiment(&c).unwrap().csv).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn kappa_nine_fails_before_running() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = one_point(dir.path());
        c.kappa = 9.0;
        let e = run_experiment(&c).unwrap_err();
        assert!(e.to_string().contains("kappa"));
        assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none());
    }

    #[test]
    fn render_writes_svg_and_trace_file() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = one_point(dir.path());
        c.n_samples = 10;
        c.render = true;
        c.n_traces = Some(2);
        let rep = run_experiment(&c).unwrap();
        let svg = std::fs::read_to_string(rep.svg.unwrap()).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 1);
        let again = dir.path().join("again.svg");
        render_trace_file(&rep.traces.unwrap(), &again, &RenderOptions::default()).unwrap();
        assert_eq!(std::fs::read_to_string(again).unwrap(), svg);
    }

    #[test]
    fn pde_rows() {
        let mut c = ExperimentConfig::new("pde", ExperimentKind::PdeCheck, 2.0);
        c.points = vec![[0.5, 1.0], [-1.0, 2.0]];
        let (rows, v) = compute(&c).unwrap();
        assert_eq!(rows.len(), 2);
        for p in v["points"].as_array().unwrap() {
            assert!(p["relative_residual"].as_f64().unwrap() < 1e-5);
        }
    }

    #[test]
    fn hull_check_on_a_small_trace() {
        let k = Kappa::new(8.0 / 3.0).unwrap();
        let tr = trace_curve(&sample_driving(k, 0.2, 1e-3, 4).unwrap());
        let c = hull_check(&tr, 20, 1).unwrap();
        assert_eq!(c.points_tested, 20);
        assert!(c.capacity_ratio <= 1.0);
        assert!(c.displacement_ratio <= 1.0);
        assert!(c.support_contains_driving);
    }

    #[test]
    fn env_var_sets_default_dir_only() {
        let mut c = ExperimentConfig::new("x", ExperimentKind::PdeCheck, 2.0);
        c.output_dir = Some("explicit".into());
        assert_eq!(output_dir(&c), PathBuf::from("explicit"));
    }
}
