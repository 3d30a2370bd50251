use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{Scenario, DEFAULT_DT, DEFAULT_REL_STEP, DEFAULT_SAMPLES, DEFAULT_TRUNCATION};
use crate::math::{Kappa, PointConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    OnePointConvergence,
    TwoPointBounds,
    Martingale,
    GhatCrosscheck,
    Scaling,
    PdeCheck,
    HullChecks,
}

/// One experiment, read from a single JSON document. Unknown fields are
/// rejected so that a misspelt option cannot silently fall back to a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment_id: String,
    pub kind: ExperimentKind,
    pub kappa: f64,
    /// Marked points as `[re, im]`.
    #[serde(default)]
    pub points: Vec<[f64; 2]>,
    #[serde(default)]
    pub radii: Option<Vec<f64>>,
    /// Decreasing list of radius vectors; overrides `radii` for sweeps.
    #[serde(default)]
    pub schedule: Option<Vec<Vec<f64>>>,
    #[serde(default = "default_samples")]
    pub n_samples: u64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_rel_step")]
    pub rel_step: f64,
    #[serde(default = "default_truncation")]
    pub truncation_factor: f64,
    /// Normalisation of `G`; calibrated by Monte Carlo when absent.
    #[serde(default)]
    pub c_hat: Option<f64>,
    #[serde(default)]
    pub master_seed: u64,
    /// Worker threads; 0 uses every core.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub output_dir: Option<String>,
    /// Evaluation times of the martingale test.
    #[serde(default)]
    pub times: Option<Vec<f64>>,
    /// Scale factor of the scaling test.
    #[serde(default)]
    pub lambda: Option<f64>,
    /// Stop radius around the first point for the importance-sampled estimate.
    #[serde(default)]
    pub rho: Option<f64>,
    /// Finite-difference step of the PDE check.
    #[serde(default)]
    pub step: Option<f64>,
    /// Number of curves for hull checks and rendering.
    #[serde(default)]
    pub n_traces: Option<usize>,
    /// Curve duration for hull checks and rendering.
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default)]
    pub render: bool,
    /// Write `wall_ms`; switch off for byte-comparable tables.
    #[serde(default = "yes")]
    pub record_wall_time: bool,
}

fn default_samples() -> u64 {
    DEFAULT_SAMPLES
}
fn default_dt() -> f64 {
    DEFAULT_DT
}
fn default_rel_step() -> f64 {
    DEFAULT_REL_STEP
}
fn default_truncation() -> f64 {
    DEFAULT_TRUNCATION
}
fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

fn fe(field: &str, message: impl Into<String>) -> FieldError {
    FieldError { field: field.into(), message: message.into() }
}

impl ExperimentConfig {
    /// A config with every optional field at its default.
    pub fn new(experiment_id: &str, kind: ExperimentKind, kappa: f64) -> Self {
        ExperimentConfig {
            experiment_id: experiment_id.into(),
            kind,
            kappa,
            points: Vec::new(),
            radii: None,
            schedule: None,
            n_samples: DEFAULT_SAMPLES,
            dt: DEFAULT_DT,
            rel_step: DEFAULT_REL_STEP,
            truncation_factor: DEFAULT_TRUNCATION,
            c_hat: None,
            master_seed: 0,
            workers: 0,
            output_dir: None,
            times: None,
            lambda: None,
            rho: None,
            step: None,
            n_traces: None,
            t_max: None,
            render: false,
            record_wall_time: true,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfiguration(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn complex_points(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| Complex64::new(p[0], p[1])).collect()
    }

    /// The radius schedule: `schedule` if given, otherwise `[radii]`.
    pub fn radius_schedule(&self) -> Option<Vec<Vec<f64>>> {
        self.schedule.clone().or_else(|| self.radii.clone().map(|r| vec![r]))
    }

    /// Every problem with the config, each tied to a field name.
    pub fn validate(&self) -> Vec<FieldError> {
        let mut errs = Vec::new();
        if self.experiment_id.is_empty()
            || !self.experiment_id.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
        {
            errs.push(fe("experiment_id", "must be non-empty and use only [A-Za-z0-9._-]"));
        }
        let kappa = Kappa::new(self.kappa);
        if kappa.is_err() {
            errs.push(fe(
                "kappa",
                format!("must satisfy 0 < kappa < 8 (the curve is space-filling from 8 on), got {}", self.kappa),
            ));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            errs.push(fe("dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.rel_step > 0.0 && self.rel_step <= 1.0) {
            errs.push(fe("rel_step", format!("must lie in (0, 1], got {}", self.rel_step)));
        }
        if !(self.truncation_factor.is_finite() && self.truncation_factor >= 2.0) {
            errs.push(fe("truncation_factor", format!("must be at least 2, got {}", self.truncation_factor)));
        }
        if let Some(c) = self.c_hat {
            if !(c.is_finite() && c > 0.0) {
                errs.push(fe("c_hat", format!("must be positive, got {c}")));
            }
        }
        for (i, p) in self.points.iter().enumerate() {
            if !(p[0].is_finite() && p[1].is_finite() && p[1] > 0.0) {
                errs.push(fe(&format!("points[{i}]"), format!("must be finite with im > 0, got {p:?}")));
            }
        }
        let cfg = if self.points.is_empty() || errs.iter().any(|e| e.field.starts_with("points")) {
            None
        } else {
            match PointConfig::new(&self.complex_points()) {
                Ok(c) => Some(c),
                Err(e) => {
                    errs.push(fe("points", e.to_string()));
                    None
                }
            }
        };

        let need_points = |errs: &mut Vec<FieldError>, n: Option<usize>| match (n, self.points.len()) {
            (_, 0) => errs.push(fe("points", "at least one point is required")),
            (Some(n), m) if n != m => errs.push(fe("points", format!("exactly {n} points are required, got {m}"))),
            _ => {}
        };
        let check_schedule = |errs: &mut Vec<FieldError>| {
            let Some(schedule) = self.radius_schedule() else {
                errs.push(fe("radii", "radii or schedule is required"));
                return;
            };
            let field = if self.schedule.is_some() { "schedule" } else { "radii" };
            if schedule.is_empty() {
                errs.push(fe(field, "must not be empty"));
            }
            if let Some(cfg) = &cfg {
                for (i, radii) in schedule.iter().enumerate() {
                    if radii.len() != cfg.len() {
                        errs.push(fe(&format!("{field}[{i}]"), format!("needs {} radii, got {}", cfg.len(), radii.len())));
                        continue;
                    }
                    for (k, (&r, &d)) in radii.iter().zip(cfg.dmin()).enumerate() {
                        if !(r > 0.0 && r < d) {
                            errs.push(fe(
                                &format!("{field}[{i}][{k}]"),
                                format!("must lie in (0, {d}) (distance to the nearest other point or 0), got {r}"),
                            ));
                        }
                    }
                }
            }
            for (i, pair) in schedule.windows(2).enumerate() {
                if pair[1].len() == pair[0].len() && pair[1].iter().zip(&pair[0]).any(|(b, a)| b > a) {
                    errs.push(fe(&format!("schedule[{}]", i + 1), "radii must not increase along the schedule"));
                }
            }
        };

        match self.kind {
            ExperimentKind::OnePointConvergence | ExperimentKind::TwoPointBounds => {
                need_points(&mut errs, None);
                check_schedule(&mut errs);
            }
            ExperimentKind::Scaling => {
                need_points(&mut errs, None);
                check_schedule(&mut errs);
                match self.lambda {
                    Some(l) if l.is_finite() && l > 0.0 => {}
                    Some(l) => errs.push(fe("lambda", format!("must be positive, got {l}"))),
                    None => errs.push(fe("lambda", "is required for scaling")),
                }
            }
            ExperimentKind::Martingale => {
                need_points(&mut errs, Some(1));
                match &self.times {
                    Some(t) if !t.is_empty() && t.iter().all(|t| t.is_finite() && *t >= 0.0) => {}
                    Some(_) => errs.push(fe("times", "must be a non-empty list of times >= 0")),
                    None => errs.push(fe("times", "is required for the martingale test")),
                }
            }
            ExperimentKind::GhatCrosscheck => {
                need_points(&mut errs, Some(2));
                check_schedule(&mut errs);
                if let Some(cfg) = &cfg {
                    let limit = cfg.dmin()[0];
                    match self.rho {
                        Some(r) if r > 0.0 && r < limit => {}
                        Some(r) => errs.push(fe("rho", format!("must lie in (0, {limit}), got {r}"))),
                        None => errs.push(fe("rho", "is required for ghat_crosscheck")),
                    }
                    if let Some(r) = self.radius_schedule().and_then(|s| s.first().cloned()) {
                        if r.len() == 2 && r[0] >= cfg.y()[0] {
                            errs.push(fe("radii[0]", "must be below Im of the first point for calibration"));
                        }
                    }
                }
            }
            ExperimentKind::PdeCheck => {
                need_points(&mut errs, None);
                let h = self.step.unwrap_or(1e-4);
                if !(h > 0.0) {
                    errs.push(fe("step", format!("must be positive, got {h}")));
                }
                for (i, p) in self.points.iter().enumerate() {
                    if p[1] <= h {
                        errs.push(fe(&format!("points[{i}]"), format!("needs im > step = {h}")));
                    }
                }
            }
            ExperimentKind::HullChecks => {
                if let Some(t) = self.t_max {
                    if !(t.is_finite() && t > 0.0) {
                        errs.push(fe("t_max", format!("must be positive, got {t}")));
                    } else if self.dt > t {
                        errs.push(fe("dt", "must not exceed t_max"));
                    }
                }
                if self.n_traces == Some(0) {
                    errs.push(fe("n_traces", "must be positive"));
                }
            }
        }
        if self.render && self.kind != ExperimentKind::HullChecks && self.points.is_empty() {
            errs.push(fe("render", "rendering needs points to frame the picture"));
        }
        errs
    }

    /// Fails with every field error joined into one message.
    pub fn check(&self) -> Result<()> {
        let errs = self.validate();
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfiguration(
                errs.iter().map(|e| format!("{}: {}", e.field, e.message)).collect::<Vec<_>>().join("; "),
            ))
        }
    }

    /// The Monte Carlo scenario at `radii`.
    pub fn scenario(&self, radii: &[f64]) -> Result<Scenario> {
        let k = Kappa::new(self.kappa)?;
        Ok(Scenario::new(k, &self.complex_points(), radii)?
            .with_samples(self.n_samples)
            .with_dt(self.dt)
            .with_rel_step(self.rel_step)
            .with_truncation(self.truncation_factor)
            .with_seed(self.master_seed))
    }
}
