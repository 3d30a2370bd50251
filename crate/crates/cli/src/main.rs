//! `sle-lab`: run, validate and render SLE experiments.
//!
//! Failures are reported on stderr as one JSON object
//! `{"error": <kind>, "message": ..., "fields": [...]}`; the exit status is 2
//! for an invalid config and 1 for anything else.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use sle_lab::lab::{self, ExperimentConfig, FieldError, RenderOptions};
use sle_lab::Error;

#[derive(Parser)]
#[command(name = "sle-lab", version, about = "Chordal SLE Monte Carlo laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Replaces `master_seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Replaces `workers` (0 uses every core).
        #[arg(long)]
        workers: Option<usize>,
        /// Replaces `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a `.traces.json` file written by `run` to SVG.
    Render {
        trace_file: PathBuf,
        /// Output file; defaults to the input with an `.svg` extension.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 2000)]
        max_points: usize,
    },
    /// Check a config without running it.
    Validate {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Invalid(Vec<FieldError>),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::InvalidConfiguration(_) => "invalid_configuration",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::BoundaryPoint(_) => "boundary_point",
        Error::Singular(_) => "singular",
        Error::Precondition(_) => "precondition",
        Error::CalibrationFailed(_) => "calibration_failed",
        Error::Io(_) => "io",
    }
}

fn load(path: &Path, seed: Option<u64>, workers: Option<usize>, out: Option<PathBuf>) -> Result<ExperimentConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    if let Some(w) = workers {
        cfg.workers = w;
    }
    if let Some(o) = out {
        cfg.output_dir = Some(o.to_string_lossy().into_owned());
    }
    let errs = cfg.validate();
    if errs.is_empty() {
        Ok(cfg)
    } else {
        Err(Failure::Invalid(errs))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Run { config, seed, workers, out } => {
            let cfg = load(&config, seed, workers, out)?;
            let rep = lab::run_experiment(&cfg)?;
            let mut files = vec![rep.csv, rep.json, rep.summary_path];
            files.extend(rep.svg);
            files.extend(rep.traces);
            for f in files {
                println!("{}", f.display());
            }
        }
        Cmd::Render { trace_file, out, max_points } => {
            let out = out.unwrap_or_else(|| {
                let name = trace_file.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                let stem = name.strip_suffix(".traces.json").or_else(|| name.strip_suffix(".json")).unwrap_or(&name);
                trace_file.with_file_name(format!("{stem}.svg"))
            });
            let opts = RenderOptions { max_points_per_trace: max_points, ..Default::default() };
            lab::render_trace_file(&trace_file, &out, &opts)?;
            println!("{}", out.display());
        }
        Cmd::Validate { config, seed, workers, out } => {
            let cfg = load(&config, seed, workers, out)?;
            println!("{}", json!({ "valid": true, "experiment_id": cfg.experiment_id, "kind": cfg.kind }));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(fields)) => {
            let report = json!({
                "error": "invalid_configuration",
                "message": fields.iter().map(|e| format!("{}: {}", e.field, e.message)).collect::<Vec<_>>().join("; "),
                "fields": fields,
            });
            eprintln!("{report}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            let code = if matches!(e, Error::InvalidConfiguration(_)) { 2 } else { 1 };
            eprintln!("{}", json!({ "error": kind(&e), "message": e.to_string(), "fields": [] }));
            ExitCode::from(code)
        }
    }
}
