//! Experiment configuration, runs, result tables and SVG rendering.

mod config;
mod output;
mod run;
mod svg;

pub use config::{ExperimentConfig, ExperimentKind, FieldError};
pub use output::{emit_results, fmt12, read_json_rows, rows_to_csv, Format, ResultRow, CSV_COLUMNS};
pub use run::{
    compute, hull_check, output_dir, render_trace_file, run_experiment, HullCheck, RunReport, TraceFile,
    DEFAULT_OUTPUT_DIR, OUTPUT_DIR_ENV,
};
pub use svg::{render_svg, render_traces, Disc, RenderOptions};
