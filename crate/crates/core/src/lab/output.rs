use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CSV_COLUMNS: [&str; 14] = [
    "experiment_id",
    "kappa",
    "n_points",
    "points",
    "radii",
    "n_samples",
    "dt",
    "truncation_factor",
    "seed",
    "raw_p",
    "stderr",
    "rescaled",
    "ratio_to_F",
    "wall_ms",
];

/// One line of a result table. Estimate fields that do not apply to an
/// experiment are left empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment_id: String,
    pub kappa: f64,
    pub n_points: usize,
    pub points: Vec<[f64; 2]>,
    pub radii: Vec<f64>,
    pub n_samples: u64,
    pub dt: f64,
    pub truncation_factor: f64,
    pub seed: u64,
    pub raw_p: Option<f64>,
    pub stderr: Option<f64>,
    pub rescaled: Option<f64>,
    #[serde(rename = "ratio_to_F")]
    pub ratio_to_f: Option<f64>,
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

/// `x` with 12 significant digits, in plain notation for moderate
/// magnitudes and scientific notation otherwise.
pub fn fmt12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let a = rounded.abs();
    if (1e-4..1e12).contains(&a) {
        rounded.to_string()
    } else {
        let s = format!("{rounded:.11e}");
        let (mantissa, exp) = s.split_once('e').expect("scientific notation");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exp}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt12).unwrap_or_default()
}

impl ResultRow {
    fn csv_record(&self) -> Vec<String> {
        let points = self
            .points
            .iter()
            .map(|p| format!("({},{})", fmt12(p[0]), fmt12(p[1])))
            .collect::<Vec<_>>()
            .join(";");
        let radii = self.radii.iter().map(|r| fmt12(*r)).collect::<Vec<_>>().join(";");
        vec![
            self.experiment_id.clone(),
            fmt12(self.kappa),
            self.n_points.to_string(),
            points,
            radii,
            self.n_samples.to_string(),
            fmt12(self.dt),
            fmt12(self.truncation_factor),
            self.seed.to_string(),
            opt(self.raw_p),
            opt(self.stderr),
            opt(self.rescaled),
            opt(self.ratio_to_f),
            opt(self.wall_ms),
        ]
    }
}

pub fn rows_to_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.csv_record()).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes `rows` to `path`. JSON keeps full precision so it reads back exactly.
pub fn emit_results(rows: &[ResultRow], format: Format, path: &Path) -> Result<()> {
    let text = match format {
        Format::Csv => rows_to_csv(rows)?,
        Format::Json => serde_json::to_string_pretty(rows).map_err(|e| Error::Io(e.to_string()))? + "\n",
    };
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_json_rows(path: &Path) -> Result<Vec<ResultRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> ResultRow {
        ResultRow {
            experiment_id: "x".into(),
            kappa: 8.0 / 3.0,
            n_points: 2,
            points: vec![[0.0, 1.0], [1.0, 1.0]],
            radii: vec![0.1, 0.1],
            n_samples: 1000,
            dt: 2.5e-5,
            truncation_factor: 20.0,
            seed: 7,
            raw_p: Some(0.123456789012345),
            stderr: Some(1.0 / 3.0 * 1e-3),
            rescaled: None,
            ratio_to_f: Some(2.0),
            wall_ms: None,
        }
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt12(8.0 / 3.0), "2.66666666667");
        assert_eq!(fmt12(0.1), "0.1");
        assert_eq!(fmt12(2.5e-5), "2.5e-5");
        assert_eq!(fmt12(-1.0 / 3.0 * 1e-7), "-3.33333333333e-8");
        assert_eq!(fmt12(20.0), "20");
        assert_eq!(fmt12(0.0), "0");
    }

    #[test]
    fn header_and_column_order() {
        let csv = rows_to_csv(&[]).unwrap();
        assert_eq!(csv.lines().count(), 1);
        assert_eq!(csv.trim_end(), CSV_COLUMNS.join(","));
        let csv = rows_to_csv(&[row()]).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[1],
            "x,2.66666666667,2,\"(0,1);(1,1)\",0.1;0.1,1000,2.5e-5,20,7,0.123456789012,0.000333333333333,,2,"
        );
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("rows.json");
        let rows = vec![row(), ResultRow { experiment_id: "y".into(), wall_ms: Some(3.5), ..row() }];
        emit_results(&rows, Format::Json, &p).unwrap();
        assert_eq!(read_json_rows(&p).unwrap(), rows);
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.contains("\"ratio_to_F\""));
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let e = emit_results(&[], Format::Csv, Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(matches!(e, Error::Io(_)));
    }
}
