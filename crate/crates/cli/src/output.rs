//! CSV and JSON emission. Both formats serialize the same records, so every
//! CSV cell parses back to the JSON value bit for bit.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use meanarc::estimators::{MeasureEstimate, SweepResult, SweepRow};

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub lambda: f64,
    pub area_ratio: f64,
    pub per_arc_mean: f64,
    pub per_arc_stderr: f64,
    pub per_traj_mean: f64,
    pub normalized_per_arc: f64,
    pub eq5: f64,
    pub eq3: f64,
    pub mazzolo: f64,
    pub n_intersecting: u64,
    pub n_contained: u64,
    pub n_covering: u64,
    pub n_disjoint: u64,
}

impl From<&SweepRow> for SweepRecord {
    fn from(r: &SweepRow) -> Self {
        SweepRecord {
            lambda: r.lambda,
            area_ratio: r.area_ratio,
            per_arc_mean: r.estimate.per_arc_mean,
            per_arc_stderr: r.estimate.per_arc_stderr,
            per_traj_mean: r.estimate.per_trajectory_mean,
            normalized_per_arc: r.estimate.normalized_per_arc,
            eq5: r.eq5,
            eq3: r.eq3,
            mazzolo: r.mazzolo,
            n_intersecting: r.estimate.intersecting_count,
            n_contained: r.estimate.contained_count,
            n_covering: r.estimate.covering_count,
            n_disjoint: r.estimate.disjoint_count,
        }
    }
}

pub fn sweep_records(result: &SweepResult) -> Vec<SweepRecord> {
    result.rows.iter().map(SweepRecord::from).collect()
}

/// Inputs that produced a result file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub command: crate::config::Command,
    pub domain: String,
    pub trajectory: String,
    pub samples: usize,
    pub seed: u64,
    pub streams: usize,
    pub window_scale: f64,
    pub eps_length: Option<f64>,
}

impl Metadata {
    pub fn of(config: &RunConfig) -> Self {
        Metadata {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: config.command,
            domain: config.domain.clone(),
            trajectory: config.trajectory.clone(),
            samples: config.samples,
            seed: config.seed,
            streams: config.streams,
            window_scale: config.window_scale,
            eps_length: config.eps_length,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub metadata: Metadata,
    pub rows: Vec<SweepRecord>,
}

pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv(text: &str) -> Result<Vec<SweepRecord>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    Skipped,
}

/// One line of the verification table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub quantity: String,
    pub expected: f64,
    pub estimate: Option<f64>,
    pub std_error: Option<f64>,
    pub z: Option<f64>,
    pub rel_error: Option<f64>,
    pub status: Status,
    pub note: Option<String>,
}

/// Rows with `|z|` above this fail.
pub const Z_LIMIT: f64 = 4.0;

impl VerifyRow {
    pub fn checked(quantity: &str, expected: f64, est: &MeasureEstimate) -> Self {
        let z = est.z_score(expected);
        let rel_error = if expected != 0.0 {
            Some((est.value - expected).abs() / expected.abs())
        } else {
            None
        };
        VerifyRow {
            quantity: quantity.to_string(),
            expected,
            estimate: Some(est.value),
            std_error: Some(est.std_error),
            z: Some(z),
            rel_error,
            status: if z.abs() > Z_LIMIT {
                Status::Fail
            } else {
                Status::Ok
            },
            note: None,
        }
    }

    pub fn skipped(quantity: &str, expected: f64, note: &str) -> Self {
        VerifyRow {
            quantity: quantity.to_string(),
            expected,
            estimate: None,
            std_error: None,
            z: None,
            rel_error: None,
            status: Status::Skipped,
            note: Some(note.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub metadata: Metadata,
    pub rows: Vec<VerifyRow>,
    pub passed: bool,
}

pub fn verify_table(rows: &[VerifyRow]) -> String {
    let mut out = format!(
        "{:<6} {:>14} {:>14} {:>12} {:>8} {:>10}  {}\n",
        "", "expected", "estimate", "std_error", "z", "rel_err", "status"
    );
    let cell = |v: Option<f64>, width: usize, prec: usize| match v {
        Some(v) => format!("{v:>width$.prec$}"),
        None => format!("{:>width$}", "-"),
    };
    for r in rows {
        let status = match r.status {
            Status::Ok => "ok".to_string(),
            Status::Fail => "FAIL".to_string(),
            Status::Skipped => format!("skipped ({})", r.note.as_deref().unwrap_or("")),
        };
        out.push_str(&format!(
            "{:<6} {:>14.6} {} {} {} {}  {}\n",
            r.quantity,
            r.expected,
            cell(r.estimate, 14, 6),
            cell(r.std_error, 12, 6),
            cell(r.z, 8, 2),
            cell(r.rel_error, 10, 6),
            status
        ));
    }
    out
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Config(format!("serializing {}: {e}", path.display())))?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(lambda: f64) -> SweepRecord {
        SweepRecord {
            lambda,
            area_ratio: lambda * lambda,
            per_arc_mean: 0.1 + lambda / 3.0,
            per_arc_stderr: 1e-3 / 7.0,
            per_traj_mean: 0.2,
            normalized_per_arc: 0.99,
            eq5: 0.3,
            eq3: std::f64::consts::FRAC_PI_2,
            mazzolo: 0.4,
            n_intersecting: 10,
            n_contained: 2,
            n_covering: 0,
            n_disjoint: 88,
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let rows = vec![record(0.1), record(1.0 / 3.0)];
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(
            "lambda,area_ratio,per_arc_mean,per_arc_stderr,per_traj_mean,normalized_per_arc,\
             eq5,eq3,mazzolo,n_intersecting,n_contained,n_covering,n_disjoint\n"
        ));
        assert_eq!(read_sweep_csv(&text).unwrap(), rows);
    }

    #[test]
    fn verify_row_status() {
        let est = MeasureEstimate {
            value: 10.5,
            std_error: 0.1,
            samples: 1000,
            window_measure: 100.0,
        };
        assert_eq!(VerifyRow::checked("S", 10.0, &est).status, Status::Fail);
        assert_eq!(VerifyRow::checked("S", 10.2, &est).status, Status::Ok);
        let table = verify_table(&[
            VerifyRow::checked("S", 10.2, &est),
            VerifyRow::skipped("Ntot", 3.0, "non-convex input"),
        ]);
        assert!(table.contains("skipped (non-convex input)"));
    }
}
