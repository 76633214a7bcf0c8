//! Aggregation of completed experiment artifacts into one summary:
//! max/median bound ratios per theta, the normalized circle-method and
//! frequency-decomposition constants, and residual histograms.

use crate::pipeline::SweepRecord;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("no sweep artifacts found in {0}")]
    EmptyDirectory(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad csv {path}: {reason}")]
    BadCsv { path: String, reason: String },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ThetaSummary {
    pub cells: usize,
    pub in_window_cells: usize,
    pub max_ratio: f64,
    pub median_ratio: f64,
    /// Restricted to in-window cells (the regression quantity).
    pub max_ratio_in_window: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct Summary {
    /// Keyed by the theta value formatted at 6 digits (stable map order).
    pub per_theta: BTreeMap<String, ThetaSummary>,
    /// Max of error * delta L^2 / (Q^2 log^2 Q) over the jutila-error grid.
    pub lemma_l2_max_normalized: Option<f64>,
    /// Max zero/non-zero frequency ratios over the omega grid.
    pub omega_max_ratio_zero: Option<f64>,
    pub omega_max_ratio_nonzero: Option<f64>,
    /// Residual histogram: bucket "1e-k" counts residuals in [1e-k, 1e-k+1).
    pub residual_histogram: BTreeMap<String, u64>,
}

fn parse_sweep_csv(path: &Path) -> Result<Vec<SweepRecord>, ReportError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| ReportError::BadCsv {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| ReportError::BadCsv {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        let field = |i: usize| -> &str { row.get(i).unwrap_or("") };
        let bad = |reason: String| ReportError::BadCsv {
            path: path.display().to_string(),
            reason,
        };
        out.push(SweepRecord {
            n: field(0).parse().map_err(|e| bad(format!("N: {e}")))?,
            p: field(1).parse().map_err(|e| bad(format!("p: {e}")))?,
            theta: field(2).parse().map_err(|e| bad(format!("theta: {e}")))?,
            window: field(3) == "true",
            abs_s_sharp: field(4).parse().map_err(|e| bad(format!("abs_S_sharp: {e}")))?,
            abs_s_smooth: field(5).parse().map_err(|e| bad(format!("abs_S_smooth: {e}")))?,
            denominator: field(6).parse().map_err(|e| bad(format!("denominator: {e}")))?,
            ratio: field(7).parse().map_err(|e| bad(format!("ratio: {e}")))?,
            sign_change_index: if field(8).is_empty() {
                None
            } else {
                Some(field(8).parse().map_err(|e| bad(format!("sign index: {e}")))?)
            },
            seconds: field(9).parse().unwrap_or(0.0),
        });
    }
    Ok(out)
}

fn median(sorted: &[f64]) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Summarize every artifact in `dir` (sweep*.csv required; jutila_error,
/// omega, and residual CSVs folded in when present). Deterministic: files
/// are processed in name order.
pub fn report(dir: &Path) -> Result<Summary, ReportError> {
    let mut names: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .collect();
    names.sort();

    let mut records: Vec<SweepRecord> = Vec::new();
    let mut summary = Summary::default();
    for path in &names {
        let fname = path
            .file_name()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_default();
        if fname.starts_with("sweep") && fname.ends_with(".csv") {
            records.extend(parse_sweep_csv(path)?);
        } else if fname.starts_with("jutila_error") && fname.ends_with(".csv") {
            for (i, line) in std::fs::read_to_string(path)?.lines().enumerate() {
                if i == 0 {
                    continue;
                }
                if let Some(v) = line.split(',').nth(4).and_then(|s| s.parse::<f64>().ok()) {
                    let cur = summary.lemma_l2_max_normalized.unwrap_or(0.0);
                    summary.lemma_l2_max_normalized = Some(cur.max(v));
                }
            }
        } else if fname.starts_with("omega") && fname.ends_with(".csv") {
            for (i, line) in std::fs::read_to_string(path)?.lines().enumerate() {
                if i == 0 {
                    continue;
                }
                let cols: Vec<&str> = line.split(',').collect();
                if let (Some(r0), Some(rnz)) = (
                    cols.get(2).and_then(|s| s.parse::<f64>().ok()),
                    cols.get(3).and_then(|s| s.parse::<f64>().ok()),
                ) {
                    let c0 = summary.omega_max_ratio_zero.unwrap_or(0.0);
                    let cn = summary.omega_max_ratio_nonzero.unwrap_or(0.0);
                    summary.omega_max_ratio_zero = Some(c0.max(r0));
                    summary.omega_max_ratio_nonzero = Some(cn.max(rnz));
                }
            }
        } else if (fname.starts_with("voronoi") || fname.starts_with("poisson"))
            && fname.ends_with(".csv")
        {
            for (i, line) in std::fs::read_to_string(path)?.lines().enumerate() {
                if i == 0 {
                    continue;
                }
                // residual column is named in the header; by convention it
                // is the last numeric field before any boolean flag
                if let Some(v) = line
                    .split(',')
                    .filter_map(|s| s.parse::<f64>().ok())
                    .last()
                {
                    let bucket = if v <= 0.0 {
                        "exact".to_string()
                    } else {
                        format!("1e{}", v.log10().floor() as i64)
                    };
                    *summary.residual_histogram.entry(bucket).or_insert(0) += 1;
                }
            }
        }
    }
    if records.is_empty() {
        return Err(ReportError::EmptyDirectory(dir.display().to_string()));
    }

    let mut by_theta: BTreeMap<String, Vec<&SweepRecord>> = BTreeMap::new();
    for r in &records {
        by_theta
            .entry(format!("{:.6}", r.theta))
            .or_default()
            .push(r);
    }
    for (theta, rows) in by_theta {
        let mut ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
        ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let in_window: Vec<f64> = rows
            .iter()
            .filter(|r| r.window)
            .map(|r| r.ratio)
            .collect();
        summary.per_theta.insert(
            theta,
            ThetaSummary {
                cells: rows.len(),
                in_window_cells: in_window.len(),
                max_ratio: ratios.last().copied().unwrap_or(f64::NAN),
                median_ratio: median(&ratios),
                max_ratio_in_window: in_window.iter().copied().fold(0.0, f64::max),
            },
        );
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{write_sweep_csv, SweepRecord};

    fn fake_record(n: u64, p: u64, ratio: f64, window: bool) -> SweepRecord {
        SweepRecord {
            n,
            p,
            theta: 0.05,
            window,
            abs_s_sharp: ratio * 100.0,
            abs_s_smooth: 1.0,
            denominator: 100.0,
            ratio,
            sign_change_index: Some(2),
            seconds: 0.1,
        }
    }

    #[test]
    fn summary_max_equals_csv_max_and_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let recs = vec![
            fake_record(100, 11, 0.5, true),
            fake_record(200, 13, 1.25, true),
            fake_record(300, 17, 2.0, false),
        ];
        let mut buf = Vec::new();
        write_sweep_csv(&recs, &mut buf).unwrap();
        std::fs::write(dir.path().join("sweep.csv"), &buf).unwrap();
        let s1 = report(dir.path()).unwrap();
        let s2 = report(dir.path()).unwrap();
        assert_eq!(s1, s2);
        let t = &s1.per_theta["0.050000"];
        assert_eq!(t.cells, 3);
        assert_eq!(t.in_window_cells, 2);
        assert!((t.max_ratio - 2.0).abs() < 1e-12);
        assert!((t.max_ratio_in_window - 1.25).abs() < 1e-12);
        assert!((t.median_ratio - 1.25).abs() < 1e-12);
    }

    #[test]
    fn single_cell_summary_echoes_the_cell() {
        let dir = tempfile::tempdir().unwrap();
        let recs = vec![fake_record(100, 11, 0.75, true)];
        let mut buf = Vec::new();
        write_sweep_csv(&recs, &mut buf).unwrap();
        std::fs::write(dir.path().join("sweep.csv"), &buf).unwrap();
        let s = report(dir.path()).unwrap();
        let t = &s.per_theta["0.050000"];
        assert_eq!(t.cells, 1);
        assert!((t.max_ratio - 0.75).abs() < 1e-12);
        assert!((t.median_ratio - 0.75).abs() < 1e-12);
    }

    #[test]
    fn empty_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            report(dir.path()),
            Err(ReportError::EmptyDirectory(_))
        ));
    }
}
