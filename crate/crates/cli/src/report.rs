//! Report emission: per-series CSV files and the JSON summary.
//!
//! Outputs are deterministic: identical configuration produces byte-identical
//! files. No wall-clock values, no map iteration with unstable order, and
//! float formatting through the standard shortest-round-trip printer.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use walklab_core::harness::RatioSeries;
use walklab_core::{Error, Result};

use crate::runner::RunOutcome;

fn fmt(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v}")
    }
}

/// The pinned series schema: n, ratio, target, abs_err, rel_err,
/// exceptional_flag, density_to_n.
pub fn series_csv(series: &RatioSeries) -> String {
    let mut out = String::with_capacity(series.values.len() * 48 + 64);
    out.push_str("n,ratio,target,abs_err,rel_err,exceptional_flag,density_to_n\n");
    for (k, &r) in series.values.iter().enumerate() {
        let n = series.start_n + k;
        let abs_err = (r - series.target).abs();
        let rel_err = if series.target != 0.0 {
            abs_err / series.target.abs()
        } else {
            abs_err
        };
        out.push_str(&format!(
            "{n},{},{},{},{},{},{}\n",
            fmt(r),
            fmt(series.target),
            fmt(abs_err),
            fmt(rel_err),
            u8::from(series.exceptional[k]),
            fmt(series.density[k]),
        ));
    }
    out
}

pub fn truncation_csv(truncation: &[f64]) -> String {
    let mut out = String::with_capacity(truncation.len() * 24 + 16);
    out.push_str("n,lost_mass\n");
    for (k, &t) in truncation.iter().enumerate() {
        out.push_str(&format!("{},{}\n", k + 1, fmt(t)));
    }
    out
}

/// Writes all report files for a finished run under `out_dir/<scenario-id>/`
/// and returns the summary path.
pub fn write_reports(out_dir: &Path, outcome: &RunOutcome) -> Result<PathBuf> {
    let dir = out_dir.join(&outcome.report.scenario);
    fs::create_dir_all(&dir).map_err(|e| Error::Config(e.to_string()))?;
    let mut truncation_written = false;
    for (series, summary) in outcome.series.iter().zip(&outcome.report.series) {
        write_file(&dir.join(&summary.csv), &series_csv(series))?;
        // grid series share one audit
        if let (Some(trunc), false) = (&series.truncation, truncation_written) {
            write_file(&dir.join("truncation.csv"), &truncation_csv(trunc))?;
            truncation_written = true;
        }
    }
    let summary_path = dir.join("summary.json");
    let json = serde_json::to_string_pretty(&outcome.report)
        .map_err(|e| Error::Config(e.to_string()))?;
    write_file(&summary_path, &format!("{json}\n"))?;
    Ok(summary_path)
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::Config(e.to_string()))?;
    f.write_all(content.as_bytes())
        .map_err(|e| Error::Config(e.to_string()))?;
    Ok(())
}
