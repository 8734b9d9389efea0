//! Aggregation of finished runs into a console table and machine-readable
//! JSON.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-run summary stored next to each CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub variant: String,
    #[serde(rename = "T")]
    pub t: usize,
    pub final_ratio: f64,
    pub grad_calls: u64,
    pub value_calls: u64,
    pub wall_seconds: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub horizon_effective: usize,
    #[serde(default)]
    pub k_ref: usize,
}

/// Reads the summaries sitting next to `csv_paths`, prints one line per run,
/// and writes `report.json` alongside the first CSV. Returns the summaries.
pub fn report(csv_paths: &[PathBuf]) -> Result<Vec<RunSummary>> {
    if csv_paths.is_empty() {
        return Err(Error::InvalidConfig("report needs at least one csv path".into()));
    }
    let mut summaries = Vec::with_capacity(csv_paths.len());
    for path in csv_paths {
        summaries.push(load_summary(path)?);
    }
    println!(
        "{:<8} {:>6} {:>8} {:>14} {:>12} {:>12} {:>10}",
        "variant", "T", "T_eff", "final_ratio", "grad_calls", "value_calls", "seconds"
    );
    for s in &summaries {
        println!(
            "{:<8} {:>6} {:>8} {:>14.6} {:>12} {:>12} {:>10.2}",
            s.variant, s.t, s.horizon_effective, s.final_ratio, s.grad_calls, s.value_calls,
            s.wall_seconds
        );
    }
    let dir = csv_paths[0].parent().unwrap_or_else(|| Path::new("."));
    std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(&summaries)?)?;
    Ok(summaries)
}

fn load_summary(csv_path: &Path) -> Result<RunSummary> {
    if !csv_path.exists() {
        return Err(Error::InvalidConfig(format!("missing csv {}", csv_path.display())));
    }
    let sidecar = csv_path.with_extension("json");
    if !sidecar.exists() {
        return Err(Error::InvalidConfig(format!(
            "missing run summary {} next to {}",
            sidecar.display(),
            csv_path.display()
        )));
    }
    // The CSV itself is validated lightly: header plus per-line field count.
    let text = std::fs::read_to_string(csv_path)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != "t,reward,cum_reward,ref_value,ratio,grad_calls,value_calls" {
        return Err(Error::InvalidConfig(format!(
            "unexpected csv header in {}",
            csv_path.display()
        )));
    }
    for (i, line) in lines.enumerate() {
        if line.split(',').count() != 7 {
            return Err(Error::InvalidConfig(format!(
                "malformed csv line {} in {}",
                i + 2,
                csv_path.display()
            )));
        }
    }
    Ok(serde_json::from_str(&std::fs::read_to_string(&sidecar)?)?)
}
