//! Experiment harness: configuration, reward-stream generation, the
//! round-by-round driver with regret logging, the grid-search reference
//! oracle, and CSV/JSON reporting.

mod brute;
mod report;
mod runner;
mod stream;

pub use brute::brute_force_opt;
pub use report::{report, RunSummary};
pub use runner::{drive_variant, run_experiment, run_many, RunResult};
pub use stream::{instance_json, RewardStream};

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::Variant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Quadratic,
    Revenue,
}

/// Optional overrides for the planned schedule; omitted fields keep the
/// formula values.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleOverrides {
    pub inner_iters: Option<usize>,
    pub blocks: Option<usize>,
    pub block_len: Option<usize>,
    pub delta: Option<f64>,
}

/// Experiment description; JSON-serializable. A fixed `(config, seed)` pair
/// reproduces every byte of output.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: Family,
    /// Requested horizon T.
    pub t: usize,
    /// Dimension (quadratic family; the revenue family takes it from the graph).
    #[serde(default = "default_n")]
    pub n: usize,
    /// Constraint rows.
    #[serde(default = "default_m")]
    pub m: usize,
    /// Gradient noise level.
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default)]
    pub seed: u64,
    pub variants: Vec<Variant>,
    /// Reference curve stride; the final round is always included.
    #[serde(default = "default_stride")]
    pub stride: usize,
    /// Measured-greedy iterations for the reference solves.
    #[serde(default = "default_k_ref")]
    pub k_ref: usize,
    /// Output directory for CSV and summary JSON.
    #[serde(default = "default_out")]
    pub out: PathBuf,
    /// Edge-list path (revenue family).
    #[serde(default)]
    pub graph: Option<PathBuf>,
    /// Repeat one reward function for the whole horizon.
    #[serde(default)]
    pub stationary: bool,
    /// The T^{3/2}-oracle Meta variant is costly; require an explicit opt-in.
    #[serde(default)]
    pub allow_meta32: bool,
    #[serde(default)]
    pub overrides: Option<ScheduleOverrides>,
}

fn default_n() -> usize {
    25
}

fn default_m() -> usize {
    15
}

fn default_sigma() -> f64 {
    0.1
}

fn default_stride() -> usize {
    10
}

fn default_k_ref() -> usize {
    200
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t < 1 {
            return Err(Error::InvalidConfig("horizon t must be at least 1".into()));
        }
        if self.sigma < 0.0 {
            return Err(Error::InvalidConfig("sigma must be nonnegative".into()));
        }
        if self.variants.is_empty() {
            return Err(Error::InvalidConfig("at least one variant is required".into()));
        }
        if self.stride == 0 {
            return Err(Error::InvalidConfig("stride must be positive".into()));
        }
        if self.k_ref == 0 {
            return Err(Error::InvalidConfig("k_ref must be positive".into()));
        }
        if self.variants.contains(&Variant::Meta32) && !self.allow_meta32 {
            return Err(Error::InvalidConfig(
                "variant meta32 runs ceil(T^{3/2}) oracle steps per round; set \
                 allow_meta32 to opt in"
                    .into(),
            ));
        }
        if self.family == Family::Revenue && self.graph.is_none() {
            return Err(Error::InvalidConfig("revenue experiments need a graph path".into()));
        }
        Ok(())
    }
}

/// One per-round log line. `ref_value`/`ratio` are populated at stride rounds
/// (and the final round): `ref_value` is the cumulative reward of the offline
/// reference solution for the first `t` rewards, `ratio` the regret-to-horizon
/// quotient `(ref_value - cum_reward) / t`.
#[derive(Debug, Clone, Serialize)]
pub struct RegretRecord {
    pub round: usize,
    pub reward: f64,
    pub cum_reward: f64,
    pub ref_value: Option<f64>,
    pub ratio: Option<f64>,
    pub grad_calls: u64,
    pub value_calls: u64,
}
