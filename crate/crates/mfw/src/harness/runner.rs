//! Round-by-round experiment driver.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use super::report::RunSummary;
use super::stream::RewardStream;
use super::{ExperimentConfig, RegretRecord};
use crate::bandit::BanditMfw;
use crate::error::{Error, Result};
use crate::meta::MetaMfw;
use crate::mono::MonoMfw;
use crate::offline::offline_measured_greedy;
use crate::oracles::{StochasticGradientOracle, ValueOracle};
use crate::rng::{stream as labels, StreamRng};
use crate::schedule::{Schedule, Variant};

/// Everything one `(variant, seed)` run produces.
pub struct RunResult {
    pub variant: Variant,
    pub seed: u64,
    pub schedule: Schedule,
    pub records: Vec<RegretRecord>,
    /// Played points in round order (for feasibility audits).
    pub plays: Vec<Vec<f64>>,
    pub grad_calls: u64,
    pub value_calls: u64,
    pub wall_seconds: f64,
}

impl RunResult {
    pub fn final_ratio(&self) -> f64 {
        self.records.last().and_then(|r| r.ratio).unwrap_or(f64::NAN)
    }

    /// Ratio at the reference round `t` (must be a stride round).
    pub fn ratio_at(&self, t: usize) -> Option<f64> {
        self.records.iter().find(|r| r.round == t).and_then(|r| r.ratio)
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("t,reward,cum_reward,ref_value,ratio,grad_calls,value_calls\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.round,
                sig12(r.reward),
                sig12(r.cum_reward),
                r.ref_value.map(sig12).unwrap_or_default(),
                r.ratio.map(sig12).unwrap_or_default(),
                r.grad_calls,
                r.value_calls
            ));
        }
        out
    }

    pub fn summary(&self, requested_horizon: usize, k_ref: usize) -> RunSummary {
        RunSummary {
            variant: self.variant.name().to_string(),
            t: requested_horizon,
            final_ratio: self.final_ratio(),
            grad_calls: self.grad_calls,
            value_calls: self.value_calls,
            wall_seconds: self.wall_seconds,
            seed: self.seed,
            horizon_effective: self.schedule.horizon,
            k_ref,
        }
    }
}

/// 12 significant digits; enough to compare curves, stable across runs.
fn sig12(v: f64) -> String {
    format!("{:.11e}", v)
}

/// Runs one variant of the experiment purely in memory.
pub fn drive_variant(
    cfg: &ExperimentConfig,
    variant: Variant,
    stream: &RewardStream,
) -> Result<RunResult> {
    let polytope = stream.polytope();
    let mut schedule = Schedule::plan(cfg.t, variant, polytope)?;
    if let Some(ov) = &cfg.overrides {
        schedule = schedule.with_overrides(
            ov.inner_iters,
            ov.blocks,
            ov.block_len,
            ov.delta,
            polytope,
        )?;
    }
    if schedule.horizon > stream.len() {
        return Err(Error::InvalidConfig(format!(
            "schedule horizon {} exceeds the generated stream length {}",
            schedule.horizon,
            stream.len()
        )));
    }
    let started = Instant::now();

    let mut log = RegretLog::new(cfg, stream, schedule.horizon);
    match variant {
        Variant::Meta32 | Variant::Meta34 => {
            let mut algo = MetaMfw::new(polytope, schedule.clone())?;
            for t in 0..schedule.horizon {
                let mut oracle = StochasticGradientOracle::new(
                    stream.objective(t),
                    cfg.sigma,
                    StreamRng::substream(cfg.seed, &[labels::NOISE, t as u64]),
                );
                let play = algo.play_round(&mut oracle)?;
                log.grad_calls += oracle.call_count();
                log.push(t, &play)?;
            }
        }
        Variant::Mono => {
            let mut algo = MonoMfw::new(polytope, schedule.clone(), cfg.seed)?;
            let k = schedule.inner_iters;
            for q in 0..schedule.blocks {
                let base = q * k;
                let mut oracles: Vec<StochasticGradientOracle> = (0..k)
                    .map(|i| {
                        StochasticGradientOracle::new(
                            stream.objective(base + i),
                            cfg.sigma,
                            StreamRng::substream(cfg.seed, &[labels::NOISE, (base + i) as u64]),
                        )
                    })
                    .collect();
                let out = algo.play_block(&mut oracles)?;
                log.grad_calls += oracles.iter().map(|o| o.call_count()).sum::<u64>();
                for (i, play) in out.plays.iter().enumerate() {
                    log.push(base + i, play)?;
                }
            }
        }
        Variant::Bandit => {
            let interior = polytope.shrink_interior(schedule.delta)?;
            let mut algo = BanditMfw::new(&interior, schedule.clone(), cfg.seed)?;
            let l = schedule.block_len;
            for q in 0..schedule.blocks {
                let base = q * l;
                let mut oracles: Vec<ValueOracle> =
                    (0..l).map(|i| ValueOracle::new(stream.objective(base + i))).collect();
                let out = algo.play_block(&mut oracles)?;
                log.value_calls += oracles.iter().map(|o| o.call_count()).sum::<u64>();
                for (i, play) in out.plays.iter().enumerate() {
                    log.push(base + i, play)?;
                }
            }
        }
    }

    Ok(RunResult {
        variant,
        seed: cfg.seed,
        schedule,
        grad_calls: log.grad_calls,
        value_calls: log.value_calls,
        records: log.records,
        plays: log.plays,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Accumulates per-round records and solves the offline reference at stride
/// rounds (and the final round).
struct RegretLog<'a> {
    cfg: &'a ExperimentConfig,
    stream: &'a RewardStream,
    horizon: usize,
    prefix: super::stream::PrefixSum,
    records: Vec<RegretRecord>,
    plays: Vec<Vec<f64>>,
    cum_reward: f64,
    grad_calls: u64,
    value_calls: u64,
}

impl<'a> RegretLog<'a> {
    fn new(cfg: &'a ExperimentConfig, stream: &'a RewardStream, horizon: usize) -> Self {
        Self {
            cfg,
            stream,
            horizon,
            prefix: stream.prefix_accumulator(),
            records: Vec::with_capacity(horizon),
            plays: Vec::with_capacity(horizon),
            cum_reward: 0.0,
            grad_calls: 0,
            value_calls: 0,
        }
    }

    /// Records round `t` (0-based) played at `play`.
    fn push(&mut self, t: usize, play: &[f64]) -> Result<()> {
        let round = t + 1;
        self.plays.push(play.to_vec());
        let reward = self.stream.objective(t).value(play);
        self.cum_reward += reward;
        self.prefix.push(self.stream, t);
        let (mut ref_value, mut ratio) = (None, None);
        if round % self.cfg.stride == 0 || round == self.horizon {
            let summed = self.prefix.objective().expect("prefix holds at least one round");
            let reference =
                offline_measured_greedy(summed, self.stream.polytope(), self.cfg.k_ref)?;
            let value = summed.value(&reference);
            ref_value = Some(value);
            ratio = Some((value - self.cum_reward) / round as f64);
        }
        self.records.push(RegretRecord {
            round,
            reward,
            cum_reward: self.cum_reward,
            ref_value,
            ratio,
            grad_calls: self.grad_calls,
            value_calls: self.value_calls,
        });
        Ok(())
    }
}

/// Runs one variant and writes `<out>/<variant>_seed<seed>.csv` plus the
/// run-summary JSON next to it.
pub fn run_experiment(cfg: &ExperimentConfig, variant: Variant) -> Result<RunResult> {
    cfg.validate()?;
    let stream = RewardStream::generate(cfg)?;
    let result = drive_variant(cfg, variant, &stream)?;
    std::fs::create_dir_all(&cfg.out)?;
    let stem = format!("{}_seed{}", variant.name(), cfg.seed);
    let mut csv = std::fs::File::create(cfg.out.join(format!("{stem}.csv")))?;
    csv.write_all(result.csv().as_bytes())?;
    let summary = result.summary(cfg.t, cfg.k_ref);
    let mut json = std::fs::File::create(cfg.out.join(format!("{stem}.json")))?;
    json.write_all(serde_json::to_string_pretty(&summary)?.as_bytes())?;
    Ok(result)
}

/// Runs every variant in the config on its own worker.
pub fn run_many(cfg: &ExperimentConfig) -> Result<Vec<RunResult>> {
    cfg.validate()?;
    cfg.variants
        .par_iter()
        .map(|&variant| run_experiment(cfg, variant))
        .collect()
}
