//! Bandit run: only played rewards are observed. Blocks split into K
//! exploration probes (one-point gradient estimates on the delta-interior)
//! and L - K exploitation rounds at the block's final iterate.

use mfw::harness::{drive_variant, ExperimentConfig, Family, RewardStream};
use mfw::schedule::Variant;
use mfw::Result;

fn main() -> Result<()> {
    let cfg = ExperimentConfig {
        family: Family::Quadratic,
        t: 300,
        n: 6,
        m: 3,
        sigma: 0.0,
        seed: 11,
        variants: vec![Variant::Bandit],
        stride: 30,
        k_ref: 100,
        out: "out".into(),
        graph: None,
        stationary: false,
        allow_meta32: false,
        overrides: None,
    };
    let stream = RewardStream::generate(&cfg)?;
    let result = drive_variant(&cfg, Variant::Bandit, &stream)?;

    let s = &result.schedule;
    println!(
        "Bandit-MFW: T' = {} = {} blocks x L = {}; K = {} probes per block, delta = {:.4}",
        s.horizon, s.blocks, s.block_len, s.inner_iters, s.delta
    );
    println!("{:>5} {:>14} {:>14}", "t", "cum_reward", "regret/t");
    for r in &result.records {
        if let Some(ratio) = r.ratio {
            println!("{:>5} {:>14.4} {:>14.6}", r.round, r.cum_reward, ratio);
        }
    }
    println!(
        "gradient calls: {} (none); value-estimation queries: {} (= Q*K)",
        result.grad_calls, result.value_calls
    );
    Ok(())
}
