//! Revenue maximization on the bundled collaboration-graph sample: each
//! round weights a random 20-vertex subgraph and the learner spreads one
//! unit of budget across the network.

use std::path::PathBuf;

use mfw::harness::{drive_variant, ExperimentConfig, Family, RewardStream};
use mfw::objectives::load_graph;
use mfw::schedule::Variant;
use mfw::Result;

fn main() -> Result<()> {
    let graph_path = PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/collab316.txt"));
    let graph = load_graph(&graph_path)?;
    println!(
        "graph: {} vertices, {} edges",
        graph.vertex_count(),
        graph.edges().len()
    );

    let cfg = ExperimentConfig {
        family: Family::Revenue,
        t: 60,
        n: 0, // taken from the graph
        m: 25,
        sigma: 0.1,
        seed: 2,
        variants: vec![Variant::Mono],
        stride: 15,
        k_ref: 100,
        out: "out".into(),
        graph: Some(graph_path),
        stationary: false,
        allow_meta32: false,
        overrides: None,
    };
    let stream = RewardStream::generate(&cfg)?;
    let result = drive_variant(&cfg, Variant::Mono, &stream)?;

    println!(
        "Mono-MFW on revenue: T' = {}, {} blocks of K = {}",
        result.schedule.horizon, result.schedule.blocks, result.schedule.inner_iters
    );
    println!("{:>5} {:>14} {:>14}", "t", "cum_reward", "regret/t");
    for r in &result.records {
        if let Some(ratio) = r.ratio {
            println!("{:>5} {:>14.4} {:>14.6}", r.round, r.cum_reward, ratio);
        }
    }
    Ok(())
}
