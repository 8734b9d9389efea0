//! Seeded reward-stream generation for both experiment families.

use super::{ExperimentConfig, Family};
use crate::error::{Error, Result};
use crate::objectives::{
    gen_quadratic_objective, load_graph, sample_round_objective, Graph, Objective,
    QuadraticObjective, RevenueObjective,
};
use crate::polytope::{format_f64, DownClosedPolytope};
use crate::rng::{stream, StreamRng};

/// A generated instance: fixed constraints plus T reward functions.
pub enum RewardStream {
    Quadratic { polytope: DownClosedPolytope, rounds: Vec<QuadraticObjective> },
    Revenue { polytope: DownClosedPolytope, graph: Graph, rounds: Vec<RevenueObjective> },
}

impl RewardStream {
    /// Deterministically regenerates the stream described by `cfg`.
    pub fn generate(cfg: &ExperimentConfig) -> Result<Self> {
        match cfg.family {
            Family::Quadratic => Ok(Self::generate_quadratic(cfg)),
            Family::Revenue => Self::generate_revenue(cfg),
        }
    }

    fn generate_quadratic(cfg: &ExperimentConfig) -> Self {
        let mut gen_rng = StreamRng::substream(cfg.seed, &[stream::GEN]);
        let rows: Vec<Vec<f64>> =
            (0..cfg.m).map(|_| (0..cfg.n).map(|_| gen_rng.next_f64()).collect()).collect();
        let polytope = DownClosedPolytope::new(cfg.n, rows, vec![1.0; cfg.m], vec![1.0; cfg.n])
            .expect("generated constraints are valid");
        let mut rounds: Vec<QuadraticObjective> = Vec::with_capacity(cfg.t);
        for t in 0..cfg.t {
            if cfg.stationary && t > 0 {
                let first = rounds[0].clone();
                rounds.push(first);
                continue;
            }
            let mut rng = StreamRng::substream(cfg.seed, &[stream::GEN, 1 + t as u64]);
            rounds.push(gen_quadratic_objective(cfg.n, &mut rng));
        }
        RewardStream::Quadratic { polytope, rounds }
    }

    fn generate_revenue(cfg: &ExperimentConfig) -> Result<Self> {
        let path = cfg
            .graph
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("revenue experiments need a graph path".into()))?;
        let graph = load_graph(path)?;
        let n = graph.vertex_count();
        let mut gen_rng = StreamRng::substream(cfg.seed, &[stream::GEN]);
        let mut rows: Vec<Vec<f64>> =
            (0..cfg.m).map(|_| (0..n).map(|_| gen_rng.next_f64()).collect()).collect();
        // Budget row: total investment capped at one unit.
        rows.push(vec![1.0; n]);
        let polytope = DownClosedPolytope::new(n, rows, vec![1.0; cfg.m + 1], vec![1.0; n])
            .expect("generated constraints are valid");
        let mut rounds: Vec<RevenueObjective> = Vec::with_capacity(cfg.t);
        for t in 0..cfg.t {
            if cfg.stationary && t > 0 {
                let first = rounds[0].clone();
                rounds.push(first);
                continue;
            }
            let mut rng = StreamRng::substream(cfg.seed, &[stream::ROUND_OBJECTIVE, t as u64]);
            rounds.push(sample_round_objective(&graph, &mut rng)?);
        }
        Ok(RewardStream::Revenue { polytope, graph, rounds })
    }

    pub fn polytope(&self) -> &DownClosedPolytope {
        match self {
            RewardStream::Quadratic { polytope, .. } => polytope,
            RewardStream::Revenue { polytope, .. } => polytope,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            RewardStream::Quadratic { rounds, .. } => rounds.len(),
            RewardStream::Revenue { rounds, .. } => rounds.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The reward function of round `t` (0-based).
    pub fn objective(&self, t: usize) -> &dyn Objective {
        match self {
            RewardStream::Quadratic { rounds, .. } => &rounds[t],
            RewardStream::Revenue { rounds, .. } => &rounds[t],
        }
    }

    /// Running prefix-sum accumulator; both families are closed under
    /// addition, so prefix objectives keep exact gradients.
    pub fn prefix_accumulator(&self) -> PrefixSum {
        match self {
            RewardStream::Quadratic { .. } => PrefixSum::Quadratic(None),
            RewardStream::Revenue { .. } => PrefixSum::Revenue(None),
        }
    }
}

pub enum PrefixSum {
    Quadratic(Option<QuadraticObjective>),
    Revenue(Option<RevenueObjective>),
}

impl PrefixSum {
    /// Adds round `t` of `stream` into the running sum.
    pub fn push(&mut self, stream: &RewardStream, t: usize) {
        match (self, stream) {
            (PrefixSum::Quadratic(acc), RewardStream::Quadratic { rounds, .. }) => {
                match acc {
                    Some(sum) => sum.accumulate(&rounds[t]),
                    None => *acc = Some(rounds[t].clone()),
                }
            }
            (PrefixSum::Revenue(acc), RewardStream::Revenue { rounds, .. }) => match acc {
                Some(sum) => sum.accumulate(&rounds[t]),
                None => *acc = Some(rounds[t].clone()),
            },
            _ => panic!("prefix accumulator family mismatch"),
        }
    }

    pub fn objective(&self) -> Option<&dyn Objective> {
        match self {
            PrefixSum::Quadratic(acc) => acc.as_ref().map(|q| q as &dyn Objective),
            PrefixSum::Revenue(acc) => acc.as_ref().map(|r| r as &dyn Objective),
        }
    }
}

/// Serializes the generated instance with doubles at 17 significant digits.
pub fn instance_json(cfg: &ExperimentConfig, stream: &RewardStream) -> String {
    let mut out = String::new();
    out.push('{');
    out.push_str(&format!(
        "\"family\":\"{}\",\"seed\":{},\"t\":{},\"sigma\":{}",
        match cfg.family {
            Family::Quadratic => "quadratic",
            Family::Revenue => "revenue",
        },
        cfg.seed,
        stream.len(),
        format_f64(cfg.sigma)
    ));
    out.push_str(",\"polytope\":");
    out.push_str(&stream.polytope().to_json());
    match stream {
        RewardStream::Quadratic { rounds, .. } => {
            out.push_str(",\"objectives\":[");
            for (i, q) in rounds.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let h_rows: Vec<String> = q
                    .curvature()
                    .to_rows()
                    .iter()
                    .map(|r| format!("[{}]", join(r)))
                    .collect();
                out.push_str(&format!(
                    "{{\"H\":[{}],\"h\":[{}],\"c\":{}}}",
                    h_rows.join(","),
                    join(q.linear_term()),
                    format_f64(q.constant())
                ));
            }
            out.push(']');
        }
        RewardStream::Revenue { graph, rounds, .. } => {
            out.push_str(&format!(
                ",\"graph\":{{\"vertex_count\":{},\"edges\":[{}]}}",
                graph.vertex_count(),
                graph
                    .edges()
                    .iter()
                    .map(|&(a, b)| format!("[{a},{b}]"))
                    .collect::<Vec<_>>()
                    .join(",")
            ));
            if let Some(first) = rounds.first() {
                out.push_str(&format!(
                    ",\"p\":{},\"budget\":{}",
                    format_f64(first.adoption_probability()),
                    format_f64(first.budget())
                ));
            }
            out.push_str(&format!(",\"rounds\":{}", rounds.len()));
        }
    }
    out.push('}');
    out
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format_f64(*v)).collect::<Vec<_>>().join(",")
}
