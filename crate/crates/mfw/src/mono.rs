//! One-shot measured Frank-Wolfe with blocking.
//!
//! The horizon is split into Q blocks of K rewards. Within a block the
//! iterate chain is built once, the same point `x^{(K)}` is played for all K
//! rewards, and a random permutation assigns each reward function to one
//! inner index, so every function answers exactly one stochastic gradient
//! query. The momentum uses the two-phase step size.

use crate::error::{Error, Result};
use crate::linalg;
use crate::online_linear::OracleBank;
use crate::oracles::StochasticGradientOracle;
use crate::polytope::DownClosedPolytope;
use crate::rng::{stream, StreamRng};
use crate::schedule::{eta_mono, measured_step, Schedule, Variant};

/// Result of one block: the K played points (all equal to `x^{(K)}`) and the
/// permutation mapping inner index k to the block-local function it queried.
pub struct MonoBlockOutcome {
    pub plays: Vec<Vec<f64>>,
    pub assignment: Vec<usize>,
}

pub struct MonoMfw<'a> {
    polytope: &'a DownClosedPolytope,
    bank: OracleBank<'a, DownClosedPolytope>,
    schedule: Schedule,
    seed: u64,
    block: usize,
}

impl<'a> MonoMfw<'a> {
    pub fn new(polytope: &'a DownClosedPolytope, schedule: Schedule, seed: u64) -> Result<Self> {
        if schedule.variant != Variant::Mono {
            return Err(Error::InvalidSchedule(format!(
                "expected a one-shot schedule, got {}",
                schedule.variant.name()
            )));
        }
        if schedule.inner_iters % 2 != 0 {
            return Err(Error::InvalidSchedule("one-shot blocks need even K".into()));
        }
        let bank = OracleBank::init(polytope, schedule.inner_iters, schedule.blocks)?;
        Ok(Self { polytope, bank, schedule, seed, block: 0 })
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn blocks_played(&self) -> usize {
        self.block
    }

    /// Plays one block; `block_oracles` holds one gradient oracle per reward
    /// function in the block, in round order.
    pub fn play_block(
        &mut self,
        block_oracles: &mut [StochasticGradientOracle],
    ) -> Result<MonoBlockOutcome> {
        if self.block >= self.schedule.blocks {
            return Err(Error::InvalidSchedule(format!(
                "all {} blocks already played",
                self.schedule.blocks
            )));
        }
        let k_total = self.schedule.inner_iters;
        if block_oracles.len() != k_total {
            return Err(Error::DimensionMismatch {
                expected: k_total,
                got: block_oracles.len(),
            });
        }
        let n = self.polytope.dim();

        let mut iterates = Vec::with_capacity(k_total);
        let mut x = vec![0.0; n];
        for k in 0..k_total {
            let v = self.bank.get_action(k)?;
            x = measured_step(&x, v, k_total)?;
            iterates.push(x.clone());
        }
        let play = x;

        // Permutation t_q^{(k)}: inner index k queries function assignment[k].
        let mut assignment: Vec<usize> = (0..k_total).collect();
        let mut perm_rng = StreamRng::substream(self.seed, &[stream::PERM, self.block as u64]);
        perm_rng.shuffle(&mut assignment);

        let mut g = vec![0.0; n];
        let mut payoffs = Vec::with_capacity(k_total);
        for (k, xk) in iterates.iter().enumerate() {
            let eta = eta_mono(k + 1, k_total)?;
            let grad = block_oracles[assignment[k]].noisy_grad(xk)?;
            for i in 0..n {
                g[i] = (1.0 - eta) * g[i] + eta * grad[i];
            }
            let damp: Vec<f64> = xk.iter().map(|&xi| 1.0 - xi).collect();
            payoffs.push(linalg::hadamard(&damp, &g));
        }
        self.bank.feed_all(&payoffs)?;
        self.block += 1;
        Ok(MonoBlockOutcome { plays: vec![play; k_total], assignment })
    }
}
