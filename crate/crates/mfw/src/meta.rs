//! Full-information measured Frank-Wolfe.
//!
//! Each round builds the iterate chain `x^{(0)} = 0, ...,
//! x^{(k)} = x^{(k-1)} + (1/K) v^{(k)} ⊙ (1 - x^{(k-1)})` from the K oracle
//! actions, plays `x^{(K)}`, then walks the momentum recursion
//! `g^{(k)} = (1 - eta_k) g^{(k-1)} + eta_k * grad~ f_t(x^{(k)})` and feeds
//! `g^{(k)} ⊙ (1 - x^{(k)})` back to oracle k. Exactly K stochastic gradient
//! queries per round.

use crate::error::{Error, Result};
use crate::linalg;
use crate::online_linear::OracleBank;
use crate::oracles::StochasticGradientOracle;
use crate::polytope::DownClosedPolytope;
use crate::schedule::{eta_meta, measured_step, Schedule, Variant};

/// Per-round internals for diagnostics: the iterates `x^{(1..K)}` and the
/// momentum vectors `g^{(1..K)}`.
pub struct RoundTrace {
    pub iterates: Vec<Vec<f64>>,
    pub momenta: Vec<Vec<f64>>,
}

pub struct MetaMfw<'a> {
    polytope: &'a DownClosedPolytope,
    bank: OracleBank<'a, DownClosedPolytope>,
    schedule: Schedule,
    round: usize,
}

impl<'a> MetaMfw<'a> {
    pub fn new(polytope: &'a DownClosedPolytope, schedule: Schedule) -> Result<Self> {
        if !matches!(schedule.variant, Variant::Meta32 | Variant::Meta34) {
            return Err(Error::InvalidSchedule(format!(
                "expected a meta schedule, got {}",
                schedule.variant.name()
            )));
        }
        let bank = OracleBank::init(polytope, schedule.inner_iters, schedule.horizon)?;
        Ok(Self { polytope, bank, schedule, round: 0 })
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn rounds_played(&self) -> usize {
        self.round
    }

    /// Plays one round against `f_t` (represented by its gradient oracle) and
    /// returns the played point.
    pub fn play_round(&mut self, oracle: &mut StochasticGradientOracle) -> Result<Vec<f64>> {
        Ok(self.play_round_traced(oracle)?.0)
    }

    pub fn play_round_traced(
        &mut self,
        oracle: &mut StochasticGradientOracle,
    ) -> Result<(Vec<f64>, RoundTrace)> {
        if self.round >= self.schedule.horizon {
            return Err(Error::InvalidSchedule(format!(
                "horizon {} exhausted",
                self.schedule.horizon
            )));
        }
        let k_total = self.schedule.inner_iters;
        let n = self.polytope.dim();

        let mut iterates = Vec::with_capacity(k_total);
        let mut x = vec![0.0; n];
        for k in 0..k_total {
            let v = self.bank.get_action(k)?;
            x = measured_step(&x, v, k_total)?;
            iterates.push(x.clone());
        }
        let play = x;

        let mut momenta = Vec::with_capacity(k_total);
        let mut payoffs = Vec::with_capacity(k_total);
        let mut g = vec![0.0; n];
        for (k, xk) in iterates.iter().enumerate() {
            let eta = eta_meta(k + 1);
            let grad = oracle.noisy_grad(xk)?;
            for i in 0..n {
                g[i] = (1.0 - eta) * g[i] + eta * grad[i];
            }
            momenta.push(g.clone());
            let damp: Vec<f64> = xk.iter().map(|&xi| 1.0 - xi).collect();
            payoffs.push(linalg::hadamard(&g, &damp));
        }
        self.bank.feed_all(&payoffs)?;
        self.round += 1;
        Ok((play, RoundTrace { iterates, momenta }))
    }
}
