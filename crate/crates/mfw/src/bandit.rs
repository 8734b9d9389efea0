//! Bandit measured Frank-Wolfe: exploration/exploitation blocking with
//! one-point gradient estimates.
//!
//! The oracle bank lives on the delta-interior `C' = (1-alpha)C + delta*1`.
//! Oracle actions `v` are rescaled to `v~ = (v - delta*1) ⊘ (1 - delta*1)`
//! before the measured steps, which start from `x^{(0)} = delta*1`. Each
//! block of L rewards plays K exploration probes `x^{(k)} + delta*u^{(k)}`
//! at randomly permuted slots (one value query each, nothing else is ever
//! queried) and commits to `x^{(K)}` for the remaining L - K rewards.

use crate::error::{Error, Result};
use crate::linalg;
use crate::online_linear::OracleBank;
use crate::oracles::{one_point_estimate, SphereSample, ValueOracle};
use crate::polytope::InteriorShrink;
use crate::rng::{stream, StreamRng};
use crate::schedule::{eta_meta, measured_step, Schedule, Variant};

/// One block's plays in round order, with the exploration slots marked and
/// the iterate chain `x^{(1..K)}` exposed for audits.
pub struct BanditBlockOutcome {
    pub plays: Vec<Vec<f64>>,
    pub exploration: Vec<bool>,
    pub iterates: Vec<Vec<f64>>,
}

pub struct BanditMfw<'a> {
    interior: &'a InteriorShrink,
    bank: OracleBank<'a, InteriorShrink>,
    schedule: Schedule,
    seed: u64,
    block: usize,
}

impl<'a> BanditMfw<'a> {
    /// `interior` must be built with the schedule's probe radius.
    pub fn new(interior: &'a InteriorShrink, schedule: Schedule, seed: u64) -> Result<Self> {
        if schedule.variant != Variant::Bandit {
            return Err(Error::InvalidSchedule(format!(
                "expected a bandit schedule, got {}",
                schedule.variant.name()
            )));
        }
        if (interior.delta() - schedule.delta).abs() > 1e-12 {
            return Err(Error::InvalidSchedule(format!(
                "interior delta {} does not match schedule delta {}",
                interior.delta(),
                schedule.delta
            )));
        }
        if 2 * schedule.inner_iters > schedule.block_len {
            return Err(Error::InvalidSchedule(
                "bandit blocks need L >= 2K for the exploration phase".into(),
            ));
        }
        let bank = OracleBank::init(interior, schedule.inner_iters, schedule.blocks)?;
        Ok(Self { interior, bank, schedule, seed, block: 0 })
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn blocks_played(&self) -> usize {
        self.block
    }

    /// Plays one block of `L` rewards; `block_value_oracles` holds one value
    /// oracle per reward in round order. Exactly K of them are queried once.
    pub fn play_block(
        &mut self,
        block_value_oracles: &mut [ValueOracle],
    ) -> Result<BanditBlockOutcome> {
        if self.block >= self.schedule.blocks {
            return Err(Error::InvalidSchedule(format!(
                "all {} blocks already played",
                self.schedule.blocks
            )));
        }
        let k_total = self.schedule.inner_iters;
        let block_len = self.schedule.block_len;
        if block_value_oracles.len() != block_len {
            return Err(Error::DimensionMismatch {
                expected: block_len,
                got: block_value_oracles.len(),
            });
        }
        let delta = self.schedule.delta;
        let n = self.interior.base().dim();

        // Iterate chain from delta*1 along the rescaled oracle actions.
        let mut iterates = Vec::with_capacity(k_total);
        let mut x = vec![delta; n];
        for k in 0..k_total {
            let v = self.bank.get_action(k)?;
            let v_scaled: Vec<f64> = v.iter().map(|&vi| (vi - delta) / (1.0 - delta)).collect();
            x = measured_step(&x, &v_scaled, k_total)?;
            iterates.push(x.clone());
        }
        let commit = iterates.last().cloned().unwrap_or_else(|| vec![delta; n]);

        // Exploration slots: the first K entries of a random block permutation.
        let mut slots: Vec<usize> = (0..block_len).collect();
        let mut perm_rng = StreamRng::substream(self.seed, &[stream::PERM, self.block as u64]);
        perm_rng.shuffle(&mut slots);
        let mut explore_at: Vec<Option<usize>> = vec![None; block_len];
        for (k, &slot) in slots.iter().take(k_total).enumerate() {
            explore_at[slot] = Some(k);
        }

        let mut sphere_rng =
            StreamRng::substream(self.seed, &[stream::SPHERE, self.block as u64]);
        let directions: Vec<SphereSample> =
            (0..k_total).map(|_| SphereSample::draw(n, &mut sphere_rng)).collect();

        // Plays in round order; exploration probes collect their estimates.
        let mut plays = Vec::with_capacity(block_len);
        let mut exploration = vec![false; block_len];
        let mut estimates: Vec<Option<Vec<f64>>> = vec![None; k_total];
        for (slot, oracle) in block_value_oracles.iter_mut().enumerate() {
            if let Some(k) = explore_at[slot] {
                let probe = linalg::axpy(&iterates[k], delta, directions[k].direction());
                if !self.interior.base().contains(&probe, 1e-9)? {
                    return Err(Error::InfeasibleProbe(format!(
                        "exploration point left the feasible region at block {}, inner index {}",
                        self.block, k
                    )));
                }
                estimates[k] =
                    Some(one_point_estimate(oracle, &iterates[k], delta, &directions[k])?);
                exploration[slot] = true;
                plays.push(probe);
            } else {
                plays.push(commit.clone());
            }
        }

        // Momentum over the one-point estimates, fed back in the rescaled
        // coordinates the oracles optimize in.
        let mut g = vec![0.0; n];
        let mut payoffs = Vec::with_capacity(k_total);
        for (k, xk) in iterates.iter().enumerate() {
            let eta = eta_meta(k + 1);
            let est = estimates[k]
                .as_ref()
                .expect("every inner index owns one exploration slot");
            for i in 0..n {
                g[i] = (1.0 - eta) * g[i] + eta * est[i];
            }
            let damp: Vec<f64> =
                xk.iter().map(|&xi| 1.0 - (xi - delta) / (1.0 - delta)).collect();
            payoffs.push(linalg::hadamard(&damp, &g));
        }
        self.bank.feed_all(&payoffs)?;
        self.block += 1;
        Ok(BanditBlockOutcome { plays, exploration, iterates })
    }
}
