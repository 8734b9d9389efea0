//! A bank of K independent online linear-maximization oracles.
//!
//! Each oracle runs projected online gradient ascent over the domain: on
//! payoff vector `d` it moves its action to `project(v + eta * d)` with
//! `eta = D / (G_hat * sqrt(T))`, where `D` is the domain diameter, `T` the
//! known horizon, and `G_hat` a running max of observed payoff norms (floored
//! away from zero so the first step is defined). This meets the `O(sqrt(t))`
//! regret the measured Frank-Wolfe analysis asks of its oracles.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::{LinearDomain, Support};

/// Duality-gap tolerance for the projection inside each OGA step. Action
/// placement error is about the square root of this, far below the 1e-8
/// feasibility slack the bank guarantees.
const PROJECTION_TOL: f64 = 1e-9;

const GRAD_SCALE_FLOOR: f64 = 1e-8;

struct OracleState {
    action: Vec<f64>,
    grad_scale: f64,
    rounds: u64,
    support: Support,
}

/// K oracle states over a shared domain; oracles never read each other's data.
pub struct OracleBank<'a, D: LinearDomain> {
    domain: &'a D,
    states: Vec<OracleState>,
    diameter: f64,
    horizon: usize,
}

impl<'a, D: LinearDomain> OracleBank<'a, D> {
    /// All actions start at the domain's canonical origin.
    pub fn init(domain: &'a D, count: usize, horizon: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::EmptyOracleBank);
        }
        assert!(horizon >= 1);
        let start = domain.start_point();
        let states = (0..count)
            .map(|_| OracleState {
                action: start.clone(),
                grad_scale: GRAD_SCALE_FLOOR,
                rounds: 0,
                support: Support::default(),
            })
            .collect();
        Ok(Self { domain, states, diameter: domain.diameter(), horizon })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Current action of oracle `k` (0-based); does not advance state.
    pub fn get_action(&self, k: usize) -> Result<&[f64]> {
        self.states
            .get(k)
            .map(|s| s.action.as_slice())
            .ok_or(Error::OracleIndexOutOfRange { index: k, count: self.states.len() })
    }

    /// Feeds payoff vector `d` to oracle `k`: one projected ascent step.
    pub fn feed_payoff_vector(&mut self, k: usize, d: &[f64]) -> Result<()> {
        let count = self.states.len();
        let state = self
            .states
            .get_mut(k)
            .ok_or(Error::OracleIndexOutOfRange { index: k, count })?;
        Self::step(self.domain, self.diameter, self.horizon, state, d)
    }

    /// Feeds all K payoffs for one round; the per-oracle steps are
    /// independent, so they run in parallel.
    pub fn feed_all(&mut self, payoffs: &[Vec<f64>]) -> Result<()> {
        if payoffs.len() != self.states.len() {
            return Err(Error::DimensionMismatch {
                expected: self.states.len(),
                got: payoffs.len(),
            });
        }
        let domain = self.domain;
        let diameter = self.diameter;
        let horizon = self.horizon;
        self.states
            .par_iter_mut()
            .zip(payoffs.par_iter())
            .map(|(state, d)| Self::step(domain, diameter, horizon, state, d))
            .collect::<Result<Vec<()>>>()?;
        Ok(())
    }

    fn step(domain: &D, diameter: f64, horizon: usize, state: &mut OracleState, d: &[f64]) -> Result<()> {
        if d.len() != domain.dim() {
            return Err(Error::DimensionMismatch { expected: domain.dim(), got: d.len() });
        }
        state.grad_scale = state.grad_scale.max(linalg::norm(d));
        let eta = diameter / (state.grad_scale * (horizon as f64).sqrt());
        let target = linalg::axpy(&state.action, eta, d);
        state.action = domain.project_warm(&target, PROJECTION_TOL, &mut state.support)?;
        state.rounds += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::DownClosedPolytope;
    use crate::rng::StreamRng;

    #[test]
    fn init_starts_at_origin_and_rejects_empty() {
        let p = DownClosedPolytope::unit_box(2);
        let bank = OracleBank::init(&p, 3, 10).unwrap();
        for k in 0..3 {
            assert_eq!(bank.get_action(k).unwrap(), &[0.0, 0.0]);
        }
        assert!(bank.get_action(3).is_err());
        assert!(matches!(OracleBank::init(&p, 0, 10), Err(Error::EmptyOracleBank)));
    }

    #[test]
    fn shrunk_domain_starts_at_delta_ones() {
        let p = DownClosedPolytope::unit_box(2);
        let shrink = p.shrink_interior(0.1).unwrap();
        let bank = OracleBank::init(&shrink, 2, 4).unwrap();
        assert_eq!(bank.get_action(0).unwrap(), &[0.1, 0.1]);
    }

    #[test]
    fn reads_do_not_advance_state() {
        let p = DownClosedPolytope::unit_box(2);
        let bank = OracleBank::init(&p, 1, 10).unwrap();
        let a = bank.get_action(0).unwrap().to_vec();
        let b = bank.get_action(0).unwrap().to_vec();
        assert_eq!(a, b);
    }

    #[test]
    fn one_step_matches_hand_simulation() {
        // Box [0,1]^2, T=4: eta = D / (||d|| sqrt(T)) = sqrt(2)/(sqrt(2)*2) = 1/2,
        // so the step lands on (1/2, 1/2).
        let p = DownClosedPolytope::unit_box(2);
        let mut bank = OracleBank::init(&p, 1, 4).unwrap();
        bank.feed_payoff_vector(0, &[1.0, 1.0]).unwrap();
        let a = bank.get_action(0).unwrap();
        assert!(linalg::dist(a, &[0.5, 0.5]) < 1e-6, "{a:?}");
    }

    #[test]
    fn projected_step_clips_negative_coordinate()  {
        // d = (10, -10): eta*d = (D/sqrt(T)) * d/||d||; with T chosen so that
        // eta*d = (0.5, -0.5), the projected action is (0.5, 0).
        // eta = D/(||d|| sqrt(T)); eta*10 = 0.5 <=> sqrt(T) = sqrt(2)*10/(10*sqrt(2)*0.5) = 2.
        let p = DownClosedPolytope::unit_box(2);
        let mut bank = OracleBank::init(&p, 1, 4).unwrap();
        bank.feed_payoff_vector(0, &[10.0, -10.0]).unwrap();
        let a = bank.get_action(0).unwrap();
        assert!(linalg::dist(a, &[0.5, 0.0]) < 1e-6, "{a:?}");
    }

    #[test]
    fn zero_payoff_keeps_action() {
        let p = DownClosedPolytope::unit_box(2);
        let mut bank = OracleBank::init(&p, 1, 16).unwrap();
        bank.feed_payoff_vector(0, &[1.0, 0.2]).unwrap();
        let before = bank.get_action(0).unwrap().to_vec();
        bank.feed_payoff_vector(0, &[0.0, 0.0]).unwrap();
        assert_eq!(bank.get_action(0).unwrap(), before.as_slice());
    }

    #[test]
    fn repeated_payoff_converges_to_lp_vertex() {
        let p = DownClosedPolytope::new(
            2,
            vec![vec![1.0, 1.0]],
            vec![1.0],
            vec![1.0, 1.0],
        )
        .unwrap();
        let t = 400;
        let mut bank = OracleBank::init(&p, 1, t).unwrap();
        let d = vec![2.0, 1.0];
        for _ in 0..t {
            bank.feed_payoff_vector(0, &d).unwrap();
        }
        let v = p.linear_maximize(&d).unwrap();
        let a = bank.get_action(0).unwrap();
        let diam = p.radius_diameter_bounds().1;
        assert!(
            linalg::dist(a, &v) <= diam / (t as f64).sqrt() + 1e-9,
            "action {a:?} vs vertex {v:?}"
        );
    }

    #[test]
    fn actions_stay_feasible_under_adversarial_feeds() {
        let mut rng = StreamRng::new(5);
        let p = DownClosedPolytope::new(
            3,
            vec![vec![0.7, 0.3, 0.5], vec![0.2, 0.9, 0.4]],
            vec![0.8, 1.0],
            vec![1.0, 1.0, 0.9],
        )
        .unwrap();
        let mut bank = OracleBank::init(&p, 2, 100).unwrap();
        for _ in 0..100 {
            for k in 0..2 {
                let d: Vec<f64> = (0..3).map(|_| rng.uniform(-5.0, 5.0)).collect();
                bank.feed_payoff_vector(k, &d).unwrap();
                assert!(p.contains(bank.get_action(k).unwrap(), 1e-8).unwrap());
            }
        }
    }

    #[test]
    fn regret_against_hindsight_best_is_sublinear() {
        // Assumption surrogate: cumulative payoff within 3 * D * G_hat * sqrt(T)
        // of the best fixed point in hindsight, over 5 adversarial streams.
        let p = DownClosedPolytope::new(
            4,
            vec![vec![0.6, 0.8, 0.2, 0.4], vec![0.3, 0.1, 0.9, 0.5]],
            vec![1.0, 0.9],
            vec![1.0; 4],
        )
        .unwrap();
        let t = 200;
        for seed in 0..5u64 {
            let mut rng = StreamRng::new(seed);
            let mut bank = OracleBank::init(&p, 1, t).unwrap();
            let mut summed = vec![0.0; 4];
            let mut earned = 0.0;
            let mut g_hat: f64 = GRAD_SCALE_FLOOR;
            for _ in 0..t {
                let d: Vec<f64> = (0..4).map(|_| rng.uniform(-1.0, 1.0)).collect();
                g_hat = g_hat.max(linalg::norm(&d));
                earned += linalg::dot(bank.get_action(0).unwrap(), &d);
                bank.feed_payoff_vector(0, &d).unwrap();
                for i in 0..4 {
                    summed[i] += d[i];
                }
            }
            let best_point = p.linear_maximize(&summed).unwrap();
            let best = linalg::dot(&best_point, &summed);
            let diam = p.radius_diameter_bounds().1;
            let budget = 3.0 * diam * g_hat * (t as f64).sqrt();
            assert!(
                best - earned <= budget,
                "seed {seed}: regret {} over budget {budget}",
                best - earned
            );
        }
    }
}
