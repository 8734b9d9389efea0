//! Offline measured greedy: the single-round specialization with exact
//! gradients, used as the reference solver when computing regret curves.
//! On DR-submodular rewards it lands within `(1/e) OPT - O(1/K)`.

use crate::error::Result;
use crate::objectives::Objective;
use crate::polytope::DownClosedPolytope;
use crate::schedule::measured_step;

/// Runs `K` measured steps from the origin, steering each step by the
/// linear maximizer of the damped exact gradient `grad f(x) ⊙ (1 - x)`.
pub fn offline_measured_greedy(
    objective: &dyn Objective,
    polytope: &DownClosedPolytope,
    k_total: usize,
) -> Result<Vec<f64>> {
    assert!(k_total >= 1, "need at least one step");
    let n = polytope.dim();
    let mut x = vec![0.0; n];
    for _ in 0..k_total {
        let grad = objective.gradient(&x);
        let damped: Vec<f64> = grad.iter().zip(&x).map(|(&g, &xi)| g * (1.0 - xi)).collect();
        let v = polytope.linear_maximize(&damped)?;
        x = measured_step(&x, &v, k_total)?;
    }
    Ok(x)
}
