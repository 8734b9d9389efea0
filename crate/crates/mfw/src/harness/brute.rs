//! Exhaustive grid search, the independent optimum oracle for small
//! dimensions.

use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::polytope::DownClosedPolytope;

/// Best feasible point of a `step`-spaced grid over `[0,1]^n`; guarded to
/// `n <= 4` (the grid is `(1/step)^n` points).
pub fn brute_force_opt(
    objective: &dyn Objective,
    polytope: &DownClosedPolytope,
    step: f64,
) -> Result<(Vec<f64>, f64)> {
    let n = polytope.dim();
    if n > 4 {
        return Err(Error::InvalidConfig(format!(
            "grid search is limited to n <= 4 (got n = {n})"
        )));
    }
    assert!(step > 0.0 && step <= 1.0);
    let points_per_axis = (1.0 / step).round() as usize + 1;
    let mut best_value = f64::NEG_INFINITY;
    let mut best_point = vec![0.0; n];
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    loop {
        for i in 0..n {
            x[i] = (idx[i] as f64 * step).min(1.0);
        }
        if polytope.contains(&x, 0.0)? {
            let v = objective.value(&x);
            if v > best_value {
                best_value = v;
                best_point.copy_from_slice(&x);
            }
        }
        // Odometer increment.
        let mut axis = 0;
        loop {
            if axis == n {
                return Ok((best_point, best_value));
            }
            idx[axis] += 1;
            if idx[axis] < points_per_axis {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::objectives::{gen_quadratic, QuadraticObjective};
    use crate::rng::StreamRng;

    struct Linear(Vec<f64>);

    impl Objective for Linear {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn value(&self, x: &[f64]) -> f64 {
            linalg::dot(&self.0, x)
        }
        fn gradient(&self, _x: &[f64]) -> Vec<f64> {
            self.0.clone()
        }
    }

    #[test]
    fn linear_box_optimum() {
        let p = DownClosedPolytope::unit_box(2);
        let (x, opt) = brute_force_opt(&Linear(vec![1.0, 1.0]), &p, 0.5).unwrap();
        assert_eq!(x, vec![1.0, 1.0]);
        assert_eq!(opt, 2.0);
    }

    #[test]
    fn one_dimensional_parabola_peak() {
        // f = -(x - 0.3)^2 + 1 = -x^2/... expressed as a quadratic objective.
        let q = QuadraticObjective::new(vec![vec![-2.0]], vec![0.6], 0.91).unwrap();
        let p = DownClosedPolytope::unit_box(1);
        let (x, opt) = brute_force_opt(&q, &p, 0.1).unwrap();
        assert!((x[0] - 0.3).abs() < 1e-12);
        assert!((opt - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grid_refinement_is_consistent() {
        let mut rng = StreamRng::new(1);
        let (q, p) = gen_quadratic(2, 2, &mut rng);
        let (_, coarse) = brute_force_opt(&q, &p, 0.01).unwrap();
        let (_, fine) = brute_force_opt(&q, &p, 0.005).unwrap();
        let lipschitz = {
            let mut g: f64 = 0.0;
            for _ in 0..500 {
                let x = [rng.next_f64(), rng.next_f64()];
                g = g.max(linalg::norm(&q.gradient(&x)));
            }
            g
        };
        assert!(fine >= coarse - 1e-12);
        assert!((fine - coarse).abs() <= lipschitz * 0.01 * 2.0f64.sqrt());
    }

    #[test]
    fn dimension_guard() {
        let p = DownClosedPolytope::unit_box(5);
        assert!(brute_force_opt(&Linear(vec![1.0; 5]), &p, 0.5).is_err());
    }
}
