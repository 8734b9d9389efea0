//! Counting reward-function oracles and the one-point gradient estimator.
//!
//! A [`StochasticGradientOracle`] answers gradient queries corrupted by
//! i.i.d. per-coordinate Gaussian noise; a [`ValueOracle`] answers scalar
//! reward queries. Both count every call, which is what the oracle-budget
//! experiments assert against. The bandit algorithm never touches gradients:
//! it builds `(n/delta) * f(x + delta*u) * u` from a single value query per
//! probed reward.

use crate::error::{Error, Result};
use crate::linalg;
use crate::objectives::Objective;
use crate::rng::StreamRng;

fn check_unit_cube(x: &[f64], tol: f64) -> Result<()> {
    for (i, &xi) in x.iter().enumerate() {
        if !(xi >= -tol && xi <= 1.0 + tol) {
            return Err(Error::OutsideUnitCube { coordinate: i, value: xi });
        }
    }
    Ok(())
}

/// Gradient oracle: `grad f(x) + sigma * z`, `z ~ N(0, I)`, one counted call
/// per query. With `sigma = 0` the output equals the exact gradient.
pub struct StochasticGradientOracle<'a> {
    objective: &'a dyn Objective,
    sigma: f64,
    rng: StreamRng,
    calls: u64,
}

impl<'a> StochasticGradientOracle<'a> {
    pub fn new(objective: &'a dyn Objective, sigma: f64, rng: StreamRng) -> Self {
        assert!(sigma >= 0.0, "noise level must be nonnegative");
        Self { objective, sigma, rng, calls: 0 }
    }

    pub fn noisy_grad(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.objective.dim() {
            return Err(Error::DimensionMismatch { expected: self.objective.dim(), got: x.len() });
        }
        check_unit_cube(x, 1e-9)?;
        self.calls += 1;
        let mut g = self.objective.gradient(x);
        for gi in &mut g {
            *gi += self.sigma * self.rng.standard_normal();
        }
        Ok(g)
    }

    pub fn call_count(&self) -> u64 {
        self.calls
    }
}

/// Value oracle: `f(x)` with one counted call per query.
pub struct ValueOracle<'a> {
    objective: &'a dyn Objective,
    calls: u64,
}

impl<'a> ValueOracle<'a> {
    pub fn new(objective: &'a dyn Objective) -> Self {
        Self { objective, calls: 0 }
    }

    pub fn value(&mut self, x: &[f64]) -> Result<f64> {
        if x.len() != self.objective.dim() {
            return Err(Error::DimensionMismatch { expected: self.objective.dim(), got: x.len() });
        }
        check_unit_cube(x, 1e-9)?;
        self.calls += 1;
        Ok(self.objective.value(x))
    }

    pub fn call_count(&self) -> u64 {
        self.calls
    }
}

/// A unit vector drawn uniformly from the sphere S^{n-1}.
#[derive(Debug, Clone)]
pub struct SphereSample(Vec<f64>);

impl SphereSample {
    pub fn draw(n: usize, rng: &mut StreamRng) -> Self {
        Self(rng.unit_sphere(n))
    }

    pub fn direction(&self) -> &[f64] {
        &self.0
    }
}

/// One-point gradient estimate `(n/delta) * f(x + delta*u) * u`; exactly one
/// value-oracle call. Unbiased for the gradient of the delta-smoothed reward
/// `E_{v~ball}[f(x + delta v)]`. The caller must keep the probe inside the
/// feasible region (the delta-interior construction guarantees it).
pub fn one_point_estimate(
    oracle: &mut ValueOracle,
    x: &[f64],
    delta: f64,
    u: &SphereSample,
) -> Result<Vec<f64>> {
    assert!(delta > 0.0, "probe radius must be positive");
    let n = x.len();
    if u.direction().len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: u.direction().len() });
    }
    let probe = linalg::axpy(x, delta, u.direction());
    check_unit_cube(&probe, 1e-9)
        .map_err(|e| Error::InfeasibleProbe(format!("x + delta*u leaves the unit cube: {e}")))?;
    let reward = oracle.value(&probe)?;
    let scale = n as f64 / delta * reward;
    Ok(linalg::scale(u.direction(), scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::QuadraticObjective;
    use crate::rng::stream;

    fn tiny_quadratic() -> QuadraticObjective {
        // H = -2I, h = (1,1), c = 3.
        QuadraticObjective::new(
            vec![vec![-2.0, 0.0], vec![0.0, -2.0]],
            vec![1.0, 1.0],
            3.0,
        )
        .unwrap()
    }

    #[test]
    fn exact_gradient_when_noise_free() {
        let q = tiny_quadratic();
        let mut o = StochasticGradientOracle::new(&q, 0.0, StreamRng::new(0));
        let g = o.noisy_grad(&[1.0, 0.0]).unwrap();
        assert_eq!(g, vec![-1.0, 1.0]);
        assert_eq!(o.call_count(), 1);
    }

    #[test]
    fn rejects_points_outside_cube() {
        let q = tiny_quadratic();
        let mut o = StochasticGradientOracle::new(&q, 0.0, StreamRng::new(0));
        assert!(matches!(o.noisy_grad(&[1.5, 0.0]), Err(Error::OutsideUnitCube { .. })));
    }

    #[test]
    fn noisy_mean_matches_exact_gradient() {
        let q = tiny_quadratic();
        let sigma = 0.1;
        let mut o =
            StochasticGradientOracle::new(&q, sigma, StreamRng::substream(1, &[stream::NOISE]));
        let x = [0.25, 0.5];
        let exact = q.gradient(&x);
        let n = 100_000;
        let mut mean = vec![0.0; 2];
        for _ in 0..n {
            let g = o.noisy_grad(&x).unwrap();
            mean[0] += g[0];
            mean[1] += g[1];
        }
        mean.iter_mut().for_each(|m| *m /= n as f64);
        let tol = 3.0 * sigma / (n as f64).sqrt();
        for i in 0..2 {
            assert!((mean[i] - exact[i]).abs() < tol, "coord {i}: {} vs {}", mean[i], exact[i]);
        }
        assert_eq!(o.call_count(), n);
    }

    #[test]
    fn sphere_sample_is_unit_and_s0_is_sign() {
        let mut rng = StreamRng::new(2);
        for n in [1usize, 2, 7] {
            let s = SphereSample::draw(n, &mut rng);
            assert!((linalg::norm(s.direction()) - 1.0).abs() < 1e-12);
        }
        let mut pos = 0usize;
        for _ in 0..1000 {
            let s = SphereSample::draw(1, &mut rng);
            let v = s.direction()[0];
            assert!((v.abs() - 1.0).abs() < 1e-12);
            if v > 0.0 {
                pos += 1;
            }
        }
        assert!((400..=600).contains(&pos), "S^0 sign split {pos}/1000");
    }

    #[test]
    fn sphere_moments_in_three_dimensions() {
        let mut rng = StreamRng::new(3);
        let n = 100_000;
        let mut mean = [0.0f64; 3];
        let mut second = [0.0f64; 3];
        for _ in 0..n {
            let s = SphereSample::draw(3, &mut rng);
            for i in 0..3 {
                mean[i] += s.direction()[i];
                second[i] += s.direction()[i] * s.direction()[i];
            }
        }
        for i in 0..3 {
            mean[i] /= n as f64;
            second[i] /= n as f64;
            // Coordinate std is 1/sqrt(3); 3-sigma bands.
            assert!(mean[i].abs() < 3.0 * (1.0 / 3.0f64).sqrt() / (n as f64).sqrt() * 1.5);
            assert!((second[i] - 1.0 / 3.0).abs() < 0.01);
        }
    }

    #[test]
    fn constant_reward_estimates_average_to_zero() {
        // f == c: the one-point estimate is (n/delta)*c*u, and averaging the
        // +/-u pair cancels exactly.
        let q = QuadraticObjective::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]], vec![0.0, 0.0], 2.5)
            .unwrap();
        let mut vo = ValueOracle::new(&q);
        let mut rng = StreamRng::new(4);
        let x = [0.4, 0.4];
        let delta = 0.2;
        let u = SphereSample::draw(2, &mut rng);
        let plus = one_point_estimate(&mut vo, &x, delta, &u).unwrap();
        let minus_dir = SphereSample(linalg::scale(u.direction(), -1.0));
        let minus = one_point_estimate(&mut vo, &x, delta, &minus_dir).unwrap();
        assert_eq!(vo.call_count(), 2);
        for i in 0..2 {
            assert!((plus[i] + minus[i]).abs() < 1e-12);
            assert!((plus[i] - 2.0 / delta * 2.5 * u.direction()[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn one_point_mean_matches_gradient_for_quadratic() {
        // For quadratics the smoothing shift is a constant, so the smoothed
        // gradient equals the exact gradient.
        let q = tiny_quadratic();
        let x = [0.5, 0.3];
        let delta = 0.2;
        let exact = q.gradient(&x);
        let mut vo = ValueOracle::new(&q);
        let mut rng = StreamRng::substream(5, &[stream::SPHERE]);
        let n = 100_000usize;
        let mut mean = vec![0.0; 2];
        let mut sq = vec![0.0; 2];
        for _ in 0..n {
            let u = SphereSample::draw(2, &mut rng);
            let est = one_point_estimate(&mut vo, &x, delta, &u).unwrap();
            for i in 0..2 {
                mean[i] += est[i];
                sq[i] += est[i] * est[i];
            }
        }
        for i in 0..2 {
            mean[i] /= n as f64;
            let var = sq[i] / n as f64 - mean[i] * mean[i];
            let se = (var / n as f64).sqrt();
            assert!(
                (mean[i] - exact[i]).abs() < 3.0 * se,
                "coord {i}: mean {} exact {} se {}",
                mean[i],
                exact[i],
                se
            );
        }
        assert_eq!(vo.call_count() as usize, n);
    }

    #[test]
    fn estimator_error_shrinks_like_inverse_sqrt_n() {
        let q = tiny_quadratic();
        let x = [0.5, 0.3];
        let delta = 0.2;
        let exact = q.gradient(&x);
        let mut errs = Vec::new();
        for (label, n) in [(0u64, 1_000usize), (1, 10_000), (2, 100_000)] {
            let mut vo = ValueOracle::new(&q);
            let mut rng = StreamRng::substream(6, &[stream::SPHERE, label]);
            let mut mean = vec![0.0; 2];
            for _ in 0..n {
                let u = SphereSample::draw(2, &mut rng);
                let est = one_point_estimate(&mut vo, &x, delta, &u).unwrap();
                for i in 0..2 {
                    mean[i] += est[i];
                }
            }
            mean.iter_mut().for_each(|m| *m /= n as f64);
            errs.push(linalg::dist(&mean, &exact));
        }
        // Error should fall roughly tenfold over the two decades; allow wide
        // statistical slack around the 1/sqrt(N) slope.
        assert!(errs[2] < errs[0] * 0.5, "errors {errs:?}");
        assert!(errs[2] < errs[1], "errors {errs:?}");
    }

    #[test]
    fn smoothed_value_shift_matches_trace_formula() {
        // E_{v~ball}[f(x+delta v)] - f(x) = delta^2 tr(H) / (2(n+2)).
        let q = tiny_quadratic();
        let x = [0.5, 0.4];
        let delta = 0.1;
        let mut rng = StreamRng::new(7);
        let n = 1_000_000usize;
        let mut acc = 0.0;
        for _ in 0..n {
            let v = rng.unit_ball(2);
            let probe = linalg::axpy(&x, delta, &v);
            acc += q.value(&probe);
        }
        let smoothed = acc / n as f64;
        let shift = delta * delta * (-4.0) / (2.0 * (2.0 + 2.0));
        assert!(
            (smoothed - q.value(&x) - shift).abs() <= 1e-3,
            "smoothed {} base {} shift {}",
            smoothed,
            q.value(&x),
            shift
        );
    }

    #[test]
    fn smoothed_value_stays_within_lipschitz_band() {
        let q = tiny_quadratic();
        let mut rng = StreamRng::new(8);
        let delta = 0.05;
        // Measured Lipschitz bound over random cube points.
        let mut g_max: f64 = 0.0;
        let mut points = Vec::new();
        for _ in 0..1000 {
            let x: Vec<f64> = (0..2).map(|_| rng.next_f64()).collect();
            g_max = g_max.max(linalg::norm(&q.gradient(&x)));
            points.push(x);
        }
        for x in points {
            let samples = 1000;
            let mut acc = 0.0;
            for _ in 0..samples {
                let v = rng.unit_ball(2);
                // Smoothed value may probe slightly outside the cube; the
                // quadratic extends smoothly so evaluate directly.
                let probe = linalg::axpy(&x, delta, &v);
                acc += q.value(&probe);
            }
            let smoothed = acc / samples as f64;
            let se_margin = 3.0 * g_max * delta / (samples as f64).sqrt();
            assert!(
                (smoothed - q.value(&x)).abs() <= g_max * delta + se_margin,
                "shift {} exceeds G*delta {}",
                (smoothed - q.value(&x)).abs(),
                g_max * delta
            );
        }
    }
}
