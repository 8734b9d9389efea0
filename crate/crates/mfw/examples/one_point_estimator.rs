//! The one-point gradient estimator in isolation: Monte Carlo averages of
//! `(n/delta) f(x + delta u) u` converge to the exact gradient of a
//! quadratic at the 1/sqrt(N) rate.

use mfw::linalg;
use mfw::objectives::{gen_quadratic_objective, Objective};
use mfw::oracles::{one_point_estimate, SphereSample, ValueOracle};
use mfw::rng::StreamRng;
use mfw::Result;

fn main() -> Result<()> {
    let mut rng = StreamRng::new(42);
    let objective = gen_quadratic_objective(3, &mut rng);
    let x = [0.4, 0.3, 0.5];
    let delta = 0.1;
    let exact = objective.gradient(&x);
    println!("exact gradient: {exact:?}");

    for samples in [1_000usize, 10_000, 100_000] {
        let mut oracle = ValueOracle::new(&objective);
        let mut mean = vec![0.0; 3];
        for _ in 0..samples {
            let u = SphereSample::draw(3, &mut rng);
            let est = one_point_estimate(&mut oracle, &x, delta, &u)?;
            for i in 0..3 {
                mean[i] += est[i];
            }
        }
        mean.iter_mut().for_each(|m| *m /= samples as f64);
        println!(
            "N = {samples:>6}: mean = [{:+.4}, {:+.4}, {:+.4}], |error| = {:.5}, value queries = {}",
            mean[0],
            mean[1],
            mean[2],
            linalg::dist(&mean, &exact),
            oracle.call_count()
        );
    }
    Ok(())
}
