//! Offline measured greedy on a generated quadratic, checked against a
//! grid-search optimum: the output should clear (1/e) * OPT comfortably.

use mfw::harness::brute_force_opt;
use mfw::objectives::{gen_quadratic, Objective};
use mfw::offline::offline_measured_greedy;
use mfw::rng::StreamRng;
use mfw::Result;

fn main() -> Result<()> {
    let mut rng = StreamRng::new(0);
    let (objective, polytope) = gen_quadratic(2, 2, &mut rng);

    let solution = offline_measured_greedy(&objective, &polytope, 200)?;
    let value = objective.value(&solution);

    let (grid_point, grid_opt) = brute_force_opt(&objective, &polytope, 0.005)?;
    println!("measured greedy: f({solution:?}) = {value:.6}");
    println!("grid optimum:    f({grid_point:?}) = {grid_opt:.6}");
    println!("ratio            {:.4} (guarantee: 1/e = {:.4})", value / grid_opt, 1.0 / std::f64::consts::E);
    Ok(())
}
