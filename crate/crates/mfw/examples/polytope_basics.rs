//! Tour of the geometric primitives: membership, linear maximization,
//! Euclidean projection, inner radius, and the delta-interior shrink.

use mfw::polytope::DownClosedPolytope;
use mfw::Result;

fn main() -> Result<()> {
    // C = {x >= 0 : x1 + x2 <= 1, x <= 1} in the plane.
    let polytope =
        DownClosedPolytope::new(2, vec![vec![1.0, 1.0]], vec![1.0], vec![1.0, 1.0])?;

    println!("contains (0.3, 0.4): {}", polytope.contains(&[0.3, 0.4], 0.0)?);
    println!("contains (0.8, 0.4): {}", polytope.contains(&[0.8, 0.4], 0.0)?);

    let v = polytope.linear_maximize(&[2.0, 1.0])?;
    println!("argmax <(2,1), x>      = {v:?}");

    let proj = polytope.project(&[1.0, 1.0], 1e-10)?;
    println!("projection of (1,1)    = {proj:?}");

    let (radius, diameter) = polytope.radius_diameter_bounds();
    println!("r(C) = {radius:.6}, diam(C) = {diameter:.6}");
    println!("inner radius r         = {:.6}", polytope.inner_radius());

    let shrink = polytope.shrink_interior(0.05)?;
    println!(
        "delta-interior: alpha = {:.6}, image of origin = {:?}",
        shrink.alpha(),
        shrink.map_from_base(&[0.0, 0.0])
    );
    Ok(())
}
