//! Map curves into the Poincaré ball of radius 2, check the conformal
//! curvature relation node by node, and measure Euclidean convexity.
//!
//! Run: cargo run --example ball_model

use hconvex::ball::{
    ball_convexity_margin, ball_to_warped_radius, conformal_residual, map_curve, unit_area_scale,
    warped_to_ball_radius,
};
use hconvex::curve::{derive_fields, functionals, CurveGrid, FourierMode};

fn main() -> hconvex::Result<()> {
    for r in [0.1, 1.0, 5.0, 12.0] {
        let e = warped_to_ball_radius(r)?;
        println!("r = {r:>5}: ρ_E = {e:.15}, back = {:.15}", ball_to_warped_radius(e)?);
    }

    let curve = CurveGrid::from_modes(256, 1.0, &[FourierMode::cos(2, 0.06), FourierMode::cos(3, 0.01)])?;
    let ball = map_curve(&curve)?;
    let f = derive_fields(&curve)?;
    let residual = conformal_residual(&f, &ball)
        .into_iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    println!("\nmax conformal residual     {residual:.2e}");
    println!("ball convexity margin      {:.6}", ball_convexity_margin(&curve)?);
    let length = functionals(&f).length;
    println!("unit-length rescale factor {:.6}", unit_area_scale(1, length)?);
    Ok(())
}
