//! Origin-centered circles are stationary: evolve one and watch nothing move.
//!
//! Run: cargo run --release --example circle_fixed_point

use hconvex::curve::{derive_fields, functionals, CurveGrid};
use hconvex::flow::{evolve, flow_rhs, stable_dt, FlowOptions};

fn main() -> hconvex::Result<()> {
    for radius in [0.5, 1.0, 2.0] {
        let circle = CurveGrid::circle(128, radius)?;
        let f = derive_fields(&circle)?;
        let speed = flow_rhs(&f)?.into_iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let fx = functionals(&f);
        println!(
            "a = {radius}: L = {:.12}, A = {:.12}, max |ρ_t| = {speed:.1e}, dt = {:.3e}",
            fx.length,
            fx.area,
            stable_dt(&f, 0.25)?
        );
    }

    let opts = FlowOptions {
        t_max: 1.0,
        q_tol: 0.0,
        sup_tol: 0.0,
        sample_every: 1000,
        ..FlowOptions::default()
    };
    let trace = evolve(&CurveGrid::circle(128, 1.0)?, &opts)?;
    let drift = trace
        .final_state
        .curve
        .rho()
        .iter()
        .fold(0.0f64, |m, r| m.max((r - 1.0).abs()));
    println!(
        "\nunit circle after t = {} ({} steps): sup |ρ - 1| = {drift:.1e}",
        trace.final_state.t, trace.final_state.step_count
    );
    Ok(())
}
