//! Exponential approach to the limit circle: fit the decay of sup|ρ - a∞| and
//! compare with the linearized rate k² e^{a∞} for a single perturbed mode.
//!
//! Run: cargo run --release --example decay_rate

use hconvex::curve::{CurveGrid, FourierMode};
use hconvex::flow::{evolve, fit_decay_rate, predict_limit_radius, FlowOptions};

fn main() -> hconvex::Result<()> {
    let opts = FlowOptions {
        q_tol: 0.0,
        sup_tol: 1e-10,
        sample_every: 20,
        ..FlowOptions::default()
    };
    println!("{:>4} {:>6} {:>10} {:>12} {:>12} {:>9}", "k", "base", "a∞", "fitted", "predicted", "rel err");
    for (k, base) in [(1, 1.0), (2, 1.0), (3, 1.0), (2, 0.6)] {
        let curve = CurveGrid::from_modes(128, base, &[FourierMode::cos(k, 0.03 * base)])?;
        let a_inf = predict_limit_radius(&curve)?;
        let fit = fit_decay_rate(&evolve(&curve, &opts)?)?;
        println!(
            "{k:>4} {base:>6.2} {a_inf:>10.6} {:>12.6} {:>12.6} {:>9.2e}",
            fit.fitted,
            fit.predicted,
            (fit.fitted - fit.predicted).abs() / fit.predicted
        );
    }
    Ok(())
}
