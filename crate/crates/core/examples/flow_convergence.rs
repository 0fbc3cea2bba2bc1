//! Evolve a perturbed circle until it settles on the circle predicted by the
//! conserved quantity `L - A`, and print the monitored invariants.
//!
//! Run: cargo run --release --example flow_convergence

use hconvex::curve::{derive_fields, inequality_report, CurveGrid, FourierMode};
use hconvex::flow::{evolve, fit_decay_rate, monitor_report, FlowOptions};

fn main() -> hconvex::Result<()> {
    let curve = CurveGrid::from_modes(256, 1.0, &[FourierMode::cos(2, 0.1)])?;
    let opts = FlowOptions {
        q_tol: 0.0,
        sup_tol: 1e-10,
        sample_every: 20,
        ..FlowOptions::default()
    };
    let trace = evolve(&curve, &opts)?;
    let first = &trace.samples[0].functionals;
    let last = trace.last();

    println!("termination        {:?} after {} steps", trace.termination, trace.final_state.step_count);
    println!("final time         {:.6}", last.t);
    println!("L - A              {:.15} -> {:.15}", first.la, last.functionals.la);
    println!("predicted radius   {:.15}", trace.a_infinity_predicted);

    let rho = trace.final_state.curve.rho();
    let mean = rho.iter().sum::<f64>() / rho.len() as f64;
    let spread = last.functionals.rho_max - last.functionals.rho_min;
    println!("final mean radius  {mean:.15}  (spread {spread:.3e})");

    let m = monitor_report(&trace);
    println!("\nmonitors");
    println!("  L-A drift (rel)        {:.3e}", m.la_drift_rel);
    println!("  kappa_min drop         {:.3e}", m.kappa_min_drop);
    println!("  kappa_max rise         {:.3e}", m.kappa_max_rise);
    println!("  rho_min drop           {:.3e}", m.rho_min_drop);
    println!("  rho_max rise           {:.3e}", m.rho_max_rise);
    println!("  M increase             {:.3e}", m.m_increase);
    println!("  min Q / L              {:.3e}", m.q_min_over_l);
    println!("  dissipation rel err    {:.3e} over {} samples", m.dissipation_rel_err, m.dissipation_checked);
    println!("  dA/dt vs Q rel err     {:.3e} over {} samples", m.area_rate_rel_err, m.area_rate_checked);

    let fit = fit_decay_rate(&trace)?;
    println!("\ndecay rate of mode {}: fitted {:.5}, linearized {:.5}", fit.mode, fit.fitted, fit.predicted);

    let final_deficit = inequality_report(&derive_fields(&trace.final_state.curve)?).deficit;
    println!("final deficit      {final_deficit:.3e}");
    Ok(())
}
