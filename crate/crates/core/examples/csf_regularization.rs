//! A curve that is h-convex but touches curvature 1 at one point becomes
//! strictly h-convex after a short curve-shortening flow.
//!
//! Run: cargo run --release --example csf_regularization

use hconvex::curve::{derive_fields, hconvexity_margin, tangent_fixture};
use hconvex::flow::csf_regularize;

fn main() -> hconvex::Result<()> {
    let curve = tangent_fixture(256, 1.0)?;
    let f = derive_fields(&curve)?;
    let j = (0..f.n_nodes())
        .min_by(|&a, &b| f.kappa[a].total_cmp(&f.kappa[b]))
        .unwrap_or(0);
    println!("fixture: min κ - 1 = {:.2e} at node {j}", hconvexity_margin(&f));
    for tau in [1e-5, 1e-4, 1e-3, 1e-2] {
        let smoothed = csf_regularize(&curve, tau, 10)?;
        println!("τ = {tau:.0e}: margin {:.4e}", hconvexity_margin(&derive_fields(&smoothed)?));
    }
    Ok(())
}
