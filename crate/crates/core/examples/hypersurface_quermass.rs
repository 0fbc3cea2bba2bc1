//! Quermassintegrals of rotationally symmetric hypersurfaces in H^{n+1}, the
//! identities tying them to curvature integrals, and the deficits of the
//! modified Alexandrov–Fenchel and weighted inequalities.
//!
//! Run: cargo run --release --example hypersurface_quermass

use hconvex::quermass::{
    af_deficits, ball_profile, quermass_vector, sphere_stability_ratio, AxisymmetricHypersurface,
};

fn main() -> hconvex::Result<()> {
    let n = 3;
    let ball = quermass_vector(&AxisymmetricHypersurface::sphere(n, 64, 1.0)?)?;
    println!("geodesic ball of radius 1 in H^4");
    for k in 0..=n {
        let p = ball_profile(n, k, 1.0)?;
        println!("  W_{k} = {:.12} (closed form {:.12}),  W̃_{k} = {:.12}", ball.w[k], p.f, ball.wt[k]);
    }

    let hyp = AxisymmetricHypersurface::from_modes(n, 128, 1.0, &[(2, 0.05)])?;
    let qv = quermass_vector(&hyp)?;
    println!("\nρ = 1 + 0.05 cos 2θ");
    println!("  Minkowski residuals        {:?}", qv.minkowski);
    println!("  shifted Minkowski residuals {:?}", qv.minkowski_shift);
    println!("  gap between routes to W̃    {:.2e}", qv.wt_route_gap());

    let report = af_deficits(&hyp)?;
    for d in &report.af {
        println!("  AF  (k={}, l={}): deficit {:.4e}", d.k, d.l.unwrap_or(0), d.deficit);
    }
    for d in &report.weighted {
        println!("  weighted (k={}): deficit {:.4e}", d.k, d.deficit);
    }

    println!("\nstability ratios dist / (s^(1/2) + s^(1/4)) for k = 1");
    for eps in [0.08, 0.04, 0.02, 0.01] {
        let s = sphere_stability_ratio(&AxisymmetricHypersurface::from_modes(n, 128, 1.0, &[(2, eps)])?, 1)?;
        println!(
            "  ε = {eps:<5} dist {:.4}  AF {:.4}  weighted {:.4}",
            s.dist,
            s.ratio_af.unwrap_or(f64::NAN),
            s.ratio_w.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
