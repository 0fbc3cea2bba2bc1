//! The sharp curve inequality `M + (L-A) >= (L-A)²/2π`: deficits on random
//! h-convex curves, equality on circles, and the stability ratio
//! `dist / (s^{1/2} + s^{1/6})` along a one-parameter family.
//!
//! Run: cargo run --release --example curve_inequality

use hconvex::curve::{circle_lhs, derive_fields, inequality_report, CurveGrid, FourierMode, RandomCurveFamily};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hconvex::Result<()> {
    let circle = inequality_report(&derive_fields(&CurveGrid::circle(256, 1.0)?)?);
    println!("unit circle: lhs {:.15} (closed form {:.15}), deficit {:.1e}", circle.lhs, circle_lhs(1.0), circle.deficit);

    let family = RandomCurveFamily::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let deficits: Vec<f64> = (0..50)
        .map(|_| derive_fields(&family.sample(&mut rng)).map(|f| inequality_report(&f).deficit))
        .collect::<hconvex::Result<_>>()?;
    let min = deficits.iter().copied().fold(f64::INFINITY, f64::min);
    println!("50 random h-convex curves: smallest deficit {min:.4e}");

    println!("\n{:>6} {:>12} {:>10} {:>8}", "ε", "deficit", "dist", "ratio");
    for i in 1..=10 {
        let eps = 0.01 * i as f64;
        let c = CurveGrid::from_modes(256, 1.0, &[FourierMode::cos(2, eps)])?;
        let r = inequality_report(&derive_fields(&c)?);
        println!(
            "{eps:>6.2} {:>12.4e} {:>10.6} {:>8.4}",
            r.deficit,
            r.circle_dist,
            r.stability_ratio.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
