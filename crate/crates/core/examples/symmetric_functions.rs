//! Normalized elementary symmetric functions of curvature vectors, their
//! gradients, and the Newton–MacLaurin inequality.
//!
//! Run: cargo run --example symmetric_functions

use hconvex::symfunc::{contraction_identities, elem_sym, elem_sym_gradient, in_garding_cone, newton_maclaurin_gap};

fn main() -> hconvex::Result<()> {
    let kappa = [1.0, 2.0, 3.0];
    println!("E(1,2,3)          = {:?}", elem_sym(&kappa));
    println!("∂E_3/∂κ           = {:?}", elem_sym_gradient(&kappa, 3));
    println!("contraction (k=2) = {:?}", contraction_identities(&kappa, 2));

    let mixed = [-1.0, -1.0, 5.0];
    println!("\nE(-1,-1,5) = {:?}", elem_sym(&mixed));
    for k in 1..=3 {
        println!("  in Γ_{k}: {}", in_garding_cone(&mixed, k));
    }

    let spectrum = [1.2, 1.5, 2.0, 3.5];
    println!("\nNewton–MacLaurin gaps E_l E_k - E_(k+1) E_(l-1) for {spectrum:?}");
    for k in 1..4 {
        for l in 1..=k {
            println!("  k = {k}, l = {l}: {:.6}", newton_maclaurin_gap(&spectrum, k, l)?);
        }
    }
    Ok(())
}
