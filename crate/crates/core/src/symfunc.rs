//! Normalized elementary symmetric functions `E_k = σ_k / binom(n, k)` of
//! principal-curvature vectors.

use crate::error::{Error, Result};

/// `(E_0, …, E_n)` by the one-pass normalized recurrence
/// `E_k^{(j)} = ((j-k)/j) E_k^{(j-1)} + (k/j) x_j E_{k-1}^{(j-1)}`.
pub fn elem_sym(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for (idx, &x) in values.iter().enumerate() {
        let j = (idx + 1) as f64;
        for k in (1..=idx + 1).rev() {
            let kf = k as f64;
            e[k] = ((j - kf) / j) * e[k] + (kf / j) * x * e[k - 1];
        }
    }
    e
}

/// `∂E_k/∂κ_i = (k/n) E_{k-1}(κ without entry i)`, evaluated by recomputing the
/// deflated recurrence for each `i`.
pub fn elem_sym_gradient(values: &[f64], k: usize) -> Vec<f64> {
    let n = values.len();
    assert!(k >= 1 && k <= n, "k = {k} outside 1..={n}");
    let scale = k as f64 / n as f64;
    let mut rest = Vec::with_capacity(n.saturating_sub(1));
    (0..n)
        .map(|i| {
            rest.clear();
            rest.extend(values.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x));
            scale * elem_sym(&rest)[k - 1]
        })
        .collect()
}

/// Residuals of `Σ Ė_k^i = k E_{k-1}`, `Σ Ė_k^i κ_i = k E_k` and
/// `Σ Ė_k^i κ_i² = n E_1 E_k - (n-k) E_{k+1}`.
pub fn contraction_identities(values: &[f64], k: usize) -> (f64, f64, f64) {
    let n = values.len();
    let e = elem_sym(values);
    let g = elem_sym_gradient(values, k);
    let kf = k as f64;
    let s0: f64 = g.iter().sum();
    let s1: f64 = g.iter().zip(values).map(|(g, x)| g * x).sum();
    let s2: f64 = g.iter().zip(values).map(|(g, x)| g * x * x).sum();
    let next = if k < n { e[k + 1] } else { 0.0 };
    (
        s0 - kf * e[k - 1],
        s1 - kf * e[k],
        s2 - (n as f64 * e[1] * e[k] - (n - k) as f64 * next),
    )
}

/// `E_i > 0` for every `i = 1..=k`.
pub fn in_garding_cone(values: &[f64], k: usize) -> bool {
    elem_sym(values)[1..=k].iter().all(|&e| e > 0.0)
}

/// `E_l E_k - E_{k+1} E_{l-1}`, non-negative on the Garding cone of order `k`.
pub fn newton_maclaurin_gap(values: &[f64], k: usize, l: usize) -> Result<f64> {
    let n = values.len();
    if !(1 <= l && l <= k && k < n) {
        return Err(Error::Domain(format!("need 1 <= l <= k < n, got l = {l}, k = {k}, n = {n}")));
    }
    if !in_garding_cone(values, k) {
        return Err(Error::NotInCone { k });
    }
    let e = elem_sym(values);
    Ok(e[l] * e[k] - e[k + 1] * e[l - 1])
}
