//! Poincaré ball of radius 2: radial coordinate change, Euclidean curvature of
//! mapped curves, and the conformal curvature relation.

use serde::{Deserialize, Serialize};

use crate::curve::{derive_fields, hconvexity_margin, CurveGrid, GeomFields};
use crate::error::{ensure_finite, Error, Result};
use crate::quermass::sphere_area;
use crate::spectral::periodic_derivatives;

/// `ρ_E = 2 tanh(r/2)`.
pub fn warped_to_ball_radius(r: f64) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("warped radius must be non-negative and finite, got {r}")));
    }
    Ok(2.0 * (0.5 * r).tanh())
}

/// `r = ln(2 + ρ_E) - ln(2 - ρ_E)`, evaluated as `2 atanh(ρ_E/2)`.
pub fn ball_to_warped_radius(rho_e: f64) -> Result<f64> {
    if !(rho_e > 0.0 && rho_e < 2.0) {
        return Err(Error::Domain(format!("ball radius must lie in (0, 2), got {rho_e}")));
    }
    Ok(2.0 * (0.5 * rho_e).atanh())
}

/// `e^φ = 4 / (4 - ρ_E²)`.
pub fn conformal_factor(rho_e: f64) -> f64 {
    4.0 / ((2.0 - rho_e) * (2.0 + rho_e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallCurve {
    pub rho_e: Vec<f64>,
    pub rho_e_t1: Vec<f64>,
    pub kappa_e: Vec<f64>,
}

impl BallCurve {
    pub fn n_nodes(&self) -> usize {
        self.rho_e.len()
    }

    /// Outward normal derivative of `φ = ln(4/(4 - ρ_E²))` at node `j`.
    pub fn normal_log_factor_derivative(&self, j: usize) -> f64 {
        let (r, r1) = (self.rho_e[j], self.rho_e_t1[j]);
        2.0 * r / ((2.0 - r) * (2.0 + r)) * r / (r * r + r1 * r1).sqrt()
    }
}

pub fn map_curve(curve: &CurveGrid) -> Result<BallCurve> {
    let rho_e: Vec<f64> = curve.rho().iter().map(|&r| 2.0 * (0.5 * r).tanh()).collect();
    let (d1, d2) = periodic_derivatives(&rho_e);
    let kappa_e: Vec<f64> = (0..rho_e.len())
        .map(|j| {
            let (r, r1, r2) = (rho_e[j], d1[j], d2[j]);
            (r * r + 2.0 * r1 * r1 - r * r2) / (r * r + r1 * r1).powf(1.5)
        })
        .collect();
    ensure_finite(&kappa_e, "kappa_e")?;
    Ok(BallCurve {
        rho_e,
        rho_e_t1: d1,
        kappa_e,
    })
}

/// `min (κ_E - 2/(2 + ρ_E))` over the nodes.
pub fn ball_convexity_margin(curve: &CurveGrid) -> Result<f64> {
    let margin = hconvexity_margin(&derive_fields(curve)?);
    if margin < 0.0 {
        return Err(Error::NotHConvex { margin });
    }
    let b = map_curve(curve)?;
    Ok((0..b.n_nodes())
        .map(|j| b.kappa_e[j] - 2.0 / (2.0 + b.rho_e[j]))
        .fold(f64::INFINITY, f64::min))
}

/// Node-wise `e^φ κ - κ_E - ∂_ν φ`, which vanishes for every curve.
pub fn conformal_residual(fields: &GeomFields, ball: &BallCurve) -> Vec<f64> {
    (0..ball.n_nodes())
        .map(|j| {
            conformal_factor(ball.rho_e[j]) * fields.kappa[j] - ball.kappa_e[j] - ball.normal_log_factor_derivative(j)
        })
        .collect()
}

/// Factor `γ` with `γ^n |M| = |S^n|`.
pub fn unit_area_scale(n: usize, area: f64) -> Result<f64> {
    if n == 0 || !(area > 0.0) {
        return Err(Error::Domain(format!("need n >= 1 and positive area, got n = {n}, area = {area}")));
    }
    Ok((sphere_area(n) / area).powf(1.0 / n as f64))
}
