//! Rotationally symmetric hypersurfaces in H^{n+1}: principal curvatures,
//! curvature integrals, quermassintegrals and their modified variants, ball
//! profiles, and the deficits of the associated sharp inequalities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::{BestCircle, GeomFields};
use crate::error::{ensure_finite, Error, Result};
use crate::spectral::{fejer_weights, integrate, refine_extremum, staggered_theta, CosineSeries};
use crate::symfunc::elem_sym;

/// Upper end of the radius range searched when inverting ball profiles.
pub const R_MAX: f64 = 20.0;
/// Lower end of the bracketing interval for profile inversion.
pub const R_MIN: f64 = 1e-8;
/// Relative tolerance of the equality flag on deficits.
pub const EQUALITY_TOL: f64 = 1e-8;

/// `|S^n|`.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI * sphere_area(n - 2) / (n - 1) as f64,
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `∫_0^r sinh^n s ds`.
fn sinh_power_integral(n: usize, r: f64) -> f64 {
    integrate(|s| s.sinh().powi(n as i32), 0.0, r, 0.5)
}

/// Radial graph over S^n depending only on the polar angle, sampled at
/// `θ_j = (j + 1/2)π/m`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisymmetricHypersurface {
    n: usize,
    rho: Vec<f64>,
}

impl AxisymmetricHypersurface {
    pub fn new(n: usize, rho: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("hypersurface dimension must be at least 2, got {n}")));
        }
        if rho.len() < 32 {
            return Err(Error::InvalidGrid(format!("need at least 32 polar nodes, got {}", rho.len())));
        }
        ensure_finite(&rho, "rho")?;
        if let Some((j, r)) = rho.iter().enumerate().find(|(_, &r)| r <= 0.0) {
            return Err(Error::InvalidGrid(format!("rho[{j}] = {r} is not positive")));
        }
        Ok(Self { n, rho })
    }

    pub fn sphere(n: usize, m_nodes: usize, r: f64) -> Result<Self> {
        Self::new(n, vec![r; m_nodes])
    }

    /// `ρ(θ) = base + Σ amp_k cos(kθ)`.
    pub fn from_modes(n: usize, m_nodes: usize, base: f64, modes: &[(usize, f64)]) -> Result<Self> {
        let rho = (0..m_nodes)
            .map(|j| {
                let t = staggered_theta(j, m_nodes);
                base + modes.iter().map(|&(k, a)| a * (k as f64 * t).cos()).sum::<f64>()
            })
            .collect();
        Self::new(n, rho)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m_nodes(&self) -> usize {
        self.rho.len()
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn theta(&self, j: usize) -> f64 {
        staggered_theta(j, self.rho.len())
    }
}

#[derive(Debug, Clone)]
pub struct HypFields {
    pub n: usize,
    pub theta: Vec<f64>,
    pub rho: Vec<f64>,
    pub rho_t1: Vec<f64>,
    pub rho_t2: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi_p: Vec<f64>,
    pub big_phi: Vec<f64>,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub kappa_mer: Vec<f64>,
    /// Curvature along the rotation orbits, multiplicity `n - 1`.
    pub kappa_rot: Vec<f64>,
    /// Area density `ω_{n-1} v φ^{n-1} sin^{n-1}θ` with respect to `dθ`.
    pub area_weight: Vec<f64>,
    /// Quadrature weights: `∫_M F dμ ≈ Σ quad_weight_j F_j`.
    pub quad_weight: Vec<f64>,
    series: CosineSeries,
}

impl HypFields {
    pub fn m_nodes(&self) -> usize {
        self.rho.len()
    }

    pub fn integrate(&self, f: impl Fn(usize) -> f64) -> f64 {
        (0..self.m_nodes()).map(|j| self.quad_weight[j] * f(j)).sum()
    }

    /// `(κ_mer, κ_rot, …, κ_rot)` at node `j`.
    pub fn spectrum(&self, j: usize) -> Vec<f64> {
        let mut s = vec![self.kappa_rot[j]; self.n];
        s[0] = self.kappa_mer[j];
        s
    }

    pub fn min_curvature(&self) -> f64 {
        self.kappa_mer
            .iter()
            .chain(&self.kappa_rot)
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Per-node weights `q_j` and angular factor `s_j` with
/// `∫_0^π sin^{n-1}θ g(θ) dθ ≈ Σ q_j s_j g(θ_j)`, spectrally accurate for smooth even `g`.
fn polar_quadrature(n: usize, m: usize) -> Vec<f64> {
    if n.is_multiple_of(2) {
        let w = fejer_weights(m);
        (0..m)
            .map(|j| w[j] * staggered_theta(j, m).sin().powi(n as i32 - 2))
            .collect()
    } else {
        (0..m)
            .map(|j| PI / m as f64 * staggered_theta(j, m).sin().powi(n as i32 - 1))
            .collect()
    }
}

pub fn hyp_fields(hyp: &AxisymmetricHypersurface) -> Result<HypFields> {
    let n = hyp.n;
    let m = hyp.m_nodes();
    let series = CosineSeries::from_samples(&hyp.rho);
    let (_, rho_t1, rho_t2) = series.nodal();
    let q = polar_quadrature(n, m);
    let omega = sphere_area(n - 1);
    let mut f = HypFields {
        n,
        theta: (0..m).map(|j| staggered_theta(j, m)).collect(),
        rho: hyp.rho.clone(),
        rho_t1,
        rho_t2,
        phi: Vec::with_capacity(m),
        phi_p: Vec::with_capacity(m),
        big_phi: Vec::with_capacity(m),
        v: Vec::with_capacity(m),
        u: Vec::with_capacity(m),
        kappa_mer: Vec::with_capacity(m),
        kappa_rot: Vec::with_capacity(m),
        area_weight: Vec::with_capacity(m),
        quad_weight: Vec::with_capacity(m),
        series,
    };
    for j in 0..m {
        let (r, r1, r2, t) = (f.rho[j], f.rho_t1[j], f.rho_t2[j], f.theta[j]);
        let (p, pp) = (r.sinh(), r.cosh());
        let v = (p * p + r1 * r1).sqrt();
        let pn1 = p.powi(n as i32 - 1);
        f.phi.push(p);
        f.phi_p.push(pp);
        f.big_phi.push(0.5 * (r.exp_m1() + (-r).exp_m1()));
        f.v.push(v);
        f.u.push(p * p / v);
        f.kappa_mer.push((p * p * pp + 2.0 * r1 * r1 * pp - r2 * p) / (v * v * v));
        f.kappa_rot.push((pp - r1 / t.tan() / p) / v);
        f.area_weight.push(omega * v * pn1 * t.sin().powi(n as i32 - 1));
        f.quad_weight.push(omega * q[j] * v * pn1);
    }
    for (vals, name) in [
        (&f.kappa_mer, "kappa_mer"),
        (&f.kappa_rot, "kappa_rot"),
        (&f.quad_weight, "area weight"),
    ] {
        ensure_finite(vals, name)?;
    }
    Ok(f)
}

/// Quermassintegrals, modified quermassintegrals, curvature integrals and the
/// residuals of every identity relating them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuermassVector {
    pub n: usize,
    pub area: f64,
    pub volume: f64,
    /// `W_0 … W_{n+1}`
    pub w: Vec<f64>,
    /// `W̃_0 … W̃_n` by the alternating binomial sum.
    pub wt: Vec<f64>,
    /// `W̃_0 … W̃_n` by the recursion on shifted curvature integrals.
    pub wt_recursion: Vec<f64>,
    /// `∫ E_k(κ) dμ`, `k = 0…n`
    pub int_e: Vec<f64>,
    /// `∫ E_k(κ̃) dμ`
    pub int_e_shift: Vec<f64>,
    /// `∫ (Φ - u) E_k(κ̃) dμ`
    pub weighted_phi_u: Vec<f64>,
    /// `∫ (φ' - u) E_k(κ̃) dμ`
    pub weighted_phip_u: Vec<f64>,
    /// `∫ u E_k(κ̃) dμ`
    pub weighted_u: Vec<f64>,
    /// `∫ (φ' E_k - u E_{k+1}) dμ`, `k = 0…n-1`
    pub minkowski: Vec<f64>,
    /// `∫ ((φ' - u) E_k(κ̃) - u E_{k+1}(κ̃)) dμ`, `k = 0…n-1`
    pub minkowski_shift: Vec<f64>,
    /// `∫ E_n dμ - ω_n - n W_{n-1}`
    pub top_residual: f64,
    /// `∫ E_n(κ̃) dμ - ω_n + n W̃_n`
    pub top_residual_shift: f64,
    /// `∫ E_k(κ̃) dμ - (n-k) W̃_{k+1} - (n-2k) W̃_k`, `k = 1…n-1`
    pub shift_relation: Vec<f64>,
    pub kappa_min: f64,
    pub h_convex: bool,
}

impl QuermassVector {
    /// Largest relative gap between the two routes to `W̃`.
    pub fn wt_route_gap(&self) -> f64 {
        self.wt
            .iter()
            .zip(&self.wt_recursion)
            .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()))
            .fold(0.0, f64::max)
    }
}

struct NodeData<'a> {
    n: usize,
    weights: &'a [f64],
    phi_p: &'a [f64],
    big_phi: &'a [f64],
    u: &'a [f64],
    volume: f64,
}

fn assemble(d: NodeData<'_>, spectrum: impl Fn(usize) -> Vec<f64>) -> QuermassVector {
    let n = d.n;
    let m = d.weights.len();
    let mut int_e = vec![0.0; n + 1];
    let mut int_e_shift = vec![0.0; n + 1];
    let mut weighted_phi_u = vec![0.0; n + 1];
    let mut weighted_phip_u = vec![0.0; n + 1];
    let mut weighted_u = vec![0.0; n + 1];
    let mut minkowski = vec![0.0; n];
    let mut minkowski_shift = vec![0.0; n];
    let mut kappa_min = f64::INFINITY;
    for j in 0..m {
        let kappa = spectrum(j);
        kappa_min = kappa.iter().copied().fold(kappa_min, f64::min);
        let shifted: Vec<f64> = kappa.iter().map(|k| k - 1.0).collect();
        let e = elem_sym(&kappa);
        let et = elem_sym(&shifted);
        let w = d.weights[j];
        let (pp, bp, u) = (d.phi_p[j], d.big_phi[j], d.u[j]);
        for k in 0..=n {
            int_e[k] += w * e[k];
            int_e_shift[k] += w * et[k];
            weighted_phi_u[k] += w * (bp - u) * et[k];
            weighted_phip_u[k] += w * (pp - u) * et[k];
            weighted_u[k] += w * u * et[k];
        }
        for k in 0..n {
            minkowski[k] += w * (pp * e[k] - u * e[k + 1]);
            minkowski_shift[k] += w * ((pp - u) * et[k] - u * et[k + 1]);
        }
    }
    let area = int_e[0];
    let nf = n as f64;

    let mut w = vec![0.0; n + 2];
    w[0] = d.volume;
    w[1] = area / nf;
    for k in 1..n {
        w[k + 1] = (int_e[k] - k as f64 * w[k - 1]) / (n - k) as f64;
    }
    w[n + 1] = sphere_area(n) / (n + 1) as f64;

    let wt: Vec<f64> = (0..=n)
        .map(|k| {
            (0..=k)
                .map(|i| if (k - i) % 2 == 0 { 1.0 } else { -1.0 } * binom(k, i) * w[i])
                .sum()
        })
        .collect();
    let mut wt_recursion = vec![0.0; n + 1];
    wt_recursion[0] = d.volume;
    for k in 0..n {
        wt_recursion[k + 1] = (int_e_shift[k] - (nf - 2.0 * k as f64) * wt_recursion[k]) / (n - k) as f64;
    }
    let omega_n = sphere_area(n);
    let shift_relation = (1..n)
        .map(|k| int_e_shift[k] - (n - k) as f64 * wt[k + 1] - (nf - 2.0 * k as f64) * wt[k])
        .collect();
    QuermassVector {
        n,
        area,
        volume: d.volume,
        top_residual: int_e[n] - omega_n - nf * w[n - 1],
        top_residual_shift: int_e_shift[n] - omega_n + nf * wt[n],
        w,
        wt,
        wt_recursion,
        int_e,
        int_e_shift,
        weighted_phi_u,
        weighted_phip_u,
        weighted_u,
        minkowski,
        minkowski_shift,
        shift_relation,
        kappa_min,
        h_convex: kappa_min >= 1.0,
    }
}

pub fn quermass_vector(hyp: &AxisymmetricHypersurface) -> Result<QuermassVector> {
    let f = hyp_fields(hyp)?;
    Ok(quermass_from_fields(&f))
}

pub fn quermass_from_fields(f: &HypFields) -> QuermassVector {
    let n = f.n;
    let m = f.m_nodes();
    let q = polar_quadrature(n, m);
    let omega = sphere_area(n - 1);
    let volume = omega * (0..m).map(|j| q[j] * sinh_power_integral(n, f.rho[j])).sum::<f64>();
    assemble(
        NodeData {
            n,
            weights: &f.quad_weight,
            phi_p: &f.phi_p,
            big_phi: &f.big_phi,
            u: &f.u,
            volume,
        },
        |j| f.spectrum(j),
    )
}

/// The same construction for a closed curve (`n = 1`), where `W̃_1 = L - A`.
pub fn curve_quermass(f: &GeomFields) -> QuermassVector {
    let dt = f.dtheta();
    let weights: Vec<f64> = f.v.iter().map(|v| v * dt).collect();
    let volume = f.integrate(|j| f.big_phi[j]);
    assemble(
        NodeData {
            n: 1,
            weights: &weights,
            phi_p: &f.phi_p,
            big_phi: &f.big_phi,
            u: &f.u,
            volume,
        },
        |j| vec![f.kappa[j]],
    )
}

/// Quermassintegral-type functions of the geodesic ball of radius `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallProfile {
    /// `W_k(B_r)`
    pub f: f64,
    /// `W̃_k(B_r)`
    pub ft: f64,
    /// `∫(Φ - u) E_k(κ̃) dμ + (n - 2k) W̃_k` on `∂B_r`.
    pub ht: f64,
}

fn check_profile_args(n: usize, k: usize, r: f64) -> Result<()> {
    if n < 2 || k > n {
        return Err(Error::Domain(format!("need n >= 2 and 0 <= k <= n, got n = {n}, k = {k}")));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

/// `W̃_k(B_r) = ω_n ∫_0^r sinh^{n-k}s e^{-ks} ds`, obtained by integrating the
/// first variation of `W̃_k` along the family of balls. The integrand is
/// positive, so the profile is increasing and free of cancellation.
fn ft_unchecked(n: usize, k: usize, r: f64) -> f64 {
    let kf = k as f64;
    sphere_area(n) * integrate(|s| s.sinh().powi((n - k) as i32) * (-kf * s).exp(), 0.0, r, 0.5)
}

pub fn ball_profile(n: usize, k: usize, r: f64) -> Result<BallProfile> {
    check_profile_args(n, k, r)?;
    let omega = sphere_area(n);
    let sn = r.sinh().powi(n as i32);
    let coth = 1.0 / r.tanh();
    let mut w = vec![0.0; k.max(1) + 1];
    w[0] = omega * sinh_power_integral(n, r);
    w[1] = omega * sn / n as f64;
    for i in 1..k {
        w[i + 1] = (omega * sn * coth.powi(i as i32) - i as f64 * w[i - 1]) / (n - i) as f64;
    }
    let ft = ft_unchecked(n, k, r);
    // sinh^n r (coth r - 1)^k = sinh^{n-k} r e^{-kr}
    let shifted_area = omega * r.sinh().powi((n - k) as i32) * (-(k as f64) * r).exp();
    let ht = shifted_area * (-r).exp_m1() + (n as f64 - 2.0 * k as f64) * ft;
    Ok(BallProfile { f: w[k], ft, ht })
}

/// Radius `r ∈ (R_MIN, R_MAX]` with `W̃_k(B_r) = target`, by bisection.
pub fn invert_ft(n: usize, k: usize, target: f64) -> Result<f64> {
    check_profile_args(n, k, 1.0)?;
    let (flo, fhi) = (ft_unchecked(n, k, R_MIN), ft_unchecked(n, k, R_MAX));
    if !(target > flo && target <= fhi) {
        return Err(Error::OutOfRange {
            target,
            lo: R_MIN,
            hi: R_MAX,
        });
    }
    let (mut lo, mut hi) = (R_MIN, R_MAX);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ft_unchecked(n, k, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deficit {
    pub k: usize,
    /// Present for the two-index inequalities.
    pub l: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub deficit: f64,
    pub scale: f64,
    pub equality: bool,
}

impl Deficit {
    fn new(k: usize, l: Option<usize>, lhs: f64, rhs: f64) -> Self {
        let deficit = lhs - rhs;
        let scale = lhs.abs().max(rhs.abs());
        Self {
            k,
            l,
            lhs,
            rhs,
            deficit,
            scale,
            equality: deficit.abs() <= EQUALITY_TOL * scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeficitReport {
    /// `W̃_k - f̃_k(f̃_l^{-1}(W̃_l))` for `0 <= l < k <= n`.
    pub af: Vec<Deficit>,
    /// `∫(Φ-u)E_k(κ̃) + (n-2k)W̃_k - h̃_k(f̃_k^{-1}(W̃_k))` for `1 <= k <= n`.
    pub weighted: Vec<Deficit>,
}

impl DeficitReport {
    pub fn af(&self, k: usize, l: usize) -> Option<&Deficit> {
        self.af.iter().find(|d| d.k == k && d.l == Some(l))
    }

    pub fn weighted(&self, k: usize) -> Option<&Deficit> {
        self.weighted.iter().find(|d| d.k == k)
    }

    pub fn all(&self) -> impl Iterator<Item = &Deficit> {
        self.af.iter().chain(&self.weighted)
    }
}

fn require_strict(f: &HypFields) -> Result<()> {
    let margin = f.min_curvature() - 1.0;
    if margin > 0.0 {
        Ok(())
    } else {
        Err(Error::NotStrictlyHConvex { margin })
    }
}

pub fn af_deficits(hyp: &AxisymmetricHypersurface) -> Result<DeficitReport> {
    let f = hyp_fields(hyp)?;
    require_strict(&f)?;
    let qv = quermass_from_fields(&f);
    let n = hyp.n;
    let mut radii = Vec::with_capacity(n + 1);
    for k in 0..=n {
        radii.push(invert_ft(n, k, qv.wt[k])?);
    }
    let mut af = Vec::new();
    for k in 1..=n {
        for l in 0..k {
            af.push(Deficit::new(k, Some(l), qv.wt[k], ft_unchecked(n, k, radii[l])));
        }
    }
    let mut weighted = Vec::new();
    for k in 1..=n {
        let lhs = qv.weighted_phi_u[k] + (n as f64 - 2.0 * k as f64) * qv.wt[k];
        weighted.push(Deficit::new(k, None, lhs, ball_profile(n, k, radii[k])?.ht));
    }
    Ok(DeficitReport { af, weighted })
}

/// Origin-centered comparison sphere: midrange of the profile over `[0, π]`,
/// with the cosine interpolant refined between nodes and evaluated at the poles.
pub fn best_sphere(hyp: &AxisymmetricHypersurface) -> BestCircle {
    let m = hyp.m_nodes();
    let series = CosineSeries::from_samples(&hyp.rho);
    let ev = |t: f64| series.eval(t);
    let cell = PI / m as f64;
    let (jmin, jmax) = crate::curve::argminmax(&hyp.rho);
    let candidates = [
        refine_extremum(ev, staggered_theta(jmin, m), cell).1,
        refine_extremum(ev, staggered_theta(jmax, m), cell).1,
        ev(0.0).0,
        ev(PI).0,
        hyp.rho[jmin],
        hyp.rho[jmax],
    ];
    let lo = candidates.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = candidates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let q = polar_quadrature(hyp.n, m);
    let a_mean = (0..m).map(|j| q[j] * hyp.rho[j]).sum::<f64>() / q.iter().sum::<f64>();
    BestCircle {
        a: 0.5 * (lo + hi),
        dist: 0.5 * (hi - lo),
        a_mean,
    }
}

/// Radius of the largest origin-centered ball inside the domain; a lower bound
/// for the inradius.
pub fn inradius_proxy(hyp: &AxisymmetricHypersurface) -> f64 {
    let c = best_sphere(hyp);
    c.a - c.dist
}

/// Hypersurface stability modulus `s^{1/2} + s^{1/4}`.
pub fn sphere_modulus(s: f64) -> f64 {
    s.sqrt() + s.sqrt().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityRatios {
    pub dist: f64,
    pub deficit_af: f64,
    pub deficit_w: f64,
    pub ratio_af: Option<f64>,
    pub ratio_w: Option<f64>,
}

pub fn sphere_stability_ratio(hyp: &AxisymmetricHypersurface, k: usize) -> Result<StabilityRatios> {
    if !(1 <= k && k < hyp.n) {
        return Err(Error::Domain(format!("need 1 <= k <= n - 1, got k = {k}")));
    }
    let report = af_deficits(hyp)?;
    let dist = best_sphere(hyp).dist;
    let af = report.af(k + 1, k).expect("pair present");
    let w = report.weighted(k).expect("index present");
    let ratio = |d: &Deficit| (d.deficit > 1e-10 * d.scale).then(|| dist / sphere_modulus(d.deficit));
    Ok(StabilityRatios {
        dist,
        deficit_af: af.deficit,
        deficit_w: w.deficit,
        ratio_af: ratio(af),
        ratio_w: ratio(w),
    })
}

impl HypFields {
    /// Profile interpolant value and derivatives at any polar angle.
    pub fn profile_at(&self, theta: f64) -> (f64, f64, f64) {
        self.series.eval(theta)
    }
}
