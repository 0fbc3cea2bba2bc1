//! Star-shaped closed curves in H² stored as radial graphs `ρ(θ)` over a uniform
//! periodic grid, together with their pointwise geometry and global functionals.

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::spectral::{periodic_derivatives, refine_extremum, TrigInterpolant};

/// Default absolute quadrature tolerance.
pub const TOL_QUAD: f64 = 1e-8;

/// Below this curvature margin the `1/(κ-1)` factors are treated as singular.
pub const STRICT_MARGIN: f64 = 1e-6;

/// One cosine term `amp * cos(k θ + phase)` of a parametric profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierMode {
    pub k: usize,
    pub amp: f64,
    #[serde(default)]
    pub phase: f64,
}

impl FourierMode {
    pub fn cos(k: usize, amp: f64) -> Self {
        Self { k, amp, phase: 0.0 }
    }
}

/// Radial graph over `θ_j = 2πj/n`. Always even-sized, at least 16 nodes, with
/// strictly positive finite samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveGrid {
    rho: Vec<f64>,
}

impl CurveGrid {
    pub fn new(rho: Vec<f64>) -> Result<Self> {
        let n = rho.len();
        if n < 16 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "need an even node count of at least 16, got {n}"
            )));
        }
        ensure_finite(&rho, "rho")?;
        if let Some((j, r)) = rho.iter().enumerate().find(|(_, &r)| r <= 0.0) {
            return Err(Error::InvalidGrid(format!("rho[{j}] = {r} is not positive")));
        }
        Ok(Self { rho })
    }

    pub fn from_fn(n_nodes: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new((0..n_nodes).map(|j| f(grid_theta(j, n_nodes))).collect())
    }

    pub fn circle(n_nodes: usize, radius: f64) -> Result<Self> {
        Self::from_fn(n_nodes, |_| radius)
    }

    pub fn from_modes(n_nodes: usize, base: f64, modes: &[FourierMode]) -> Result<Self> {
        Self::from_fn(n_nodes, |t| {
            base + modes
                .iter()
                .map(|m| m.amp * (m.k as f64 * t + m.phase).cos())
                .sum::<f64>()
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.rho.len()
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn into_rho(self) -> Vec<f64> {
        self.rho
    }

    pub fn theta(&self, j: usize) -> f64 {
        grid_theta(j, self.rho.len())
    }

    pub fn dtheta(&self) -> f64 {
        TAU / self.rho.len() as f64
    }
}

#[inline]
pub fn grid_theta(j: usize, n: usize) -> f64 {
    TAU * j as f64 / n as f64
}

/// Per-node geometry of a radial graph.
#[derive(Debug, Clone)]
pub struct GeomFields {
    pub rho: Vec<f64>,
    pub rho_t1: Vec<f64>,
    pub rho_t2: Vec<f64>,
    /// `sinh ρ`
    pub phi: Vec<f64>,
    /// `cosh ρ`
    pub phi_p: Vec<f64>,
    /// `cosh ρ - 1`
    pub big_phi: Vec<f64>,
    /// Arc-length element `ds/dθ = sqrt(φ² + ρ_θ²)`.
    pub v: Vec<f64>,
    /// Support function `φ²/v`.
    pub u: Vec<f64>,
    /// Geodesic curvature.
    pub kappa: Vec<f64>,
}

impl GeomFields {
    pub fn n_nodes(&self) -> usize {
        self.rho.len()
    }

    pub fn dtheta(&self) -> f64 {
        TAU / self.rho.len() as f64
    }

    /// Periodic trapezoid rule `Δθ Σ f_j`.
    pub fn integrate(&self, f: impl Fn(usize) -> f64) -> f64 {
        self.dtheta() * (0..self.n_nodes()).map(f).sum::<f64>()
    }

    pub fn kappa_min(&self) -> f64 {
        self.kappa.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn kappa_max(&self) -> f64 {
        self.kappa.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Geometry from raw samples; only finiteness is checked.
pub(crate) fn fields_from_rho(rho: &[f64]) -> Result<GeomFields> {
    let (rho_t1, rho_t2) = periodic_derivatives(rho);
    let n = rho.len();
    let mut phi = Vec::with_capacity(n);
    let mut phi_p = Vec::with_capacity(n);
    let mut big_phi = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut kappa = Vec::with_capacity(n);
    for j in 0..n {
        let r = rho[j];
        let (p, pp) = (r.sinh(), r.cosh());
        let (r1, r2) = (rho_t1[j], rho_t2[j]);
        let r1sq = r1 * r1;
        let vv = (p * p + r1sq).sqrt();
        phi.push(p);
        phi_p.push(pp);
        // exp_m1 keeps Φ accurate for small radii
        big_phi.push(0.5 * (r.exp_m1() + (-r).exp_m1()));
        v.push(vv);
        u.push(p * p / vv);
        kappa.push((p * p * pp + 2.0 * r1sq * pp - r2 * p) / (vv * vv * vv));
    }
    let f = GeomFields {
        rho: rho.to_vec(),
        rho_t1,
        rho_t2,
        phi,
        phi_p,
        big_phi,
        v,
        u,
        kappa,
    };
    for (vals, name) in [
        (&f.rho_t1, "rho_theta"),
        (&f.rho_t2, "rho_theta_theta"),
        (&f.v, "v"),
        (&f.u, "u"),
        (&f.kappa, "kappa"),
    ] {
        ensure_finite(vals, name)?;
    }
    Ok(f)
}

/// Spectral derivatives, support function and curvature of a curve.
pub fn derive_fields(curve: &CurveGrid) -> Result<GeomFields> {
    fields_from_rho(curve.rho())
}

/// Global functionals of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveFunctionals {
    pub length: f64,
    pub area: f64,
    pub la: f64,
    /// Heintze–Karcher functional; absent unless the curve is strictly h-convex.
    pub hk_q: Option<f64>,
    pub weighted_m: f64,
    pub mink_residual: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub rho_min: f64,
    pub rho_max: f64,
}

pub fn functionals(f: &GeomFields) -> CurveFunctionals {
    let length = f.integrate(|j| f.v[j]);
    let area = f.integrate(|j| f.big_phi[j]);
    let kappa_min = f.kappa_min();
    let hk_q = (kappa_min - 1.0 >= STRICT_MARGIN).then(|| {
        f.integrate(|j| {
            let u = f.u[j];
            ((f.phi_p[j] - u) / (f.kappa[j] - 1.0) - u) * f.v[j]
        })
    });
    let weighted_m = f.integrate(|j| (f.big_phi[j] - f.u[j]) * (f.kappa[j] - 1.0) * f.v[j]);
    let mink_residual = f.integrate(|j| (f.phi_p[j] - f.kappa[j] * f.u[j]) * f.v[j]);
    CurveFunctionals {
        length,
        area,
        la: length - area,
        hk_q,
        weighted_m,
        mink_residual,
        kappa_min,
        kappa_max: f.kappa_max(),
        rho_min: f.rho.iter().copied().fold(f64::INFINITY, f64::min),
        rho_max: f.rho.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

/// `∮ (κ-1) (∂Φ/∂s)² ds`, the rate at which the flow dissipates `M`.
pub fn dissipation(f: &GeomFields) -> f64 {
    f.integrate(|j| {
        let dphi = f.phi[j] * f.rho_t1[j];
        (f.kappa[j] - 1.0) * dphi * dphi / f.v[j]
    })
}

/// `min κ - 1`; positive exactly when the grid curve is strictly h-convex.
pub fn hconvexity_margin(f: &GeomFields) -> f64 {
    f.kappa_min() - 1.0
}

/// Origin-centered comparison circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestCircle {
    /// Midrange radius, the sup-norm minimizer.
    pub a: f64,
    /// `sup |ρ - a|`
    pub dist: f64,
    /// Mean radius `(1/2π) ∮ ρ dθ`.
    pub a_mean: f64,
}

pub fn best_circle(curve: &CurveGrid) -> BestCircle {
    best_circle_of(curve.rho())
}

pub(crate) fn best_circle_of(rho: &[f64]) -> BestCircle {
    let n = rho.len();
    let a_mean = rho.iter().sum::<f64>() / n as f64;
    let (jmin, jmax) = argminmax(rho);
    let (lo, hi) = if rho[jmax] - rho[jmin] <= 1e-14 * rho[jmax].abs() {
        (rho[jmin], rho[jmax])
    } else {
        let it = TrigInterpolant::new(rho);
        let cell = TAU / n as f64;
        let ev = |t| it.eval(t);
        let lo = refine_extremum(ev, grid_theta(jmin, n), cell).1.min(rho[jmin]);
        let hi = refine_extremum(ev, grid_theta(jmax, n), cell).1.max(rho[jmax]);
        (lo, hi)
    };
    BestCircle {
        a: 0.5 * (hi + lo),
        dist: 0.5 * (hi - lo),
        a_mean,
    }
}

pub(crate) fn argminmax(x: &[f64]) -> (usize, usize) {
    let mut jmin = 0;
    let mut jmax = 0;
    for (j, &v) in x.iter().enumerate() {
        if v < x[jmin] {
            jmin = j;
        }
        if v > x[jmax] {
            jmax = j;
        }
    }
    (jmin, jmax)
}

/// Curve stability modulus `s^{1/2} + s^{1/6}`.
pub fn curve_modulus(s: f64) -> f64 {
    s.sqrt() + s.powf(1.0 / 6.0)
}

/// Deficit of the sharp inequality `M + (L-A) >= (L-A)²/2π` and the stability ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub deficit: f64,
    pub stability_ratio: Option<f64>,
    pub circle_radius: f64,
    pub circle_dist: f64,
    pub circle_mean_radius: f64,
}

pub fn inequality_report(f: &GeomFields) -> InequalityReport {
    inequality_report_with_tol(f, TOL_QUAD)
}

pub fn inequality_report_with_tol(f: &GeomFields, tol_quad: f64) -> InequalityReport {
    let fx = functionals(f);
    let lhs = fx.weighted_m + fx.la;
    let rhs = fx.la * fx.la / TAU;
    let deficit = lhs - rhs;
    let circle = best_circle_of(&f.rho);
    let stability_ratio = (deficit > tol_quad && fx.kappa_min > 1.0)
        .then(|| circle.dist / curve_modulus(deficit));
    InequalityReport {
        lhs,
        rhs,
        deficit,
        stability_ratio,
        circle_radius: circle.a,
        circle_dist: circle.dist,
        circle_mean_radius: circle.a_mean,
    }
}

/// Closed-form left side `2π(1 - e^{-a})²` for the circle of radius `a`.
pub fn circle_lhs(a: f64) -> f64 {
    let s = -(-a).exp_m1();
    TAU * s * s
}

/// Radius of the circle with the given `L - A`.
pub fn limit_radius_from_la(la: f64) -> Result<f64> {
    if !(la > 0.0 && la < TAU) {
        return Err(Error::Domain(format!("L - A = {la} lies outside (0, 2π)")));
    }
    Ok(-(-la / TAU).ln_1p())
}

/// Seeded family of random strictly h-convex curves built from low-order modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RandomCurveFamily {
    pub n_nodes: usize,
    pub min_margin: f64,
    pub base_range: (f64, f64),
    pub max_mode: usize,
}

impl Default for RandomCurveFamily {
    fn default() -> Self {
        Self {
            n_nodes: 256,
            min_margin: 0.01,
            base_range: (0.3, 1.5),
            max_mode: 4,
        }
    }
}

impl RandomCurveFamily {
    /// Draw one curve, rejecting candidates whose margin is below `min_margin`.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> CurveGrid {
        loop {
            let base = rng.gen_range(self.base_range.0..self.base_range.1);
            let modes: Vec<FourierMode> = (1..=self.max_mode)
                .map(|k| FourierMode {
                    k,
                    amp: rng.gen_range(-1.0..1.0) * 0.25 * base / (k * k) as f64,
                    phase: rng.gen_range(0.0..TAU),
                })
                .collect();
            let Ok(curve) = CurveGrid::from_modes(self.n_nodes, base, &modes) else {
                continue;
            };
            let Ok(f) = derive_fields(&curve) else {
                continue;
            };
            if hconvexity_margin(&f) > self.min_margin {
                return curve;
            }
        }
    }
}

/// Curve `ρ = a - ε(cos 2θ + cos 3θ / 4)` with `ε` tuned so that the grid
/// minimum of `κ` equals 1 exactly, at the single node `θ = 0`.
pub fn tangent_fixture(n_nodes: usize, a: f64) -> Result<CurveGrid> {
    let make = |eps: f64| {
        CurveGrid::from_modes(
            n_nodes,
            a,
            &[FourierMode::cos(2, -eps), FourierMode::cos(3, -0.25 * eps)],
        )
    };
    let margin = |eps: f64| -> Result<f64> { Ok(hconvexity_margin(&derive_fields(&make(eps)?)?)) };
    let (mut lo, mut hi) = (0.0, 0.5 * a);
    if margin(hi)? >= 0.0 {
        return Err(Error::Domain(format!("base radius {a} too small for the fixture")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if margin(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    make(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Curvature from exact derivatives of `ρ = 1 + c cos(kθ)`.
    fn kappa_exact(c: f64, k: f64, t: f64) -> f64 {
        let r = 1.0 + c * (k * t).cos();
        let r1 = -c * k * (k * t).sin();
        let r2 = -c * k * k * (k * t).cos();
        let (p, pp) = (r.sinh(), r.cosh());
        (p * p * pp + 2.0 * r1 * r1 * pp - r2 * p) / (p * p + r1 * r1).powf(1.5)
    }

    fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        f(0.5 * (a + b))
    }

    /// Extremes of `f` on the circle: dense scan then golden refinement.
    fn oracle_extremes(f: impl Fn(f64) -> f64) -> (f64, f64) {
        let n = 4096;
        let h = TAU / n as f64;
        let vals: Vec<f64> = (0..n).map(|j| f(j as f64 * h)).collect();
        let (jmin, jmax) = argminmax(&vals);
        let lo = golden_min(&f, (jmin as f64 - 1.0) * h, (jmin as f64 + 1.0) * h);
        let hi = -golden_min(|t| -f(t), (jmax as f64 - 1.0) * h, (jmax as f64 + 1.0) * h);
        (lo, hi)
    }

    #[test]
    fn circle_fields_match_closed_forms() {
        for n in [16, 64, 256] {
            let f = derive_fields(&CurveGrid::circle(n, 1.0).unwrap()).unwrap();
            for j in 0..n {
                assert_relative_eq!(f.kappa[j], 1f64.tanh().recip(), max_relative = 1e-14);
                assert_relative_eq!(f.u[j], 1f64.sinh(), max_relative = 1e-14);
                assert!(f.rho_t1[j].abs() < 1e-14);
                assert_relative_eq!(f.v[j], f.phi[j], max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn curvature_extremes_match_analytic_oracle() {
        let curve = CurveGrid::from_modes(256, 1.0, &[FourierMode::cos(2, 0.1)]).unwrap();
        let f = derive_fields(&curve).unwrap();
        let (lo, hi) = oracle_extremes(|t| kappa_exact(0.1, 2.0, t));
        assert_relative_eq!(f.kappa_min(), lo, max_relative = 1e-10);
        assert_relative_eq!(f.kappa_max(), hi, max_relative = 1e-10);
    }

    #[test]
    fn circle_functionals() {
        let f = derive_fields(&CurveGrid::circle(64, 1.0).unwrap()).unwrap();
        let fx = functionals(&f);
        assert_relative_eq!(fx.length, TAU * 1f64.sinh(), max_relative = 1e-14);
        assert_relative_eq!(fx.area, TAU * (1f64.cosh() - 1.0), max_relative = 1e-14);
        assert!(fx.hk_q.unwrap().abs() < 1e-13);
        assert!(fx.mink_residual.abs() < 1e-13);
        assert_relative_eq!(fx.length, 7.38401, epsilon = 1e-5);
        assert_relative_eq!(fx.area, 3.41228, epsilon = 1e-5);
    }

    #[test]
    fn length_and_area_converge_against_fine_grid() {
        let modes = [FourierMode::cos(2, 0.1)];
        let coarse = functionals(&derive_fields(&CurveGrid::from_modes(256, 1.0, &modes).unwrap()).unwrap());
        let fine = functionals(&derive_fields(&CurveGrid::from_modes(4096, 1.0, &modes).unwrap()).unwrap());
        assert_relative_eq!(coarse.length, fine.length, max_relative = 1e-10);
        assert_relative_eq!(coarse.area, fine.area, max_relative = 1e-10);
        let c64 = functionals(&derive_fields(&CurveGrid::from_modes(64, 1.0, &modes).unwrap()).unwrap());
        assert_relative_eq!(c64.length, coarse.length, max_relative = 1e-10);
        assert_relative_eq!(c64.area, coarse.area, max_relative = 1e-10);
    }

    #[test]
    fn margin_examples() {
        let m1 = hconvexity_margin(&derive_fields(&CurveGrid::circle(32, 1.0).unwrap()).unwrap());
        assert_relative_eq!(m1, 0.3130352854993312, max_relative = 1e-12);
        let m5 = hconvexity_margin(&derive_fields(&CurveGrid::circle(32, 5.0).unwrap()).unwrap());
        assert_relative_eq!(m5, (-5f64).exp() / 5f64.sinh(), max_relative = 1e-9);
        assert_relative_eq!(m5, 9.08e-5, max_relative = 1e-3);
        let bumpy = CurveGrid::from_modes(256, 1.0, &[FourierMode::cos(2, 0.5)]).unwrap();
        let mb = hconvexity_margin(&derive_fields(&bumpy).unwrap());
        let (lo, _) = oracle_extremes(|t| kappa_exact(0.5, 2.0, t));
        assert!(mb < 0.0 && lo < 1.0);
    }

    #[test]
    fn best_circle_examples() {
        let c = best_circle(&CurveGrid::circle(32, 2.0).unwrap());
        assert_eq!((c.a, c.dist), (2.0, 0.0));
        let c = best_circle(&CurveGrid::from_modes(64, 1.0, &[FourierMode::cos(1, 0.1)]).unwrap());
        assert_relative_eq!(c.a, 1.0, epsilon = 1e-14);
        assert_relative_eq!(c.dist, 0.1, epsilon = 1e-14);
    }

    #[test]
    fn best_circle_refines_off_grid_extrema() {
        let modes = [FourierMode::cos(2, 0.1), FourierMode::cos(3, 0.05)];
        let rho = |t: f64| 1.0 + 0.1 * (2.0 * t).cos() + 0.05 * (3.0 * t).cos();
        let c = best_circle(&CurveGrid::from_modes(256, 1.0, &modes).unwrap());
        let (lo, hi) = oracle_extremes(rho);
        assert!((c.a - 0.5 * (lo + hi)).abs() < 1e-10);
        assert!((c.dist - 0.5 * (hi - lo)).abs() < 1e-10);
    }

    #[test]
    fn la_outside_range_is_a_domain_error() {
        assert!(limit_radius_from_la(0.0).is_err());
        assert!(limit_radius_from_la(TAU).is_err());
        assert_relative_eq!(limit_radius_from_la(TAU * (1.0 - (-1f64).exp())).unwrap(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn deficit_vanishes_on_circles() {
        for a in [0.1, 0.5, 1.0, 3.0] {
            let f = derive_fields(&CurveGrid::circle(64, a).unwrap()).unwrap();
            let r = inequality_report(&f);
            assert!(r.deficit.abs() <= 1e-10, "a = {a}: {}", r.deficit);
            assert!(r.stability_ratio.is_none());
            assert_eq!(r.circle_dist, 0.0);
        }
    }

    #[test]
    fn small_amplitude_deficit_matches_quadratic_coefficient() {
        // Symbolic second-order expansion gives deficit ≈ π e^{-2a} ε².
        let coeff = |eps: f64| {
            let c = CurveGrid::from_modes(256, 1.0, &[FourierMode::cos(2, eps)]).unwrap();
            inequality_report(&derive_fields(&c).unwrap()).deficit / (eps * eps)
        };
        let (c1, c2, c3) = (coeff(1e-2), coeff(5e-3), coeff(2.5e-3));
        assert!(c1 > 0.0 && c2 > 0.0 && c3 > 0.0);
        // Richardson on an O(ε) remainder.
        let r1 = 2.0 * c2 - c1;
        let r2 = 2.0 * c3 - c2;
        let extrap = (4.0 * r2 - r1) / 3.0;
        assert_relative_eq!(extrap, 0.42516833158763636, max_relative = 1e-4);
    }

    #[test]
    fn tangent_fixture_touches_once() {
        let c = tangent_fixture(256, 1.0).unwrap();
        let f = derive_fields(&c).unwrap();
        let m = hconvexity_margin(&f);
        assert!(m.abs() < 1e-13, "margin {m}");
        let touching: Vec<usize> = (0..256).filter(|&j| f.kappa[j] - 1.0 < 1e-6).collect();
        assert_eq!(touching, vec![0]);
    }

    #[test]
    fn random_family_is_strictly_hconvex() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let fam = RandomCurveFamily::default();
        for _ in 0..20 {
            let f = derive_fields(&fam.sample(&mut rng)).unwrap();
            assert!(hconvexity_margin(&f) > 0.01);
        }
    }

    fn profile() -> impl Strategy<Value = CurveGrid> {
        (0.3f64..1.5, prop::collection::vec((-1.0f64..1.0, 0.0f64..TAU), 4)).prop_map(
            |(base, coeffs)| {
                let modes: Vec<FourierMode> = coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, &(c, phase))| FourierMode {
                        k: i + 1,
                        amp: 0.2 * base * c / ((i + 1) * (i + 1)) as f64,
                        phase,
                    })
                    .collect();
                CurveGrid::from_modes(128, base, &modes).unwrap()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn node_identities_hold(curve in profile()) {
            let f = derive_fields(&curve).unwrap();
            for j in 0..curve.n_nodes() {
                let scale = f.phi[j] * f.phi[j];
                prop_assert!((f.u[j] * f.v[j] - scale).abs() <= 4e-16 * scale.max(1.0) * 4.0);
                prop_assert!((f.big_phi[j] + 1.0 - f.phi_p[j]).abs() <= 1e-15 * f.phi_p[j]);
                prop_assert!(f.v[j] >= f.phi[j] && f.u[j] <= f.phi[j] * (1.0 + 1e-15) && f.u[j] > 0.0);
                let v2 = f.phi[j].powi(2) + f.rho_t1[j].powi(2);
                prop_assert!((f.v[j] * f.v[j] - v2).abs() <= 1e-14 * v2);
            }
        }

        #[test]
        fn minkowski_residual_vanishes(curve in profile()) {
            let fx = functionals(&derive_fields(&curve).unwrap());
            prop_assert!(fx.mink_residual.abs() <= 1e-8 * fx.length);
        }

        #[test]
        fn heintze_karcher_and_deficit_are_nonnegative(curve in profile()) {
            let f = derive_fields(&curve).unwrap();
            prop_assume!(hconvexity_margin(&f) > 0.01);
            let fx = functionals(&f);
            prop_assert!(fx.hk_q.unwrap() >= -1e-8 * fx.length);
            prop_assert!(inequality_report(&f).deficit >= -1e-8);
        }

        #[test]
        fn circle_chain_is_exact(a in 0.1f64..5.0) {
            let la = TAU * -(-a).exp_m1();
            prop_assert!((circle_lhs(a) - la * la / TAU).abs() <= 1e-10);
        }
    }
}
