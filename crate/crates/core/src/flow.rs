//! Method-of-lines integration of the locally constrained flow
//! `ρ_t = (φ'v/φ - φ)/(κ-1) - φ` with explicit RK4, plus the curve-shortening
//! smoothing step and decay-rate diagnostics.

use serde::{Deserialize, Serialize};

use crate::curve::{
    dissipation, fields_from_rho, functionals, hconvexity_margin, limit_radius_from_la, CurveFunctionals,
    CurveGrid, GeomFields, STRICT_MARGIN,
};
use crate::error::{Error, Result};
use crate::spectral::TrigInterpolant;

/// Monitor tolerances; a sample exceeding ten times one of these aborts the run.
const EXTREMUM_TOL: f64 = 1e-6;
const MONOTONE_TOL: f64 = 1e-8;
const HK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowOptions {
    pub cfl: f64,
    pub t_max: f64,
    /// Stop once `Q < q_tol * L`; zero disables the test.
    pub q_tol: f64,
    /// Stop once `sup |ρ - a∞| < sup_tol`; zero disables the test.
    pub sup_tol: f64,
    pub sample_every: usize,
    pub snapshot_every: Option<usize>,
    pub margin_floor: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            cfl: 0.25,
            t_max: 50.0,
            q_tol: 1e-10,
            sup_tol: 1e-10,
            sample_every: 10,
            snapshot_every: None,
            margin_floor: 1e-6,
        }
    }
}

impl FlowOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(format!("flow option {what}")));
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return bad("cfl must lie in (0, 1)");
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return bad("t_max must be positive and finite");
        }
        if !(self.q_tol >= 0.0 && self.sup_tol >= 0.0) {
            return bad("tolerances must be non-negative");
        }
        if self.sample_every == 0 || self.snapshot_every == Some(0) {
            return bad("sampling cadence must be positive");
        }
        if !(self.margin_floor > 0.0) {
            return bad("margin_floor must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub curve: CurveGrid,
    pub step_count: u64,
}

impl FlowState {
    pub fn new(curve: CurveGrid) -> Self {
        Self {
            t: 0.0,
            curve,
            step_count: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ConvergedQ,
    ConvergedSup,
    TMaxReached,
    AbortedMargin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub step: u64,
    pub functionals: CurveFunctionals,
    pub sup_dev: f64,
    pub dissipation: f64,
}

#[derive(Debug, Clone)]
pub struct FlowTrace {
    pub samples: Vec<Sample>,
    pub snapshots: Vec<(f64, CurveGrid)>,
    pub a_infinity_predicted: f64,
    pub termination: Termination,
    pub initial: CurveGrid,
    pub final_state: FlowState,
    pub options: FlowOptions,
}

impl FlowTrace {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("a trace always holds the initial sample")
    }
}

fn require_strict(f: &GeomFields, floor: f64) -> Result<()> {
    let margin = hconvexity_margin(f);
    if margin > floor {
        Ok(())
    } else {
        Err(Error::NotStrictlyHConvex { margin })
    }
}

fn rhs_unchecked(f: &GeomFields) -> Vec<f64> {
    (0..f.n_nodes())
        .map(|j| {
            let (p, pp, v) = (f.phi[j], f.phi_p[j], f.v[j]);
            (pp * v / p - p) / (f.kappa[j] - 1.0) - p
        })
        .collect()
}

/// Normal speed of the flow converted to `∂ρ/∂t` at every node.
pub fn flow_rhs(f: &GeomFields) -> Result<Vec<f64>> {
    require_strict(f, STRICT_MARGIN)?;
    Ok(rhs_unchecked(f))
}

/// Pointwise `∂G/∂ρ_θθ`, the local diffusion coefficient.
pub fn diffusion_coefficient(f: &GeomFields) -> Vec<f64> {
    (0..f.n_nodes())
        .map(|j| {
            let (p, pp, v) = (f.phi[j], f.phi_p[j], f.v[j]);
            let km1 = f.kappa[j] - 1.0;
            (pp * v / p - p) * p / (km1 * km1 * v * v * v)
        })
        .collect()
}

/// `cfl Δθ² / max D`.
pub fn stable_dt(f: &GeomFields, cfl: f64) -> Result<f64> {
    require_strict(f, 0.0)?;
    let dmax = diffusion_coefficient(f).into_iter().fold(0.0, f64::max);
    Ok(cfl * f.dtheta().powi(2) / dmax)
}

/// One RK4 step with the margin checked at every stage.
pub fn step(state: &FlowState, dt: f64, margin_floor: f64) -> Result<FlowState> {
    let rho = rk4(state.curve.rho(), dt, |r| {
        let f = fields_from_rho(r)?;
        let margin = hconvexity_margin(&f);
        if margin <= margin_floor {
            return Err(Error::AbortedMargin { t: state.t, margin });
        }
        Ok(rhs_unchecked(&f))
    })?;
    Ok(FlowState {
        t: state.t + dt,
        curve: CurveGrid::new(rho)?,
        step_count: state.step_count + 1,
    })
}

fn rk4(y: &[f64], dt: f64, rhs: impl Fn(&[f64]) -> Result<Vec<f64>>) -> Result<Vec<f64>> {
    let axpy = |a: f64, k: &[f64]| -> Vec<f64> { y.iter().zip(k).map(|(y, k)| y + a * k).collect() };
    let k1 = rhs(y)?;
    let k2 = rhs(&axpy(0.5 * dt, &k1))?;
    let k3 = rhs(&axpy(0.5 * dt, &k2))?;
    let k4 = rhs(&axpy(dt, &k3))?;
    Ok((0..y.len())
        .map(|j| y[j] + dt / 6.0 * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]))
        .collect())
}

/// Radius of the circle the flow converges to, fixed by the conserved `L - A`.
pub fn predict_limit_radius(curve: &CurveGrid) -> Result<f64> {
    let f = fields_from_rho(curve.rho())?;
    limit_radius_from_la(functionals(&f).la)
}

fn sup_dev(rho: &[f64], a: f64) -> f64 {
    rho.iter().map(|r| (r - a).abs()).fold(0.0, f64::max)
}

fn check_pointwise_monitors(first: &Sample, prev: &Sample, cur: &Sample) -> Result<()> {
    let (f0, fp, fc) = (&first.functionals, &prev.functionals, &cur.functionals);
    let checks = [
        ("kappa_min decrease", f0.kappa_min - fc.kappa_min, EXTREMUM_TOL),
        ("kappa_max increase", fc.kappa_max - f0.kappa_max, EXTREMUM_TOL),
        ("rho_min decrease", f0.rho_min - fc.rho_min, EXTREMUM_TOL),
        ("rho_max increase", fc.rho_max - f0.rho_max, EXTREMUM_TOL),
        ("M increase", fc.weighted_m - fp.weighted_m, MONOTONE_TOL),
        ("negative Q", -fc.hk_q.unwrap_or(0.0) / fc.length, HK_TOL),
    ];
    for (name, value, tol) in checks {
        if value > 10.0 * tol {
            return Err(Error::InvariantViolation { name, value, tol });
        }
    }
    Ok(())
}

/// Run the flow until one of the stopping tests in `opts` fires.
///
/// Reaching the margin floor mid-run ends the trace with
/// [`Termination::AbortedMargin`]; an initial curve below the floor is an error.
pub fn evolve(curve: &CurveGrid, opts: &FlowOptions) -> Result<FlowTrace> {
    opts.validate()?;
    let f0 = fields_from_rho(curve.rho())?;
    require_strict(&f0, opts.margin_floor)?;
    let a_inf = limit_radius_from_la(functionals(&f0).la)?;

    let mut state = FlowState::new(curve.clone());
    let mut fields = f0;
    let mut samples: Vec<Sample> = Vec::new();
    let mut snapshots = Vec::new();
    let termination = loop {
        let fx = functionals(&fields);
        let sample = Sample {
            t: state.t,
            step: state.step_count,
            functionals: fx,
            sup_dev: sup_dev(state.curve.rho(), a_inf),
            dissipation: dissipation(&fields),
        };
        let stop = if opts.q_tol > 0.0 && fx.hk_q.is_some_and(|q| q < opts.q_tol * fx.length) {
            Some(Termination::ConvergedQ)
        } else if opts.sup_tol > 0.0 && sample.sup_dev < opts.sup_tol {
            Some(Termination::ConvergedSup)
        } else if state.t >= opts.t_max {
            Some(Termination::TMaxReached)
        } else {
            None
        };
        if stop.is_some() || state.step_count.is_multiple_of(opts.sample_every as u64) {
            if let Some(prev) = samples.last() {
                check_pointwise_monitors(&samples[0], prev, &sample)?;
            }
            samples.push(sample);
        }
        if let Some(every) = opts.snapshot_every {
            if stop.is_some() || state.step_count.is_multiple_of(every as u64) {
                snapshots.push((state.t, state.curve.clone()));
            }
        }
        if let Some(reason) = stop {
            break reason;
        }

        let mut dt = stable_dt(&fields, opts.cfl)?;
        if state.t + dt >= opts.t_max {
            dt = opts.t_max - state.t;
        }
        match step(&state, dt, opts.margin_floor) {
            Ok(mut next) => {
                if next.t > opts.t_max * (1.0 - 1e-15) {
                    next.t = opts.t_max;
                }
                state = next;
            }
            Err(Error::AbortedMargin { .. }) => break Termination::AbortedMargin,
            Err(e) => return Err(e),
        }
        fields = fields_from_rho(state.curve.rho())?;
    };

    Ok(FlowTrace {
        samples,
        snapshots,
        a_infinity_predicted: a_inf,
        termination,
        initial: curve.clone(),
        final_state: state,
        options: *opts,
    })
}

/// Post-hoc invariant diagnostics of a trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonitorReport {
    pub la_drift_rel: f64,
    pub kappa_min_drop: f64,
    pub kappa_max_rise: f64,
    pub rho_min_drop: f64,
    pub rho_max_rise: f64,
    pub m_increase: f64,
    pub q_min_over_l: f64,
    /// Worst `|dM/dt + 2 D| / (2 D)` over mid-run samples with `|dM/dt| > 1e-6`.
    /// Mid-run means the middle 80% of the samples.
    pub dissipation_rel_err: f64,
    pub dissipation_checked: usize,
    /// Worst `|dA/dt - Q| / |Q|` over mid-run samples with `|Q| > 1e-6`.
    pub area_rate_rel_err: f64,
    pub area_rate_checked: usize,
}

/// Centered derivative on a non-uniform three-point stencil.
fn centered_derivative(t: [f64; 3], y: [f64; 3]) -> f64 {
    let (h0, h1) = (t[1] - t[0], t[2] - t[1]);
    (-h1 / (h0 * (h0 + h1))) * y[0] + ((h1 - h0) / (h0 * h1)) * y[1] + (h0 / (h1 * (h0 + h1))) * y[2]
}

pub fn monitor_report(trace: &FlowTrace) -> MonitorReport {
    let s = &trace.samples;
    let f0 = &s[0].functionals;
    let mut r = MonitorReport {
        la_drift_rel: 0.0,
        kappa_min_drop: 0.0,
        kappa_max_rise: 0.0,
        rho_min_drop: 0.0,
        rho_max_rise: 0.0,
        m_increase: 0.0,
        q_min_over_l: f64::INFINITY,
        dissipation_rel_err: 0.0,
        dissipation_checked: 0,
        area_rate_rel_err: 0.0,
        area_rate_checked: 0,
    };
    for (i, smp) in s.iter().enumerate() {
        let f = &smp.functionals;
        r.la_drift_rel = r.la_drift_rel.max((f.la - f0.la).abs() / f0.la.abs());
        r.kappa_min_drop = r.kappa_min_drop.max(f0.kappa_min - f.kappa_min);
        r.kappa_max_rise = r.kappa_max_rise.max(f.kappa_max - f0.kappa_max);
        r.rho_min_drop = r.rho_min_drop.max(f0.rho_min - f.rho_min);
        r.rho_max_rise = r.rho_max_rise.max(f.rho_max - f0.rho_max);
        if let Some(q) = f.hk_q {
            r.q_min_over_l = r.q_min_over_l.min(q / f.length);
        }
        if i > 0 {
            r.m_increase = r.m_increase.max(f.weighted_m - s[i - 1].functionals.weighted_m);
        }
        let mid_run = i >= (s.len() / 10).max(1) && i + 1 < s.len() && i <= 9 * s.len() / 10;
        if mid_run {
            let t = [s[i - 1].t, smp.t, s[i + 1].t];
            if t[1] - t[0] <= 0.0 || t[2] - t[1] <= 0.0 {
                continue;
            }
            let dm = centered_derivative(t, [s[i - 1].functionals.weighted_m, f.weighted_m, s[i + 1].functionals.weighted_m]);
            if dm.abs() > 1e-6 {
                let target = -2.0 * smp.dissipation;
                r.dissipation_rel_err = r.dissipation_rel_err.max((dm - target).abs() / target.abs());
                r.dissipation_checked += 1;
            }
            if let Some(q) = f.hk_q.filter(|q| q.abs() > 1e-6) {
                let da = centered_derivative(t, [s[i - 1].functionals.area, f.area, s[i + 1].functionals.area]);
                r.area_rate_rel_err = r.area_rate_rel_err.max((da - q).abs() / q.abs());
                r.area_rate_checked += 1;
            }
        }
    }
    r
}

/// Least-squares exponential rate of `sup |ρ - a∞|` against the linearized prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub fitted: f64,
    pub predicted: f64,
    pub mode: usize,
    pub window: (f64, f64),
    pub points: usize,
}

pub fn fit_decay_rate(trace: &FlowTrace) -> Result<DecayFit> {
    if !matches!(trace.termination, Termination::ConvergedQ | Termination::ConvergedSup) {
        return Err(Error::InsufficientDecay(format!(
            "run ended with {:?}",
            trace.termination
        )));
    }
    let s0 = trace.samples[0].sup_dev;
    let floor = 10.0 * trace.options.sup_tol.max(1e-13);
    let ceiling = 0.1 * s0;
    let pts: Vec<(f64, f64)> = trace
        .samples
        .iter()
        .filter(|s| s.sup_dev >= floor && s.sup_dev <= ceiling)
        .map(|s| (s.t, s.sup_dev.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientDecay(format!(
            "{} samples in [{floor:.1e}, {ceiling:.1e}]",
            pts.len()
        )));
    }
    let nf = pts.len() as f64;
    let (mt, my) = pts.iter().fold((0.0, 0.0), |(a, b), (t, y)| (a + t / nf, b + y / nf));
    let (sxy, sxx) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (t, y)| (a + (t - mt) * (y - my), b + (t - mt) * (t - mt)));
    let rho0 = trace.initial.rho();
    let mean = rho0.iter().sum::<f64>() / rho0.len() as f64;
    let centered: Vec<f64> = rho0.iter().map(|r| r - mean).collect();
    let mode = TrigInterpolant::new(&centered)
        .dominant_mode()
        .ok_or_else(|| Error::InsufficientDecay("initial curve has no perturbation".into()))?;
    Ok(DecayFit {
        fitted: -sxy / sxx,
        predicted: (mode * mode) as f64 * trace.a_infinity_predicted.exp(),
        mode,
        window: (pts[0].0, pts[pts.len() - 1].0),
        points: pts.len(),
    })
}

/// `∂ρ/∂t` of curve-shortening flow written as a radial graph.
pub fn csf_radial_speed(f: &GeomFields) -> Vec<f64> {
    (0..f.n_nodes()).map(|j| -f.kappa[j] * f.v[j] / f.phi[j]).collect()
}

/// Short curve-shortening smoothing that turns a weakly h-convex curve strictly
/// h-convex. Substeps are subdivided further if `tau / n_steps` exceeds the
/// explicit stability limit.
pub fn csf_regularize(curve: &CurveGrid, tau: f64, n_steps: usize) -> Result<CurveGrid> {
    if !(tau >= 0.0) || n_steps == 0 {
        return Err(Error::Domain(format!("need tau >= 0 and n_steps > 0, got {tau}, {n_steps}")));
    }
    let f = fields_from_rho(curve.rho())?;
    let margin = hconvexity_margin(&f);
    if margin < -1e-8 {
        return Err(Error::NotHConvex { margin });
    }
    if f.kappa_max() <= 1.0 {
        return Err(Error::Domain("no node has curvature above 1".into()));
    }
    if tau == 0.0 {
        return Ok(curve.clone());
    }
    let mut rho = curve.rho().to_vec();
    let h = tau / n_steps as f64;
    for _ in 0..n_steps {
        let f = fields_from_rho(&rho)?;
        let vmin = f.v.iter().copied().fold(f64::INFINITY, f64::min);
        let limit = 0.25 * f.dtheta().powi(2) * vmin * vmin;
        let sub = (h / limit).ceil().max(1.0) as usize;
        let dt = h / sub as f64;
        for _ in 0..sub {
            rho = rk4(&rho, dt, |r| Ok(csf_radial_speed(&fields_from_rho(r)?)))?;
            let rmin = rho.iter().copied().fold(f64::INFINITY, f64::min);
            if !(rmin >= 0.01) {
                return Err(Error::Domain(format!("curve degenerated (min rho = {rmin:.3e})")));
            }
        }
    }
    CurveGrid::new(rho)
}
