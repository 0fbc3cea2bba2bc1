//! Run configurations and the command dispatcher behind the `hconvex` binary.
//!
//! A run is described by one JSON file:
//!
//! ```json
//! {
//!   "command": "simulate",
//!   "curve": { "n_nodes": 256, "base": 1.0, "modes": [{ "k": 2, "amp": 0.1 }] },
//!   "flow": { "t_max": 20.0, "q_tol": 0.0 },
//!   "out": "runs/demo",
//!   "seed": 7
//! }
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::{ball_convexity_margin, conformal_residual, map_curve};
use crate::curve::{
    best_circle, derive_fields, functionals, hconvexity_margin, inequality_report, CurveGrid, FourierMode,
    RandomCurveFamily,
};
use crate::error::{Error, Result};
use crate::flow::{evolve, fit_decay_rate, monitor_report, FlowOptions, Termination};
use crate::io;
use crate::quermass::{af_deficits, quermass_vector, sphere_stability_ratio, AxisymmetricHypersurface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Simulate,
    Verify,
    Scan,
    Quermass,
    RateFit,
    BallMap,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Verify => "verify",
            Command::Scan => "scan",
            Command::Quermass => "quermass",
            Command::RateFit => "rate-fit",
            Command::BallMap => "ball-map",
        }
    }
}

fn default_nodes() -> usize {
    256
}

fn default_polar_nodes() -> usize {
    128
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// A curve given either by a `theta,rho` file or by a base radius and cosine terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    #[serde(default = "default_nodes")]
    pub n_nodes: usize,
    #[serde(default)]
    pub file: Option<PathBuf>,
    #[serde(default)]
    pub base: Option<f64>,
    #[serde(default)]
    pub modes: Vec<FourierMode>,
}

impl CurveSpec {
    pub fn parametric(n_nodes: usize, base: f64, modes: Vec<FourierMode>) -> Self {
        Self {
            n_nodes,
            file: None,
            base: Some(base),
            modes,
        }
    }

    pub fn build(&self) -> Result<CurveGrid> {
        match (&self.file, self.base) {
            (Some(path), None) if self.modes.is_empty() => io::read_curve_csv(path),
            (None, Some(base)) => CurveGrid::from_modes(self.n_nodes, base, &self.modes),
            _ => Err(Error::Config("curve needs either `file` or `base` (with optional `modes`)".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarMode {
    pub k: usize,
    pub amp: f64,
}

/// A rotationally symmetric hypersurface in `H^{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypersurfaceSpec {
    pub n: usize,
    #[serde(default = "default_polar_nodes")]
    pub m_nodes: usize,
    #[serde(default)]
    pub file: Option<PathBuf>,
    #[serde(default)]
    pub base: Option<f64>,
    /// Cosine terms in the polar angle; only even `k` are allowed.
    #[serde(default)]
    pub modes: Vec<PolarMode>,
}

impl HypersurfaceSpec {
    pub fn build(&self) -> Result<AxisymmetricHypersurface> {
        if let Some(m) = self.modes.iter().find(|m| m.k % 2 == 1) {
            return Err(Error::Config(format!("hypersurface modes must be even, got k = {}", m.k)));
        }
        match (&self.file, self.base) {
            (Some(path), None) if self.modes.is_empty() => io::read_hypersurface_csv(path, self.n),
            (None, Some(base)) => {
                let modes: Vec<(usize, f64)> = self.modes.iter().map(|m| (m.k, m.amp)).collect();
                AxisymmetricHypersurface::from_modes(self.n, self.m_nodes, base, &modes)
            }
            _ => Err(Error::Config("hypersurface needs either `file` or `base` (with optional `modes`)".into())),
        }
    }
}

/// Curve families for `scan`, written as `{"amplitude": {...}}` or `{"random": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScanSpec {
    /// `ρ = base + ε cos(mode θ)` for each listed `ε`.
    Amplitude {
        #[serde(default = "default_nodes")]
        n_nodes: usize,
        base: f64,
        mode: usize,
        values: Vec<f64>,
    },
    /// `count` seeded random strictly h-convex curves; the parameter column is the sample index.
    Random {
        count: usize,
        #[serde(default)]
        sampler: RandomCurveFamily,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default)]
    pub curve: Option<CurveSpec>,
    #[serde(default)]
    pub hypersurface: Option<HypersurfaceSpec>,
    #[serde(default)]
    pub flow: FlowOptions,
    #[serde(default)]
    pub scan: Option<ScanSpec>,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command: Some(command),
            curve: None,
            hypersurface: None,
            flow: FlowOptions::default(),
            scan: None,
            out: default_out(),
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    fn curve(&self) -> Result<CurveGrid> {
        self.curve
            .as_ref()
            .ok_or_else(|| Error::Config("this command needs a `curve`".into()))?
            .build()
    }
}

/// Exit status and the files a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: i32,
    pub files: Vec<PathBuf>,
}

/// Summary written next to a simulated trace.
#[derive(Debug, Clone, Serialize)]
pub struct SimulateSummary {
    pub termination: Termination,
    pub steps: u64,
    pub t_final: f64,
    pub la_initial: f64,
    pub la_final: f64,
    pub a_infinity_predicted: f64,
    pub a_infinity_observed: f64,
    pub final_mean_radius: f64,
    pub final_spread: f64,
    pub decay_fit: Option<crate::flow::DecayFit>,
    pub monitors: crate::flow::MonitorReport,
    pub options: FlowOptions,
}

/// Runs `cfg` and returns the exit status: 0 success, 2 invalid input,
/// 3 numerical abort, 4 I/O failure. Errors are reported on stderr.
pub fn execute(cfg: &RunConfig) -> i32 {
    match run(cfg) {
        Ok(outcome) => outcome.status,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let command = cfg
        .command
        .ok_or_else(|| Error::Config("no command given".into()))?;
    cfg.flow.validate()?;
    let out = cfg.out.as_path();
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    match command {
        Command::Simulate => simulate(cfg, out),
        Command::Verify => verify(cfg, out),
        Command::Scan => scan(cfg, out),
        Command::Quermass => quermass(cfg, out),
        Command::RateFit => rate_fit(cfg, out),
        Command::BallMap => ball_map(cfg, out),
    }
}

fn simulate(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let curve = cfg.curve()?;
    let trace = evolve(&curve, &cfg.flow)?;
    let last = trace.last();
    let rho = trace.final_state.curve.rho();
    let summary = SimulateSummary {
        termination: trace.termination,
        steps: trace.final_state.step_count,
        t_final: trace.final_state.t,
        la_initial: trace.samples[0].functionals.la,
        la_final: last.functionals.la,
        a_infinity_predicted: trace.a_infinity_predicted,
        a_infinity_observed: best_circle(&trace.final_state.curve).a,
        final_mean_radius: rho.iter().sum::<f64>() / rho.len() as f64,
        final_spread: last.functionals.rho_max - last.functionals.rho_min,
        decay_fit: fit_decay_rate(&trace).ok(),
        monitors: monitor_report(&trace),
        options: trace.options,
    };
    let files = vec![out.join("trace.csv"), out.join("summary.json"), out.join("final.csv")];
    io::write_trace_csv(&files[0], &trace)?;
    io::write_json(&files[1], &summary)?;
    io::write_curve_csv(&files[2], &trace.final_state.curve)?;
    let mut files = files;
    if !trace.snapshots.is_empty() {
        let dir = out.join("snapshots");
        io::write_snapshots(&dir, &trace)?;
        files.push(dir);
    }
    let status = if trace.termination == Termination::AbortedMargin { 3 } else { 0 };
    Ok(Outcome { status, files })
}

fn verify(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    match (&cfg.curve, &cfg.hypersurface) {
        (Some(_), None) => {
            let curve = cfg.curve()?;
            let f = derive_fields(&curve)?;
            let margin = hconvexity_margin(&f);
            if margin < 0.0 {
                return Err(Error::NotHConvex { margin });
            }
            let path = out.join("report.json");
            io::write_json(
                &path,
                &serde_json::json!({
                    "margin": margin,
                    "functionals": functionals(&f),
                    "inequality": inequality_report(&f),
                }),
            )?;
            Ok(Outcome { status: 0, files: vec![path] })
        }
        (None, Some(spec)) => {
            let hyp = spec.build()?;
            let report = af_deficits(&hyp)?;
            let ratios = (1..hyp.n())
                .map(|k| sphere_stability_ratio(&hyp, k).map(|r| (k, r)))
                .collect::<Result<Vec<_>>>()?;
            let path = out.join("deficits.json");
            io::write_json(&path, &io::deficit_json(&report, &ratios))?;
            Ok(Outcome { status: 0, files: vec![path] })
        }
        _ => Err(Error::Config("verify needs exactly one of `curve` or `hypersurface`".into())),
    }
}

/// Rows of a family scan, in family order regardless of how work is scheduled.
pub fn scan_rows(spec: &ScanSpec, seed: u64) -> Result<Vec<io::ScanRow>> {
    let row = |param: f64, curve: &CurveGrid| -> Result<io::ScanRow> {
        let f = derive_fields(curve)?;
        let margin = hconvexity_margin(&f);
        if margin < 0.0 {
            return Err(Error::NotHConvex { margin });
        }
        let rep = inequality_report(&f);
        Ok(io::ScanRow {
            param,
            deficit: rep.deficit,
            dist: rep.circle_dist,
            ratio: rep.stability_ratio,
        })
    };
    match spec {
        ScanSpec::Amplitude {
            n_nodes,
            base,
            mode,
            values,
        } => values
            .par_iter()
            .map(|&eps| row(eps, &CurveGrid::from_modes(*n_nodes, *base, &[FourierMode::cos(*mode, eps)])?))
            .collect(),
        ScanSpec::Random { count, sampler } => (0..*count)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                row(i as f64, &sampler.sample(&mut rng))
            })
            .collect(),
    }
}

fn scan(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let spec = cfg
        .scan
        .as_ref()
        .ok_or_else(|| Error::Config("scan needs a `scan` family".into()))?;
    let rows = scan_rows(spec, cfg.seed)?;
    let path = out.join("scan.csv");
    io::write_scan_csv(&path, &rows)?;
    Ok(Outcome { status: 0, files: vec![path] })
}

fn quermass(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let hyp = cfg
        .hypersurface
        .as_ref()
        .ok_or_else(|| Error::Config("quermass needs a `hypersurface`".into()))?
        .build()?;
    let qv = quermass_vector(&hyp)?;
    let path = out.join("quermass.json");
    io::write_json(
        &path,
        &serde_json::json!({
            "quermass": qv,
            "wt_route_gap": qv.wt_route_gap(),
        }),
    )?;
    io::write_hypersurface_csv(&out.join("profile.csv"), &hyp)?;
    Ok(Outcome {
        status: 0,
        files: vec![path, out.join("profile.csv")],
    })
}

fn rate_fit(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let trace = evolve(&cfg.curve()?, &cfg.flow)?;
    if trace.termination == Termination::AbortedMargin {
        return Err(Error::AbortedMargin {
            t: trace.final_state.t,
            margin: trace.last().functionals.kappa_min - 1.0,
        });
    }
    let fit = fit_decay_rate(&trace)?;
    let path = out.join("rate_fit.json");
    io::write_json(
        &path,
        &serde_json::json!({
            "mode": fit.mode,
            "fitted": fit.fitted,
            "predicted": fit.predicted,
            "relative_error": (fit.fitted - fit.predicted).abs() / fit.predicted,
            "window": [fit.window.0, fit.window.1],
            "points": fit.points,
            "a_infinity": trace.a_infinity_predicted,
            "termination": trace.termination,
        }),
    )?;
    Ok(Outcome { status: 0, files: vec![path] })
}

fn ball_map(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let curve = cfg.curve()?;
    let margin = ball_convexity_margin(&curve)?;
    let ball = map_curve(&curve)?;
    let residual = conformal_residual(&derive_fields(&curve)?, &ball)
        .into_iter()
        .fold(0.0f64, |m, r| m.max(r.abs()));
    let csv = out.join("ball.csv");
    let json = out.join("ball.json");
    io::write_ball_csv(&csv, &curve, &ball)?;
    io::write_json(
        &json,
        &serde_json::json!({
            "ball_convexity_margin": margin,
            "conformal_residual_max": residual,
        }),
    )?;
    Ok(Outcome {
        status: 0,
        files: vec![csv, json],
    })
}
