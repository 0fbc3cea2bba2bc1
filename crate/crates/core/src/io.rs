//! Plot-ready CSV and JSON files. Every real is written with 17 significant
//! digits so that values survive a text round trip bit for bit.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Number, Value};

use crate::ball::BallCurve;
use crate::curve::{grid_theta, CurveGrid};
use crate::error::{Error, Result};
use crate::flow::FlowTrace;
use crate::quermass::{AxisymmetricHypersurface, DeficitReport, StabilityRatios};
use crate::spectral::staggered_theta;

pub const CURVE_HEADER: [&str; 2] = ["theta", "rho"];
pub const TRACE_HEADER: [&str; 11] = ["t", "L", "A", "LA", "Q", "M", "kmin", "kmax", "rmin", "rmax", "supdev"];
pub const BALL_HEADER: [&str; 3] = ["theta", "rho_e", "kappa_e"];
pub const SCAN_HEADER: [&str; 4] = ["param", "deficit", "dist", "ratio"];

/// `x` with 17 significant digits; `NaN` for missing values.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    fmt_real(x.unwrap_or(f64::NAN))
}

fn create(path: &Path) -> Result<File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path).map_err(|e| Error::io(path, e))
}

fn write_rows<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(BufWriter::new(create(path)?));
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_columns(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        other => Error::Config(format!("{}: {other:?}", path.display())),
    })?;
    let found: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_owned()).collect();
    if found != header {
        return Err(Error::Config(format!(
            "{}: expected header {:?}, found {:?}",
            path.display(),
            header.join(","),
            found.join(",")
        )));
    }
    let mut cols = vec![Vec::new(); header.len()];
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        for (c, field) in rec.iter().enumerate() {
            let x = f64::from_str(field.trim()).map_err(|_| {
                Error::Config(format!("{}: row {}: cannot parse {field:?}", path.display(), line + 1))
            })?;
            cols[c].push(x);
        }
    }
    Ok(cols)
}

fn check_nodes(path: &Path, theta: &[f64], node: impl Fn(usize) -> f64) -> Result<()> {
    for (j, &t) in theta.iter().enumerate() {
        if (t - node(j)).abs() > 1e-12 {
            return Err(Error::InvalidGrid(format!(
                "{}: theta[{j}] = {t} is not the expected grid node {}",
                path.display(),
                node(j)
            )));
        }
    }
    Ok(())
}

pub fn write_curve_csv(path: &Path, curve: &CurveGrid) -> Result<()> {
    write_rows(
        path,
        &CURVE_HEADER,
        curve
            .rho()
            .iter()
            .enumerate()
            .map(|(j, &r)| vec![fmt_real(curve.theta(j)), fmt_real(r)]),
    )
}

pub fn read_curve_csv(path: &Path) -> Result<CurveGrid> {
    let mut cols = read_columns(path, &CURVE_HEADER)?;
    let n = cols[0].len();
    check_nodes(path, &cols[0], |j| grid_theta(j, n))?;
    CurveGrid::new(cols.swap_remove(1))
}

pub fn write_hypersurface_csv(path: &Path, hyp: &AxisymmetricHypersurface) -> Result<()> {
    write_rows(
        path,
        &CURVE_HEADER,
        hyp.rho()
            .iter()
            .enumerate()
            .map(|(j, &r)| vec![fmt_real(hyp.theta(j)), fmt_real(r)]),
    )
}

pub fn read_hypersurface_csv(path: &Path, n: usize) -> Result<AxisymmetricHypersurface> {
    let mut cols = read_columns(path, &CURVE_HEADER)?;
    let m = cols[0].len();
    check_nodes(path, &cols[0], |j| staggered_theta(j, m))?;
    AxisymmetricHypersurface::new(n, cols.swap_remove(1))
}

pub fn write_trace_csv(path: &Path, trace: &FlowTrace) -> Result<()> {
    write_rows(
        path,
        &TRACE_HEADER,
        trace.samples.iter().map(|s| {
            let f = &s.functionals;
            vec![
                fmt_real(s.t),
                fmt_real(f.length),
                fmt_real(f.area),
                fmt_real(f.la),
                fmt_opt(f.hk_q),
                fmt_real(f.weighted_m),
                fmt_real(f.kappa_min),
                fmt_real(f.kappa_max),
                fmt_real(f.rho_min),
                fmt_real(f.rho_max),
                fmt_real(s.sup_dev),
            ]
        }),
    )
}

/// Writes `snapshot_<index>.csv` for every stored snapshot plus an index file
/// `snapshots.csv` listing `index,t`.
pub fn write_snapshots(dir: &Path, trace: &FlowTrace) -> Result<()> {
    for (i, (_, curve)) in trace.snapshots.iter().enumerate() {
        write_curve_csv(&dir.join(snapshot_name(i)), curve)?;
    }
    write_rows(
        &dir.join("snapshots.csv"),
        &["index", "t"],
        trace
            .snapshots
            .iter()
            .enumerate()
            .map(|(i, (t, _))| vec![i.to_string(), fmt_real(*t)]),
    )
}

pub fn snapshot_name(index: usize) -> String {
    format!("snapshot_{index:05}.csv")
}

pub fn write_ball_csv(path: &Path, curve: &CurveGrid, ball: &BallCurve) -> Result<()> {
    write_rows(
        path,
        &BALL_HEADER,
        (0..ball.n_nodes()).map(|j| vec![fmt_real(curve.theta(j)), fmt_real(ball.rho_e[j]), fmt_real(ball.kappa_e[j])]),
    )
}

/// One row of a family scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub param: f64,
    pub deficit: f64,
    pub dist: f64,
    pub ratio: Option<f64>,
}

pub fn write_scan_csv(path: &Path, rows: &[ScanRow]) -> Result<()> {
    write_rows(
        path,
        &SCAN_HEADER,
        rows.iter()
            .map(|r| vec![fmt_real(r.param), fmt_real(r.deficit), fmt_real(r.dist), fmt_opt(r.ratio)]),
    )
}

/// Rewrites every non-integer number in `v` with 17 significant digits.
fn normalize_numbers(v: &mut Value) {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            if s.contains(['.', 'e', 'E']) {
                if let Some(x) = n.as_f64() {
                    *n = Number::from_str(&fmt_real(x)).expect("formatted real is valid JSON");
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(normalize_numbers),
        Value::Object(map) => map.values_mut().for_each(normalize_numbers),
        _ => {}
    }
}

/// Pretty JSON with fixed-precision reals; non-finite reals become `null`.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    normalize_numbers(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let s = to_json_string(value)?;
    let mut f = BufWriter::new(create(path)?);
    f.write_all(s.as_bytes())
        .and_then(|_| f.flush())
        .map_err(|e| Error::io(path, e))
}

/// Deficit report as a JSON object keyed by `"k,l"` for the two-index
/// inequalities and `"k"` for the weighted ones, with stability ratios.
pub fn deficit_json(report: &DeficitReport, ratios: &[(usize, StabilityRatios)]) -> Value {
    let entry = |d: &crate::quermass::Deficit| {
        serde_json::json!({
            "lhs": d.lhs,
            "rhs": d.rhs,
            "deficit": d.deficit,
            "scale": d.scale,
            "equality": d.equality,
        })
    };
    let mut af = serde_json::Map::new();
    for d in &report.af {
        af.insert(format!("{},{}", d.k, d.l.unwrap_or(0)), entry(d));
    }
    let mut weighted = serde_json::Map::new();
    for d in &report.weighted {
        weighted.insert(d.k.to_string(), entry(d));
    }
    let mut ratio_map = serde_json::Map::new();
    for (k, r) in ratios {
        ratio_map.insert(
            k.to_string(),
            serde_json::json!({
                "dist": r.dist,
                "ratio_af": r.ratio_af,
                "ratio_w": r.ratio_w,
            }),
        );
    }
    serde_json::json!({ "af": af, "weighted": weighted, "ratios": ratio_map })
}
