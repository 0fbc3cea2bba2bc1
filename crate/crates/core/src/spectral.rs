//! Pseudo-spectral building blocks: Fourier differentiation on the uniform
//! periodic grid, even cosine series on the staggered polar grid, and the
//! quadrature rules that go with them.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::rc::Rc;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
    static COSINE_TABLES: RefCell<HashMap<usize, Rc<CosineTables>>> = RefCell::new(HashMap::new());
}

fn fft_pair(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(n), p.plan_fft_inverse(n))
    })
}

/// Signed wavenumber of FFT bin `idx` for an even grid of size `n`.
/// The Nyquist bin reports `+n/2`.
#[inline]
fn wavenumber(idx: usize, n: usize) -> f64 {
    if idx <= n / 2 {
        idx as f64
    } else {
        idx as f64 - n as f64
    }
}

/// First and second derivatives of a periodic sample vector on the uniform grid
/// `θ_j = 2πj/n`, exact for the band-limited trigonometric interpolant.
///
/// The Nyquist mode is dropped from the first derivative (its derivative vanishes
/// at the nodes) and kept with weight `-(n/2)^2` in the second.
pub fn periodic_derivatives(values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = values.len();
    let (fwd, inv) = fft_pair(n);
    let mut buf: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fwd.process(&mut buf);

    // Both derivative spectra are Hermitian, so pack d1 + i*d2 into one inverse transform.
    let nyq = n / 2;
    for (idx, c) in buf.iter_mut().enumerate() {
        let k = wavenumber(idx, n);
        let d1 = if idx == nyq {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, k) * *c
        };
        let d2 = *c * (-k * k);
        *c = d1 + Complex64::new(0.0, 1.0) * d2;
    }
    inv.process(&mut buf);
    let scale = 1.0 / n as f64;
    let d1 = buf.iter().map(|c| c.re * scale).collect();
    let d2 = buf.iter().map(|c| c.im * scale).collect();
    (d1, d2)
}

/// Real trigonometric interpolant of periodic samples, evaluable anywhere on S¹.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    /// `a[k]` multiplies `cos(kθ)`, for `k = 0..=n/2`.
    pub a: Vec<f64>,
    /// `b[k]` multiplies `sin(kθ)`; `b[0]` and `b[n/2]` are zero.
    pub b: Vec<f64>,
}

impl TrigInterpolant {
    pub fn new(values: &[f64]) -> Self {
        let n = values.len();
        let (fwd, _) = fft_pair(n);
        let mut buf: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        fwd.process(&mut buf);
        let half = n / 2;
        let inv_n = 1.0 / n as f64;
        let mut a = vec![0.0; half + 1];
        let mut b = vec![0.0; half + 1];
        a[0] = buf[0].re * inv_n;
        for k in 1..half {
            a[k] = 2.0 * buf[k].re * inv_n;
            b[k] = -2.0 * buf[k].im * inv_n;
        }
        a[half] = buf[half].re * inv_n;
        Self { a, b }
    }

    /// Value and first two derivatives at `theta`.
    pub fn eval(&self, theta: f64) -> (f64, f64, f64) {
        let mut f = self.a[0];
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for k in 1..self.a.len() {
            let kf = k as f64;
            let (s, c) = (kf * theta).sin_cos();
            let (ak, bk) = (self.a[k], self.b[k]);
            f += ak * c + bk * s;
            d1 += kf * (bk * c - ak * s);
            d2 -= kf * kf * (ak * c + bk * s);
        }
        (f, d1, d2)
    }

    /// Amplitude `sqrt(a_k² + b_k²)` of mode `k`.
    pub fn amplitude(&self, k: usize) -> f64 {
        self.a[k].hypot(self.b[k])
    }

    /// Largest-amplitude nonzero mode; ties go to the smaller wavenumber.
    pub fn dominant_mode(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for k in 1..self.a.len() {
            let amp = self.amplitude(k);
            match best {
                Some((_, b)) if amp <= b * (1.0 + 1e-9) => {}
                _ if amp > 0.0 => best = Some((k, amp)),
                _ => {}
            }
        }
        best.map(|(k, _)| k)
    }
}

/// Locate the extremum of `f` near `theta0` by Newton iteration on `f'`.
/// Falls back to `theta0` if the iteration wanders more than one grid cell.
pub(crate) fn refine_extremum<F>(f: F, theta0: f64, cell: f64) -> (f64, f64)
where
    F: Fn(f64) -> (f64, f64, f64),
{
    let mut theta = theta0;
    for _ in 0..50 {
        let (_, d1, d2) = f(theta);
        if d2 == 0.0 {
            break;
        }
        let step = d1 / d2;
        theta -= step;
        if (theta - theta0).abs() > cell {
            theta = theta0;
            break;
        }
        if step.abs() < 1e-15 {
            break;
        }
    }
    (theta, f(theta).0)
}

/// Cached cosine/sine tables for the staggered grid `θ_j = (j + 1/2)π/m`.
#[derive(Debug)]
struct CosineTables {
    m: usize,
    /// `cos(k θ_j)` at index `k*m + j`.
    cos: Vec<f64>,
    /// `sin(k θ_j)` at index `k*m + j`.
    sin: Vec<f64>,
}

impl CosineTables {
    fn build(m: usize) -> Self {
        let mut cos = vec![0.0; m * m];
        let mut sin = vec![0.0; m * m];
        for k in 0..m {
            for j in 0..m {
                let (s, c) = (k as f64 * staggered_theta(j, m)).sin_cos();
                cos[k * m + j] = c;
                sin[k * m + j] = s;
            }
        }
        Self { m, cos, sin }
    }
}

fn cosine_tables(m: usize) -> Rc<CosineTables> {
    COSINE_TABLES.with(|t| {
        t.borrow_mut()
            .entry(m)
            .or_insert_with(|| Rc::new(CosineTables::build(m)))
            .clone()
    })
}

/// Polar angle of staggered node `j` out of `m`.
#[inline]
pub fn staggered_theta(j: usize, m: usize) -> f64 {
    (j as f64 + 0.5) * PI / m as f64
}

/// Even cosine series `Σ_{k<m} c_k cos(kθ)` interpolating samples on the
/// staggered polar grid. The interpolant is even about both poles, so its
/// odd derivatives vanish there.
#[derive(Debug, Clone)]
pub struct CosineSeries {
    pub coeffs: Vec<f64>,
}

impl CosineSeries {
    /// DCT-II of the staggered samples.
    pub fn from_samples(values: &[f64]) -> Self {
        let m = values.len();
        let t = cosine_tables(m);
        let mean = values.iter().sum::<f64>() / m as f64;
        let mut coeffs = vec![0.0; m];
        coeffs[0] = mean;
        for (k, c) in coeffs.iter_mut().enumerate().skip(1) {
            let row = &t.cos[k * m..(k + 1) * m];
            let s: f64 = row.iter().zip(values).map(|(a, b)| a * (b - mean)).sum();
            *c = 2.0 * s / m as f64;
        }
        Self { coeffs }
    }

    /// Series built from explicit `(k, amplitude)` cosine terms plus a constant.
    pub fn from_modes(base: f64, modes: &[(usize, f64)], m: usize) -> Self {
        let mut coeffs = vec![0.0; m];
        coeffs[0] = base;
        for &(k, amp) in modes {
            if k < m {
                coeffs[k] += amp;
            }
        }
        Self { coeffs }
    }

    /// Values, first and second derivatives at the staggered nodes.
    pub fn nodal(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let m = self.coeffs.len();
        let t = cosine_tables(m);
        debug_assert_eq!(t.m, m);
        let mut f = vec![0.0; m];
        let mut d1 = vec![0.0; m];
        let mut d2 = vec![0.0; m];
        for (k, &ck) in self.coeffs.iter().enumerate() {
            if ck == 0.0 {
                continue;
            }
            let kf = k as f64;
            let crow = &t.cos[k * m..(k + 1) * m];
            let srow = &t.sin[k * m..(k + 1) * m];
            for j in 0..m {
                f[j] += ck * crow[j];
                d1[j] -= kf * ck * srow[j];
                d2[j] -= kf * kf * ck * crow[j];
            }
        }
        (f, d1, d2)
    }

    pub fn eval(&self, theta: f64) -> (f64, f64, f64) {
        let mut f = 0.0;
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for (k, &ck) in self.coeffs.iter().enumerate() {
            let kf = k as f64;
            let (s, c) = (kf * theta).sin_cos();
            f += ck * c;
            d1 -= kf * ck * s;
            d2 -= kf * kf * ck * c;
        }
        (f, d1, d2)
    }
}

/// Fejér's first rule on the staggered grid: `∫_0^π g(θ) sinθ dθ ≈ Σ w_j g(θ_j)`,
/// exact for cosine polynomials `g` of degree below `m`.
pub fn fejer_weights(m: usize) -> Vec<f64> {
    (0..m)
        .map(|j| {
            let th = staggered_theta(j, m);
            let s: f64 = (1..=m / 2)
                .map(|k| {
                    let kf = k as f64;
                    (2.0 * kf * th).cos() / (4.0 * kf * kf - 1.0)
                })
                .sum();
            2.0 / m as f64 * (1.0 - 2.0 * s)
        })
        .collect()
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Composite 20-point Gauss–Legendre integral of `f` on `[lo, hi]` with panels
/// no wider than `max_panel`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, max_panel: f64) -> f64 {
    thread_local! {
        static GL20: (Vec<f64>, Vec<f64>) = gauss_legendre(20);
    }
    if hi == lo {
        return 0.0;
    }
    let panels = (((hi - lo).abs() / max_panel).ceil() as usize).max(1);
    let h = (hi - lo) / panels as f64;
    GL20.with(|(x, w)| {
        let mut total = 0.0;
        for p in 0..panels {
            let mid = lo + (p as f64 + 0.5) * h;
            let s: f64 = x.iter().zip(w).map(|(xi, wi)| wi * f(mid + 0.5 * h * xi)).sum();
            total += 0.5 * h * s;
        }
        total
    })
}
