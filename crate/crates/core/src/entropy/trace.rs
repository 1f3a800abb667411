//! Time series of the entropy functionals and rate fits.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exponents::ExponentSet;
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub entropy: f64,
    pub fisher: f64,
    pub h1: f64,
    pub h2: f64,
    pub mass_defect: f64,
}

impl TraceRow {
    /// `h = max(h2, 1/h1)`.
    pub fn h(&self) -> f64 {
        self.h2.max(1.0 / self.h1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    /// `-slope` of `log F` against `t` (or against `log t` for the algebraic fit).
    pub rate: f64,
    /// `log F` at the origin of the regression variable.
    pub intercept: f64,
    pub r2: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyTrace {
    pub exponents: ExponentSet,
    /// The `D` of the target profile.
    pub shift: f64,
    pub rows: Vec<TraceRow>,
    /// Entropy level below which values are dominated by round-off.
    pub noise_floor: f64,
    pub fit: Option<RateFit>,
}

impl EntropyTrace {
    pub fn new(exponents: ExponentSet, shift: f64, noise_floor: f64) -> Self {
        EntropyTrace { exponents, shift, rows: Vec::new(), noise_floor, fit: None }
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    /// Relative mismatch `|dF/dt + I| / I` between consecutive rows, with `I`
    /// averaged over the interval. Returns `(t_mid, mismatch)` pairs.
    pub fn production_mismatch(&self) -> Vec<(f64, f64)> {
        self.rows
            .windows(2)
            .filter_map(|w| {
                let dt = w[1].t - w[0].t;
                let i = 0.5 * (w[0].fisher + w[1].fisher);
                if !(dt > 0.0) || !(i > 0.0) {
                    return None;
                }
                let df = (w[1].entropy - w[0].entropy) / dt;
                Some((0.5 * (w[0].t + w[1].t), (df + i).abs() / i))
            })
            .collect()
    }
}

fn window_samples(trace: &EntropyTrace, window: (f64, f64)) -> Result<Vec<(f64, f64)>> {
    let (a, b) = window;
    if !(a < b) {
        return Err(Error::DegenerateWindow(format!("empty window [{a}, {b}]")));
    }
    let pts: Vec<(f64, f64)> = trace
        .rows
        .iter()
        .filter(|r| r.t >= a && r.t <= b && r.entropy > 0.0)
        .map(|r| (r.t, r.entropy))
        .collect();
    if pts.len() < 10 {
        return Err(Error::DegenerateWindow(format!(
            "{} samples with F > 0 in [{a}, {b}], need 10",
            pts.len()
        )));
    }
    let low = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    if low <= 10.0 * trace.noise_floor {
        return Err(Error::DegenerateWindow(format!(
            "F = {low:e} within 10x of the noise floor {:e}",
            trace.noise_floor
        )));
    }
    Ok(pts)
}

/// Least-squares line through `(x, y)` with its coefficient of determination.
pub fn linear_regression(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

/// Exponential decay rate of `F` over `window`.
pub fn fit_rate(trace: &EntropyTrace, window: (f64, f64)) -> Result<RateFit> {
    let pts = window_samples(trace, window)?;
    let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let y: Vec<f64> = pts.iter().map(|p| math::ln(p.1)).collect();
    let (slope, intercept, r2) = linear_regression(&x, &y);
    Ok(RateFit { rate: -slope, intercept, r2, window, samples: pts.len() })
}

/// Algebraic decay: slope of `log F` against `log t` (negative for decay).
pub fn fit_loglog(trace: &EntropyTrace, window: (f64, f64)) -> Result<RateFit> {
    if !(window.0 > 0.0) {
        return Err(Error::DegenerateWindow("log-log window must start at t > 0".into()));
    }
    let pts = window_samples(trace, window)?;
    let x: Vec<f64> = pts.iter().map(|p| math::ln(p.0)).collect();
    let y: Vec<f64> = pts.iter().map(|p| math::ln(p.1)).collect();
    let (slope, intercept, r2) = linear_regression(&x, &y);
    Ok(RateFit { rate: slope, intercept, r2, window, samples: pts.len() })
}
