//! The functions `X`, `Y`, the threshold `h_*` and the comparison ODE that
//! bounds the entropy when the relative uniform estimate is known.

use alloc::vec::Vec;

use crate::entropy::trace::EntropyTrace;
use crate::error::{Error, Result};
use crate::exponents::ExponentSet;
use crate::math;

fn check_h(h: f64) -> Result<()> {
    if !(h >= 1.0) || !h.is_finite() {
        return Err(Error::invalid("h", "must be finite and >= 1"));
    }
    Ok(())
}

/// `X(h) = h^{5-2m} - 1`.
pub fn x_of_h(h: f64, m: f64) -> Result<f64> {
    check_h(h)?;
    Ok(math::expm1((5.0 - 2.0 * m) * math::ln(h)))
}

/// `Y(h) = d (1-m) (h^{4(2-m)} - 1)`.
pub fn y_of_h(h: f64, d: u32, m: f64) -> Result<f64> {
    check_h(h)?;
    Ok(d as f64 * (1.0 - m) * math::expm1(4.0 * (2.0 - m) * math::ln(h)))
}

/// The unique `h > 1` with `Y(h) = Lambda`; `Lambda - Y >= 0` exactly on `[1, h_*]`.
pub fn h_star(lambda: f64, d: u32, m: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::invalid("Lambda", "must be positive"));
    }
    // Y is an explicit power: invert it directly.
    let base = 1.0 + lambda / (d as f64 * (1.0 - m));
    Ok(math::exp(math::ln(base) / (4.0 * (2.0 - m))))
}

/// Exponent of the relative uniform estimate `h - 1 <= C F^e`.
pub fn uniform_exponent(d: u32, m: f64) -> f64 {
    (1.0 - m) / (d as f64 + 2.0 - (d as f64 + 1.0) * m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GronwallParams {
    pub d: u32,
    pub m: f64,
    pub lambda: f64,
    pub c_unif: f64,
    pub e_unif: f64,
    pub h_star: f64,
}

impl GronwallParams {
    pub fn new(exponents: &ExponentSet, lambda: f64, c_unif: f64) -> Result<Self> {
        if !(c_unif >= 0.0) || !c_unif.is_finite() {
            return Err(Error::invalid("C", "must be finite and nonnegative"));
        }
        let (d, m) = (exponents.d, exponents.m);
        Ok(GronwallParams {
            d,
            m,
            lambda,
            c_unif,
            e_unif: uniform_exponent(d, m),
            h_star: h_star(lambda, d, m)?,
        })
    }

    /// Right-hand side of `dG/dt`.
    pub fn rate(&self, g: f64) -> f64 {
        if g <= 0.0 {
            return 0.0;
        }
        let h = 1.0 + self.c_unif * math::pow(g, self.e_unif);
        let x = x_of_h(h, self.m).unwrap_or(f64::INFINITY);
        let y = y_of_h(h, self.d, self.m).unwrap_or(f64::INFINITY);
        -2.0 * (self.lambda - y) / ((1.0 + x) * math::pow(h, 2.0 - self.m)) * g
    }
}

/// Smallest `C` with `h - 1 <= C F^e` at every row of `trace` where `F > 0`.
pub fn calibrate_c(trace: &EntropyTrace, e_unif: f64) -> f64 {
    trace
        .rows
        .iter()
        .filter(|r| r.entropy > 0.0)
        .map(|r| (r.h() - 1.0) / math::pow(r.entropy, e_unif))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GronwallCurve {
    pub t: Vec<f64>,
    pub g: Vec<f64>,
}

impl GronwallCurve {
    /// Log-linear interpolation between integration nodes.
    pub fn value_at(&self, t: f64) -> f64 {
        let i = match self.t.iter().position(|&s| s >= t) {
            Some(0) => return self.g[0],
            Some(i) => i,
            None => return self.g[self.g.len() - 1],
        };
        let (t0, t1) = (self.t[i - 1], self.t[i]);
        let s = (t - t0) / (t1 - t0);
        let (g0, g1) = (self.g[i - 1], self.g[i]);
        if g0 > 0.0 && g1 > 0.0 {
            math::exp((1.0 - s) * math::ln(g0) + s * math::ln(g1))
        } else {
            (1.0 - s) * g0 + s * g1
        }
    }
}

/// RK4 solution of `dG/dt = -2 (Lambda - Y(h)) / ((1 + X(h)) h^{2-m}) G`,
/// `h = 1 + C G^e`, `G(0) = F0`.
pub fn gronwall_bound(f0: f64, h0: f64, params: &GronwallParams, t_end: f64, dt: f64) -> Result<GronwallCurve> {
    if !(h0 < params.h_star) {
        return Err(Error::invalid("h0", alloc::format!("need h(0) < h_* = {}", params.h_star)));
    }
    if !(f0 >= 0.0) || !f0.is_finite() {
        return Err(Error::invalid("F0", "must be finite and nonnegative"));
    }
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::invalid("dt", "need dt > 0 and t_end >= 0"));
    }
    let steps = math::ceil(t_end / dt - 1e-9).max(0.0) as usize;
    let mut curve = GronwallCurve { t: Vec::with_capacity(steps + 1), g: Vec::with_capacity(steps + 1) };
    let (mut t, mut g) = (0.0, f0);
    curve.t.push(t);
    curve.g.push(g);
    for k in 0..steps {
        let h = if k + 1 == steps { t_end - t } else { dt };
        let k1 = params.rate(g);
        let k2 = params.rate(g + 0.5 * h * k1);
        let k3 = params.rate(g + 0.5 * h * k2);
        let k4 = params.rate(g + h * k3);
        g += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = if k + 1 == steps { t_end } else { (k + 1) as f64 * dt };
        curve.t.push(t);
        curve.g.push(g);
    }
    Ok(curve)
}
