//! Floating-point helpers that work without `std`, plus the
//! cancellation-free nonlinearities used by the flow and the entropy.

pub use libm::{asinh, ceil, cos, exp, expm1, fabs as abs, log as ln, log1p as ln_1p, pow, sinh, sqrt, tgamma};

/// Surface area of the unit sphere `S^{d-1}`.
pub fn sphere_area(d: u32) -> f64 {
    let half = d as f64 / 2.0;
    2.0 * pow(core::f64::consts::PI, half) / tgamma(half)
}

/// `(1 + delta)^q - 1` without cancellation for small `delta`.
pub fn pow1p_m1(delta: f64, q: f64) -> f64 {
    expm1(q * ln_1p(delta))
}

/// Pressure nonlinearity `((1 + delta)^(m-1) - 1) / (m - 1)`.
///
/// Multiplying by `V_D^(m-1) = D + r^2` gives the pressure
/// `(v^(m-1) - V_D^(m-1)) / (m-1)`. The expression is also the `m = 0`
/// limit pressure `1/V_D - 1/v` up to that factor, so no branch is needed.
pub fn pressure_factor(delta: f64, m: f64) -> f64 {
    pow1p_m1(delta, m - 1.0) / (m - 1.0)
}

/// Derivative of [`pressure_factor`] with respect to `delta`.
pub fn pressure_factor_prime(delta: f64, m: f64) -> f64 {
    exp((m - 2.0) * ln_1p(delta))
}

const SERIES_CUTOFF: f64 = 1e-2;

/// Entropy density `delta - ((1 + delta)^m - 1) / m`, with the `m = 0`
/// limit `delta - log(1 + delta)`.
///
/// Nonnegative for `delta > -1` and quadratic near zero; the power series is
/// used for small `delta` so the value stays accurate down to underflow.
pub fn entropy_density(delta: f64, m: f64) -> f64 {
    if abs(delta) < SERIES_CUTOFF {
        // delta - sum_{k>=1} C(m,k)/m delta^k = -sum_{k>=2} a_k delta^k,
        // a_k = (m-1)(m-2)...(m-k+1)/k!
        let mut a = 1.0;
        let mut power = delta;
        let mut sum = 0.0;
        for k in 2..16 {
            a *= (m - (k - 1) as f64) / k as f64;
            power *= delta;
            sum -= a * power;
        }
        sum
    } else if m == 0.0 {
        delta - ln_1p(delta)
    } else {
        delta - pow1p_m1(delta, m) / m
    }
}
