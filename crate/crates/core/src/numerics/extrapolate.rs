//! Domain-size extrapolation of truncated sector eigenvalues.

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extrapolation {
    /// Fitted `lambda(R) = c + K / (log R - a)^2` through three domain sizes.
    LogModel { value: f64, k: f64, a: f64 },
    /// The sequence does not follow the threshold law (a bound state, or
    /// already converged); the largest domain's value is kept.
    Direct { value: f64 },
}

impl Extrapolation {
    pub fn value(&self) -> f64 {
        match *self {
            Extrapolation::LogModel { value, .. } | Extrapolation::Direct { value } => value,
        }
    }
}

/// Extrapolates eigenvalues computed on `radii[0] < radii[1] < radii[2]`.
///
/// Near a continuum threshold a truncated problem behaves like a Dirichlet
/// problem in `s = log r`, so the error decays like `1/log^2 R`; the shift
/// `a` absorbs the effective inner length scale.
pub fn extrapolate_threshold(radii: [f64; 3], lambdas: [f64; 3]) -> Extrapolation {
    let direct = Extrapolation::Direct { value: lambdas[2] };
    let [l1, l2, l3] = lambdas;
    if !(l1 > l2 && l2 > l3) {
        return direct;
    }
    let s = [math::ln(radii[0]), math::ln(radii[1]), math::ln(radii[2])];
    let u = |a: f64, i: usize| 1.0 / ((s[i] - a) * (s[i] - a));
    let ratio = |a: f64| (u(a, 0) - u(a, 1)) / (u(a, 1) - u(a, 2));
    let target = (l1 - l2) / (l2 - l3);
    // ratio(a) increases from its a -> -inf limit to +inf as a -> s[0].
    let mut hi = s[0] - 1e-9;
    let mut lo = s[0] - 1e4;
    if !(ratio(lo) < target) {
        return direct;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * (1.0 + math::abs(mid)) {
            break;
        }
    }
    let a = 0.5 * (lo + hi);
    let k = (l1 - l2) / (u(a, 0) - u(a, 1));
    let value = l3 - k * u(a, 2);
    Extrapolation::LogModel { value, k, a }
}
