//! Weighted radial quadrature.

use crate::field::RadialField;
use crate::math;
use crate::numerics::grid::RadialGrid;

/// Trapezoidal approximation of
/// `|S^{d-1}| \int_0^{R_max} f(r) (D + r^2)^power r^{d-1} dr`.
pub fn weighted_integral(f: &RadialField, power: f64, shift: f64) -> f64 {
    let grid = f.grid();
    trapezoid(grid, |i, r| f.values()[i] * weight(r, power, shift))
}

/// `(D + r^2)^power`.
pub fn weight(r: f64, power: f64, shift: f64) -> f64 {
    math::exp(power * math::ln(shift + r * r))
}

/// Trapezoidal rule for `|S^{d-1}| \int g(r) r^{d-1} dr`, where `g(i, r_i)`
/// gives nodal values.
pub fn trapezoid(grid: &RadialGrid, g: impl Fn(usize, f64) -> f64) -> f64 {
    let nodes = grid.nodes();
    let dm1 = grid.dim() as f64 - 1.0;
    let mut prev = g(0, 0.0) * if dm1 == 0.0 { 1.0 } else { 0.0 };
    let mut sum = 0.0;
    for i in 1..nodes.len() {
        let r = nodes[i];
        let cur = g(i, r) * math::pow(r, dm1);
        sum += 0.5 * (nodes[i] - nodes[i - 1]) * (prev + cur);
        prev = cur;
    }
    grid.sphere_area() * sum
}

/// Estimate of `|S^{d-1}| \int_{R_max}^\infty g r^{d-1} dr` assuming the
/// integrand decays like a power over the last cell.
///
/// Returns `f64::INFINITY` when the fitted decay is not integrable and `0`
/// when the integrand vanishes at `R_max`.
pub fn tail_estimate(grid: &RadialGrid, g_last: f64, g_prev: f64) -> f64 {
    let nodes = grid.nodes();
    let n = nodes.len() - 1;
    let (r1, r0) = (nodes[n], nodes[n - 1]);
    let dm1 = grid.dim() as f64 - 1.0;
    let h1 = g_last * math::pow(r1, dm1);
    let h0 = g_prev * math::pow(r0, dm1);
    if h1 == 0.0 {
        return 0.0;
    }
    if h0 == 0.0 || h1.signum() != h0.signum() || math::abs(h1) >= math::abs(h0) {
        return f64::INFINITY;
    }
    // |h| ~ r^{-q}
    let q = -math::ln(h1 / h0) / math::ln(r1 / r0);
    if q <= 1.0 {
        return f64::INFINITY;
    }
    grid.sphere_area() * math::abs(h1) * r1 / (q - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::grid::Grading;
    use alloc::sync::Arc;

    #[test]
    fn zero_field() {
        let g = Arc::new(RadialGrid::new(5.0, 32, Grading::default(), 3).unwrap());
        let f = RadialField::from_fn(g, 0, |_| 0.0);
        assert_eq!(weighted_integral(&f, -2.0, 1.0), 0.0);
    }

    #[test]
    fn power_tail() {
        // integrand r^{-3} r^{d-1} with d = 1: tail from R is R^{-2}/2, times |S^0| = 2
        let g = RadialGrid::new(100.0, 4000, Grading::Uniform, 1).unwrap();
        let n = g.len() - 1;
        let r = g.nodes();
        let est = tail_estimate(&g, math::pow(r[n], -3.0), math::pow(r[n - 1], -3.0));
        assert!((est / (2.0 * 0.5e-4) - 1.0).abs() < 1e-3);
    }
}
