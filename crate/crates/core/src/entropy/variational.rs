//! The entropy / entropy-production quotient along `v_n = V_D (1 + f V_D^{1-m} / n)`.

use alloc::vec::Vec;

use crate::entropy::functionals::{entropy, fisher, linear_fisher, linear_norm, ProfileWeights};
use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::math;
use crate::profiles::Profile;

/// Fixed test directions for the quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    /// `r^2`.
    Quadratic,
    /// `r^2 / (1 + r^2)`.
    Saturating,
    /// `exp(-r^2/4) + 0.3 r^2 / (4 + r^2)`.
    Mixed,
}

impl TestFunction {
    pub fn eval(&self, r: f64) -> f64 {
        let r2 = r * r;
        match self {
            TestFunction::Quadratic => r2,
            TestFunction::Saturating => r2 / (1.0 + r2),
            TestFunction::Mixed => math::exp(-r2 / 4.0) + 0.3 * r2 / (4.0 + r2),
        }
    }
}

/// `f` minus its `dmu_{alpha-1}` mean, when that measure is finite.
pub fn mean_zero(f: &RadialField, w: &ProfileWeights) -> Vec<f64> {
    let vals = f.values();
    if !w.profile.exponents.constraint_needed() {
        return vals.to_vec();
    }
    // dmu_{alpha-1} = V / q dx
    let (mut num, mut den) = (0.0, 0.0);
    for ((&x, &vol), &q) in vals.iter().zip(&w.vol_v).zip(&w.q) {
        let c = vol / q;
        num += c * x;
        den += c;
    }
    let mean = num / den;
    vals.iter().map(|x| x - mean).collect()
}

fn perturbation(f: &RadialField, n: f64, w: &ProfileWeights) -> Result<Vec<f64>> {
    let g = mean_zero(f, w);
    let rel: Vec<f64> = g.iter().zip(&w.q).map(|(gi, qi)| gi / (n * qi)).collect();
    if let Some(i) = rel.iter().position(|&d| !(d > -1.0)) {
        return Err(Error::PositivityLoss { t: 0.0, node: i, r: f.grid().nodes()[i], rel: rel[i] });
    }
    Ok(rel)
}

/// `I[v_n] / F[v_n]`.
pub fn variational_quotient(f: &RadialField, n: f64, p: &Profile) -> Result<f64> {
    let grid = f.grid();
    let w = ProfileWeights::new(grid, *p);
    let rel = perturbation(f, n, &w)?;
    let e = entropy(&w, &rel);
    if !(e > 0.0) {
        return Err(Error::ZeroDenominator);
    }
    Ok(fisher(grid, &w, &rel) / e)
}

/// `\int |grad f|^2 dmu_alpha / \int f^2 dmu_{alpha-1}` in the same
/// discretization, for the mean-zero part of `f`.
pub fn linear_quotient(f: &RadialField, p: &Profile) -> Result<f64> {
    let grid = f.grid();
    let w = ProfileWeights::new(grid, *p);
    let g = mean_zero(f, &w);
    let rel: Vec<f64> = g.iter().zip(&w.q).map(|(gi, qi)| gi / qi).collect();
    let den = linear_norm(&w, &rel);
    if !(den > 0.0) {
        return Err(Error::ZeroDenominator);
    }
    Ok(linear_fisher(grid, &w, &rel) / den)
}
