//! Constrained bottom eigenvalue of a sector pencil `(A, B)` by shifted
//! inverse iteration.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::numerics::forms::SectorForms;
use crate::numerics::tridiag::{dot, LdlFactor, SymTridiagonal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Initial shift; lowered automatically until `A - shift B` is positive definite.
    pub shift: f64,
    /// Bound on the estimated remaining decrease of the Rayleigh quotient,
    /// relative to `|lambda| + |shift|`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { shift: -1.0, tol: 1e-14, max_iter: 200_000 }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub lambda: f64,
    /// B-normalized eigenvector.
    pub vector: RadialField,
    pub iterations: usize,
}

pub fn bottom_eigenvalue(forms: &SectorForms, constraints: &[RadialField]) -> Result<Eigenpair> {
    bottom_eigenvalue_with(forms, constraints, EigenOptions::default())
}

/// Smallest eigenvalue of `A x = lambda B x` on `{x : c^T B x = 0 for all c}`.
///
/// Each step solves the saddle-point system
/// `(A - s B) z = B x - B C mu`, `C^T B z = 0` exactly, so the iterates stay
/// in the constrained subspace without drift.
pub fn bottom_eigenvalue_with(
    forms: &SectorForms,
    constraints: &[RadialField],
    opts: EigenOptions,
) -> Result<Eigenpair> {
    let a = forms.stiffness();
    let b = forms.mass();
    let n = forms.dofs();
    let cs: Vec<Vec<f64>> = constraints.iter().map(|c| forms.restrict(c)).collect();
    let bcs: Vec<Vec<f64>> = cs.iter().map(|c| b.mul_vec(c)).collect();

    let (shift, factor) = positive_shift(a, b, opts.shift)?;

    let ws: Vec<Vec<f64>> = bcs.iter().map(|bc| factor.solve(bc)).collect();
    let p = cs.len();
    let gram_lu = if p > 0 {
        let g = DMatrix::from_fn(p, p, |k, j| dot(&bcs[k], &ws[j]));
        Some(g.lu())
    } else {
        None
    };
    let cgram_lu = if p > 0 {
        let g = DMatrix::from_fn(p, p, |k, j| dot(&bcs[k], &cs[j]));
        Some(g.lu())
    } else {
        None
    };

    // Generic start, B-projected onto the constraint complement.
    let nodes = &forms.grid().nodes()[forms.grid().len() - n..];
    let mut x: Vec<f64> = nodes
        .iter()
        .enumerate()
        .map(|(i, &r)| 1.0 / (1.0 + r) + 0.05 * crate::math::cos(2.3 * i as f64))
        .collect();
    if let Some(lu) = &cgram_lu {
        let h = DVector::from_fn(p, |k, _| dot(&bcs[k], &x));
        let nu = lu.solve(&h).ok_or(Error::Dense("singular constraint Gram matrix".into()))?;
        for j in 0..p {
            for (xi, ci) in x.iter_mut().zip(&cs[j]) {
                *xi -= nu[j] * ci;
            }
        }
    }
    normalize(&mut x, b)?;

    let mut lambda = forms.energy(&x);
    let mut prev_change = f64::INFINITY;
    let mut prev_rho = f64::NAN;
    for it in 1..=opts.max_iter {
        let bx = b.mul_vec(&x);
        let mut z = factor.solve(&bx);
        if let Some(lu) = &gram_lu {
            let h = DVector::from_fn(p, |k, _| dot(&bcs[k], &z));
            let mu = lu.solve(&h).ok_or(Error::Dense("singular constraint system".into()))?;
            for j in 0..p {
                for (zi, wi) in z.iter_mut().zip(&ws[j]) {
                    *zi -= mu[j] * wi;
                }
            }
        }
        normalize(&mut z, b)?;
        let next = forms.energy(&z);
        let scale = lambda.abs() + shift.abs();
        // a rise at round-off level: nothing left to resolve
        if next >= lambda && next - lambda <= 64.0 * f64::EPSILON * scale {
            return Ok(Eigenpair { lambda, vector: forms.extend(&x), iterations: it });
        }
        x = z;
        let change = lambda - next;
        lambda = next;
        // linear convergence with ratio rho leaves change * rho / (1 - rho)
        let rho = change / prev_change;
        prev_change = if change > 0.0 { change } else { f64::INFINITY };
        // the ratio is trusted once it has settled
        let settled = (rho - prev_rho).abs() <= 0.05 * rho;
        prev_rho = rho;
        let remaining = if settled && change > 0.0 && rho < 1.0 { change * rho / (1.0 - rho) } else { f64::INFINITY };
        if remaining <= opts.tol * scale {
            return Ok(Eigenpair { lambda, vector: forms.extend(&x), iterations: it });
        }
    }
    Err(Error::NoConvergence { what: "inverse iteration", iterations: opts.max_iter, last: lambda })
}

fn positive_shift(a: &SymTridiagonal, b: &SymTridiagonal, start: f64) -> Result<(f64, LdlFactor)> {
    let mut shift = start;
    for _ in 0..60 {
        let k = a.axpy(-shift, b);
        if let Ok(f) = k.factor() {
            if f.negative_pivots() == 0 {
                return Ok((shift, f));
            }
        }
        shift = 2.0 * shift - 1.0;
    }
    Err(Error::NoConvergence { what: "shift selection", iterations: 60, last: shift })
}

fn normalize(x: &mut [f64], b: &SymTridiagonal) -> Result<()> {
    let norm = crate::math::sqrt(b.quadratic(x));
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::ZeroDenominator);
    }
    for v in x.iter_mut() {
        *v /= norm;
    }
    Ok(())
}
