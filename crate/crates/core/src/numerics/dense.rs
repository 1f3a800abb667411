//! Dense reference solver for constrained sector pencils.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::numerics::forms::SectorForms;
use crate::numerics::tridiag::SymTridiagonal;

fn to_dense(m: &SymTridiagonal) -> DMatrix<f64> {
    let n = m.len();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = m.diag[i];
        if i + 1 < n {
            d[(i, i + 1)] = m.off[i];
            d[(i + 1, i)] = m.off[i];
        }
    }
    d
}

/// All generalized eigenvalues of `(A, B)` on the B-orthogonal complement of
/// `constraints`, ascending. `O(n^3)`; meant for `n` up to a few hundred.
pub fn constrained_eigenvalues(forms: &SectorForms, constraints: &[RadialField]) -> Result<Vec<f64>> {
    let a = to_dense(forms.stiffness());
    let b = to_dense(forms.mass());
    let n = a.nrows();
    let p = constraints.len();
    let z = if p == 0 {
        DMatrix::identity(n, n)
    } else {
        // Columns p.. of the full Q of [B C | I] span the complement of B C.
        let mut aug = DMatrix::zeros(n, n + p);
        for (j, c) in constraints.iter().enumerate() {
            let bc = &b * nalgebra::DVector::from_vec(forms.restrict(c));
            aug.set_column(j, &bc);
        }
        for i in 0..n {
            aug[(i, p + i)] = 1.0;
        }
        let q = aug.qr().q();
        q.columns(p, n - p).into_owned()
    };
    let at = z.transpose() * &a * &z;
    let bt = z.transpose() * &b * &z;
    let chol = bt.cholesky().ok_or(Error::Dense("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or(Error::Dense("singular Cholesky factor".into()))?;
    let mut m = &linv * at * linv.transpose();
    m = (&m + m.transpose()) * 0.5;
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));
    Ok(ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eigen::bottom_eigenvalue;
    use crate::numerics::forms::{assemble_sector_forms, OuterBoundary};
    use crate::numerics::grid::{Grading, RadialGrid};
    use alloc::sync::Arc;

    #[test]
    fn constant_removed_by_constraint() {
        let grid = Arc::new(RadialGrid::new(20.0, 60, Grading::default(), 5).unwrap());
        let forms = assemble_sector_forms(grid, -6.0, 1.0, 0, OuterBoundary::Natural).unwrap();
        let free = constrained_eigenvalues(&forms, &[]).unwrap();
        assert!(free[0].abs() < 1e-9);
        let constrained = constrained_eigenvalues(&forms, &[forms.constant()]).unwrap();
        assert_eq!(constrained.len(), free.len() - 1);
        // the next eigenvalue survives, interlacing holds
        assert!((constrained[0] - free[1]).abs() < 1e-8 * free[1]);
        let it = bottom_eigenvalue(&forms, &[forms.constant()]).unwrap();
        assert!((it.lambda - constrained[0]).abs() < 1e-8 * constrained[0]);
    }
}
