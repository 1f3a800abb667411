//! P1 discretization of the sector quadratic forms
//! `A(f) = \int (f'^2 + l(l+d-2) f^2 / r^2) dmu_alpha` and
//! `B(f) = \int f^2 dmu_{alpha-1}` on a radial grid.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::math;
use crate::numerics::grid::RadialGrid;
use crate::numerics::tridiag::SymTridiagonal;

/// Treatment of the truncation point `R_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OuterBoundary {
    /// No-flux: the form is the plain restriction to `[0, R_max]`.
    #[default]
    Natural,
    /// Robin condition `f' = -beta f / r`, `beta = (d - 2 + 2 alpha) / 2`,
    /// the double root of the indicial equation at infinity. Truncation then
    /// perturbs the continuum threshold by `O(1/log^2 R_max)` only.
    Asymptotic,
}

const GAUSS5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

#[derive(Debug, Clone)]
pub struct SectorForms {
    grid: Arc<RadialGrid>,
    alpha: f64,
    shift: f64,
    l: u32,
    boundary: OuterBoundary,
    first: usize,
    stiffness: SymTridiagonal,
    mass: SymTridiagonal,
    /// Per-element `\int dmu_alpha / h^2`, the gradient part of `A`.
    gradient: Vec<f64>,
    /// Angular part of `A` plus the boundary term; no cancellation against
    /// `gradient` when evaluating `x^T A x`.
    potential: SymTridiagonal,
}

/// `|S^{d-1}| (D + r^2)^power r^{d-1}`.
fn density(r: f64, power: f64, shift: f64, dim: u32, sphere: f64) -> f64 {
    let radial = if dim == 1 { 1.0 } else { math::pow(r, dim as f64 - 1.0) };
    sphere * math::exp(power * math::ln(shift + r * r)) * radial
}

pub fn assemble_sector_forms(
    grid: Arc<RadialGrid>,
    alpha: f64,
    shift: f64,
    l: u32,
    boundary: OuterBoundary,
) -> Result<SectorForms> {
    if !(alpha < 0.0) {
        return Err(Error::invalid("alpha", "must be negative"));
    }
    if !(shift > 0.0) {
        return Err(Error::invalid("D", "must be positive"));
    }
    let nodes = grid.nodes();
    if let Some(i) = (1..nodes.len()).find(|&i| !(nodes[i] > nodes[i - 1])) {
        return Err(Error::SingularGrid(alloc::format!("coincident nodes at {i}")));
    }
    let dim = grid.dim();
    let sphere = grid.sphere_area();
    let angular = l as f64 * (l as f64 + dim as f64 - 2.0);
    let n = nodes.len();
    let mut a = SymTridiagonal::zeros(n);
    let mut b = SymTridiagonal::zeros(n);
    let mut potential = SymTridiagonal::zeros(n);
    let mut gradient = Vec::with_capacity(n - 1);
    for e in 0..n - 1 {
        let (r0, r1) = (nodes[e], nodes[e + 1]);
        let h = r1 - r0;
        let (mut grad, mut ang) = (0.0, [0.0; 3]);
        let mut mass = [0.0; 3];
        for &(xi, w) in &GAUSS5 {
            let r = r0 + 0.5 * h * (1.0 + xi);
            let wq = 0.5 * h * w;
            let (p0, p1) = ((r1 - r) / h, (r - r0) / h);
            let pa = density(r, alpha, shift, dim, sphere);
            let pb = density(r, alpha - 1.0, shift, dim, sphere);
            grad += wq * pa;
            let pr = wq * pa / (r * r);
            ang[0] += pr * p0 * p0;
            ang[1] += pr * p0 * p1;
            ang[2] += pr * p1 * p1;
            mass[0] += wq * pb * p0 * p0;
            mass[1] += wq * pb * p0 * p1;
            mass[2] += wq * pb * p1 * p1;
        }
        let g = grad / (h * h);
        gradient.push(g);
        potential.diag[e] += angular * ang[0];
        potential.diag[e + 1] += angular * ang[2];
        potential.off[e] += angular * ang[1];
        a.diag[e] += g + angular * ang[0];
        a.diag[e + 1] += g + angular * ang[2];
        a.off[e] += -g + angular * ang[1];
        b.diag[e] += mass[0];
        b.diag[e + 1] += mass[2];
        b.off[e] += mass[1];
    }
    if boundary == OuterBoundary::Asymptotic {
        let r = nodes[n - 1];
        let beta = (dim as f64 - 2.0 + 2.0 * alpha) / 2.0;
        let robin = beta * density(r, alpha, shift, dim, sphere) / r;
        a.diag[n - 1] += robin;
        potential.diag[n - 1] += robin;
    }
    // f(0) = 0 in sectors l >= 1
    let first = usize::from(l >= 1);
    if first == 1 {
        a.diag.remove(0);
        a.off.remove(0);
        b.diag.remove(0);
        b.off.remove(0);
        potential.diag.remove(0);
        potential.off.remove(0);
    }
    Ok(SectorForms {
        grid,
        alpha,
        shift,
        l,
        boundary,
        first,
        stiffness: a,
        mass: b,
        gradient,
        potential,
    })
}

impl SectorForms {
    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn boundary(&self) -> OuterBoundary {
        self.boundary
    }

    pub fn stiffness(&self) -> &SymTridiagonal {
        &self.stiffness
    }

    pub fn mass(&self) -> &SymTridiagonal {
        &self.mass
    }

    /// `x^T A x` on free unknowns, summed as
    /// `sum_e g_e (x_{e+1} - x_e)^2 + x^T P x` to avoid cancellation.
    pub fn energy(&self, x: &[f64]) -> f64 {
        let mut s = self.potential.quadratic(x);
        if self.first == 1 {
            s += self.gradient[0] * x[0] * x[0];
        }
        for (e, &g) in self.gradient.iter().enumerate().skip(self.first) {
            let dx = x[e + 1 - self.first] - x[e - self.first];
            s += g * dx * dx;
        }
        s
    }

    /// Number of free nodal unknowns (the origin is pinned for `l >= 1`).
    pub fn dofs(&self) -> usize {
        self.stiffness.len()
    }

    /// Free unknowns of a field, dropping the pinned origin value.
    pub fn restrict(&self, f: &RadialField) -> Vec<f64> {
        f.values()[self.first..].to_vec()
    }

    /// Field from free unknowns, with `f(0) = 0` for `l >= 1`.
    pub fn extend(&self, x: &[f64]) -> RadialField {
        let mut values = vec![0.0; self.first];
        values.extend_from_slice(x);
        RadialField::new(self.grid.clone(), values, self.l).expect("length matches grid")
    }

    /// `f^T A f / f^T B f` on the free unknowns.
    pub fn rayleigh_quotient(&self, f: &RadialField) -> Result<f64> {
        let x = self.restrict(f);
        let den = self.mass.quadratic(&x);
        if !(den > 0.0) {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.energy(&x) / den)
    }

    /// The constant function: B-orthogonality to it is the mean-zero
    /// constraint `\int f dmu_{alpha-1} = 0`.
    pub fn constant(&self) -> RadialField {
        RadialField::from_fn(self.grid.clone(), self.l, |_| 1.0)
    }
}
