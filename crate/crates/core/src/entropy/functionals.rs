//! Discrete entropy functionals on the dual finite-volume mesh.
//!
//! States are represented by `delta = w - 1` with `w = v / V_D`. Cell sums
//! use the dual volumes `|K_i|`; face sums use the transmissibilities of the
//! grid, so that `dF/dt = -I` holds exactly for the semi-discrete flow.

use alloc::vec::Vec;

use crate::entropy::gronwall::{x_of_h, y_of_h};
use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::math;
use crate::numerics::grid::RadialGrid;
use crate::profiles::Profile;

/// Nodal data of `V_D` on a grid, shared by all functionals.
#[derive(Debug, Clone)]
pub struct ProfileWeights {
    pub profile: Profile,
    /// `V_D(r_i)`.
    pub v: Vec<f64>,
    /// `V_D(r_i)^{m-1} = D + r_i^2`.
    pub q: Vec<f64>,
    /// `|K_i| V_D(r_i)^m`.
    pub vol_vm: Vec<f64>,
    /// `|K_i| V_D(r_i)`.
    pub vol_v: Vec<f64>,
}

impl ProfileWeights {
    pub fn new(grid: &RadialGrid, profile: Profile) -> Self {
        let m = profile.exponents.m;
        let alpha = profile.exponents.alpha;
        let mut w = ProfileWeights {
            profile,
            v: Vec::with_capacity(grid.len()),
            q: Vec::with_capacity(grid.len()),
            vol_vm: Vec::with_capacity(grid.len()),
            vol_v: Vec::with_capacity(grid.len()),
        };
        for (&r, &k) in grid.nodes().iter().zip(grid.cell_volumes()) {
            let q = profile.base(r);
            let lq = math::ln(q);
            let v = math::exp(alpha * lq);
            w.v.push(v);
            w.q.push(q);
            w.vol_vm.push(k * math::exp(m * alpha * lq));
            w.vol_v.push(k * v);
        }
        w
    }

    pub fn m(&self) -> f64 {
        self.profile.exponents.m
    }
}

/// `delta = v / V_D - 1`; rejects nonpositive densities.
pub fn relative_state(v: &RadialField, p: &Profile) -> Result<Vec<f64>> {
    let nodes = v.grid().nodes();
    v.values()
        .iter()
        .zip(nodes)
        .enumerate()
        .map(|(i, (&vi, &r))| {
            if !(vi > 0.0) {
                return Err(Error::PositivityLoss { t: 0.0, node: i, r, rel: vi / p.eval(r) - 1.0 });
            }
            Ok(vi / p.eval(r) - 1.0)
        })
        .collect()
}

/// `F = \sum |K_i| V^m phi_m(delta) / (1 - m)`.
pub fn entropy(w: &ProfileWeights, rel: &[f64]) -> f64 {
    let m = w.m();
    rel.iter().zip(&w.vol_vm).map(|(&d, &c)| c * math::entropy_density(d, m)).sum::<f64>() / (1.0 - m)
}

/// Discrete pressure `p_i = (D + r_i^2) psi_m(delta_i)`.
pub fn pressure(w: &ProfileWeights, rel: &[f64]) -> Vec<f64> {
    let m = w.m();
    rel.iter().zip(&w.q).map(|(&d, &q)| q * math::pressure_factor(d, m)).collect()
}

/// `I = \sum_faces T_f vbar_f (p_{i+1} - p_i)^2`, `vbar` the arithmetic mean of `v`.
pub fn fisher(grid: &RadialGrid, w: &ProfileWeights, rel: &[f64]) -> f64 {
    let p = pressure(w, rel);
    let mut s = 0.0;
    for (i, &t) in grid.transmissibility().iter().enumerate() {
        let vbar = 0.5 * (w.v[i] * (1.0 + rel[i]) + w.v[i + 1] * (1.0 + rel[i + 1]));
        let dp = p[i + 1] - p[i];
        s += t * vbar * dp * dp;
    }
    s
}

/// `\int f^2 dmu_{alpha-1}` for `f = delta V^{m-1}`.
pub fn linear_norm(w: &ProfileWeights, rel: &[f64]) -> f64 {
    rel.iter().zip(&w.vol_vm).map(|(&d, &c)| c * d * d).sum()
}

/// `\int |grad f|^2 dmu_alpha` for `f = delta V^{m-1}`, on the same faces as [`fisher`].
pub fn linear_fisher(grid: &RadialGrid, w: &ProfileWeights, rel: &[f64]) -> f64 {
    let mut s = 0.0;
    for (i, &t) in grid.transmissibility().iter().enumerate() {
        let vbar = 0.5 * (w.v[i] + w.v[i + 1]);
        let df = w.q[i + 1] * rel[i + 1] - w.q[i] * rel[i];
        s += t * vbar * df * df;
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HStats {
    /// `inf w`.
    pub h1: f64,
    /// `sup w`.
    pub h2: f64,
    /// `max(h2, 1/h1)`.
    pub h: f64,
}

pub fn h_stats(rel: &[f64]) -> HStats {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &d in rel {
        lo = lo.min(d);
        hi = hi.max(d);
    }
    let (h1, h2) = (1.0 + lo, 1.0 + hi);
    HStats { h1, h2, h: h2.max(1.0 / h1) }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    pub entropy: f64,
    pub fisher: f64,
    pub h1: f64,
    pub h2: f64,
    pub mass_defect: f64,
}

pub fn snapshot(grid: &RadialGrid, w: &ProfileWeights, rel: &[f64]) -> Snapshot {
    let h = h_stats(rel);
    Snapshot {
        entropy: entropy(w, rel),
        fisher: fisher(grid, w, rel),
        h1: h.h1,
        h2: h.h2,
        mass_defect: rel.iter().zip(&w.vol_v).map(|(&d, &c)| c * d).sum(),
    }
}

/// Slacks of the entropy sandwich `h^{m-2} L <= 2F <= h^{2-m} L` and of the
/// Fisher bound `Lf <= (1 + X(h)) I + Y(h) L`, where `L` and `Lf` are the
/// linearized norm and Fisher information of `f = delta V^{m-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichReport {
    pub h: f64,
    pub entropy: f64,
    pub fisher: f64,
    pub linear_norm: f64,
    pub linear_fisher: f64,
    /// `2F - h^{m-2} L`.
    pub entropy_lower_slack: f64,
    /// `h^{2-m} L - 2F`.
    pub entropy_upper_slack: f64,
    /// `(1 + X) I + Y L - Lf`.
    pub fisher_slack: f64,
}

impl SandwichReport {
    /// All slacks nonnegative up to `rel_tol` of the compared magnitudes.
    pub fn holds(&self, rel_tol: f64) -> bool {
        let scale_e = 2.0 * self.entropy + self.linear_norm;
        let scale_f = self.fisher + self.linear_fisher;
        self.entropy_lower_slack >= -rel_tol * scale_e
            && self.entropy_upper_slack >= -rel_tol * scale_e
            && self.fisher_slack >= -rel_tol * scale_f
    }
}

pub fn sandwich_report(grid: &RadialGrid, w: &ProfileWeights, rel: &[f64]) -> SandwichReport {
    let m = w.m();
    let d = w.profile.exponents.d;
    let h = h_stats(rel).h;
    let f = entropy(w, rel);
    let i = fisher(grid, w, rel);
    let l = linear_norm(w, rel);
    let lf = linear_fisher(grid, w, rel);
    let x = x_of_h(h, m).unwrap_or(0.0);
    let y = y_of_h(h, d, m).unwrap_or(0.0);
    SandwichReport {
        h,
        entropy: f,
        fisher: i,
        linear_norm: l,
        linear_fisher: lf,
        entropy_lower_slack: 2.0 * f - math::pow(h, m - 2.0) * l,
        entropy_upper_slack: math::pow(h, 2.0 - m) * l - 2.0 * f,
        fisher_slack: (1.0 + x) * i + y * l - lf,
    }
}

pub fn relative_entropy(v: &RadialField, p: &Profile) -> Result<f64> {
    let rel = relative_state(v, p)?;
    Ok(entropy(&ProfileWeights::new(v.grid(), *p), &rel))
}

pub fn fisher_information(v: &RadialField, p: &Profile) -> Result<f64> {
    let rel = relative_state(v, p)?;
    Ok(fisher(v.grid(), &ProfileWeights::new(v.grid(), *p), &rel))
}

pub fn h_statistics(v: &RadialField, p: &Profile) -> Result<HStats> {
    Ok(h_stats(&relative_state(v, p)?))
}

pub fn check_sandwich_bounds(v: &RadialField, p: &Profile) -> Result<SandwichReport> {
    let rel = relative_state(v, p)?;
    Ok(sandwich_report(v.grid(), &ProfileWeights::new(v.grid(), *p), &rel))
}
