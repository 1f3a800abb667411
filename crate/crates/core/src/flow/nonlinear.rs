//! Backward-Euler finite-volume solver for the rescaled flow
//! `v_t = r^{1-d} (r^{d-1} v p_r)_r`, `p = (v^{m-1} - V_D^{m-1}) / (m-1)`,
//! with no-flux conditions at both ends of `[0, R_max]`.
//!
//! The unknown is `delta = v / V_D - 1`. Newton works on `f = (D + r^2) delta`,
//! which stays `O(delta)` in the far field where `delta` itself is tiny.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::entropy::functionals::{snapshot, ProfileWeights};
use crate::entropy::trace::{EntropyTrace, TraceRow};
use crate::error::{Error, Result};
use crate::field::RadialField;
use crate::math;
use crate::numerics::grid::RadialGrid;
use crate::numerics::tridiag::solve_general;
use crate::profiles::Profile;

#[derive(Debug, Clone)]
pub struct NonlinearState {
    grid: Arc<RadialGrid>,
    profile: Profile,
    rel: Vec<f64>,
    t: f64,
}

impl NonlinearState {
    /// `v = V_D (1 + rel)`; requires `rel > -1`.
    pub fn new(grid: Arc<RadialGrid>, profile: Profile, rel: Vec<f64>) -> Result<Self> {
        if rel.len() != grid.len() {
            return Err(Error::invalid("rel", "length differs from the grid"));
        }
        if let Some(i) = rel.iter().position(|&d| !(d > -1.0) || !d.is_finite()) {
            return Err(Error::PositivityLoss { t: 0.0, node: i, r: grid.nodes()[i], rel: rel[i] });
        }
        Ok(NonlinearState { grid, profile, rel, t: 0.0 })
    }

    pub fn from_density(v: &RadialField, profile: Profile) -> Result<Self> {
        let rel = crate::entropy::functionals::relative_state(v, &profile)?;
        Self::new(v.grid().clone(), profile, rel)
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// `w - 1` at the nodes.
    pub fn rel(&self) -> &[f64] {
        &self.rel
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn density(&self) -> RadialField {
        let values = self
            .grid
            .nodes()
            .iter()
            .zip(&self.rel)
            .map(|(&r, &d)| self.profile.eval(r) * (1.0 + d))
            .collect();
        RadialField::new(self.grid.clone(), values, 0).expect("length matches grid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSettings {
    pub t_end: f64,
    pub dt: f64,
    /// Steps between recorded trace rows.
    pub cadence: usize,
    /// Newton stops when the update is below `newton_tol * max|f|`.
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Maximum number of successive step halvings after Newton failures.
    pub max_halvings: u32,
}

impl Default for FlowSettings {
    fn default() -> Self {
        FlowSettings { t_end: 1.0, dt: 1e-3, cadence: 10, newton_tol: 1e-10, max_newton: 30, max_halvings: 12 }
    }
}

impl FlowSettings {
    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::invalid("time.dt", "must be positive"));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::invalid("time.t_end", "must be nonnegative"));
        }
        if self.cadence == 0 {
            return Err(Error::invalid("output.cadence", "must be at least 1"));
        }
        if !(self.newton_tol > 0.0) {
            return Err(Error::invalid("newton_tol", "must be positive"));
        }
        Ok(())
    }
}

/// Per-grid coefficients of the scheme.
struct Scheme {
    w: ProfileWeights,
    /// `|K_i| V_i / q_i`: cell mass of `dmu_{alpha-1}`, the time-derivative
    /// coefficient in `f` units.
    cap: Vec<f64>,
    m: f64,
}

impl Scheme {
    fn new(grid: &RadialGrid, profile: Profile) -> Self {
        let w = ProfileWeights::new(grid, profile);
        let cap = w.vol_v.iter().zip(&w.q).map(|(a, q)| a / q).collect();
        Scheme { m: profile.exponents.m, w, cap }
    }

    /// Residual `R_i = cap_i (f_i - f_i^n) / dt - (G_{i+1/2} - G_{i-1/2})` in
    /// `f` units per unit time, with the tridiagonal Jacobian in `f`.
    fn residual(
        &self,
        grid: &RadialGrid,
        rel: &[f64],
        rel_old: &[f64],
        dt: f64,
        jac: Option<(&mut [f64], &mut [f64], &mut [f64])>,
    ) -> Vec<f64> {
        let n = rel.len();
        let (v, q) = (&self.w.v, &self.w.q);
        let m = self.m;
        let mut res: Vec<f64> = (0..n).map(|i| self.cap[i] * q[i] * (rel[i] - rel_old[i]) / dt).collect();
        let p: Vec<f64> = (0..n).map(|i| q[i] * math::pressure_factor(rel[i], m)).collect();
        let mut jac = jac;
        if let Some((lo, di, up)) = jac.as_mut() {
            for i in 0..n {
                di[i] = self.cap[i] / dt;
            }
            lo.iter_mut().for_each(|x| *x = 0.0);
            up.iter_mut().for_each(|x| *x = 0.0);
        }
        for (i, &t) in grid.transmissibility().iter().enumerate() {
            let vbar = 0.5 * (v[i] * (1.0 + rel[i]) + v[i + 1] * (1.0 + rel[i + 1]));
            let dp = p[i + 1] - p[i];
            let g = t * vbar * dp;
            res[i] -= g;
            res[i + 1] += g;
            if let Some((lo, di, up)) = jac.as_mut() {
                // dG/d delta_j, then divided by q_j for the f-variables
                let gi = t * (0.5 * v[i] * dp - vbar * q[i] * math::pressure_factor_prime(rel[i], m)) / q[i];
                let gj = t * (0.5 * v[i + 1] * dp + vbar * q[i + 1] * math::pressure_factor_prime(rel[i + 1], m))
                    / q[i + 1];
                di[i] -= gi;
                up[i] -= gj;
                lo[i] += gi;
                di[i + 1] += gj;
            }
        }
        res
    }

    /// One backward-Euler step; `None` when Newton fails or positivity is lost.
    fn step(&self, grid: &RadialGrid, rel_old: &[f64], dt: f64, s: &FlowSettings) -> Option<Vec<f64>> {
        let n = rel_old.len();
        let q = &self.w.q;
        let mut rel = rel_old.to_vec();
        let (mut lo, mut di, mut up) = (vec![0.0; n - 1], vec![0.0; n], vec![0.0; n - 1]);
        for it in 0..s.max_newton {
            let mut rhs = self.residual(grid, &rel, rel_old, dt, Some((&mut lo, &mut di, &mut up)));
            rhs.iter_mut().for_each(|x| *x = -*x);
            solve_general(&lo, &di, &up, &mut rhs).ok()?;
            let mut du = 0.0f64;
            let mut fmax = 0.0f64;
            for i in 0..n {
                let f = q[i] * rel[i] + rhs[i];
                rel[i] = f / q[i];
                du = du.max(rhs[i].abs());
                fmax = fmax.max(f.abs());
                if !(rel[i] > -1.0) || !rel[i].is_finite() {
                    return None;
                }
            }
            if it > 0 && du <= s.newton_tol * fmax || du == 0.0 {
                return Some(rel);
            }
        }
        None
    }
}

/// Round-off level of the entropy: every nodal `delta` perturbed by one ulp
/// of its initial size.
pub fn noise_floor(w: &ProfileWeights, rel0: &[f64]) -> f64 {
    let eps2 = f64::EPSILON * f64::EPSILON;
    0.5 * eps2 * w.vol_vm.iter().zip(rel0).map(|(v, d)| v * d * d).sum::<f64>()
}

/// Advances `state` to `t_end`, recording a trace row every `cadence` steps
/// and at the end. `observer` sees the state at the same instants.
pub fn evolve_nonlinear(
    state: &mut NonlinearState,
    settings: &FlowSettings,
    observer: &mut dyn FnMut(&NonlinearState),
) -> Result<EntropyTrace> {
    settings.validate()?;
    let grid = state.grid.clone();
    let scheme = Scheme::new(&grid, state.profile);
    let mut trace = EntropyTrace::new(state.profile.exponents, state.profile.shift, noise_floor(&scheme.w, &state.rel));
    let record = |state: &NonlinearState, trace: &mut EntropyTrace| {
        let s = snapshot(&grid, &scheme.w, &state.rel);
        trace.rows.push(TraceRow {
            t: state.t,
            entropy: s.entropy,
            fisher: s.fisher,
            h1: s.h1,
            h2: s.h2,
            mass_defect: s.mass_defect,
        });
    };
    record(state, &mut trace);
    observer(state);
    let steps = math::ceil(settings.t_end / settings.dt - 1e-9).max(0.0) as usize;
    let t_start = state.t;
    for k in 0..steps {
        let target = if k + 1 == steps { t_start + settings.t_end } else { t_start + (k + 1) as f64 * settings.dt };
        advance(&scheme, &grid, state, target - state.t, settings, 0)?;
        state.t = target;
        if (k + 1) % settings.cadence == 0 || k + 1 == steps {
            record(state, &mut trace);
            observer(state);
        }
    }
    Ok(trace)
}

fn advance(
    scheme: &Scheme,
    grid: &RadialGrid,
    state: &mut NonlinearState,
    dt: f64,
    s: &FlowSettings,
    depth: u32,
) -> Result<()> {
    if let Some(rel) = scheme.step(grid, &state.rel, dt, s) {
        state.rel = rel;
        state.t += dt;
        return Ok(());
    }
    if depth >= s.max_halvings {
        return Err(Error::NewtonDivergence { t: state.t, dt });
    }
    advance(scheme, grid, state, 0.5 * dt, s, depth + 1)?;
    advance(scheme, grid, state, 0.5 * dt, s, depth + 1)
}
