//! Linearized flow `df/dt + L f = 0` restricted to one harmonic sector,
//! stepped as `(B + dt A) f^{n+1} = B f^n`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::entropy::trace::{EntropyTrace, TraceRow};
use crate::error::{Error, Result};
use crate::exponents::{ExponentSet, DEFAULT_TOLERANCE};
use crate::field::RadialField;
use crate::math;
use crate::numerics::forms::SectorForms;

#[derive(Debug, Clone)]
pub struct LinearState {
    forms: Arc<SectorForms>,
    /// Free unknowns (origin dropped for `l >= 1`).
    f: Vec<f64>,
    t: f64,
}

impl LinearState {
    pub fn new(forms: Arc<SectorForms>, f0: &RadialField) -> Result<Self> {
        if f0.len() != forms.grid().len() {
            return Err(Error::invalid("f0", "length differs from the grid"));
        }
        let f = forms.restrict(f0);
        Ok(LinearState { forms, f, t: 0.0 })
    }

    pub fn forms(&self) -> &SectorForms {
        &self.forms
    }

    pub fn field(&self) -> RadialField {
        self.forms.extend(&self.f)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `\int f^2 dmu_{alpha-1}`.
    pub fn norm2(&self) -> f64 {
        self.forms.mass().quadratic(&self.f)
    }
}

/// Rows carry `F = norm2 / 2`, `I = f^T A f` (so `dF/dt = -I`), `h1 = h2 = 1`,
/// and `\int f dmu_{alpha-1}` in the mass-defect column.
pub fn evolve_linear_sector(state: &mut LinearState, t_end: f64, dt: f64, cadence: usize) -> Result<EntropyTrace> {
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::invalid("time.dt", "need dt > 0 and t_end >= 0"));
    }
    if cadence == 0 {
        return Err(Error::invalid("output.cadence", "must be at least 1"));
    }
    let forms = state.forms.clone();
    let (a, b) = (forms.stiffness(), forms.mass());
    let exps = ExponentSet::from_alpha(forms.grid().dim(), forms.alpha(), DEFAULT_TOLERANCE)?;
    let ones = forms.restrict(&forms.constant());
    let bones = b.mul_vec(&ones);
    let mut trace = EntropyTrace::new(exps, forms.shift(), 0.0);
    let record = |state: &LinearState, trace: &mut EntropyTrace| {
        trace.rows.push(TraceRow {
            t: state.t,
            entropy: 0.5 * b.quadratic(&state.f),
            fisher: forms.energy(&state.f),
            h1: 1.0,
            h2: 1.0,
            mass_defect: crate::numerics::tridiag::dot(&bones, &state.f),
        });
    };
    record(state, &mut trace);
    let steps = math::ceil(t_end / dt - 1e-9).max(0.0) as usize;
    let t0 = state.t;
    let mut factor = None;
    for k in 0..steps {
        let target = if k + 1 == steps { t0 + t_end } else { t0 + (k + 1) as f64 * dt };
        let h = target - state.t;
        // the last step may be shorter
        let fac = match &factor {
            Some((hh, f)) if *hh == h => f,
            _ => {
                factor = Some((h, b.axpy(h, a).factor()?));
                &factor.as_ref().expect("just set").1
            }
        };
        state.f = fac.solve(&b.mul_vec(&state.f));
        state.t = target;
        if (k + 1) % cadence == 0 || k + 1 == steps {
            record(state, &mut trace);
        }
    }
    Ok(trace)
}
