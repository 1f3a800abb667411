//! Initial data inside the sandwich `V_{D0} <= v0 <= V_{D1}`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exponents::ExponentSet;
use crate::field::RadialField;
use crate::flow::nonlinear::NonlinearState;
use crate::math;
use crate::numerics::grid::RadialGrid;
use crate::profiles::{solve_shift_with, Profile, SOLVE_SHIFT_MAX_ITER};
use crate::spectral;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialData {
    /// `(V_{D0} + V_{D1}) / 2`.
    ProfileBlend,
    /// `V_D (1 + epsilon g V_D^{1-m})` with `g` the radial mode `(0, k)`
    /// scaled to `D`, clipped to the sandwich.
    EigenSeeded { k: u32, epsilon: f64, shift: f64 },
    /// Sum of Gaussian bumps in `w - 1` around `V_{(D0+D1)/2}`, clipped.
    RandomBump { seed: u64, amplitude: f64, bumps: usize },
}

/// Gaussian bumps `a exp(-((r - c)/w)^2)` with `a` uniform in
/// `[-amplitude, amplitude]`, `c` in `[0, r_max/2]` and `w` in `[0.2, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpSum {
    bumps: Vec<(f64, f64, f64)>,
}

impl BumpSum {
    pub fn new(seed: u64, amplitude: f64, count: usize, r_max: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut unit = move || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        let bumps = (0..count)
            .map(|_| {
                let a = amplitude * (2.0 * unit() - 1.0);
                let c = 0.5 * r_max * unit();
                let w = 0.2 + 0.8 * unit();
                (a, c, w)
            })
            .collect();
        BumpSum { bumps }
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.bumps.iter().map(|&(a, c, w)| a * math::exp(-((r - c) / w) * ((r - c) / w))).sum()
    }
}

/// Initial data `f` for a linear sector flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SectorData {
    /// `epsilon` times the mode `(l, k)` scaled to the weight's `D`.
    Mode { k: u32, epsilon: f64 },
    /// `r^l` times a [`BumpSum`].
    RandomBump { seed: u64, amplitude: f64, bumps: usize },
}

pub fn make_sector_data(grid: Arc<RadialGrid>, alpha: f64, shift: f64, l: u32, kind: SectorData) -> Result<RadialField> {
    if !(shift > 0.0) {
        return Err(Error::invalid("D", "must be positive"));
    }
    let d = grid.dim();
    Ok(match kind {
        SectorData::Mode { k, epsilon } => {
            let mode = spectral::discrete_mode(d, alpha, l, k);
            let scale = math::sqrt(shift);
            RadialField::from_fn(grid, l, |r| epsilon * mode.eval(r / scale))
        }
        SectorData::RandomBump { seed, amplitude, bumps } => {
            let sum = BumpSum::new(seed, amplitude, bumps, grid.r_max());
            RadialField::from_fn(grid, l, |r| math::pow(r, l as f64) * sum.eval(r))
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetShift {
    /// `D` from zero mass defect on the grid.
    Matched,
    Fixed(f64),
}

#[derive(Debug, Clone)]
pub struct PreparedData {
    pub state: NonlinearState,
    pub d0: f64,
    pub d1: f64,
    /// The target `D`.
    pub shift: f64,
    /// Nodes where the raw data had to be clipped into the sandwich.
    pub clipped: usize,
}

/// `V_{D'}(r) / V_D(r) - 1`.
fn profile_rel(alpha: f64, from: f64, to: f64, r: f64) -> f64 {
    math::expm1(alpha * math::ln_1p((from - to) / (to + r * r)))
}

/// Re-expresses `w - 1` relative to `V_{from}` as `w - 1` relative to `V_to`.
fn rebase(alpha: f64, from: f64, to: f64, r: f64, rel: f64) -> f64 {
    math::expm1(alpha * math::ln_1p((from - to) / (to + r * r)) + math::ln_1p(rel))
}

pub fn make_initial_data(
    grid: Arc<RadialGrid>,
    exponents: ExponentSet,
    d0: f64,
    d1: f64,
    kind: InitialData,
    target: TargetShift,
) -> Result<PreparedData> {
    if !(d0 > d1 && d1 > 0.0) {
        return Err(Error::invalid("D0, D1", "need D0 > D1 > 0"));
    }
    let alpha = exponents.alpha;
    let nodes = grid.nodes();
    // reference profile for the raw construction
    let (reference, raw): (f64, Vec<f64>) = match kind {
        InitialData::ProfileBlend => {
            let mid = 0.5 * (d0 + d1);
            let rel = nodes
                .iter()
                .map(|&r| 0.5 * (profile_rel(alpha, d0, mid, r) + profile_rel(alpha, d1, mid, r)))
                .collect();
            (mid, rel)
        }
        InitialData::EigenSeeded { k, epsilon, shift } => {
            if !(shift > d1 && shift < d0) {
                return Err(Error::invalid("data.D", "seed profile must lie strictly between D1 and D0"));
            }
            let mode = spectral::discrete_mode(exponents.d, alpha, 0, k);
            let rel = nodes
                .iter()
                .map(|&r| epsilon * mode.eval(r / math::sqrt(shift)) / (shift + r * r))
                .collect();
            (shift, rel)
        }
        InitialData::RandomBump { seed, amplitude, bumps } => {
            let mid = 0.5 * (d0 + d1);
            let sum = BumpSum::new(seed, amplitude, bumps, grid.r_max());
            (mid, nodes.iter().map(|&r| sum.eval(r)).collect())
        }
    };
    // clip to the sandwich, relative to the reference profile
    let mut clipped = 0;
    let raw: Vec<f64> = raw
        .iter()
        .zip(nodes)
        .map(|(&d, &r)| {
            let lo = profile_rel(alpha, d0, reference, r);
            let hi = profile_rel(alpha, d1, reference, r);
            if d < lo || d > hi {
                clipped += 1;
            }
            d.clamp(lo, hi)
        })
        .collect();
    let shift = match target {
        TargetShift::Fixed(s) => {
            if !(s > 0.0) {
                return Err(Error::invalid("D", "must be positive"));
            }
            s
        }
        TargetShift::Matched => {
            let reference_profile = Profile::new(exponents, reference)?;
            let values = nodes
                .iter()
                .zip(&raw)
                .map(|(&r, &d)| reference_profile.eval(r) * (1.0 + d))
                .collect();
            let v0 = RadialField::new(grid.clone(), values, 0)?;
            solve_shift_with(&v0, exponents, d0, d1, 0.0, SOLVE_SHIFT_MAX_ITER)?
        }
    };
    let rel: Vec<f64> = raw
        .iter()
        .zip(nodes)
        .map(|(&d, &r)| rebase(alpha, reference, shift, r, d))
        .collect();
    // the sandwich is a property of v alone; check it against the target
    for (i, (&d, &r)) in rel.iter().zip(nodes).enumerate() {
        let lo = profile_rel(alpha, d0, shift, r);
        let hi = profile_rel(alpha, d1, shift, r);
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        if d < lo - slack || d > hi + slack {
            return Err(Error::SandwichViolation { node: i, r });
        }
    }
    let state = NonlinearState::new(grid, Profile::new(exponents, shift)?, rel)?;
    Ok(PreparedData { state, d0, d1, shift, clipped })
}

/// Lower and upper sandwich ratios `min v/V_{D0}` and `max v/V_{D1}`.
pub fn sandwich_ratios(state: &NonlinearState, d0: f64, d1: f64) -> (f64, f64) {
    let alpha = state.profile().alpha();
    let shift = state.profile().shift;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (&d, &r) in state.rel().iter().zip(state.grid().nodes()) {
        // v / V_{Dj} = (1 + rel) / (V_{Dj} / V_D)
        let w = math::ln_1p(d);
        lo = lo.min(math::exp(w - math::ln_1p(profile_rel(alpha, d0, shift, r))));
        hi = hi.max(math::exp(w - math::ln_1p(profile_rel(alpha, d1, shift, r))));
    }
    (lo, hi)
}
