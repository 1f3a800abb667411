//! Independent numerical check of the sharp constant: constrained sector
//! minimization on truncated domains, extrapolated in the domain size.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numerics::eigen::{bottom_eigenvalue_with, EigenOptions};
use crate::numerics::extrapolate::{extrapolate_threshold, Extrapolation};
use crate::numerics::forms::{assemble_sector_forms, OuterBoundary};
use crate::numerics::grid::{Grading, RadialGrid};
use crate::spectral;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifySettings {
    pub r_max: f64,
    pub cells: usize,
    pub grading: Grading,
    /// The `D` of the weight `(D + r^2)^alpha`.
    pub shift: f64,
    pub l_max: u32,
    pub boundary: OuterBoundary,
    pub eigen: EigenOptions,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            r_max: 100.0,
            cells: 1600,
            grading: Grading::default(),
            shift: 1.0,
            l_max: 3,
            boundary: OuterBoundary::Asymptotic,
            eigen: EigenOptions::default(),
        }
    }
}

/// Truncation radii used for the extrapolation: `R/4, R/2, R`.
pub fn domain_sizes(r_max: f64) -> [f64; 3] {
    [r_max / 4.0, r_max / 2.0, r_max]
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorEstimate {
    pub l: u32,
    /// Mean-zero constraint imposed (`l = 0` and `alpha < alpha_*`).
    pub constrained: bool,
    pub radii: [f64; 3],
    pub raw: [f64; 3],
    pub extrapolation: Extrapolation,
    pub closed_form: f64,
}

impl SectorEstimate {
    pub fn value(&self) -> f64 {
        self.extrapolation.value()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HpVerification {
    pub d: u32,
    pub alpha: f64,
    pub sectors: Vec<SectorEstimate>,
    /// Minimum of the extrapolated sector values.
    pub numeric: f64,
    pub closed_form: f64,
    pub rel_err: f64,
}

pub fn sector_estimate(d: u32, alpha: f64, l: u32, s: &VerifySettings) -> Result<SectorEstimate> {
    let alpha_star = if d >= 3 { -(d as f64 - 2.0) / 2.0 } else { 0.0 };
    let constrained = l == 0 && alpha < alpha_star;
    let radii = domain_sizes(s.r_max);
    let mut raw = [0.0; 3];
    for (slot, &r) in raw.iter_mut().zip(&radii) {
        let grid = Arc::new(RadialGrid::new(r, s.cells, s.grading, d)?);
        let forms = assemble_sector_forms(grid, alpha, s.shift, l, s.boundary)?;
        let constraints = if constrained { alloc::vec![forms.constant()] } else { Vec::new() };
        *slot = bottom_eigenvalue_with(&forms, &constraints, s.eigen)?.lambda;
    }
    Ok(SectorEstimate {
        l,
        constrained,
        radii,
        raw,
        extrapolation: extrapolate_threshold(radii, raw),
        closed_form: spectral::sector_bottom(d, alpha, l),
    })
}

/// Minimum over sectors `l <= l_max` compared with the sharp constant.
pub fn hp_verify(d: u32, alpha: f64, s: &VerifySettings) -> Result<HpVerification> {
    let closed_form = spectral::sharp_constant(d, alpha)?;
    let l_max = if d == 1 { s.l_max.min(1) } else { s.l_max };
    if s.l_max < 1 && d >= 2 {
        return Err(Error::invalid("l_max", "the minimum needs sectors 0 and 1"));
    }
    let sectors = (0..=l_max)
        .map(|l| sector_estimate(d, alpha, l, s))
        .collect::<Result<Vec<_>>>()?;
    let numeric = sectors.iter().map(SectorEstimate::value).fold(f64::INFINITY, f64::min);
    Ok(HpVerification {
        d,
        alpha,
        sectors,
        numeric,
        closed_form,
        rel_err: (numeric - closed_form).abs() / closed_form.abs(),
    })
}
