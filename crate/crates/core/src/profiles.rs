//! Generalized Barenblatt profiles, their weights, the Barenblatt solutions
//! in original variables and the self-similar change of variables.

use crate::error::{Error, Result};
use crate::exponents::{ExponentSet, Regime};
use crate::field::RadialField;
use crate::math;
use crate::numerics::grid::RadialGrid;
use crate::numerics::quadrature;

/// `V_D(x) = (D + |x|^2)^alpha`, `alpha = 1/(m-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub exponents: ExponentSet,
    /// The constant `D > 0`.
    pub shift: f64,
}

impl Profile {
    pub fn new(exponents: ExponentSet, shift: f64) -> Result<Self> {
        if !(shift > 0.0) || !shift.is_finite() {
            return Err(Error::invalid("D", "must be positive and finite"));
        }
        Ok(Profile { exponents, shift })
    }

    pub fn alpha(&self) -> f64 {
        self.exponents.alpha
    }

    pub fn eval(&self, r: f64) -> f64 {
        math::exp(self.exponents.alpha * math::ln(self.shift + r * r))
    }

    /// `V^{m-1} = D + r^2`, which is also `1/V^{1-m}`.
    pub fn base(&self, r: f64) -> f64 {
        self.shift + r * r
    }

    /// `V_{D'}(r) / V_D(r)`, accurate when `D'` is close to `D`.
    pub fn ratio(&self, other_shift: f64, r: f64) -> f64 {
        math::exp(self.exponents.alpha * math::ln_1p((other_shift - self.shift) / self.base(r)))
    }

    pub fn sample(&self, grid: &alloc::sync::Arc<RadialGrid>) -> RadialField {
        RadialField::from_fn(grid.clone(), 0, |r| self.eval(r))
    }

    /// `dmu_alpha = V_D dx`.
    pub fn measure(&self) -> WeightedMeasure {
        WeightedMeasure { exponents: self.exponents, power: self.exponents.alpha, shift: self.shift }
    }

    /// `dmu_{alpha-1} = V_D^{2-m} dx`.
    pub fn measure_minus_one(&self) -> WeightedMeasure {
        WeightedMeasure { exponents: self.exponents, power: self.exponents.alpha - 1.0, shift: self.shift }
    }
}

/// `(D + |x|^power) dx` on `R^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedMeasure {
    pub exponents: ExponentSet,
    pub power: f64,
    pub shift: f64,
}

impl WeightedMeasure {
    pub fn density(&self, r: f64) -> f64 {
        quadrature::weight(r, self.power, self.shift)
    }

    /// Total mass is finite iff `2 power + d < 0`; for `power = alpha - 1`
    /// this is `alpha < alpha_*`.
    pub fn is_finite(&self) -> bool {
        2.0 * self.power + (self.exponents.d as f64) < 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfSimilar {
    pub t: f64,
    pub x: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Original {
    pub tau: f64,
    pub y: f64,
    pub u: f64,
}

/// Time-dependent rescaling between `(tau, y, u)` and `(t, x, v)`.
///
/// `y` and `x` may be a single Cartesian coordinate or the radius: the map is
/// linear in space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescalingMap {
    pub exponents: ExponentSet,
    /// Time origin `T`: a delay for `m > m_c`, the extinction time for `m < m_c`.
    pub t0: f64,
}

impl RescalingMap {
    pub fn new(exponents: ExponentSet, t0: f64) -> Result<Self> {
        if !(t0 >= 0.0) || !t0.is_finite() {
            return Err(Error::invalid("T", "must be finite and nonnegative"));
        }
        Ok(RescalingMap { exponents, t0 })
    }

    /// `d |m - m_c|`, the exponent relating `R` and `T +- tau`.
    fn rate(&self) -> f64 {
        let e = &self.exponents;
        e.d as f64 * (e.m - e.m_c).abs()
    }

    fn check_window(&self, tau: f64) -> Result<()> {
        if self.exponents.is_very_fast() && !(tau < self.t0) {
            return Err(Error::Extinction { tau, extinction_time: self.t0 });
        }
        if !tau.is_finite() {
            return Err(Error::invalid("tau", "must be finite"));
        }
        Ok(())
    }

    /// `log R(tau)`.
    pub fn log_radius(&self, tau: f64) -> Result<f64> {
        self.check_window(tau)?;
        Ok(match self.exponents.regime {
            Regime::Threshold => tau,
            Regime::Good => {
                if !(self.t0 + tau > 0.0) {
                    return Err(Error::invalid("tau", "R(tau) needs T + tau > 0"));
                }
                math::ln(self.t0 + tau) / self.rate()
            }
            Regime::VeryFast | Regime::Critical => -math::ln(self.t0 - tau) / self.rate(),
        })
    }

    pub fn radius(&self, tau: f64) -> Result<f64> {
        Ok(math::exp(self.log_radius(tau)?))
    }

    /// `sqrt((1-m) / (2 d |m - m_c|))`, or `1/sqrt(d)` at `m = m_c`.
    pub fn spatial_constant(&self) -> f64 {
        let e = &self.exponents;
        if e.regime == Regime::Threshold {
            1.0 / math::sqrt(e.d as f64)
        } else {
            math::sqrt((1.0 - e.m) / (2.0 * self.rate()))
        }
    }

    fn needs_origin(&self) -> Result<()> {
        if self.exponents.regime != Regime::Threshold && self.t0 == 0.0 {
            return Err(Error::invalid("T", "R(0) = 0: the rescaling needs T > 0"));
        }
        Ok(())
    }

    /// Rescaled time `t(tau)`.
    pub fn time(&self, tau: f64) -> Result<f64> {
        self.needs_origin()?;
        self.check_window(tau)?;
        let e = &self.exponents;
        let c = (1.0 - e.m) / (2.0 * self.rate());
        Ok(match e.regime {
            Regime::Threshold => tau / e.d as f64,
            Regime::Good => c * math::ln_1p(tau / self.t0),
            Regime::VeryFast | Regime::Critical => -c * math::ln_1p(-tau / self.t0),
        })
    }

    /// Inverse of [`RescalingMap::time`].
    pub fn original_time(&self, t: f64) -> Result<f64> {
        self.needs_origin()?;
        let e = &self.exponents;
        let c = (1.0 - e.m) / (2.0 * self.rate());
        Ok(match e.regime {
            Regime::Threshold => t * e.d as f64,
            Regime::Good => self.t0 * math::expm1(t / c),
            Regime::VeryFast | Regime::Critical => -self.t0 * math::expm1(-t / c),
        })
    }

    pub fn to_selfsimilar(&self, tau: f64, y: f64, u: f64) -> Result<SelfSimilar> {
        let t = self.time(tau)?;
        let log_r = self.log_radius(tau)?;
        let d = self.exponents.d as f64;
        Ok(SelfSimilar {
            t,
            x: self.spatial_constant() * y * math::exp(-log_r),
            v: u * math::exp(d * log_r),
        })
    }

    pub fn from_selfsimilar(&self, t: f64, x: f64, v: f64) -> Result<Original> {
        let tau = self.original_time(t)?;
        let log_r = self.log_radius(tau)?;
        let d = self.exponents.d as f64;
        Ok(Original {
            tau,
            y: x * math::exp(log_r) / self.spatial_constant(),
            u: v * math::exp(-d * log_r),
        })
    }

    /// `U_{D,T}(tau, y) = R^{-d} (D + c^2 |y|^2 / R^2)^{1/(m-1)}`.
    pub fn eval_barenblatt(&self, shift: f64, tau: f64, y: f64) -> Result<f64> {
        if !(shift > 0.0) {
            return Err(Error::invalid("D", "must be positive"));
        }
        let log_r = self.log_radius(tau)?;
        let d = self.exponents.d as f64;
        let x = self.spatial_constant() * y * math::exp(-log_r);
        let profile = math::exp(self.exponents.alpha * math::ln(shift + x * x));
        Ok(profile * math::exp(-d * log_r))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassDefect {
    /// `\int_{B_{R_max}} (v - V_D) dx`.
    pub value: f64,
    /// Power-law estimate of `\int_{|x| > R_max} |v - V_D| dx`.
    pub tail: f64,
}

/// Mass defect on the dual finite-volume cells, the quantity the flow
/// conserves exactly.
pub fn mass_defect(v: &RadialField, p: &Profile) -> MassDefect {
    let grid = v.grid();
    let diff = |i: usize| v.values()[i] - p.eval(grid.nodes()[i]);
    mass_defect_from(grid, diff)
}

/// Same as [`mass_defect`] for `v = V_D (1 + rel)`, without forming `v - V_D`
/// by subtraction.
pub fn mass_defect_relative(grid: &RadialGrid, p: &Profile, rel: &[f64]) -> MassDefect {
    mass_defect_from(grid, |i| p.eval(grid.nodes()[i]) * rel[i])
}

fn mass_defect_from(grid: &RadialGrid, diff: impl Fn(usize) -> f64) -> MassDefect {
    let value = grid.cell_volumes().iter().enumerate().map(|(i, k)| k * diff(i)).sum();
    let n = grid.len() - 1;
    MassDefect { value, tail: quadrature::tail_estimate(grid, diff(n), diff(n - 1)) }
}

/// Tolerance on the defect and iteration cap for [`solve_shift`].
pub const SOLVE_SHIFT_TOL: f64 = 1e-10;
pub const SOLVE_SHIFT_MAX_ITER: usize = 200;

/// The unique `D` in `[D1, D0]` with zero mass defect.
pub fn solve_shift(v0: &RadialField, exponents: ExponentSet, d0: f64, d1: f64) -> Result<f64> {
    solve_shift_with(v0, exponents, d0, d1, SOLVE_SHIFT_TOL, SOLVE_SHIFT_MAX_ITER)
}

pub fn solve_shift_with(
    v0: &RadialField,
    exponents: ExponentSet,
    d0: f64,
    d1: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    if !(d0 > d1 && d1 > 0.0) {
        return Err(Error::invalid("D0, D1", "need D0 > D1 > 0"));
    }
    let defect = |d: f64| -> Result<f64> { Ok(mass_defect(v0, &Profile::new(exponents, d)?).value) };
    // increasing in D
    let (mut lo, mut hi) = (d1, d0);
    let (f_lo, f_hi) = (defect(lo)?, defect(hi)?);
    if f_lo.abs() <= tol {
        return Ok(lo);
    }
    if f_hi.abs() <= tol {
        return Ok(hi);
    }
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::NotBracketed { lo, hi, f_lo, f_hi });
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..max_iter {
        mid = 0.5 * (lo + hi);
        let f = defect(mid)?;
        if f.abs() <= tol || hi - lo <= 4.0 * f64::EPSILON * mid {
            return Ok(mid);
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence { what: "mass-defect bisection", iterations: max_iter, last: mid })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exps(d: u32, m: f64) -> ExponentSet {
        ExponentSet::new(d, m).unwrap()
    }

    #[test]
    fn profile_values() {
        assert_eq!(Profile::new(exps(3, 0.3), 1.0).unwrap().eval(0.0), 1.0);
        assert!((Profile::new(exps(3, 0.5), 4.0).unwrap().eval(0.0) - 1.0 / 16.0).abs() < 1e-16);
        let p = Profile::new(exps(5, 0.9), 1.0).unwrap();
        assert!((p.eval(1.0) / math::pow(2.0, -10.0) - 1.0).abs() < 1e-13);
        assert!(Profile::new(exps(3, 0.5), 0.0).is_err());
    }

    #[test]
    fn threshold_barenblatt_at_zero() {
        let e = exps(4, 0.5);
        assert_eq!(e.regime, Regime::Threshold);
        let map = RescalingMap::new(e, 0.0).unwrap();
        let u = map.eval_barenblatt(2.0, 0.0, 3.0).unwrap();
        assert!((u / math::pow(2.0 + 9.0 / 4.0, -2.0) - 1.0).abs() < 1e-14);
        let s = map.to_selfsimilar(1.5, 2.0, 1.0).unwrap();
        assert!((s.t - 1.5 / 4.0).abs() < 1e-15);
        assert!((s.x - math::exp(-1.5) * 2.0 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn good_regime_substitution() {
        let map = RescalingMap::new(exps(5, 0.8), 1.0).unwrap();
        assert!((map.radius(2.0).unwrap() - 3.0).abs() < 1e-13);
        assert!((map.time(2.0).unwrap() - 0.1 * math::ln(3.0)).abs() < 1e-15);
        assert_eq!(map.time(0.0).unwrap(), 0.0);
    }

    #[test]
    fn extinction_window() {
        let map = RescalingMap::new(exps(5, 0.2), 2.0).unwrap();
        assert!(matches!(map.radius(2.0), Err(Error::Extinction { .. })));
        assert!(map.radius(1.999).is_ok());
    }

    #[test]
    fn measure_finiteness_flips_at_alpha_star() {
        let below = Profile::new(exps(5, 1.0 - 1.0 / 1.6), 1.0).unwrap();
        let above = Profile::new(exps(5, 1.0 - 1.0 / 1.4), 1.0).unwrap();
        assert!(below.measure_minus_one().is_finite());
        assert!(!above.measure_minus_one().is_finite());
    }
}
