//! Closed-form spectral data of the linearized operator
//! `L f = -(D + |x|^2)^(1-alpha) div((D + |x|^2)^alpha grad f)`.
//!
//! Sector `l` reduces `L` to the radial operator with angular term
//! `l(l+d-2)/r^2`; its polynomial eigenfunctions are `r^l P(r^2)` where `P`
//! is a terminating hypergeometric series in `s = -r^2`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exponents::{ExponentSet, DEFAULT_TOLERANCE};

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha < 0.0) || !alpha.is_finite() {
        return Err(Error::invalid("alpha", "must be finite and negative"));
    }
    Ok(())
}

fn check_dim(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::invalid("d", "dimension must be at least 1"));
    }
    Ok(())
}

fn is_critical(d: u32, alpha: f64) -> bool {
    let a_star = -(d as f64 - 2.0) / 2.0;
    d >= 3 && (alpha - a_star).abs() <= 1e-12 * a_star.abs()
}

/// Best constant `Lambda` in `Lambda \int f^2 dmu_{alpha-1} <= \int |grad f|^2 dmu_alpha`,
/// under `\int f dmu_{alpha-1} = 0` when `alpha < alpha_*`.
pub fn sharp_constant(d: u32, alpha: f64) -> Result<f64> {
    check_dim(d)?;
    check_alpha(alpha)?;
    let df = d as f64;
    Ok(match d {
        1 => {
            if alpha < -0.5 {
                -2.0 * alpha
            } else {
                (alpha - 0.5) * (alpha - 0.5)
            }
        }
        2 => {
            if alpha < -2.0 {
                -2.0 * alpha
            } else {
                alpha * alpha
            }
        }
        _ => {
            if is_critical(d, alpha) {
                return Err(Error::CriticalExponent { d, alpha });
            }
            if alpha < -df {
                -2.0 * alpha
            } else if alpha < -(df + 2.0) / 2.0 {
                -4.0 * alpha - 2.0 * df
            } else {
                let t = df - 2.0 + 2.0 * alpha;
                t * t / 4.0
            }
        }
    })
}

/// Bottom of the essential spectrum, `(d - 2 + 2 alpha)^2 / 4`.
pub fn continuum_bottom(d: u32, alpha: f64) -> f64 {
    let t = d as f64 - 2.0 + 2.0 * alpha;
    t * t / 4.0
}

/// Bottom of the essential spectrum restricted to sector `l`: the angular
/// term tends to `l(l+d-2)` at infinity in the `dmu_{alpha-1}` normalization.
pub fn sector_continuum_bottom(d: u32, alpha: f64, l: u32) -> f64 {
    continuum_bottom(d, alpha) + angular(d, l)
}

fn angular(d: u32, l: u32) -> f64 {
    l as f64 * (l as f64 + d as f64 - 2.0)
}

/// `lambda_{lk} = -2 alpha (l + 2k) - 4k (k + l + d/2 - 1)`.
pub fn eigenvalue(d: u32, alpha: f64, l: u32, k: u32) -> f64 {
    let (l, k, d) = (l as f64, k as f64, d as f64);
    -2.0 * alpha * (l + 2.0 * k) - 4.0 * k * (k + l + d / 2.0 - 1.0)
}

/// Admissibility as stated with the spectrum: `(l,k) != (0,0)` and
/// `l + 2k - 1 < -(d + 2 alpha)/2`. In `d = 1` the index is `j = l + 2k`
/// with `l` in `{0, 1}` and `1 <= j <= 1/2 - alpha`.
pub fn admissible(d: u32, alpha: f64, l: u32, k: u32) -> bool {
    if d == 1 {
        let j = (l + 2 * k) as f64;
        return l <= 1 && j >= 1.0 && j <= 0.5 - alpha;
    }
    (l, k) != (0, 0) && (l as f64 + 2.0 * k as f64 - 1.0) < -(d as f64 + 2.0 * alpha) / 2.0
}

/// Dimension of the space of spherical harmonics of degree `l` on `S^{d-1}`.
pub fn multiplicity(d: u32, l: u32) -> u64 {
    if l == 0 {
        return 1;
    }
    if d == 1 {
        return u64::from(l == 1);
    }
    // C(d+l-3, l-1) (d+2l-2) / l
    let (d, l) = (d as u128, l as u128);
    let mut binom: u128 = 1;
    for i in 0..(l - 1) {
        binom = binom * (d - 1 + i) / (i + 1);
    }
    (binom * (d + 2 * l - 2) / l) as u64
}

fn hypergeometric_params(d: f64, alpha: f64, l: f64, k: f64) -> (f64, f64, f64) {
    (-k, l + alpha + d / 2.0 - 1.0 + k, l + d / 2.0)
}

/// Coefficients of `P` in powers of `r^2`, with `v(r) = r^l P(r^2)` and `P(0) = 1`.
pub fn radial_poly(d: u32, alpha: f64, l: u32, k: u32) -> Vec<f64> {
    let (a, b, c) = hypergeometric_params(d as f64, alpha, l as f64, k as f64);
    let mut coeffs = vec![1.0];
    let mut cj = 1.0;
    for j in 0..k as usize {
        let jf = j as f64;
        // recurrence in s = -r^2, sign flipped to powers of r^2
        cj *= -(jf + a) * (jf + b) / ((jf + 1.0) * (jf + c));
        coeffs.push(cj);
    }
    coeffs
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenMode {
    pub l: u32,
    pub k: u32,
    pub lambda: f64,
    pub admissible: bool,
    pub below_continuum: bool,
    pub multiplicity: u64,
    /// Coefficients of `v(r) = r^l (c_0 + c_1 r^2 + ... + c_k r^{2k})`.
    pub radial_poly: Vec<f64>,
}

impl EigenMode {
    /// `v(r)` at `D = 1`; the eigenfunction for general `D` is `v(r / sqrt(D))`.
    pub fn eval(&self, r: f64) -> f64 {
        let r2 = r * r;
        let p = self.radial_poly.iter().rev().fold(0.0, |acc, &c| acc * r2 + c);
        crate::math::pow(r, self.l as f64) * p
    }
}

pub fn discrete_mode(d: u32, alpha: f64, l: u32, k: u32) -> EigenMode {
    let lambda = if d == 1 {
        let j = (l + 2 * k) as f64;
        j * (1.0 - 2.0 * alpha - j)
    } else {
        eigenvalue(d, alpha, l, k)
    };
    EigenMode {
        l,
        k,
        lambda,
        admissible: admissible(d, alpha, l, k),
        below_continuum: lambda < continuum_bottom(d, alpha),
        multiplicity: multiplicity(d, l),
        radial_poly: radial_poly(d, alpha, l, k),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImprovedConstant {
    pub value: f64,
    /// The definition returns the continuum bottom although the admissible
    /// mode `(0,1)` lies strictly below it.
    pub below_mode_warning: bool,
}

/// Constant of the improved inequality under the additional first-moment
/// conditions: `-4 alpha - 2d` for `alpha < -d`, the continuum bottom on `[-d, -d/2)`.
pub fn improved_constant(d: u32, alpha: f64) -> Result<ImprovedConstant> {
    check_alpha(alpha)?;
    let df = d as f64;
    if d < 2 {
        return Err(Error::invalid("d", "improved constant needs d >= 2"));
    }
    if !(alpha < -df / 2.0) {
        return Err(Error::invalid("alpha", "improved constant needs alpha < -d/2"));
    }
    if alpha < -df {
        return Ok(ImprovedConstant { value: -4.0 * alpha - 2.0 * df, below_mode_warning: false });
    }
    let cont = continuum_bottom(d, alpha);
    Ok(ImprovedConstant {
        value: cont,
        below_mode_warning: admissible(d, alpha, 0, 1) && eigenvalue(d, alpha, 0, 1) < cont,
    })
}

/// Bottom of the spectrum in sector `l`, with the constant removed in `l = 0`:
/// the lowest admissible mode below the sector continuum, or that continuum.
pub fn sector_bottom(d: u32, alpha: f64, l: u32) -> f64 {
    let cont = sector_continuum_bottom(d, alpha, l);
    let mut best = cont;
    let mut k = 0;
    while (l as f64 + 2.0 * k as f64 - 1.0) < -(d as f64 + 2.0 * alpha) / 2.0 + 1.0 {
        let mode = discrete_mode(d, alpha, l, k);
        if mode.admissible && mode.lambda < best {
            best = mode.lambda;
        }
        k += 1;
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapSource {
    Continuum,
    Mode { l: u32, k: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub exponents: ExponentSet,
    pub sharp_constant: f64,
    pub continuum_bottom: f64,
    /// Defined only for `d >= 2` and `alpha < -d/2`.
    pub improved_constant: Option<ImprovedConstant>,
    pub gap_source: GapSource,
    pub modes: Vec<EigenMode>,
    pub constraint_needed: bool,
}

/// Enumerates modes with `l <= l_max`, `k <= k_max` and checks that the
/// piecewise sharp constant equals the spectral minimum.
pub fn spectrum_report(d: u32, alpha: f64, l_max: u32, k_max: u32) -> Result<SpectralReport> {
    let exponents = ExponentSet::from_alpha(d, alpha, DEFAULT_TOLERANCE)?;
    let sharp = sharp_constant(d, alpha)?;
    let cont = continuum_bottom(d, alpha);
    let mut modes = Vec::new();
    for l in 0..=l_max {
        for k in 0..=k_max {
            modes.push(discrete_mode(d, alpha, l, k));
        }
    }
    let mut gap = cont;
    let mut gap_source = GapSource::Continuum;
    for mode in &modes {
        if mode.admissible && mode.below_continuum && mode.lambda < gap {
            gap = mode.lambda;
            gap_source = GapSource::Mode { l: mode.l, k: mode.k };
        }
    }
    // The minimizing mode is (1,0) or (0,1); a smaller window cannot certify.
    if l_max >= 1 && k_max >= 1 && (gap - sharp).abs() > 1e-12 * sharp.abs().max(1.0) {
        return Err(Error::Inconsistent { closed_form: sharp, spectral: gap });
    }
    let improved = if d >= 2 && alpha < -(d as f64) / 2.0 {
        Some(improved_constant(d, alpha)?)
    } else {
        None
    };
    Ok(SpectralReport {
        exponents,
        sharp_constant: sharp,
        continuum_bottom: cont,
        improved_constant: improved,
        gap_source,
        modes,
        constraint_needed: exponents.constraint_needed(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curve {
    Continuum,
    Sharp,
    Mode { l: u32, k: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureRow {
    pub alpha: f64,
    pub curve: Curve,
    pub lambda: f64,
    pub admissible: bool,
    pub below_continuum: bool,
}

/// Curves `lambda(alpha)` for the spectrum picture: continuum bottom, sharp
/// constant (omitted at `alpha_*`) and every mode in the window.
pub fn figure_rows(d: u32, alphas: &[f64], l_max: u32, k_max: u32) -> Vec<FigureRow> {
    let mut rows = Vec::new();
    for &alpha in alphas {
        if !(alpha < 0.0) {
            continue;
        }
        let cont = continuum_bottom(d, alpha);
        rows.push(FigureRow { alpha, curve: Curve::Continuum, lambda: cont, admissible: true, below_continuum: false });
        if let Ok(sharp) = sharp_constant(d, alpha) {
            rows.push(FigureRow { alpha, curve: Curve::Sharp, lambda: sharp, admissible: true, below_continuum: sharp < cont });
        }
        for l in 0..=l_max {
            for k in 0..=k_max {
                let mode = discrete_mode(d, alpha, l, k);
                rows.push(FigureRow {
                    alpha,
                    curve: Curve::Mode { l, k },
                    lambda: mode.lambda,
                    admissible: mode.admissible,
                    below_continuum: mode.below_continuum,
                });
            }
        }
    }
    rows
}

/// Exact rational counterparts of the closed forms.
pub mod exact {
    use super::*;

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    pub fn continuum_bottom(d: u32, alpha: &BigRational) -> BigRational {
        let t = int(d as i64 - 2) + alpha * int(2);
        &t * &t / int(4)
    }

    pub fn eigenvalue(d: u32, alpha: &BigRational, l: u32, k: u32) -> BigRational {
        let (l, k) = (int(l as i64), int(k as i64));
        let half_d = BigRational::new(BigInt::from(d), BigInt::from(2));
        -(alpha * int(2)) * (&l + &k * int(2)) - &k * int(4) * (&k + &l + half_d - int(1))
    }

    pub fn admissible(d: u32, alpha: &BigRational, l: u32, k: u32) -> bool {
        if d == 1 {
            let j = int((l + 2 * k) as i64);
            return l <= 1 && j >= int(1) && j <= BigRational::new(1.into(), 2.into()) - alpha;
        }
        (l, k) != (0, 0)
            && int(l as i64 + 2 * k as i64 - 1) * int(2) < -(int(d as i64) + alpha * int(2))
    }

    /// Coefficients of `P` in powers of `r^2`; `P(0) = 1`.
    pub fn radial_poly(d: u32, alpha: &BigRational, l: u32, k: u32) -> Vec<BigRational> {
        let half_d = BigRational::new(BigInt::from(d), BigInt::from(2));
        let a = -int(k as i64);
        let b = int(l as i64) + alpha + &half_d - int(1) + int(k as i64);
        let c = int(l as i64) + &half_d;
        let mut coeffs = vec![BigRational::one()];
        let mut cj = BigRational::one();
        for j in 0..k as i64 {
            let jr = int(j);
            cj = -(cj * (&jr + &a) * (&jr + &b)) / ((&jr + int(1)) * (&jr + &c));
            coeffs.push(cj.clone());
        }
        coeffs
    }

    /// Coefficients (indexed by the power of `r`) of
    /// `r^2 (1 + r^2) [v'' + ((d-1)/r + 2 alpha r/(1+r^2)) v' + (lambda/(1+r^2) - l(l+d-2)/r^2) v]`
    /// for `v(r) = r^l P(r^2)`; all vanish exactly for an eigenfunction.
    pub fn ode_residual(
        d: u32,
        alpha: &BigRational,
        lambda: &BigRational,
        l: u32,
        poly: &[BigRational],
    ) -> Vec<BigRational> {
        let ang = int(l as i64 * (l as i64 + d as i64 - 2));
        let dm1 = int(d as i64 - 1);
        let top = l as usize + 2 * poly.len() + 2;
        let mut coef = vec![BigRational::zero(); top + 1];
        // v = sum a_n r^n with n = l + 2j
        for (j, a) in poly.iter().enumerate() {
            let n = l as usize + 2 * j;
            let nr = int(n as i64);
            let same = &nr * (&nr - int(1)) + &dm1 * &nr - &ang;
            let up = &nr * (&nr - int(1)) + &nr * (&dm1 + alpha * int(2)) + lambda - &ang;
            coef[n] += a * same;
            coef[n + 2] += a * up;
        }
        coef
    }

    /// Value of the multiplied-through residual at radius `r`.
    pub fn ode_residual_at(coefficients: &[BigRational], r: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in coefficients.iter().rev() {
            acc = acc * r + c;
        }
        acc
    }

    pub fn is_zero_polynomial(coefficients: &[BigRational]) -> bool {
        coefficients.iter().all(|c| c.is_zero())
    }

    /// `|x|` as a rational, used by callers that compare residual sizes.
    pub fn magnitude(x: &BigRational) -> BigRational {
        x.abs()
    }
}
