//! Exponents, thresholds and regime classification for `m < 1`.

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Relative tolerance used to recognise `m = m_*` and `m = m_c` when `m` is
/// given in floating point.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `m < m_c`, excluding `m = m_*`: finite extinction time, infinite-mass profiles.
    VeryFast,
    /// `m = m_*` (only for `d >= 3`): the spectral gap closes.
    Critical,
    /// `m = m_c`: the exponential rescaling.
    Threshold,
    /// `m_c < m < 1`.
    Good,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentSet {
    pub d: u32,
    pub m: f64,
    pub alpha: f64,
    pub m_c: f64,
    /// `-inf` for `d <= 2`.
    pub m_star: f64,
    pub m_1: f64,
    pub m_2: f64,
    /// `0` for `d <= 2`.
    pub alpha_star: f64,
    pub alpha_1: f64,
    pub alpha_2: f64,
    pub regime: Regime,
    /// `m = 0`: logarithmic entropy and pressure.
    pub log_limit: bool,
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

impl ExponentSet {
    pub fn new(d: u32, m: f64) -> Result<Self> {
        Self::with_tolerance(d, m, DEFAULT_TOLERANCE)
    }

    /// Threshold equalities are decided with relative tolerance `tol`.
    pub fn with_tolerance(d: u32, m: f64, tol: f64) -> Result<Self> {
        validate(d, m)?;
        if !(tol >= 0.0) {
            return Err(Error::invalid("tolerance", "must be nonnegative"));
        }
        let mut set = Self::thresholds(d, m);
        let critical = d >= 3 && close(m, set.m_star, tol);
        let threshold = close(m, set.m_c, tol);
        set.regime = classify(critical, threshold, m < set.m_c);
        set.log_limit = m == 0.0;
        Ok(set)
    }

    /// Construction from `alpha`; the given `alpha` is kept bit for bit.
    pub fn from_alpha(d: u32, alpha: f64, tol: f64) -> Result<Self> {
        let mut set = Self::with_tolerance(d, alpha_to_m(alpha)?, tol)?;
        set.alpha = alpha;
        Ok(set)
    }

    /// Exact construction: threshold equalities are decided in rational
    /// arithmetic.
    pub fn from_ratio(d: u32, m: Ratio<i64>) -> Result<Self> {
        let mf = *m.numer() as f64 / *m.denom() as f64;
        validate(d, mf)?;
        if m >= Ratio::from_integer(1) {
            return Err(Error::invalid("m", "must be < 1"));
        }
        let di = d as i64;
        let m_c = Ratio::new(di - 2, di);
        let critical = d >= 3 && m == Ratio::new(di - 4, di - 2);
        let mut set = Self::thresholds(d, mf);
        set.regime = classify(critical, m == m_c, m < m_c);
        set.log_limit = m == Ratio::from_integer(0);
        Ok(set)
    }

    fn thresholds(d: u32, m: f64) -> Self {
        let df = d as f64;
        let (m_star, alpha_star) = if d >= 3 {
            ((df - 4.0) / (df - 2.0), -(df - 2.0) / 2.0)
        } else {
            (f64::NEG_INFINITY, 0.0)
        };
        ExponentSet {
            d,
            m,
            alpha: 1.0 / (m - 1.0),
            m_c: (df - 2.0) / df,
            m_star,
            m_1: (df - 1.0) / df,
            m_2: df / (df + 2.0),
            alpha_star,
            alpha_1: -df,
            alpha_2: -(df + 2.0) / 2.0,
            regime: Regime::Good,
            log_limit: false,
        }
    }

    /// `alpha_c = -d/2`, the exponent of `m_c`.
    pub fn alpha_c(&self) -> f64 {
        -(self.d as f64) / 2.0
    }

    /// Whether `m < m_c` (the critical case included).
    pub fn is_very_fast(&self) -> bool {
        matches!(self.regime, Regime::VeryFast | Regime::Critical)
    }

    /// `mu_{alpha-1}(R^d) < inf`, equivalently `alpha < alpha_*`; exactly
    /// then the constant is a competitor and the mean-zero constraint is
    /// imposed.
    pub fn constraint_needed(&self) -> bool {
        self.alpha < self.alpha_star
    }
}

fn classify(critical: bool, threshold: bool, below_mc: bool) -> Regime {
    if critical {
        Regime::Critical
    } else if threshold {
        Regime::Threshold
    } else if below_mc {
        Regime::VeryFast
    } else {
        Regime::Good
    }
}

fn validate(d: u32, m: f64) -> Result<()> {
    if d == 0 {
        return Err(Error::invalid("d", "dimension must be at least 1"));
    }
    if !m.is_finite() || m >= 1.0 {
        return Err(Error::invalid("m", "must be finite and < 1"));
    }
    Ok(())
}

/// `m = 1 + 1/alpha`.
pub fn alpha_to_m(alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha >= 0.0 {
        return Err(Error::invalid("alpha", "must be finite and negative"));
    }
    Ok(1.0 + 1.0 / alpha)
}
