use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("tau = {tau} is outside the validity window (extinction time T = {extinction_time})")]
    Extinction { tau: f64, extinction_time: f64 },

    #[error("alpha = {alpha} is the critical exponent alpha_* for d = {d}; there is no spectral gap")]
    CriticalExponent { d: u32, alpha: f64 },

    #[error("mass defect has the same sign at both ends of [{lo}, {hi}] ({f_lo:e}, {f_hi:e})")]
    NotBracketed { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("{what} did not converge after {iterations} iterations (last estimate {last})")]
    NoConvergence { what: &'static str, iterations: usize, last: f64 },

    #[error("Newton iteration diverged at t = {t} with dt = {dt}; try a smaller time step")]
    NewtonDivergence { t: f64, dt: f64 },

    #[error("positivity lost at t = {t}, node {node} (r = {r}): w - 1 = {rel}")]
    PositivityLoss { t: f64, node: usize, r: f64, rel: f64 },

    #[error("initial data leaves the sandwich V_D0 <= v <= V_D1 at node {node} (r = {r})")]
    SandwichViolation { node: usize, r: f64 },

    #[error("degenerate fit window: {0}")]
    DegenerateWindow(String),

    #[error("grid is singular: {0}")]
    SingularGrid(String),

    #[error("Rayleigh quotient has a zero denominator")]
    ZeroDenominator,

    #[error("spectral data inconsistent: closed form {closed_form} vs spectral minimum {spectral}")]
    Inconsistent { closed_form: f64, spectral: f64 },

    #[error("dense eigensolver failed: {0}")]
    Dense(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
