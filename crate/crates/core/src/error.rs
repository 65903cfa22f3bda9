use thiserror::Error;

/// Every failure the toolkit can report. The `Display` form always starts
/// with the variant name so command-line users see a stable identifier.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("AlphaOutOfRange: alpha = {0} must lie in the open interval (1/2, 1)")]
    AlphaOutOfRange(f64),
    #[error("GammaOutOfRange: gamma = {0} must exceed 1")]
    GammaOutOfRange(f64),
    #[error("KOutOfRange: k = {0} must be at least 1")]
    KOutOfRange(f64),
    #[error("NegativeSensitivity: {name} = {value} must be nonnegative")]
    NegativeSensitivity { name: &'static str, value: f64 },
    #[error("NonPositiveRate: {name} = {value} must be strictly positive")]
    NonPositiveRate { name: &'static str, value: f64 },
    #[error("UnsupportedDimension: dim = {0}, only 1 and 2 are supported")]
    UnsupportedDimension(usize),
    #[error("NonFiniteParameter: {0} is not finite")]
    NonFiniteParameter(&'static str),

    #[error("NonPositiveInfimum: coefficient '{name}' has infimum {inf} <= 0")]
    NonPositiveInfimum { name: &'static str, inf: f64 },
    #[error("IncommensurateWavevector: coefficient '{name}' wavevector {wave} is not a multiple of 2*pi/period")]
    IncommensurateWavevector { name: &'static str, wave: f64 },
    #[error("InvalidGrid: {0}")]
    InvalidGrid(String),
    #[error("GridMismatch: fields live on different grids")]
    GridMismatch,
    #[error("NonFiniteField: field contains a non-finite value at index {0}")]
    NonFiniteField(usize),

    #[error("NegativeTime: t = {0} must be nonnegative")]
    NegativeTime(f64),
    #[error("NonPositiveLambda: lambda = {0} must be strictly positive")]
    NonPositiveLambda(f64),
    #[error("OrderOutOfRange: fractional order {0} outside the admissible range")]
    OrderOutOfRange(f64),
    #[error("TailTooFat: uncorrected kernel tail {tail:.3e} exceeds {limit:.1e} of the peak")]
    TailTooFat { tail: f64, limit: f64 },
    #[error("KernelUnderResolved: semigroup multiplier at the largest wavenumber is {0:.3e}")]
    KernelUnderResolved(f64),
    #[error("Unsupported: {0}")]
    Unsupported(&'static str),

    #[error("NegativeInput: min u = {min:.3e} below -{tol:.1e}")]
    NegativeInput { min: f64, tol: f64 },

    #[error("NonFiniteTendency: tendency is not finite at index {0}")]
    NonFiniteTendency(usize),
    #[error("PositivityBreach: at t = {t}, min(u + dt F) = {min:.3e} below -{limit:.3e}")]
    PositivityBreach { t: f64, min: f64, limit: f64 },
    #[error("NonFinite: solution became non-finite at t = {0}")]
    NonFinite(f64),
    #[error("BlowUpSuspected: sup u = {sup:.4e} exceeds {threshold:.4e} at t = {t}")]
    BlowUpSuspected { t: f64, sup: f64, threshold: f64 },
    #[error("ClampMassExceeded: total clamped mass {total:.3e} exceeds {limit:.3e}")]
    ClampMassExceeded { total: f64, limit: f64 },
    #[error("InvalidStepper: {0}")]
    InvalidStepper(String),

    #[error("CaseCHypothesisViolated: sup u0 = {u0_sup} exceeds C_* = {c_star}")]
    CaseCHypothesisViolated { u0_sup: f64, c_star: f64 },
    #[error("NoCase: no boundedness case applies to these parameters")]
    NoCase,
    #[error("BandHypothesesUnmet: the asymptotic band requires gamma = k+1 with a positive damping residual, or gamma != k+1 with chi2*mu2 = chi1*mu1 and lambda1 = lambda2")]
    BandHypothesesUnmet,

    #[error("WindowTooShort: trailing window holds {got} samples, need at least {need}")]
    WindowTooShort { got: usize, need: usize },
    #[error("InvalidWindow: window fraction {0} must lie in (0, 1)")]
    InvalidWindow(f64),
    #[error("RadiusTooLarge: r = {r} exceeds half the domain extent {limit}")]
    RadiusTooLarge { r: f64, limit: f64 },

    #[error("QuadratureUnstable: halving the step changed the quotient by {0:.3e} (relative)")]
    QuadratureUnstable(f64),
    #[error("InvalidTestFunction: {0}")]
    InvalidTestFunction(String),

    #[error("Config: {0}")]
    Config(String),
    #[error("Io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
