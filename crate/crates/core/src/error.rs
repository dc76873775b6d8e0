use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
///
/// Variants carry enough context (indices, sizes, parameter values) to be
/// reported without a backtrace.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite coefficient at index {index}")]
    NonFiniteCoefficient { index: i64 },

    #[error("non-finite sample at t = {t}")]
    NonFiniteSample { t: i64 },

    #[error("index {index} lies outside the sample window [{t_min}, {t_max}]")]
    OutsideWindow { index: i64, t_min: i64, t_max: i64 },

    #[error("empty sample window")]
    EmptyWindow,

    #[error("frequency {omega} is outside (-pi, pi]")]
    FrequencyOutOfRange { omega: f64 },

    #[error("quadrature size {n} is invalid: {reason}")]
    QuadratureSize { n: usize, reason: &'static str },

    #[error("spectrum sample at omega = {omega} is not finite")]
    NonFiniteSpectrum { omega: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("H_gamma is singular at z = {z_re} + {z_im}i")]
    Singularity { z_re: f64, z_im: f64 },

    #[error("overflow guard tripped: gamma^(1+r) = {exponent} exceeds {limit}")]
    OverflowGuard { exponent: f64, limit: f64 },

    #[error("causality residual {residual:e} exceeds tolerance {tol:e}")]
    NotCausal { residual: f64, tol: f64 },

    #[error("quadrature too coarse: doubling N changed samples by {change:e} (limit {limit:e})")]
    QuadratureTooCoarse { change: f64, limit: f64 },

    #[error("bank too small: {constraints} effective constraints for {unknowns} unknowns")]
    BankTooSmall { constraints: usize, unknowns: usize },

    #[error("linear solve failed: {0}")]
    Solve(String),

    #[error("csv error at line {line}: {message}")]
    Csv { line: u64, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Whether the failure stems from a numerical guard (as opposed to bad
    /// input or configuration).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singularity { .. }
                | Error::OverflowGuard { .. }
                | Error::NotCausal { .. }
                | Error::QuadratureTooCoarse { .. }
                | Error::Solve(_)
                | Error::NonFiniteSpectrum { .. }
        )
    }
}
