use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Jacobi parameters: alpha = {alpha}, beta = {beta} (need alpha, beta >= -1/2)")]
    InvalidParams { alpha: f64, beta: f64 },

    #[error("theta = {theta} outside the open interval (0, pi)")]
    ThetaOutOfDomain { theta: f64 },

    #[error("quadrature order {order} below the mode-resolution floor {required} for n_max = {n_max}")]
    Resolution {
        order: usize,
        required: usize,
        n_max: usize,
    },

    #[error("quadrature order must be at least 2 (got {0})")]
    QuadratureOrder(usize),

    #[error("time parameter t = {t} not admissible: {reason}")]
    BadTime { t: f64, reason: &'static str },

    #[error("kernel series not converged within {max_modes} modes at t = {t}")]
    KernelTruncation { t: f64, max_modes: usize },

    #[error("fractional powers need alpha + beta != -1 (got alpha + beta = {sum})")]
    FractionalNotOk { sum: f64 },

    #[error("spectral shift a = {a} not admissible (requires a < {limit})")]
    ShiftInadmissible { a: f64, limit: f64 },

    #[error("exponent gamma = {gamma} not admissible: {reason}")]
    BadGamma { gamma: f64, reason: &'static str },

    #[error("order pair violated: need 0 < gamma < r, got gamma = {gamma}, r = {r}")]
    GammaOrder { gamma: f64, r: usize },

    #[error("Luxemburg bisection did not converge (last bracket [{lo}, {hi}])")]
    LuxemburgNoConvergence { lo: f64, hi: f64 },

    #[error("invalid exponent function: {0}")]
    InvalidExponent(String),

    #[error("dyadic cutoff j_max = {j_max} too small: largest active eigenvalue {lambda_max} needs 2^(j_max-1) > {required}")]
    JMaxTooSmall {
        j_max: usize,
        lambda_max: f64,
        required: f64,
    },

    #[error("integral tail bound {bound:e} exceeds the allowed {allowed:e}")]
    IntegralTail { bound: f64, allowed: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
