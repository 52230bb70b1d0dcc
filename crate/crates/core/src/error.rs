use thiserror::Error;

/// Errors raised by the bracket kernel, the builders and the analyzers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate deformation parameter: {0}")]
    DegenerateParameter(String),

    #[error("ill-conditioned evaluation: {0}")]
    IllConditioned(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state at depth {depth} is unreachable: lowering coefficient vanishes at depth {vanishing_at}")]
    ZeroNorm { depth: usize, vanishing_at: usize },

    #[error("not applicable: {0}")]
    NotApplicable(&'static str),

    #[error("no convention reproduces the defining relations (best residual {best_residual:e})")]
    Unresolved { best_residual: f64 },

    #[error("f({target_n}) does not change sign on [{lo}, {hi}]")]
    NoSignChange { target_n: usize, lo: f64, hi: f64 },

    #[error("root search did not converge in {iterations} iterations (|f| = {residual:e})")]
    MaxIterations { iterations: usize, residual: f64 },

    #[error("depth {depth} is not a root: lowering radicand has magnitude {radicand:e}")]
    NotARoot { depth: usize, radicand: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
