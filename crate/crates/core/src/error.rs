use thiserror::Error;

/// Errors raised by parsing, oracle and renormalization routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown species `{name}`")]
    UnknownSpecies { line: usize, name: String },
    #[error("line {line}: duplicate species `{name}`")]
    DuplicateSpecies { line: usize, name: String },
    #[error("line {line}: non-positive rate")]
    NonPositiveRate { line: usize },
    #[error("line {line}: reactions with more than two products are not supported")]
    TooManyProducts { line: usize },
    #[error("singular weight at vertex `{vertex}`: |A_vv| + alpha <= 0")]
    SingularWeight { vertex: String },
    #[error("power iteration did not converge after {iterations} squarings (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("reducible input: {0}")]
    Reducible(String),
    #[error("alpha = {alpha:.6e} is at or below the Lyapunov threshold")]
    BelowThreshold { alpha: f64 },
    #[error("matrix is not row-stochastic: {0}")]
    NotStochastic(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("missing edge {from} -> {to}")]
    MissingEdge { from: String, to: String },
    #[error("dominant cycle not collapsed: negative depth on edge {from} -> {to}")]
    DominantCycle { from: String, to: String },
}

pub type Result<T> = std::result::Result<T, Error>;
