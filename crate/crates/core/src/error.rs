use thiserror::Error;

/// Errors raised by the numerical and algebraic layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A value that should have come out integral (or a spectrum that should
    /// have split cleanly) did not; the inputs are too close to a threshold.
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    #[error("projections are not Murray-von Neumann equivalent: classes {left} and {right} differ")]
    NoEquivalence { left: String, right: String },

    /// One of the four representation axioms of a concrete bimodule failed.
    #[error("bimodule axiom ({axiom}) violated: {detail} (residual {residual:.3e})")]
    AxiomViolation {
        axiom: char,
        detail: String,
        residual: f64,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn degenerate(msg: impl Into<String>) -> Error {
    Error::NumericalDegeneracy(msg.into())
}
