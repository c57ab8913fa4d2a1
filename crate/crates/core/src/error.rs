use thiserror::Error;

/// Errors raised by the solver and its numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside the range an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operand dimensions do not agree.
    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },

    /// A value that must be finite is NaN or infinite.
    #[error("non-finite entry at index {index}")]
    NonFiniteEntry { index: usize },

    /// One-sided Jacobi ran out of sweeps.
    #[error(
        "SVD did not converge after {sweeps} sweeps (largest off-diagonal cosine {residual:e})"
    )]
    SvdNoConvergence { sweeps: usize, residual: f64 },

    /// The solver produced a NaN or infinity.
    #[error("non-finite {what} at iteration {iteration}")]
    NonFinite {
        iteration: usize,
        what: &'static str,
    },

    /// An objective lacks the curvature an operation needs.
    #[error("degenerate objective: {0}")]
    DegenerateObjective(String),

    /// An input failed an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A rate fit had too few usable points.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// Rate constants combine into a contraction factor outside (0, 1).
    #[error("inconsistent constants: {0}")]
    InconsistentConstants(String),
}

impl Error {
    pub(crate) fn shape(expected: impl ToString, found: impl ToString) -> Self {
        Error::Shape {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    /// True for failures of the arithmetic itself rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SvdNoConvergence { .. }
                | Error::NonFinite { .. }
                | Error::DegenerateObjective(_)
                | Error::DegenerateFit(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
