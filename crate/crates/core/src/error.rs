use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("bilinear form is not skew-symmetric")]
    NotSkew,

    #[error("antisymmetry violated: [e{i}, e{j}] != -[e{j}, e{i}]")]
    Antisymmetry { i: usize, j: usize },

    #[error("Jacobi identity fails at ({i}, {j}, {k}); residual [{residual}]")]
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
        residual: String,
    },

    #[error("flag step {j} is not an ideal: [{witness}, e{j}] leaves g_{j}")]
    NotAnIdeal { j: usize, witness: String },

    #[error("flag basis is singular")]
    SingularBasis,

    #[error("no Jordan-Hölder flag found: {0}; provide a flag explicitly")]
    FlagNotFound(String),

    #[error("not a subalgebra: [{x}, {y}] is not in the subspace")]
    NotASubalgebra { x: String, y: String },

    #[error("vector is not in the subspace")]
    NotInSubspace,

    #[error("algebra is not nilpotent: {0}")]
    NotNilpotent(String),

    #[error("zeroing step for coordinate {index} has no solution (polynomial {polynomial})")]
    ZeroingStepUnsolvable { index: usize, polynomial: String },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for internal consistency failures, as opposed to bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}
