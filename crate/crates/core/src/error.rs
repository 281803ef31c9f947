use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operator is not self-adjoint (residual {residual:e})")]
    NotSelfAdjoint { residual: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not a partial isometry (V*V fails to be a projection by {residual:e})")]
    NotPartialIsometry { residual: f64 },

    #[error("partial isometry is not nilpotent (|V^2| = {residual:e})")]
    NotNilpotent { residual: f64 },

    #[error("partial isometry is zero")]
    ZeroIsometry,

    #[error("operator is not a contraction (norm {norm})")]
    NotContraction { norm: f64 },

    #[error("left and right observables do not commute (residual {residual:e})")]
    NonCommuting { residual: f64 },

    #[error("ranges of P and Q intersect trivially; the Schlieder property fails for this pair")]
    EmptyIntersection,

    #[error("observable is not supported inside its projection (residual {residual:e})")]
    SupportMismatch { residual: f64 },

    #[error("shift family needs at least 5 levels, got {levels}")]
    TooSmall { levels: usize },

    #[error("level {n} is out of range for a family with {levels} levels")]
    LevelOutOfRange { n: usize, levels: usize },

    #[error("(I-E_n)(I-F_n) annihilates x at level {n}")]
    ProjectionAnnihilatesX { n: usize },

    #[error("invalid convex weights: {0}")]
    InvalidWeights(String),

    #[error("invalid factor state at term {index}: {reason}")]
    InvalidFactor { index: usize, reason: String },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("expectation of A*A vanishes; use the conditioning fallback instead")]
    ZeroExpectation,

    #[error("parameter {name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("vector is not cyclic for the algebra")]
    NotCyclic,

    #[error("steering budget exhausted (best beta {best})")]
    BudgetExhausted { best: f64 },

    #[error("pair is not recognized as a tensor split M_d1 (x) I, I (x) M_d2")]
    NotTensorSplit,

    #[error("expected a two-qubit state, got dims {0}x{1}")]
    WrongDims(usize, usize),

    #[error("operator does not belong to the algebra (residual {residual:e})")]
    NotInAlgebra { residual: f64 },

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("identity check `{what}` failed with residual {residual:e}")]
    IdentityFailed { what: &'static str, residual: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code: 2 for configuration or input problems, 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Json(_) | Error::Io(_) => 2,
            _ => 1,
        }
    }
}
