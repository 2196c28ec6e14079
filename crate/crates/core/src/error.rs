use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the numeric core.
///
/// Magnitudes are carried as `f64` regardless of the scalar type used for the
/// computation that failed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("matrix of dimension {dim} needs {expected} entries, got {found}")]
    ShapeMismatch { dim: usize, expected: usize, found: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error(
        "matrix is not Hermitian: entry ({row}, {col}) differs from conj of ({col}, {row}) by {deviation:e} (tolerance {tolerance:e})"
    )]
    NotHermitian { row: usize, col: usize, deviation: f64, tolerance: f64 },

    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("cannot normalize the zero vector")]
    ZeroState,

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("imaginary residue {residue:e} exceeds tolerance {tolerance:e}")]
    ImaginaryResidue { residue: f64, tolerance: f64 },

    #[error("variance {variance:e} is negative beyond rounding")]
    NegativeVariance { variance: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("unknown observable `{0}`")]
    UnknownObservable(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("MT undefined for energy eigenstates (energy spread {delta_h:e})")]
    EnergyEigenstate { delta_h: f64 },

    #[error("clock observable static: state has no energy coherence")]
    StaticClock,

    #[error("no clock signal: {0}")]
    NoClockSignal(String),

    #[error(
        "orthogonalization search inconclusive within horizon {horizon}: smallest overlap seen {min_observed_overlap:e}"
    )]
    Inconclusive { horizon: f64, min_observed_overlap: f64 },
}
