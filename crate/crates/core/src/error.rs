use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has an empty dimension")]
    Empty,

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NonHermitian(f64),

    #[error("operator is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace is {0}, not 1")]
    TraceNotOne(f64),

    #[error("eigendecomposition did not converge")]
    NumericalFailure,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("prior {index} is not positive ({value})")]
    PriorNotPositive { index: usize, value: f64 },

    #[error("priors sum to {0}, not 1")]
    PriorsNotNormalized(f64),

    #[error("state {index} is not a density matrix: {reason}")]
    NotDensityMatrix { index: usize, reason: &'static str },

    #[error("an ensemble needs at least two states, got {0}")]
    TooFewStates(usize),

    #[error("index {index} out of range for {len} entries")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("pairwise operation needs distinct indices, got {0} twice")]
    SameIndex(usize),

    #[error("operation requires exactly two states, got {0}")]
    WrongArity(usize),

    #[error("POVM has {povm} outcomes but the ensemble has {ensemble} states")]
    ArityMismatch { povm: usize, ensemble: usize },

    #[error(
        "POVM effect {index} is not positive semidefinite (min eigenvalue {min_eigenvalue:e})"
    )]
    EffectNotPsd { index: usize, min_eigenvalue: f64 },

    #[error("POVM effects do not sum to the identity (max deviation {0:e})")]
    NotComplete(f64),

    #[error("POVM needs at least one effect")]
    EmptyPovm,

    #[error("states do not share a common eigenbasis")]
    NotCommuting,

    #[error("random POVM normalizer stayed singular after retries")]
    SingularNormalizer,
}

pub type Result<T> = core::result::Result<T, Error>;
