use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows} rows, row {row} has {cols} columns")]
    NotSquare { rows: usize, row: usize, cols: usize },

    #[error("non-finite value in {what} at index {index}")]
    NonFinite { what: &'static str, index: usize },

    #[error("{what} must be symmetric with zero diagonal (violated at ({i}, {j}))")]
    NotCanonical { what: &'static str, i: usize, j: usize },

    #[error("invalid {what}: entry {index} is {value}")]
    InvalidConfig { what: &'static str, index: usize, value: i64 },

    #[error("particle {index} has zero momentum")]
    ZeroMomentum { index: usize },

    #[error("need at least {needed} particles, event has {found}")]
    TooFewParticles { needed: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite solver state at step {step} (dt = {dt}, c0 = {c0}); reduce dt")]
    Diverged { step: usize, dt: f64, c0: f64 },

    #[error("constituent universes differ: {0}")]
    UniverseMismatch(String),

    #[error("expected {expected} {what}, found {found}")]
    Multiplicity { what: &'static str, expected: usize, found: usize },

    #[error("solution unreachable: success probability is zero")]
    Unreachable,

    #[error("recording grids differ between shots {first} and {other}")]
    InconsistentGrid { first: usize, other: usize },

    #[error("infeasible kinematics: {0}")]
    Kinematics(String),

    #[error("{n} spins exceeds the statevector limit of {max}")]
    TooManySpins { n: usize, max: usize },

    #[error("norm drifted to {norm} at step {step}; integration unstable")]
    NormDrift { step: usize, norm: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
