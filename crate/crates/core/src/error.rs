use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is singular: zero pivot in column {column}")]
    SingularMatrix { column: usize },

    #[error("coefficient column {column} has zero norm")]
    DegenerateColumn { column: usize },

    #[error("diagonal entry {index} has magnitude {value:e}, below the degeneracy floor {floor:e}")]
    SmallDiagonal { index: usize, value: f64, floor: f64 },

    #[error("coefficient blocks lack the structure this procedure relies on (defect {defect:e})")]
    StructureViolated { defect: f64 },

    #[error("shifted stiffness matrix is singular at the requested shift; perturb s0")]
    ShiftSingular,

    #[error("pencil s^2 M + s D + K is singular at s = {re} + {im}i")]
    PoleHit { re: f64, im: f64 },

    #[error("factorization is not running (status {0})")]
    NotRunning(String),

    #[error("step log required but retention was disabled")]
    MissingStepLog,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
