use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty point set")]
    EmptySet,

    #[error("non-finite coordinate")]
    NonFinite,

    #[error("atoms {0} and {1} coincide")]
    DuplicateAtom(usize, usize),

    #[error("unknown set kind `{0}`")]
    UnknownKind(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid depth {0}")]
    InvalidDepth(usize),

    #[error("depth {depth} exceeds the set resolution: cell at level {level} still holds {atoms} atoms below floating-point separation")]
    ResolutionMismatch {
        depth: usize,
        level: usize,
        atoms: usize,
    },

    #[error("evaluation point coincides with atom {0}; the kernel is singular there")]
    Singular(usize),

    #[error("derivative {0} not supplied")]
    MissingDerivative(String),

    #[error("derivative order {requested} exceeds the supported maximum {max}")]
    OrderExceeded { requested: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient scale range: {0}")]
    InsufficientScales(String),

    #[error("set is not contained in B(0, {0})")]
    OutsideWindow(f64),

    #[error("h_q has a zero near {re} + {im}i (|z| = {modulus})")]
    ZeroOfKernelMass { re: f64, im: f64, modulus: f64 },

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
