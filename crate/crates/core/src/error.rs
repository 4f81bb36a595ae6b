use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("symbol {symbol} out of range for alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },
    #[error("unknown symbol name `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` lacks face labels")]
    MissingFaceLabels(String),
    #[error("specification is still in Wang mode; compile it first")]
    NotCompiled,
    #[error("specification is not in Wang mode")]
    NotWang,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("alphabet too large: {0} symbols (limit 128)")]
    AlphabetTooLarge(usize),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("search budget exhausted (partial lower bound {lower_bound})")]
    BudgetExhausted { lower_bound: String },
    #[error("transfer state space too large: {states} states (limit {limit})")]
    StateSpaceTooLarge { states: usize, limit: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("support too small for the code neighbourhood")]
    SupportTooSmall,
    #[error("block code is not defined on neighbourhood pattern {0}")]
    CodeNotTotal(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("language has more than {cap} patterns")]
    CapExceeded { cap: usize },
    #[error("pattern is not a vertex of the graph")]
    VertexNotFound,
    #[error("obstruction kind `{0}` is not registered for this shift")]
    UnknownObstructionKind(String),
    #[error("wave extraction failed: {0}")]
    ExtractionFailure(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
