use crate::geometry::Degeneracy;

/// Errors raised by the invariant library.
///
/// Residue and row indices are zero-based.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("residue {index} is degenerate: {reason}")]
    DegenerateResidue { index: usize, reason: Degeneracy },

    #[error("residue {index} has a non-finite coordinate")]
    NonFinite { index: usize },

    #[error("backbone has no residues")]
    EmptyBackbone,

    #[error("rotation is not proper orthogonal (deviation {deviation:e})")]
    InvalidRotation { deviation: f64 },

    #[error("invalid bond statistics: {0}")]
    InvalidStats(String),

    #[error("row counts differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {required} residues, got {actual}")]
    TooShort { required: usize, actual: usize },

    #[error("subchain of {len} residues at {start} is out of range for {total} residues")]
    IndexOutOfRange { start: usize, len: usize, total: usize },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("cannot place residue from invariant row {row}: {reason}")]
    DegenerateRow { row: usize, reason: Degeneracy },

    #[error("malformed invariant matrix: {0}")]
    MalformedMatrix(String),

    #[error("row scaling factor overflows at row {row}")]
    FactorOverflow { row: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("residue {index} has no {atom} atom")]
    IncompleteResidue { index: usize, atom: &'static str },

    #[error("missing mmCIF category `{0}`")]
    MissingCategory(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate value range for column {0}")]
    DegenerateRange(String),

    #[error("nothing to plot")]
    EmptyData,

    #[error("chain {entry_id}/{chain_id}")]
    InChain { entry_id: String, chain_id: String, source: Box<Error> },

    #[error("{}", path.display())]
    InFile { path: std::path::PathBuf, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
