use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad category of an [`Error`], used for diagnostics and exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Infeasible,
    EmptySpace,
    Capacity,
}

impl ErrorKind {
    pub fn tag(self) -> &'static str {
        match self {
            ErrorKind::Usage => "usage",
            ErrorKind::Infeasible => "infeasible",
            ErrorKind::EmptySpace => "empty-space",
            ErrorKind::Capacity => "capacity",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage => 1,
            ErrorKind::Infeasible | ErrorKind::EmptySpace => 2,
            ErrorKind::Capacity => 3,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid identifier {0:?}: must start with a letter or underscore, followed by letters, digits or underscores")]
    InvalidIdentifier(String),

    #[error("connective {0:?} has arity 0; declare nullary symbols as extra atoms instead")]
    NullaryConnective(String),

    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),

    #[error("symbol {0:?} is declared both as an atom and as a connective")]
    SymbolClash(String),

    #[error("atom set is empty")]
    NoAtoms,

    #[error("malformed signature entry {0:?}: expected `name:arity`")]
    SignatureSyntax(String),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("arity mismatch at byte {pos}: `{name}` takes {expected} argument(s), got {found}")]
    ArityMismatch {
        pos: usize,
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("undeclared symbol `{name}` at byte {pos}")]
    Undeclared { pos: usize, name: String },

    #[error(
        "no formula of depth {depth} over {atoms} atom(s) exists for this signature ({space})"
    )]
    EmptySpace {
        space: &'static str,
        depth: u32,
        atoms: usize,
    },

    #[error("{atoms} atoms cannot all occur in a formula of depth {depth}: at most k^n = {bound} distinct atoms fit")]
    Infeasible {
        atoms: usize,
        depth: u32,
        bound: BigUint,
    },

    #[error("{what} exceeds the capacity limit of {cap}")]
    Capacity { what: String, cap: u64 },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::EmptySpace { .. } => ErrorKind::EmptySpace,
            Error::Infeasible { .. } => ErrorKind::Infeasible,
            Error::Capacity { .. } => ErrorKind::Capacity,
            _ => ErrorKind::Usage,
        }
    }
}
