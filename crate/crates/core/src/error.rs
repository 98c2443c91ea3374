use std::fmt;

use thiserror::Error;

/// Group axiom that a candidate Cayley table failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// An entry lies outside `0..k`.
    Closure,
    Identity,
    /// Some element has no inverse (or more than one).
    Inverse,
    Associativity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Closure => "closure",
            Axiom::Identity => "identity",
            Axiom::Inverse => "inverse",
            Axiom::Associativity => "associativity",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("not a group ({axiom} fails): {detail}")]
    NotAGroup {
        axiom: Axiom,
        /// Witness triple of element indices; unused slots repeat the last one.
        witness: (usize, usize, usize),
        detail: String,
    },

    #[error("bad reference: {0}")]
    BadReference(String),

    #[error("subgroup is not normal: {0}")]
    NotNormal(String),

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("word is not a certified rank-1 period: {0}")]
    NotCertified(String),

    #[error("criterion fails: {0}")]
    CriterionFails(String),

    #[error("side condition violated: {0}")]
    SideConditionViolated(String),

    #[error("strict mode violation: {0}")]
    StrictViolation(String),

    #[error("invalid factor family: {0}")]
    InvalidFamily(String),

    #[error("words belong to different factor families")]
    FamilyMismatch,

    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// An internal consistency check failed; always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
