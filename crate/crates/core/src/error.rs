use alloc::string::String;

use crate::atom::Atom;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("leaf label {0} occurs twice")]
    DuplicateLabel(Atom),
    #[error("composition slot {0} is not a leaf of the outer element")]
    MissingSlot(Atom),
    #[error("label {0} occurs on both sides of a composition")]
    LabelCollision(Atom),
    #[error("label sets differ: {0}")]
    LabelMismatch(String),
    #[error("relabeling is not a bijection on the label set")]
    NotBijective,
    #[error("unknown selector `{0}`")]
    UnknownSelector(String),
    #[error("coincident coordinates at labels {0} and {1}")]
    CoincidentPoint(Atom, Atom),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource bound exceeded: {what} = {requested} > {limit} ({progress})")]
    ResourceBound {
        what: &'static str,
        requested: usize,
        limit: usize,
        progress: String,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

/// Explicit bounds; exceeding one is an error rather than a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_arity: usize,
    pub max_rows: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_arity: 5,
            max_rows: 2_000_000,
        }
    }
}

impl Limits {
    pub fn check_arity(&self, n: usize, progress: impl Into<String>) -> Result<()> {
        if n > self.max_arity {
            return Err(Error::ResourceBound {
                what: "arity",
                requested: n,
                limit: self.max_arity,
                progress: progress.into(),
            });
        }
        Ok(())
    }
}
