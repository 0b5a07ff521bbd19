use thiserror::Error;

use crate::pattern::PatternSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("{method} enumeration refuses n = {n}: cap is {cap}")]
    CapExceeded {
        method: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("step word {word:?} is not the descent word of any member of B({class})")]
    UnrealizableWord { class: PatternSet, word: String },

    #[error("class {class} is not supported by {operation}")]
    UnsupportedClass {
        class: PatternSet,
        operation: &'static str,
    },

    #[error("{perm} is not in {class}: {reason}")]
    NotMember {
        perm: String,
        class: String,
        reason: String,
    },

    #[error("no recurrence registered for class {0}")]
    NoRecurrence(PatternSet),

    #[error("recurrence for {class} needs at least {needed} terms of history, got {got}")]
    InsufficientHistory {
        class: PatternSet,
        needed: usize,
        got: usize,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
