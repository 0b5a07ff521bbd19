//! Ballot permutations avoiding sets of length-3 patterns: enumeration,
//! exact counting rules, constructive bijections and a cross-checking
//! harness.

pub mod bigjson;
pub mod bijections;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod formulas;
pub mod pattern;
pub mod perm;
pub mod verify;

pub use enumerate::{EnumerationRequest, Limits, Method, Provenance, SequenceRecord};
pub use error::{Error, Result};
pub use pattern::{Pattern, PatternSet};
pub use perm::{Permutation, Step, StepWord};
