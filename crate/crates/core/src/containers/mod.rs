//! Deterministic static containers keyed by machine words.

mod dict;
mod pred;

pub use dict::DetDictionary;
pub use pred::DetPredecessor;
