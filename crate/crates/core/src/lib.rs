//! Return words and property R_m for infinite words.
//!
//! The crate generates prefixes of substitution fixed points, characteristic
//! Sturmian words and eventually periodic words, computes their factor
//! languages with extension data, and counts return words in two independent
//! ways. On top of that it checks whether every factor up to a length bound
//! has exactly `m` return words, and implements the beta-numeration side:
//! beta-substitutions, Parry admissibility and beta-integer gap coding.
//!
//! Every verdict is bounded: results carry the length bound and the prefix
//! certificates they were computed from.

pub mod beta;
pub mod cli;
pub mod error;
pub mod factors;
pub mod returns;
pub mod rm;
mod scan;
pub mod source;
pub mod substitution;
pub mod word;

pub use error::{Error, Result};
pub use factors::{build_factor_table, BilateralReport, FactorClass, FactorTable, GrowingTable};
pub use returns::{build_return_trie, occurrences, return_set, ReturnSet, ReturnTrie};
pub use source::{builtin, WordSource};
pub use substitution::{fixed_point_prefix, Substitution};
pub use word::{Alphabet, Letter, Word};
