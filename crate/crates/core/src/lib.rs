//! Unique expansions in non-integer bases: fundamental words, the block
//! substitution automaton, lexicographic subshifts and their entropy plateaus.
//!
//! Everything that makes a discrete claim about a base (a digit of its
//! quasi-greedy expansion, an ordering between two bases, membership of an
//! interval) is decided with exact rational arithmetic.

pub mod composition;
pub mod error;
pub mod expansions;
pub mod numeric;
pub mod plateaus;
pub mod subshift;
pub mod words;

pub use error::{Error, Result};
pub use words::{
    is_admissible_v, is_fundamental, is_quasi_greedy_admissible, lex_compare, Alphabet, Digit,
    EpSequence, FundamentalWord, LexSeq, Word,
};
pub use composition::{classify, compose, decompose, phi, phi_hat, Decomposition, WordClass};
pub use expansions::{alpha_digits, base_from_alpha, BaseEnclosure, SpecialBase};
pub use plateaus::{enumerate_fundamental, enumerate_plateaus, PlateauKind, PlateauRecord};
pub use subshift::{build_automaton, count_words, entropy, EntropyEnclosure, SubshiftAutomaton};
