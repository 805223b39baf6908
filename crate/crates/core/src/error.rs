use thiserror::Error;

use crate::words::Digit;

/// Errors raised by the library. Every variant is a domain error; there is no I/O here.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must have largest digit M >= 1")]
    InvalidAlphabet,
    #[error("digit {digit} is outside the alphabet {{0..{max}}}")]
    DigitOutOfRange { digit: Digit, max: Digit },
    #[error("words must be nonempty")]
    EmptyWord,
    #[error("operands use different alphabets (M={left} vs M={right})")]
    AlphabetMismatch { left: Digit, right: Digit },
    #[error("cannot increment: last digit already equals M")]
    DigitOverflow,
    #[error("cannot decrement: last digit is 0")]
    DigitUnderflow,
    #[error("sequence {0} is not the quasi-greedy expansion of 1 in any base")]
    NotQuasiGreedy(String),
    #[error("sequence {0} does not satisfy the two-sided shift condition")]
    NotAdmissible(String),
    #[error("word {0} is not fundamental")]
    NotFundamental(String),
    #[error("word {0} is not a block concatenation accepted by the substitution automaton")]
    NotInXa(String),
    #[error("block map undefined: word starts with the self-reflected block {0}")]
    AmbiguousStart(String),
    #[error("binary word {0} must start with 1")]
    BadStart(String),
    #[error("word {0} is not a factor of the subshift")]
    NotInLanguage(String),
    #[error("no connecting word exists in this subshift")]
    NoConnection,
    #[error("precision exhausted: only {certified} digits could be certified")]
    PrecisionExhausted { certified: usize },
    #[error("operation needs a base given by an eventually periodic expansion of 1")]
    NeedsDefiningSequence,
    #[error("base is outside (1, M+1]")]
    BaseOutOfRange,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
