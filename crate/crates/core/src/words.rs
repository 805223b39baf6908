//! Digits, finite words and eventually periodic sequences over `{0, 1, ..., M}`.
//!
//! Words compare lexicographically after padding with `0^∞`, so `10 ≺ 110` and
//! `10` and `100` compare equal even though they are different words. For that
//! reason [`Word`] does not implement `Ord`; use [`lex_compare`] instead.
//!
//! [`EpSequence`] values are always kept in canonical form (primitive period,
//! shortest preperiod), which makes structural equality coincide with equality
//! of the infinite sequences.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Digit = u16;

/// The alphabet `{0, 1, ..., M}`, identified by its largest digit `M >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(Digit);

impl Alphabet {
    pub fn new(max_digit: Digit) -> Result<Self> {
        if max_digit == 0 {
            return Err(Error::InvalidAlphabet);
        }
        Ok(Alphabet(max_digit))
    }

    /// The binary alphabet `{0, 1}`.
    pub const BINARY: Alphabet = Alphabet(1);

    #[inline]
    pub fn max_digit(self) -> Digit {
        self.0
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0 as usize + 1
    }

    #[inline]
    pub fn reflect_digit(self, d: Digit) -> Digit {
        self.0 - d
    }

    pub fn is_even(self) -> bool {
        self.0 % 2 == 0
    }

    fn check(self, digits: &[Digit]) -> Result<()> {
        match digits.iter().find(|&&d| d > self.0) {
            Some(&d) => Err(Error::DigitOutOfRange { digit: d, max: self.0 }),
            None => Ok(()),
        }
    }

    fn same_as(self, other: Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch { left: self.0, right: other.0 })
        }
    }
}

/// A nonempty finite word over an alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    digits: Vec<Digit>,
    alphabet: Alphabet,
}

impl Word {
    pub fn new(alphabet: Alphabet, digits: Vec<Digit>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::EmptyWord);
        }
        alphabet.check(&digits)?;
        Ok(Word { digits, alphabet })
    }

    /// Parses `"110"` (any alphabet with M <= 9) or `"[10,3,0]"`.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        Word::new(alphabet, parse_digits(text)?)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<Digit> {
        self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> Digit {
        self.digits[0]
    }

    pub fn last(&self) -> Digit {
        *self.digits.last().expect("words are nonempty")
    }

    /// Digitwise complement `d ↦ M − d`.
    pub fn reflect(&self) -> Word {
        Word {
            digits: self.digits.iter().map(|&d| self.alphabet.reflect_digit(d)).collect(),
            alphabet: self.alphabet,
        }
    }

    pub fn increment_last(&self) -> Result<Word> {
        if self.last() >= self.alphabet.max_digit() {
            return Err(Error::DigitOverflow);
        }
        let mut digits = self.digits.clone();
        *digits.last_mut().unwrap() += 1;
        Ok(Word { digits, alphabet: self.alphabet })
    }

    pub fn decrement_last(&self) -> Result<Word> {
        if self.last() == 0 {
            return Err(Error::DigitUnderflow);
        }
        let mut digits = self.digits.clone();
        *digits.last_mut().unwrap() -= 1;
        Ok(Word { digits, alphabet: self.alphabet })
    }

    /// The first `n` digits, `1 <= n <= len`.
    pub fn prefix(&self, n: usize) -> Word {
        assert!(n >= 1 && n <= self.len(), "prefix length out of range");
        Word { digits: self.digits[..n].to_vec(), alphabet: self.alphabet }
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        self.alphabet.same_as(other.alphabet)?;
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Ok(Word { digits, alphabet: self.alphabet })
    }

    pub fn repeat(&self, times: usize) -> Word {
        assert!(times >= 1);
        Word { digits: self.digits.repeat(times), alphabet: self.alphabet }
    }

    /// The periodic sequence `w^∞`.
    pub fn periodic(&self) -> EpSequence {
        EpSequence::from_parts(self.alphabet, Vec::new(), self.digits.clone())
    }

    /// The sequence `w 0^∞`, which is how words enter lexicographic comparisons.
    pub fn zero_padded(&self) -> EpSequence {
        EpSequence::from_parts(self.alphabet, self.digits.clone(), vec![0])
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_digits(f, self.alphabet, &self.digits)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn write_digits(f: &mut fmt::Formatter<'_>, alphabet: Alphabet, digits: &[Digit]) -> fmt::Result {
    if alphabet.max_digit() <= 9 {
        for d in digits {
            write!(f, "{d}")?;
        }
        Ok(())
    } else {
        if digits.is_empty() {
            return Ok(());
        }
        write!(f, "[")?;
        for (i, d) in digits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

fn parse_digits(text: &str) -> Result<Vec<Digit>> {
    let text = text.trim();
    if let Some(inner) = text.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse(format!("unterminated digit list {text:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Vec::new());
        }
        inner
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<Digit>()
                    .map_err(|_| Error::Parse(format!("bad digit {s:?} in {text:?}")))
            })
            .collect()
    } else {
        text.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as Digit)
                    .ok_or_else(|| Error::Parse(format!("bad digit {c:?} in {text:?}")))
            })
            .collect()
    }
}

/// An eventually periodic sequence `pre (period)^∞`, in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EpSequence {
    preperiod: Vec<Digit>,
    period: Vec<Digit>,
    alphabet: Alphabet,
}

impl EpSequence {
    pub fn new(alphabet: Alphabet, preperiod: Vec<Digit>, period: Vec<Digit>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyWord);
        }
        alphabet.check(&preperiod)?;
        alphabet.check(&period)?;
        Ok(Self::from_parts(alphabet, preperiod, period))
    }

    /// `pre · period^∞` from two words (the preperiod may be absent).
    pub fn from_words(preperiod: Option<&Word>, period: &Word) -> Result<Self> {
        let pre = match preperiod {
            Some(w) => {
                w.alphabet.same_as(period.alphabet)?;
                w.digits.clone()
            }
            None => Vec::new(),
        };
        Ok(Self::from_parts(period.alphabet, pre, period.digits.clone()))
    }

    /// Parses `"11(01)"`, `"(10)"`, or `"[10,2]([0,1])"` for large alphabets.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let text = text.trim();
        let open = text
            .find('(')
            .ok_or_else(|| Error::Parse(format!("sequence literal {text:?} lacks '(period)'")))?;
        let body = text[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("sequence literal {text:?} must end with ')'")))?;
        let pre = parse_digits(&text[..open])?;
        let period = parse_digits(body)?;
        EpSequence::new(alphabet, pre, period)
    }

    pub(crate) fn from_parts(alphabet: Alphabet, mut pre: Vec<Digit>, period: Vec<Digit>) -> Self {
        debug_assert!(!period.is_empty());
        let mut period = primitive_root(&period).to_vec();
        while let (Some(&p), Some(&q)) = (pre.last(), period.last()) {
            if p != q {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        EpSequence { preperiod: pre, period, alphabet }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn preperiod(&self) -> &[Digit] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Digit] {
        &self.period
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    /// True iff the sequence ends in `0^∞`.
    pub fn ends_in_zeros(&self) -> bool {
        self.period == [0]
    }

    /// Digit at 0-based position `i`.
    #[inline]
    pub fn digit(&self, i: usize) -> Digit {
        let p = self.preperiod.len();
        if i < p {
            self.preperiod[i]
        } else {
            self.period[(i - p) % self.period.len()]
        }
    }

    /// The first `n >= 1` digits as a word.
    pub fn prefix(&self, n: usize) -> Word {
        assert!(n >= 1, "prefix length must be positive");
        Word { digits: (0..n).map(|i| self.digit(i)).collect(), alphabet: self.alphabet }
    }

    /// `σ^n` applied to the sequence.
    pub fn shift(&self, n: usize) -> EpSequence {
        let p = self.preperiod.len();
        if n < p {
            Self::from_parts(self.alphabet, self.preperiod[n..].to_vec(), self.period.clone())
        } else {
            let mut period = self.period.clone();
            period.rotate_left((n - p) % self.period.len());
            EpSequence { preperiod: Vec::new(), period, alphabet: self.alphabet }
        }
    }

    pub fn reflect(&self) -> EpSequence {
        let r = |v: &[Digit]| v.iter().map(|&d| self.alphabet.reflect_digit(d)).collect::<Vec<_>>();
        EpSequence { preperiod: r(&self.preperiod), period: r(&self.period), alphabet: self.alphabet }
    }

    /// Number of distinct shifts `σ^0, ..., σ^{p+m-1}`; `σ^{p+m} = σ^p`.
    pub fn distinct_shift_count(&self) -> usize {
        self.preperiod.len() + self.period.len()
    }
}

impl fmt::Display for EpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_digits(f, self.alphabet, &self.preperiod)?;
        write!(f, "(")?;
        write_digits(f, self.alphabet, &self.period)?;
        write!(f, ")")
    }
}

impl Serialize for EpSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn primitive_root(period: &[Digit]) -> &[Digit] {
    let m = period.len();
    for d in 1..m {
        if m % d == 0 && period.chunks(d).all(|c| c == &period[..d]) {
            return &period[..d];
        }
    }
    period
}

/// Anything that can be read as an infinite digit sequence for lexicographic purposes.
pub trait LexSeq {
    fn alphabet(&self) -> Alphabet;
    /// Digit at 0-based position `i` of the infinite sequence.
    fn digit_at(&self, i: usize) -> Digit;
    /// `(preperiod length, period length)` of the infinite sequence.
    fn shape(&self) -> (usize, usize);
}

impl LexSeq for Word {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }
    fn digit_at(&self, i: usize) -> Digit {
        self.digits.get(i).copied().unwrap_or(0)
    }
    fn shape(&self) -> (usize, usize) {
        (self.digits.len(), 1)
    }
}

impl LexSeq for EpSequence {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }
    fn digit_at(&self, i: usize) -> Digit {
        self.digit(i)
    }
    fn shape(&self) -> (usize, usize) {
        (self.preperiod.len(), self.period.len())
    }
}

/// `σ^n(s)` without allocating.
#[derive(Clone, Copy)]
pub struct Shifted<'a, S: LexSeq + ?Sized> {
    pub seq: &'a S,
    pub by: usize,
}

impl<S: LexSeq + ?Sized> LexSeq for Shifted<'_, S> {
    fn alphabet(&self) -> Alphabet {
        self.seq.alphabet()
    }
    fn digit_at(&self, i: usize) -> Digit {
        self.seq.digit_at(i + self.by)
    }
    fn shape(&self) -> (usize, usize) {
        let (p, m) = self.seq.shape();
        (p.saturating_sub(self.by), m)
    }
}

/// The reflection of a sequence without allocating.
#[derive(Clone, Copy)]
pub struct Reflected<'a, S: LexSeq + ?Sized>(pub &'a S);

impl<S: LexSeq + ?Sized> LexSeq for Reflected<'_, S> {
    fn alphabet(&self) -> Alphabet {
        self.0.alphabet()
    }
    fn digit_at(&self, i: usize) -> Digit {
        self.0.alphabet().reflect_digit(self.0.digit_at(i))
    }
    fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }
}

/// Lexicographic comparison of two infinite sequences (words are padded with `0^∞`).
///
/// Both arguments must use the same alphabet; this is checked in debug builds only.
pub fn lex_compare<X: LexSeq + ?Sized, Y: LexSeq + ?Sized>(x: &X, y: &Y) -> Ordering {
    debug_assert_eq!(x.alphabet(), y.alphabet(), "lex_compare across alphabets");
    let (px, mx) = x.shape();
    let (py, my) = y.shape();
    let bound = px.max(py) + mx.lcm(&my);
    for i in 0..bound {
        match x.digit_at(i).cmp(&y.digit_at(i)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Compares two digit slices of equal length (plain lexicographic order).
#[inline]
pub(crate) fn cmp_same_len(a: &[Digit], b: &[Digit]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    a.cmp(b)
}

/// Is `reflect(s) ≼ σ^n(s) ≼ s` for every `n >= 0`?
pub fn is_admissible_v(s: &EpSequence) -> bool {
    let refl = Reflected(s);
    (0..s.distinct_shift_count()).all(|n| {
        let t = Shifted { seq: s, by: n };
        lex_compare(&refl, &t) != Ordering::Greater && lex_compare(&t, s) != Ordering::Greater
    })
}

/// Is `s` the quasi-greedy expansion of 1 in some base `q ∈ (1, M+1]`?
///
/// That is, `s` does not end in `0^∞` and `σ^n(s) ≼ s` for all `n`.
pub fn is_quasi_greedy_admissible(s: &EpSequence) -> bool {
    !s.ends_in_zeros()
        && (1..s.distinct_shift_count())
            .all(|n| lex_compare(&Shifted { seq: s, by: n }, s) != Ordering::Greater)
}

/// The defining inequalities of a fundamental word.
pub fn is_fundamental(w: &Word) -> bool {
    let m = w.len();
    let max = w.alphabet.max_digit();
    let a = w.digits();
    if m == 1 {
        return max >= 2 && max - a[0] <= a[0] && a[0] < max;
    }
    (1..m).all(|i| {
        let suffix = &a[i..];
        let prefix = &a[..m - i];
        if cmp_same_len(suffix, prefix) != Ordering::Less {
            return false;
        }
        // reflect(prefix) ≼ suffix, digit by digit
        for (s, p) in suffix.iter().zip(prefix) {
            let r = max - p;
            match r.cmp(s) {
                Ordering::Less => return true,
                Ordering::Greater => return false,
                Ordering::Equal => {}
            }
        }
        true
    })
}

/// A word known to be fundamental.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FundamentalWord(Word);

impl FundamentalWord {
    pub fn new(word: Word) -> Result<Self> {
        if is_fundamental(&word) {
            Ok(FundamentalWord(word))
        } else {
            Err(Error::NotFundamental(word.to_string()))
        }
    }

    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        Self::new(Word::parse(alphabet, text)?)
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    pub fn alphabet(&self) -> Alphabet {
        self.0.alphabet
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `a⁺`; always defined because a fundamental word never ends in `M`.
    pub fn plus(&self) -> Word {
        self.0.increment_last().expect("fundamental words never end in M")
    }

    /// `ā`
    pub fn bar(&self) -> Word {
        self.0.reflect()
    }

    /// `reflect(a⁺)`
    pub fn plus_bar(&self) -> Word {
        self.plus().reflect()
    }

    /// `a^∞`, the quasi-greedy expansion at the left endpoint of the interval generated by `a`.
    pub fn left_alpha(&self) -> EpSequence {
        self.0.periodic()
    }

    /// `a⁺ (ā)^∞`, the quasi-greedy expansion at the right endpoint.
    pub fn right_alpha(&self) -> EpSequence {
        EpSequence::from_parts(self.alphabet(), self.plus().into_digits(), self.bar().into_digits())
    }

    /// `ā = a`: only possible for `M` even and `a = M/2`.
    pub fn is_self_reflected(&self) -> bool {
        self.0 == self.0.reflect()
    }
}

impl fmt::Display for FundamentalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for FundamentalWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab(m: Digit) -> Alphabet {
        Alphabet::new(m).unwrap()
    }

    fn w(m: Digit, s: &str) -> Word {
        Word::parse(ab(m), s).unwrap()
    }

    fn ep(m: Digit, s: &str) -> EpSequence {
        EpSequence::parse(ab(m), s).unwrap()
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(w(1, "110").reflect(), w(1, "001"));
        assert_eq!(w(2, "2110").reflect(), w(2, "0112"));
        assert_eq!(w(1, "10").reflect().reflect(), w(1, "10"));
    }

    #[test]
    fn increment_and_decrement() {
        assert_eq!(w(1, "10").increment_last().unwrap(), w(1, "11"));
        assert_eq!(w(2, "21").decrement_last().unwrap(), w(2, "20"));
        assert_eq!(w(1, "11").increment_last(), Err(Error::DigitOverflow));
        assert_eq!(w(1, "10").decrement_last(), Err(Error::DigitUnderflow));
    }

    #[test]
    fn rejects_bad_words() {
        assert_eq!(Word::new(ab(1), vec![]), Err(Error::EmptyWord));
        assert_eq!(Word::new(ab(1), vec![2]), Err(Error::DigitOutOfRange { digit: 2, max: 1 }));
        assert_eq!(Alphabet::new(0), Err(Error::InvalidAlphabet));
    }

    #[test]
    fn lex_examples() {
        assert_eq!(lex_compare(&w(1, "10"), &w(1, "110")), Ordering::Less);
        assert_eq!(lex_compare(&ep(1, "(10)"), &ep(1, "11(01)")), Ordering::Less);
        let x = ep(1, "1(10)");
        assert_eq!(lex_compare(&x, &x), Ordering::Equal);
        // 0-padding convention
        assert_eq!(lex_compare(&w(1, "10"), &w(1, "100")), Ordering::Equal);
        assert_eq!(lex_compare(&w(1, "10"), &ep(1, "(10)")), Ordering::Less);
    }

    #[test]
    fn canonical_form() {
        assert_eq!(ep(1, "(1010)"), ep(1, "(10)"));
        assert_eq!(ep(1, "1(01)"), ep(1, "(10)"));
        assert_eq!(ep(1, "110(10)"), ep(1, "1(10)"));
        assert_eq!(ep(1, "11(01)"), ep(1, "1(10)"));
        assert_eq!(ep(2, "2(0)").preperiod(), &[2]);
        assert_eq!(ep(1, "1100(0)").to_string(), "11(0)");
        assert_eq!(ep(1, "(0)").to_string(), "(0)");
    }

    #[test]
    fn shifts() {
        let s = ep(1, "11(01)");
        assert_eq!(s.shift(1), ep(1, "(10)"));
        assert_eq!(s.shift(2), ep(1, "(01)"));
        assert_eq!(s.shift(3), ep(1, "(10)"));
        assert_eq!(s.distinct_shift_count(), 3);
        let t = ep(1, "110(0)");
        assert_eq!(t.shift(1), ep(1, "1(0)"));
        assert_eq!(t.shift(5), ep(1, "(0)"));
    }

    #[test]
    fn serialization() {
        let big = ab(10);
        let word = Word::new(big, vec![10, 3, 0]).unwrap();
        assert_eq!(word.to_string(), "[10,3,0]");
        assert_eq!(Word::parse(big, "[10,3,0]").unwrap(), word);
        let s = EpSequence::new(big, vec![10], vec![0, 3]).unwrap();
        assert_eq!(s.to_string(), "[10]([0,3])");
        assert_eq!(EpSequence::parse(big, "[10]([0,3])").unwrap(), s);
        assert_eq!(ep(1, "11(01)").to_string(), "1(10)");
        assert_eq!(ep(1, "(110)").to_string(), "(110)");
        assert!(EpSequence::parse(ab(1), "1101").is_err());
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible_v(&ep(1, "(10)")));
        assert!(is_admissible_v(&ep(1, "(110)")));
        assert!(!is_admissible_v(&ep(1, "(100)")));

        assert!(is_quasi_greedy_admissible(&ep(1, "(1)")));
        assert!(is_quasi_greedy_admissible(&ep(1, "11(01)")));
        assert!(!is_quasi_greedy_admissible(&ep(1, "(01)")));
        assert!(!is_quasi_greedy_admissible(&ep(1, "1(0)")));
    }

    #[test]
    fn fundamental_examples() {
        assert!(is_fundamental(&w(1, "10")));
        assert!(!is_fundamental(&w(1, "1")));
        assert!(is_fundamental(&w(2, "1")));
        assert!(!is_fundamental(&w(2, "0")));
        assert!(!is_fundamental(&w(2, "2")));
        assert!(is_fundamental(&w(1, "110")));
        assert!(is_fundamental(&w(1, "110100")));
        assert!(!is_fundamental(&w(1, "1010")));
        assert!(!is_fundamental(&w(1, "11")));
    }

    #[test]
    fn fundamental_endpoint_sequences() {
        let a = FundamentalWord::parse(ab(1), "10").unwrap();
        assert_eq!(a.left_alpha(), ep(1, "(10)"));
        assert_eq!(a.right_alpha(), ep(1, "11(01)"));
        let u = FundamentalWord::parse(ab(2), "1").unwrap();
        assert!(u.is_self_reflected());
        assert_eq!(u.right_alpha(), ep(2, "2(1)"));
    }
}
