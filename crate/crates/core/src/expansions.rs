//! Bases as certified rational intervals, the quasi-greedy expansion of 1, and
//! the Thue–Morse family of special bases.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{int, midpoint, pow2_neg, rat_pow, to_fraction, IntPoly};
use crate::words::{
    is_quasi_greedy_admissible, lex_compare, Alphabet, Digit, EpSequence, FundamentalWord, LexSeq,
    Shifted, Word,
};

/// Default width of base enclosures.
pub fn default_tolerance() -> BigRational {
    pow2_neg(64)
}

/// Longest expansion prefix computed from a bare rational enclosure.
const MAX_PREFIX_DEPTH: usize = 2048;

/// A base `q ∈ (1, M+1]` known to lie in `[lo, hi]`.
///
/// When `defining_alpha` is present, `q` is the unique base whose quasi-greedy
/// expansion of 1 is that sequence, and every discrete question about `q` is
/// answered from the sequence rather than from the interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseEnclosure {
    lo: BigRational,
    hi: BigRational,
    alphabet: Alphabet,
    defining_alpha: Option<EpSequence>,
}

impl BaseEnclosure {
    /// An enclosure with no defining sequence. Requires `1 < lo <= hi <= M+1`.
    pub fn new(alphabet: Alphabet, lo: BigRational, hi: BigRational) -> Result<Self> {
        let top = int(alphabet.max_digit() as i64 + 1);
        if lo > hi || lo <= BigRational::one() || hi > top {
            return Err(Error::BaseOutOfRange);
        }
        Ok(BaseEnclosure { lo, hi, alphabet, defining_alpha: None })
    }

    /// The exact base `q`. At `q = M+1` the defining sequence `M^∞` is attached.
    pub fn point(alphabet: Alphabet, q: BigRational) -> Result<Self> {
        let mut base = Self::new(alphabet, q.clone(), q)?;
        if base.hi == int(alphabet.max_digit() as i64 + 1) {
            base.defining_alpha =
                Some(EpSequence::from_parts(alphabet, Vec::new(), vec![alphabet.max_digit()]));
        }
        Ok(base)
    }

    /// `[center - radius, center + radius]`, clipped into `(1, M+1]`.
    pub fn around(alphabet: Alphabet, center: BigRational, radius: BigRational) -> Result<Self> {
        let one = BigRational::one();
        let top = int(alphabet.max_digit() as i64 + 1);
        if center <= one || center > top {
            return Err(Error::BaseOutOfRange);
        }
        let mut lo = &center - &radius;
        if lo <= one {
            lo = midpoint(&one, &center);
        }
        let hi = (&center + &radius).min(top);
        Self::new(alphabet, lo, hi)
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn defining_alpha(&self) -> Option<&EpSequence> {
        self.defining_alpha.as_ref()
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> BigRational {
        midpoint(&self.lo, &self.hi)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// A narrower enclosure of the same base, when it has a defining sequence.
    pub fn refine(&self, tol: &BigRational) -> Result<Self> {
        match &self.defining_alpha {
            Some(alpha) if &self.width() > tol => base_from_alpha(alpha, tol),
            _ => Ok(self.clone()),
        }
    }

    /// Certified order between two bases, or `None` if the enclosures cannot decide it.
    pub fn certified_cmp(&self, other: &BaseEnclosure) -> Option<Ordering> {
        if let (Some(a), Some(b)) = (&self.defining_alpha, &other.defining_alpha) {
            if a.alphabet() == b.alphabet() {
                return Some(lex_compare(a, b));
            }
        }
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn certified_lt(&self, other: &BaseEnclosure) -> bool {
        self.certified_cmp(other) == Some(Ordering::Less)
    }

    pub fn certified_le(&self, other: &BaseEnclosure) -> bool {
        matches!(self.certified_cmp(other), Some(Ordering::Less | Ordering::Equal))
    }
}

impl Serialize for BaseEnclosure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("lo", &to_fraction(&self.lo))?;
        map.serialize_entry("hi", &to_fraction(&self.hi))?;
        if let Some(a) = &self.defining_alpha {
            map.serialize_entry("alpha", &a.to_string())?;
        }
        map.end()
    }
}

/// `Σ x_i q^{-i}` for an exact base `q > 1`.
fn pi_exact(s: &EpSequence, q: &BigRational) -> BigRational {
    let p = s.preperiod().len();
    let m = s.period().len();
    let pre = IntPoly::from_digits_horner(s.preperiod()).eval(q);
    let per = IntPoly::from_digits_horner(s.period()).eval(q);
    let qp = rat_pow(q, p);
    let qm = rat_pow(q, m);
    // pre / q^p + per / (q^p (q^m - 1))
    (pre + per / (&qm - BigRational::one())) / qp
}

/// Certified enclosure of `π_q(s)`. The value is decreasing in `q`, so the
/// enclosure is exact at the interval ends.
pub fn pi_q(s: &EpSequence, q: &BaseEnclosure) -> (BigRational, BigRational) {
    let at_hi = pi_exact(s, &q.hi);
    if q.is_point() {
        return (at_hi.clone(), at_hi);
    }
    (at_hi, pi_exact(s, &q.lo))
}

/// The polynomial `G(q) = q^p (q^m - 1) (π_q(s) - 1)`, positive below the root and
/// negative above it.
pub(crate) fn alpha_equation(s: &EpSequence) -> IntPoly {
    let p = s.preperiod().len();
    let m = s.period().len();
    let a = IntPoly::from_digits_horner(s.preperiod());
    let b = IntPoly::from_digits_horner(s.period());
    let qm_minus_1 = IntPoly::monomial(m).sub(&IntPoly::constant(1));
    a.mul(&qm_minus_1).add(&b).sub(&IntPoly::monomial(p).mul(&qm_minus_1))
}

/// The base `q` with `α(q) = s`, enclosed to width `tol` by exact bisection.
pub fn base_from_alpha(s: &EpSequence, tol: &BigRational) -> Result<BaseEnclosure> {
    if !is_quasi_greedy_admissible(s) {
        return Err(Error::NotQuasiGreedy(s.to_string()));
    }
    let alphabet = s.alphabet();
    let g = alpha_equation(s);
    let mut lo = BigRational::one();
    let mut hi = int(alphabet.max_digit() as i64 + 1);
    if g.sign_at(&hi) == Ordering::Equal {
        lo = hi.clone();
    }
    while lo < hi && (&hi - &lo > *tol || lo <= BigRational::one()) {
        let mid = midpoint(&lo, &hi);
        match g.sign_at(&mid) {
            Ordering::Greater => lo = mid,
            Ordering::Less => hi = mid,
            Ordering::Equal => {
                lo = mid.clone();
                hi = mid;
            }
        }
    }
    Ok(BaseEnclosure { lo, hi, alphabet, defining_alpha: Some(s.clone()) })
}

/// Quasi-greedy digits of 1 in an exact rational base `q = P/D > 1`.
fn quasi_greedy_digits_exact(q: &BigRational, alphabet: Alphabet, n: usize) -> Vec<Digit> {
    let max = BigInt::from(alphabet.max_digit());
    let (p, d) = (q.numer(), q.denom());
    // r_k = num / d^k
    let mut num = BigInt::one();
    let mut dk = BigInt::one();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let prod = &num * p;
        dk *= d;
        // largest integer strictly below prod / dk
        let (quot, rem) = prod.div_mod_floor(&dk);
        let below = if rem.is_zero() { quot - 1 } else { quot };
        let digit = below.min(max.clone());
        num = prod - &digit * &dk;
        out.push(digit.to_u16().expect("digit fits the alphabet"));
    }
    out
}

/// Digits certified for every base in the enclosure (common prefix at both ends;
/// α is increasing in q, so the prefix is shared by everything in between).
fn certified_prefix(q: &BaseEnclosure, n: usize) -> Vec<Digit> {
    let at_lo = quasi_greedy_digits_exact(&q.lo, q.alphabet, n);
    if q.is_point() {
        return at_lo;
    }
    let at_hi = quasi_greedy_digits_exact(&q.hi, q.alphabet, n);
    let common = at_lo.iter().zip(&at_hi).take_while(|(a, b)| a == b).count();
    let mut out = at_lo;
    out.truncate(common);
    out
}

/// The first `n` digits of `α(q)`.
pub fn alpha_digits(q: &BaseEnclosure, n: usize) -> Result<Word> {
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    if let Some(alpha) = &q.defining_alpha {
        return Ok(alpha.prefix(n));
    }
    let digits = certified_prefix(q, n);
    if digits.len() < n {
        return Err(Error::PrecisionExhausted { certified: digits.len() });
    }
    Word::new(q.alphabet, digits)
}

/// As many certified digits of `α(q)` as the enclosure supports, up to `n`.
pub fn alpha_digits_partial(q: &BaseEnclosure, n: usize) -> Vec<Digit> {
    match &q.defining_alpha {
        Some(alpha) => (0..n).map(|i| alpha.digit(i)).collect(),
        None => certified_prefix(q, n),
    }
}

/// `τ_1 … τ_n`, with `τ_i` the parity of the binary digit sum of `i`.
pub fn thue_morse(n: usize) -> Word {
    assert!(n >= 1, "thue_morse needs n >= 1");
    Word::new(Alphabet::BINARY, (1..=n).map(thue_morse_digit).collect()).expect("binary digits")
}

#[inline]
pub fn thue_morse_digit(i: usize) -> Digit {
    (i.count_ones() % 2) as Digit
}

/// The digit `λ_i` of `α(q_KL)` for the given alphabet (`i >= 1`).
pub fn lambda_digit(alphabet: Alphabet, i: usize) -> Digit {
    let m = alphabet.max_digit();
    let k = m / 2;
    let t = thue_morse_digit(i);
    if m % 2 == 0 {
        let prev = if i == 1 { 0 } else { thue_morse_digit(i - 1) };
        k + t - prev
    } else {
        k + t
    }
}

/// `λ_1 … λ_n`.
pub fn lambda_digits(alphabet: Alphabet, n: usize) -> Word {
    assert!(n >= 1, "lambda_digits needs n >= 1");
    Word::new(alphabet, (1..=n).map(|i| lambda_digit(alphabet, i)).collect()).expect("valid digits")
}

/// The distinguished bases of the theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialBase {
    /// The generalized golden ratio `q_G`.
    Golden,
    /// The Komornik–Loreti constant `q_KL`.
    KomornikLoreti,
    /// The transitive base `q_T = q_1′`.
    Transitive,
    /// `q_n′`; `q_0′ = M + 1`.
    Prime(u32),
}

/// `α(q_G)`: `k^∞` for `M = 2k`, `((k+1)k)^∞` for `M = 2k+1`.
pub fn golden_alpha(alphabet: Alphabet) -> EpSequence {
    let m = alphabet.max_digit();
    let k = m / 2;
    let period = if m % 2 == 0 { vec![k] } else { vec![k + 1, k] };
    EpSequence::from_parts(alphabet, Vec::new(), period)
}

/// `α(q_n′)`; for `n = 0` this is `M^∞`.
pub fn q_prime_alpha(alphabet: Alphabet, n: u32) -> EpSequence {
    if n == 0 {
        return EpSequence::from_parts(alphabet, Vec::new(), vec![alphabet.max_digit()]);
    }
    let len = if alphabet.is_even() { 1usize << (n - 1) } else { 1usize << n };
    let head = lambda_digits(alphabet, len);
    let tail = head.reflect().increment_last().expect("reflected λ block ends below M");
    EpSequence::from_parts(alphabet, head.into_digits(), tail.into_digits())
}

pub fn special_base(alphabet: Alphabet, which: SpecialBase, tol: &BigRational) -> BaseEnclosure {
    let from = |s: EpSequence| base_from_alpha(&s, tol).expect("special sequences are quasi-greedy");
    match which {
        SpecialBase::Golden => from(golden_alpha(alphabet)),
        SpecialBase::Transitive => from(q_prime_alpha(alphabet, 1)),
        SpecialBase::Prime(n) => from(q_prime_alpha(alphabet, n)),
        SpecialBase::KomornikLoreti => {
            base_from_digit_stream(alphabet, |i| lambda_digit(alphabet, i + 1), tol)
                .expect("λ is the expansion of a base in (1, M+1)")
        }
    }
}

/// The base `q` solving `Σ x_i q^{-i} = 1` for a digit stream that need not be
/// eventually periodic. Bisection decides each midpoint from a truncated sum and
/// the tail bound `M q^{-N} / (q - 1)`, doubling `N` until the decision is certified.
///
/// `digit` is called with indices 0, 1, 2, … in increasing order.
pub fn base_from_digit_stream<F>(alphabet: Alphabet, mut digit: F, tol: &BigRational) -> Result<BaseEnclosure>
where
    F: FnMut(usize) -> Digit,
{
    const MAX_TERMS: usize = 1 << 16;
    let one = BigRational::one();
    let max = BigInt::from(alphabet.max_digit());
    let mut lo = one.clone();
    let mut hi = int(alphabet.max_digit() as i64 + 1);
    let mut digits: Vec<Digit> = Vec::new();
    let mut terms = 64usize;
    while &hi - &lo > *tol || lo <= one {
        let mid = midpoint(&lo, &hi);
        loop {
            while digits.len() < terms {
                digits.push(digit(digits.len()));
            }
            let (p, d) = (mid.numer(), mid.denom());
            // S_N = Σ x_i p^{N-i} d^i / p^N ; tail ≤ M d^N / (p^N) · d / (p - d)
            let mut acc = BigInt::zero();
            let mut dpow = BigInt::one();
            for &x in &digits[..terms] {
                acc = acc * p + BigInt::from(x) * &dpow * d;
                dpow *= d;
            }
            // acc = Σ_{i=1}^{N} x_i p^{N-i} d^{i}; dpow = d^N
            let pn = p.pow(terms as u32);
            // S_N > 1  <=>  acc > p^N
            if acc > pn {
                lo = mid;
                break;
            }
            // S_N + M d^N d / (p^N (p - d)) < 1  <=>  acc (p - d) + M d^{N+1} < p^N (p - d)
            let gap = p - d;
            if &acc * &gap + &max * &dpow * d < &pn * &gap {
                hi = mid;
                break;
            }
            if terms >= MAX_TERMS {
                return Err(Error::PrecisionExhausted { certified: terms });
            }
            terms *= 2;
        }
    }
    Ok(BaseEnclosure { lo, hi, alphabet, defining_alpha: None })
}

/// `J_a = [q_L(a), q_R(a)]`, with `α(q_L) = a^∞` and `α(q_R) = a⁺ ā^∞`.
pub fn fundamental_interval(a: &FundamentalWord, tol: &BigRational) -> (BaseEnclosure, BaseEnclosure) {
    let left = base_from_alpha(&a.left_alpha(), tol).expect("a^∞ is quasi-greedy for fundamental a");
    let right =
        base_from_alpha(&a.right_alpha(), tol).expect("a⁺ā^∞ is quasi-greedy for fundamental a");
    (left, right)
}

/// Source of the digits of `α(q)` for lexicographic tests.
enum AlphaView {
    Exact(EpSequence),
    Prefix(Vec<Digit>),
}

/// Compares `x` against `α(q)`; `Err(k)` when the first `k` certified digits do not decide.
fn compare_with_alpha<S: LexSeq + ?Sized>(x: &S, alpha: &AlphaView) -> std::result::Result<Ordering, usize> {
    match alpha {
        AlphaView::Exact(a) => Ok(lex_compare(x, a)),
        AlphaView::Prefix(digits) => {
            for (i, &a) in digits.iter().enumerate() {
                match x.digit_at(i).cmp(&a) {
                    Ordering::Equal => continue,
                    other => return Ok(other),
                }
            }
            Err(digits.len())
        }
    }
}

fn reflect_view(alpha: &AlphaView, alphabet: Alphabet) -> AlphaView {
    match alpha {
        AlphaView::Exact(a) => AlphaView::Exact(a.reflect()),
        AlphaView::Prefix(d) => {
            AlphaView::Prefix(d.iter().map(|&x| alphabet.reflect_digit(x)).collect())
        }
    }
}

/// Does `d` satisfy the lexicographic characterization of unique expansions in base `q`?
///
/// For every `n >= 1`: `σ^n(d) ≺ α(q)` when `d_n < M`, and `σ^n(d) ≻ reflect(α(q))` when `d_n > 0`.
pub fn is_univoque_sequence(d: &EpSequence, q: &BaseEnclosure) -> Result<bool> {
    if d.alphabet() != q.alphabet {
        return Err(Error::AlphabetMismatch {
            left: d.alphabet().max_digit(),
            right: q.alphabet.max_digit(),
        });
    }
    let max = q.alphabet.max_digit();
    let mut depth = 64usize;
    loop {
        let alpha = match &q.defining_alpha {
            Some(a) => AlphaView::Exact(a.clone()),
            None => AlphaView::Prefix(certified_prefix(q, depth)),
        };
        let refl = reflect_view(&alpha, q.alphabet);
        let mut undecided = None;
        let mut verdict = true;
        for n in 1..=d.distinct_shift_count() {
            let dn = d.digit(n - 1);
            let tail = Shifted { seq: d, by: n };
            if dn < max {
                match compare_with_alpha(&tail, &alpha) {
                    Ok(Ordering::Less) => {}
                    Ok(_) => {
                        verdict = false;
                        break;
                    }
                    Err(k) => undecided = Some(k),
                }
            }
            if dn > 0 {
                match compare_with_alpha(&tail, &refl) {
                    Ok(Ordering::Greater) => {}
                    Ok(_) => {
                        verdict = false;
                        break;
                    }
                    Err(k) => undecided = Some(k),
                }
            }
        }
        match undecided {
            _ if !verdict => return Ok(false),
            None => return Ok(true),
            Some(k) => {
                // a shorter certified prefix than requested means the enclosure is the limit
                if k < depth || depth >= MAX_PREFIX_DEPTH {
                    return Err(Error::PrecisionExhausted { certified: k });
                }
                depth *= 2;
            }
        }
    }
}

/// Lossy midpoint, for diagnostics and plotting only.
pub fn approx(q: &BaseEnclosure) -> f64 {
    crate::numeric::to_f64(&q.midpoint())
}

/// `|x - y|` for rationals.
pub fn abs_diff(x: &BigRational, y: &BigRational) -> BigRational {
    (x - y).abs()
}
