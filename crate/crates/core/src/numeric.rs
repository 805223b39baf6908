//! Exact rational helpers: integer polynomials with exact sign evaluation,
//! certified natural logarithms, and decimal rendering/parsing of rationals.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A polynomial with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        IntPoly::new(vec![BigInt::from(c)])
    }

    /// `q^k`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        IntPoly { coeffs }
    }

    /// `Σ digits[i] q^{n-1-i}` for a digit block of length n (Horner order).
    pub fn from_digits_horner(digits: &[u16]) -> Self {
        let n = digits.len();
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, &d) in digits.iter().enumerate() {
            coeffs[n - 1 - i] = BigInt::from(d);
        }
        IntPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigInt::zero();
        IntPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigInt::zero();
        IntPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) - other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Exact value at a rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let (num, den) = (x.numer(), x.denom());
        let d = match self.degree() {
            Some(d) => d,
            None => return BigRational::zero(),
        };
        let top = self.homogeneous_eval(num, den);
        BigRational::new(top, den.pow(d as u32))
    }

    /// Sign of the value at a rational point, without building the rational.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        match self.degree() {
            None => Ordering::Equal,
            Some(_) => {
                // denominators of BigRational are positive, so the sign survives scaling
                let v = self.homogeneous_eval(x.numer(), x.denom());
                v.sign().cmp_zero()
            }
        }
    }

    /// `Σ c_i num^i den^{d-i}` by Horner's scheme.
    fn homogeneous_eval(&self, num: &BigInt, den: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        acc
    }
}

trait SignCmp {
    fn cmp_zero(self) -> Ordering;
}

impl SignCmp for Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `2^{-k}`
pub fn pow2_neg(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k)
}

/// `x^k` for a rational and a small exponent.
pub fn rat_pow(x: &BigRational, k: usize) -> BigRational {
    BigRational::new(x.numer().pow(k as u32), x.denom().pow(k as u32))
}

/// Floor of `x · 2^bits` as an integer.
fn scaled_floor(x: &BigRational, bits: u32) -> BigInt {
    (x.numer() << bits).div_floor(x.denom())
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// Certified bounds `lo <= atanh(t) <= hi` for `0 <= t < 1/2`, as fixed-point
/// integers scaled by `2^bits`.
fn atanh_fixed(t: &BigRational, bits: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << bits;
    let t_lo = scaled_floor(t, bits);
    let t_hi = ceil_div(&(t.numer() << bits), t.denom());

    // Lower bound: finitely many terms, every product rounded down.
    // Upper bound: same terms rounded up, plus a geometric tail bound.
    let sq_lo = (&t_lo * &t_lo) >> bits;
    let sq_hi = ceil_div(&(&t_hi * &t_hi), &one);
    let mut pow_lo = t_lo.clone();
    let mut pow_hi = t_hi.clone();
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let denom = BigInt::from(2 * k + 1);
        sum_lo += pow_lo.div_floor(&denom);
        sum_hi += ceil_div(&pow_hi, &denom);
        pow_lo = (&pow_lo * &sq_lo) >> bits;
        pow_hi = ceil_div(&(&pow_hi * &sq_hi), &one);
        k += 1;
        if pow_hi <= BigInt::one() {
            break;
        }
    }
    // tail Σ_{j>=k} t^{2j+1}/(2j+1) <= pow_hi / ((2k+1)(1 - t^2)), and 1 - t^2 >= 3/4
    let tail = ceil_div(&(&pow_hi * BigInt::from(4)), &(BigInt::from(3) * BigInt::from(2 * k + 1)))
        + BigInt::one();
    sum_hi += tail;
    (sum_lo, sum_hi)
}

/// Certified enclosure `[lo, hi]` of `ln x` for rational `x > 0`, with width about `2^{-bits}`.
pub fn ln_enclosure(x: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(x.is_positive(), "logarithm of a nonpositive number");
    let work = bits + 16;
    // x = 2^e · y with y in [1, 2)
    let e = x.numer().bits() as i64 - x.denom().bits() as i64;
    let scale = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(BigInt::one() << e as u32)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-e) as u32)
        }
    };
    let mut e = e;
    let mut y = x / scale(e);
    let two = int(2);
    while y >= two {
        y /= &two;
        e += 1;
    }
    while y < BigRational::one() {
        y *= &two;
        e -= 1;
    }
    let t = (&y - BigRational::one()) / (&y + BigRational::one());
    let (at_lo, at_hi) = atanh_fixed(&t, work);
    let (l2_lo, l2_hi) = atanh_fixed(&rat(1, 3), work);
    let (mut lo, mut hi) = (at_lo * 2, at_hi * 2);
    let eb = BigInt::from(e);
    if e >= 0 {
        lo += &eb * &l2_lo * 2;
        hi += &eb * &l2_hi * 2;
    } else {
        lo += &eb * &l2_hi * 2;
        hi += &eb * &l2_lo * 2;
    }
    let den = BigInt::one() << work;
    (BigRational::new(lo, den.clone()), BigRational::new(hi, den))
}

/// `ln 2` enclosure.
pub fn ln2_enclosure(bits: u32) -> (BigRational, BigRational) {
    ln_enclosure(&int(2), bits)
}

/// Rounding direction for decimal rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// Renders `x` with `places` digits after the decimal point, rounded in the given direction.
pub fn to_decimal(x: &BigRational, places: usize, round: Round) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = x.numer() * &scale;
    let q = match round {
        Round::Down => scaled.div_floor(x.denom()),
        Round::Up => ceil_div(&scaled, x.denom()),
    };
    let negative = q.is_negative();
    let digits = q.abs().to_string();
    let digits = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Exact `p/q` rendering.
pub fn to_fraction(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Number of decimal places that resolve a width of `tol`.
pub fn decimal_places_for(tol: &BigRational) -> usize {
    if !tol.is_positive() {
        return 20;
    }
    let mut places = 0usize;
    let mut unit = BigRational::one();
    let ten = int(10);
    while &unit > tol && places < 400 {
        unit /= &ten;
        places += 1;
    }
    places
}

/// Parses `"1.8019"`, `"-2"`, `"3/2"` or `"2^-64"` as an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("cannot read {t:?} as a rational number"));
    if let Some((base, exp)) = t.split_once('^') {
        let base: BigInt = base.trim().parse().map_err(|_| bad())?;
        let exp: i64 = exp.trim().parse().map_err(|_| bad())?;
        let b = BigRational::from_integer(base);
        if exp >= 0 {
            return Ok(rat_pow(&b, exp as usize));
        }
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(rat_pow(&b.recip(), (-exp) as usize));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp)
        .parse()
        .map_err(|_| bad())?;
    let v = BigRational::new(digits, BigInt::from(10u32).pow(fp.len() as u32));
    Ok(if neg { -v } else { v })
}

/// Number of fractional decimal digits written in a decimal literal, if any.
pub fn decimal_literal_places(text: &str) -> Option<usize> {
    let t = text.trim();
    if t.contains('/') || t.contains('^') {
        return None;
    }
    Some(t.split_once('.').map(|(_, f)| f.len()).unwrap_or(0))
}

/// Lossy conversion for diagnostics and tests only.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// The dyadic midpoint `(lo + hi) / 2`.
pub fn midpoint(lo: &BigRational, hi: &BigRational) -> BigRational {
    (lo + hi) / int(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn within(enc: &(BigRational, BigRational), v: f64, slack: f64) -> bool {
        to_f64(&enc.0) <= v + slack && to_f64(&enc.1) >= v - slack && enc.0 <= enc.1
    }

    #[test]
    fn poly_eval_and_sign() {
        // q^2 - q - 1
        let p = IntPoly::new(vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)]);
        assert_eq!(p.eval(&int(2)), int(1));
        assert_eq!(p.sign_at(&rat(3, 2)), Ordering::Less);
        assert_eq!(p.sign_at(&rat(17, 10)), Ordering::Greater);
        assert_eq!(IntPoly::constant(0).sign_at(&int(5)), Ordering::Equal);
        let sq = p.mul(&p);
        assert_eq!(sq.eval(&rat(3, 2)), p.eval(&rat(3, 2)) * p.eval(&rat(3, 2)));
        assert_eq!(p.sub(&p), IntPoly::zero());
        assert_eq!(IntPoly::from_digits_horner(&[1, 1, 0]).eval(&int(2)), int(6));
    }

    #[test]
    fn logarithms_are_enclosed() {
        for (x, v) in [(int(2), 2f64.ln()), (rat(1, 3), (1.0f64 / 3.0).ln()), (int(1000), 1000f64.ln())] {
            let e = ln_enclosure(&x, 60);
            assert!(within(&e, v, 1e-15), "{x}");
            assert!(&e.1 - &e.0 < pow2_neg(50));
        }
        let e = ln_enclosure(&int(1), 60);
        assert!(e.0 <= BigRational::zero() && e.1 >= BigRational::zero());
    }

    #[test]
    fn decimal_rendering() {
        let x = rat(2, 3);
        assert_eq!(to_decimal(&x, 4, Round::Down), "0.6666");
        assert_eq!(to_decimal(&x, 4, Round::Up), "0.6667");
        assert_eq!(to_decimal(&int(2), 3, Round::Down), "2.000");
        assert_eq!(to_decimal(&rat(-1, 8), 2, Round::Down), "-0.13");
        assert_eq!(to_fraction(&rat(6, 4)), "3/2");
        assert_eq!(decimal_places_for(&pow2_neg(10)), 4);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1.25").unwrap(), rat(5, 4));
        assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("2^-3").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(decimal_literal_places("1.8019"), Some(4));
        assert_eq!(decimal_literal_places("2"), Some(0));
    }
}
