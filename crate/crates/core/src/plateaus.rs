//! Fundamental intervals as entropy plateaus: enumeration, placement on the
//! ladder `I_n = (q′_{n+1}, q′_n]`, the entropy bridge through `Φ̂_u`, and
//! sampled staircase tables.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::composition::{classify_decomposition, compose, decompose, phi_hat, ten, unit_lift, WordClass};
use crate::error::{Error, Result};
use crate::expansions::{
    alpha_digits_partial, default_tolerance, fundamental_interval, special_base, BaseEnclosure, SpecialBase,
};
use crate::numeric::{decimal_places_for, rat, to_decimal, to_fraction, Round};
use crate::subshift::{
    default_entropy_tolerance, entropy, entropy_bounds_from_prefix, hausdorff_dimension, EntropyEnclosure,
    SubshiftAutomaton,
};
use crate::words::{lex_compare, Alphabet, Digit, FundamentalWord, Word};

/// Can `a` still be extended to a fundamental word?
fn viable_prefix(a: &[Digit], max: Digit) -> bool {
    let k = a.len();
    (1..k).all(|i| {
        let suffix = &a[i..];
        let prefix = &a[..k - i];
        if suffix > prefix {
            return false;
        }
        for (s, p) in suffix.iter().zip(prefix) {
            match (max - p).cmp(s) {
                Ordering::Less => return true,
                Ordering::Greater => return false,
                Ordering::Equal => {}
            }
        }
        true
    })
}

/// All fundamental words of length `<= max_len`, ordered by `a^∞`.
pub fn enumerate_fundamental(alphabet: Alphabet, max_len: usize) -> Vec<FundamentalWord> {
    let max = alphabet.max_digit();
    let mut found = Vec::new();
    let mut stack: Vec<Vec<Digit>> = (0..=max).rev().map(|d| vec![d]).collect();
    while let Some(prefix) = stack.pop() {
        if let Ok(w) = Word::new(alphabet, prefix.clone()).and_then(FundamentalWord::new) {
            found.push(w);
        }
        if prefix.len() < max_len {
            for d in (0..=max).rev() {
                let mut next = prefix.clone();
                next.push(d);
                if viable_prefix(&next, max) {
                    stack.push(next);
                }
            }
        }
    }
    found.sort_by(|a, b| lex_compare(&a.left_alpha(), &b.left_alpha()).then(a.len().cmp(&b.len())));
    found
}

/// One step of the ladder: `I_n = (lower, upper] = (q′_{n+1}, q′_n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderIndex {
    pub n: u32,
    pub lower: BaseEnclosure,
    pub upper: BaseEnclosure,
}

impl LadderIndex {
    /// Is `[left, right]` certified inside `(lower, upper]`?
    pub fn contains_interval(&self, left: &BaseEnclosure, right: &BaseEnclosure) -> bool {
        self.lower.certified_lt(left) && right.certified_le(&self.upper)
    }
}

impl Serialize for LadderIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LadderIndex", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("lower", &self.lower)?;
        st.serialize_field("upper", &self.upper)?;
        st.end()
    }
}

/// `I_0, …, I_{n_max}`, from `q′_0 = M+1` down.
pub fn ladder(alphabet: Alphabet, n_max: u32, tol: &BigRational) -> Vec<LadderIndex> {
    let primes: Vec<BaseEnclosure> = (0..=n_max + 1)
        .into_par_iter()
        .map(|n| special_base(alphabet, SpecialBase::Prime(n), tol))
        .collect();
    (0..=n_max)
        .map(|n| LadderIndex {
            n,
            lower: primes[n as usize + 1].clone(),
            upper: primes[n as usize].clone(),
        })
        .collect()
}

/// `c_M`: 1 for even `M`, 1/2 for odd `M`; the reciprocal length of the unit lift.
pub fn bridge_factor(alphabet: Alphabet) -> BigRational {
    rat(1, unit_lift(alphabet).len() as i64)
}

/// What an enumerated interval is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlateauKind {
    /// A genuine entropy plateau.
    Plateau,
    /// `J_u = [q_G, q_T]` for the unit lift `u`: entropy is not constant there.
    Unit,
    /// `u ∘ (10)^{∘n}`: the interval contains `q_KL` in its interior.
    StraddlesKl,
}

impl PlateauKind {
    pub fn tag(self) -> &'static str {
        match self {
            PlateauKind::Plateau => "plateau",
            PlateauKind::Unit => "unit",
            PlateauKind::StraddlesKl => "straddles_kl",
        }
    }
}

impl Serialize for PlateauKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.tag())
    }
}

/// One fundamental interval `[q_L, q_R]` with its entropy and classification.
#[derive(Debug, Clone)]
pub struct PlateauRecord {
    pub word: FundamentalWord,
    pub q_l: BaseEnclosure,
    pub q_r: BaseEnclosure,
    /// Entropy at the left endpoint.
    pub entropy: EntropyEnclosure,
    /// Entropy at the right endpoint.
    pub entropy_right: EntropyEnclosure,
    pub class: WordClass,
    /// `n` with `[q_L, q_R] ⊂ I_n`, certified; absent for the unit and straddling words.
    pub ladder_index: Option<u32>,
    pub kind: PlateauKind,
}

impl PlateauRecord {
    /// The plateau value, as the intersection of both endpoint enclosures.
    /// Only meaningful for [`PlateauKind::Plateau`], where entropy is constant.
    pub fn value(&self) -> EntropyEnclosure {
        self.entropy.meet(&self.entropy_right)
    }

    /// Is `q` certified to lie in `[q_L, q_R]`?
    pub fn contains(&self, q: &BaseEnclosure) -> bool {
        self.q_l.certified_le(q) && q.certified_le(&self.q_r)
    }
}

impl Serialize for PlateauRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PlateauRecord", 8)?;
        st.serialize_field("word", &self.word.to_string())?;
        st.serialize_field("q_l", &self.q_l)?;
        st.serialize_field("q_r", &self.q_r)?;
        st.serialize_field("entropy", &self.entropy)?;
        st.serialize_field("entropy_right", &self.entropy_right)?;
        st.serialize_field("class", &self.class)?;
        st.serialize_field("ladder_index", &self.ladder_index)?;
        st.serialize_field("kind", &self.kind)?;
        st.end()
    }
}

/// An optional window `[lo, hi]` of bases.
pub type BaseRange = (BigRational, BigRational);

/// Entropy of `V_q` for a base given by its defining sequence.
pub fn entropy_at(q: &BaseEnclosure, tol: &BigRational) -> Result<EntropyEnclosure> {
    let alpha = q.defining_alpha().ok_or(Error::NeedsDefiningSequence)?;
    Ok(entropy(&SubshiftAutomaton::for_quasi_greedy(alpha)?, tol))
}

fn kind_of(word: &FundamentalWord, factors: &[&FundamentalWord]) -> PlateauKind {
    let unit = unit_lift(word.alphabet());
    let ten = ten();
    if word == &unit {
        PlateauKind::Unit
    } else if factors.len() > 1 && factors[0] == &unit && factors[1..].iter().all(|f| **f == ten) {
        PlateauKind::StraddlesKl
    } else {
        PlateauKind::Plateau
    }
}

/// Irreducible and `n`-irreducible intervals generated by fundamental words of length `<= max_len`.
pub fn enumerate_plateaus(alphabet: Alphabet, max_len: usize, region: Option<&BaseRange>) -> Result<Vec<PlateauRecord>> {
    let base_tol = default_tolerance();
    let ent_tol = default_entropy_tolerance();
    let candidates: Vec<(FundamentalWord, WordClass, PlateauKind)> = enumerate_fundamental(alphabet, max_len)
        .into_iter()
        .filter_map(|w| {
            let dec = decompose(&w);
            let class = classify_decomposition(&dec);
            if class == WordClass::Reducible {
                return None;
            }
            let factors: Vec<&FundamentalWord> = dec.factors().collect();
            let kind = kind_of(&w, &factors);
            Some((w, class, kind))
        })
        .collect();
    let deepest = candidates
        .iter()
        .map(|(_, c, _)| match c {
            WordClass::NIrreducible(n) => *n,
            _ => 0,
        })
        .max()
        .unwrap_or(0);
    let steps = ladder(alphabet, deepest + 1, &base_tol);
    let records: Vec<Result<Option<PlateauRecord>>> = candidates
        .into_par_iter()
        .map(|(word, class, kind)| {
            let (q_l, q_r) = fundamental_interval(&word, &base_tol);
            if let Some((lo, hi)) = region {
                if q_r.hi() < lo || q_l.lo() > hi {
                    return Ok(None);
                }
            }
            let ladder_index = match kind {
                PlateauKind::Plateau => steps.iter().find(|s| s.contains_interval(&q_l, &q_r)).map(|s| s.n),
                _ => None,
            };
            let entropy = entropy_at(&q_l, &ent_tol)?;
            let entropy_right = entropy_at(&q_r, &ent_tol)?;
            Ok(Some(PlateauRecord { word, q_l, q_r, entropy, entropy_right, class, ladder_index, kind }))
        })
        .collect();
    records.into_iter().filter_map(|r| r.transpose()).collect()
}

/// The header line of a plateau table, stating what the enumeration covers.
pub fn plateau_meta(alphabet: Alphabet, max_len: usize, region: Option<&BaseRange>, count: usize) -> serde_json::Value {
    json!({
        "meta": {
            "M": alphabet.max_digit(),
            "max_len": max_len,
            "region": region.map(|(lo, hi)| [to_fraction(lo), to_fraction(hi)]),
            "records": count,
            "completeness": format!(
                "all irreducible and n-irreducible intervals generated by fundamental words of length <= {max_len}; \
                 the set of plateaus is infinite and dense, so shorter-word enumeration is never exhaustive"
            ),
        }
    })
}

/// JSON lines: the meta line, then one record per line.
pub fn plateau_json_lines(alphabet: Alphabet, max_len: usize, region: Option<&BaseRange>, records: &[PlateauRecord]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", plateau_meta(alphabet, max_len, region, records.len()));
    for r in records {
        let _ = writeln!(out, "{}", serde_json::to_string(r).expect("records serialize"));
    }
    out
}

/// Both sides of `H(q) = c·H*(Φ̂_a(q))`.
#[derive(Debug, Clone)]
pub struct BridgeReport {
    pub word: FundamentalWord,
    pub q: BaseEnclosure,
    pub image: BaseEnclosure,
    pub direct: EntropyEnclosure,
    pub image_entropy: EntropyEnclosure,
    pub factor: BigRational,
    pub scaled: EntropyEnclosure,
    pub agree: bool,
}

impl Serialize for BridgeReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("BridgeReport", 7)?;
        st.serialize_field("word", &self.word.to_string())?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("image", &self.image)?;
        st.serialize_field("direct", &self.direct)?;
        st.serialize_field("image_entropy", &self.image_entropy)?;
        st.serialize_field("factor", &to_fraction(&self.factor))?;
        st.serialize_field("agree", &self.agree)?;
        st.end()
    }
}

/// Computes `H(q)` directly and `H*(Φ̂_a(q)) / |a|`, and whether they agree within `tol`.
///
/// For the unit lift `|a|⁻¹` is `c_M`. `q` needs a defining sequence in `(a^∞, a⁺ā^∞]`.
pub fn verify_entropy_bridge(a: &FundamentalWord, q: &BaseEnclosure, tol: &BigRational) -> Result<BridgeReport> {
    let ent_tol = default_entropy_tolerance().min(tol.clone());
    let image = phi_hat(a, q, &default_tolerance())?;
    let direct = entropy_at(q, &ent_tol)?;
    let image_entropy = entropy_at(&image, &ent_tol)?;
    let factor = rat(1, a.len() as i64);
    let scaled = image_entropy.scale(&factor);
    let agree = direct.overlaps(&scaled, tol);
    Ok(BridgeReport { word: a.clone(), q: q.clone(), image, direct, image_entropy, factor, scaled, agree })
}

/// Bridge reports at both endpoints of `J_{u∘b}` for every binary fundamental `b` of length `<= max_len`.
///
/// These are the staircase on `[q_G, q_T]` next to its binary image.
pub fn bridge_table(alphabet: Alphabet, max_len: usize, tol: &BigRational) -> Result<Vec<BridgeReport>> {
    let unit = unit_lift(alphabet);
    let base_tol = default_tolerance();
    let points: Vec<BaseEnclosure> = enumerate_fundamental(Alphabet::BINARY, max_len)
        .into_iter()
        .map(|b| compose(&unit, &b))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flat_map(|c| {
            let (l, r) = fundamental_interval(&c, &base_tol);
            [l, r]
        })
        .collect();
    let mut reports: Vec<BridgeReport> = points
        .par_iter()
        .map(|q| verify_entropy_bridge(&unit, q, tol))
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(|x, y| x.q.certified_cmp(&y.q).unwrap_or(Ordering::Equal));
    reports.dedup_by(|x, y| x.q.defining_alpha() == y.q.defining_alpha());
    Ok(reports)
}

/// Why a staircase row has the bounds it has.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowStatus {
    /// Bounds from `depth` certified digits and the enumerated plateaus.
    Ok,
    /// Certified inside the plateau of this word.
    Plateau(String),
    /// Overlaps an endpoint of this word's plateau without being placed.
    Straddles(String),
    /// Only this many digits of `α(q)` could be certified.
    Partial(usize),
}

impl RowStatus {
    pub fn tag(&self) -> String {
        match self {
            RowStatus::Ok => "ok".to_string(),
            RowStatus::Plateau(w) => format!("plateau:{w}"),
            RowStatus::Straddles(w) => format!("straddles:{w}"),
            RowStatus::Partial(k) => format!("partial:{k}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct StaircaseRow {
    pub q: BaseEnclosure,
    pub entropy: EntropyEnclosure,
    pub dimension: (BigRational, BigRational),
    pub status: RowStatus,
}

#[derive(Debug, Clone)]
pub struct Staircase {
    pub rows: Vec<StaircaseRow>,
    /// No lower bound exceeds an upper bound further right.
    pub monotone: bool,
}

pub const STAIRCASE_HEADER: &str = "q_lo,q_hi,h_lo,h_hi,dim_lo,dim_hi,status";

impl Staircase {
    /// CSV, rounded outward to `places` decimals.
    pub fn to_csv(&self, places: usize) -> String {
        let mut out = String::from(STAIRCASE_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                to_decimal(r.q.lo(), places, Round::Down),
                to_decimal(r.q.hi(), places, Round::Up),
                to_decimal(&r.entropy.lo, places, Round::Down),
                to_decimal(&r.entropy.hi, places, Round::Up),
                to_decimal(&r.dimension.0, places, Round::Down),
                to_decimal(&r.dimension.1, places, Round::Up),
                r.status.tag(),
            );
        }
        out
    }

    pub fn default_places() -> usize {
        decimal_places_for(&default_entropy_tolerance())
    }
}

fn staircase_row(q: &BaseEnclosure, depth: usize, plateaus: &[PlateauRecord], tol: &BigRational) -> StaircaseRow {
    let prefix = match q.defining_alpha() {
        Some(alpha) => alpha.prefix(depth).into_digits(),
        None => alpha_digits_partial(q, depth),
    };
    let mut status = if prefix.len() < depth { RowStatus::Partial(prefix.len()) } else { RowStatus::Ok };
    let mut h = entropy_bounds_from_prefix(q, &prefix, tol);
    for p in plateaus.iter().filter(|p| p.kind == PlateauKind::Plateau) {
        let value = p.value();
        if p.contains(q) {
            h = h.meet(&value);
            status = RowStatus::Plateau(p.word.to_string());
            continue;
        }
        let right_of_left_end = p.q_l.certified_le(q);
        let left_of_left_end = q.certified_le(&p.q_l);
        let right_of_right_end = p.q_r.certified_le(q);
        let left_of_right_end = q.certified_le(&p.q_r);
        if right_of_left_end && h.lo < value.lo {
            h.lo = value.lo.clone();
        }
        if left_of_left_end && value.hi < h.hi {
            h.hi = value.hi.clone();
        }
        let placed = (right_of_left_end || left_of_left_end) && (right_of_right_end || left_of_right_end);
        if !placed && status == RowStatus::Ok {
            status = RowStatus::Straddles(p.word.to_string());
        }
    }
    if h.lo > h.hi {
        h.lo = h.hi.clone();
    }
    let dimension = hausdorff_dimension(q, &h);
    StaircaseRow { q: q.clone(), entropy: h, dimension, status }
}

/// Entropy and dimension enclosures over a grid of bases, in increasing order.
///
/// Each row combines counting bounds from `depth` digits of `α(q)` with the values of
/// the given plateaus: a plateau certified to the left raises the lower bound, one
/// certified to the right lowers the upper bound.
pub fn staircase(alphabet: Alphabet, grid: &[BaseEnclosure], depth: usize, plateaus: &[PlateauRecord]) -> Result<Staircase> {
    if let Some(q) = grid.iter().find(|q| q.alphabet() != alphabet) {
        return Err(Error::AlphabetMismatch { left: alphabet.max_digit(), right: q.alphabet().max_digit() });
    }
    let tol = default_entropy_tolerance();
    let mut sorted: Vec<&BaseEnclosure> = grid.iter().collect();
    sorted.sort_by(|x, y| x.lo().cmp(y.lo()).then(x.hi().cmp(y.hi())));
    let mut rows: Vec<StaircaseRow> = sorted.par_iter().map(|q| staircase_row(q, depth, plateaus, &tol)).collect();

    let mut monotone = true;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if rows[i].q.certified_le(&rows[j].q) && rows[i].entropy.lo > rows[j].entropy.hi {
                monotone = false;
            }
        }
    }
    // H is nondecreasing: propagate lower bounds rightwards and upper bounds leftwards
    for j in 1..rows.len() {
        for i in 0..j {
            if rows[i].q.certified_le(&rows[j].q) {
                if rows[i].entropy.lo > rows[j].entropy.lo && rows[i].entropy.lo <= rows[j].entropy.hi {
                    rows[j].entropy.lo = rows[i].entropy.lo.clone();
                }
                if rows[j].entropy.hi < rows[i].entropy.hi && rows[j].entropy.hi >= rows[i].entropy.lo {
                    rows[i].entropy.hi = rows[j].entropy.hi.clone();
                }
            }
        }
    }
    for r in rows.iter_mut() {
        r.dimension = hausdorff_dimension(&r.q, &r.entropy);
    }
    Ok(Staircase { rows, monotone })
}

/// `steps + 1` evenly spaced grid points on `[from, to]`, each widened by `radius`.
///
/// The point `M+1` is kept exact.
pub fn uniform_grid(alphabet: Alphabet, from: &BigRational, to: &BigRational, steps: usize, radius: &BigRational) -> Result<Vec<BaseEnclosure>> {
    let top = BigRational::from_integer((alphabet.max_digit() as i64 + 1).into());
    let steps = steps.max(1);
    (0..=steps)
        .map(|k| {
            let t = rat(k as i64, steps as i64);
            let q = from + (to - from) * t;
            if q == top || radius.is_zero() {
                BaseEnclosure::point(alphabet, q)
            } else {
                BaseEnclosure::around(alphabet, q, radius.clone())
            }
        })
        .collect()
}

/// The coefficient of `log 2` in `H(q′_n)`: `c_M / 2^{n-1}`.
pub fn ladder_entropy_target(alphabet: Alphabet, n: u32) -> BigRational {
    bridge_factor(alphabet) / BigRational::from_integer(num_bigint::BigInt::one() << (n.saturating_sub(1)))
}
