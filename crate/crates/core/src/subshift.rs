//! Finite presentations of the two-sided lexicographic subshift
//! `V_q = { x : reflect(α) ≼ σ^n x ≼ α for all n }` for eventually periodic `α = α(q)`.
//!
//! A state is a pair `(i, j)`: the length of the active match of the word read so
//! far against a prefix of `α` (upper constraint) and against a prefix of
//! `reflect(α)` (lower constraint). Because `α` is quasi-greedy, a strict drop
//! below `α_{i+1}` kills every pending upper constraint at once, so one counter
//! per side suffices. Positions past the preperiod are reduced modulo the period.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::expansions::{alpha_digits_partial, BaseEnclosure};
use crate::numeric::{ln_enclosure, pow2_neg, to_fraction};
use crate::words::{
    is_admissible_v, is_quasi_greedy_admissible, lex_compare, Alphabet, Digit, EpSequence, Word,
};

/// Default width of entropy enclosures.
pub fn default_entropy_tolerance() -> BigRational {
    pow2_neg(40)
}

/// Deterministic automaton whose paths from the start state spell the words of `V_q`.
#[derive(Debug, Clone)]
pub struct SubshiftAutomaton {
    alpha: EpSequence,
    states: Vec<(usize, usize)>,
    transitions: Vec<Vec<Option<usize>>>,
}

/// One side of the constraint: next match length after reading `d`, or `None` if `d` is forbidden.
#[inline]
fn upper_step(alpha: &EpSequence, i: usize, d: Digit) -> Option<usize> {
    let a = alpha.digit(i);
    match d.cmp(&a) {
        Ordering::Greater => None,
        Ordering::Less => Some(0),
        Ordering::Equal => Some(reduce(alpha, i + 1)),
    }
}

#[inline]
fn lower_step(alpha: &EpSequence, j: usize, d: Digit) -> Option<usize> {
    let b = alpha.alphabet().reflect_digit(alpha.digit(j));
    match d.cmp(&b) {
        Ordering::Less => None,
        Ordering::Greater => Some(0),
        Ordering::Equal => Some(reduce(alpha, j + 1)),
    }
}

#[inline]
fn reduce(alpha: &EpSequence, k: usize) -> usize {
    let (p, m) = (alpha.preperiod().len(), alpha.period().len());
    if k >= p + m {
        p + (k - p) % m
    } else {
        k
    }
}

impl SubshiftAutomaton {
    /// Builds the automaton for any quasi-greedy `α`. Its infinite paths are
    /// exactly `V_q`, so its entropy is `h(V_q)`; when `α` itself lies in `V`
    /// every accepted word also extends to a sequence of `V_q`.
    pub fn for_quasi_greedy(alpha: &EpSequence) -> Result<Self> {
        if !is_quasi_greedy_admissible(alpha) {
            return Err(Error::NotQuasiGreedy(alpha.to_string()));
        }
        let size = alpha.alphabet().size();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut states = vec![(0usize, 0usize)];
        let mut transitions: Vec<Vec<Option<usize>>> = Vec::new();
        index.insert((0, 0), 0);
        let mut next = 0;
        while next < states.len() {
            let (i, j) = states[next];
            let mut row = vec![None; size];
            for (d, slot) in row.iter_mut().enumerate() {
                let d = d as Digit;
                if let (Some(ni), Some(nj)) = (upper_step(alpha, i, d), lower_step(alpha, j, d)) {
                    let id = *index.entry((ni, nj)).or_insert_with(|| {
                        states.push((ni, nj));
                        states.len() - 1
                    });
                    *slot = Some(id);
                }
            }
            transitions.push(row);
            next += 1;
        }
        Ok(SubshiftAutomaton { alpha: alpha.clone(), states, transitions })
    }

    pub fn alpha(&self) -> &EpSequence {
        &self.alpha
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alpha.alphabet()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[(usize, usize)] {
        &self.states
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn next(&self, state: usize, d: Digit) -> Option<usize> {
        self.transitions[state].get(d as usize).copied().flatten()
    }

    /// State reached from `from` after reading `digits`.
    pub fn run_from(&self, from: usize, digits: &[Digit]) -> Option<usize> {
        digits.iter().try_fold(from, |s, &d| self.next(s, d))
    }

    pub fn run(&self, digits: &[Digit]) -> Option<usize> {
        self.run_from(self.start(), digits)
    }

    pub fn accepts(&self, digits: &[Digit]) -> bool {
        self.run(digits).is_some()
    }

    /// `(from, digit, to)` triples.
    pub fn edges(&self) -> impl Iterator<Item = (usize, Digit, usize)> + '_ {
        self.transitions.iter().enumerate().flat_map(|(s, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(d, t)| t.map(|t| (s, d as Digit, t)))
        })
    }

    fn graph(&self) -> DiGraph<(), ()> {
        let mut g = DiGraph::new();
        let nodes: Vec<_> = (0..self.states.len()).map(|_| g.add_node(())).collect();
        for (s, _, t) in self.edges() {
            g.add_edge(nodes[s], nodes[t], ());
        }
        g
    }

    /// Strongly connected components with their classification.
    fn components(&self) -> Vec<Component> {
        let g = self.graph();
        let mut comp_of = vec![usize::MAX; self.states.len()];
        let sccs = tarjan_scc(&g);
        for (c, members) in sccs.iter().enumerate() {
            for n in members {
                comp_of[n.index()] = c;
            }
        }
        sccs.iter()
            .enumerate()
            .map(|(c, members)| {
                let states: Vec<usize> = members.iter().map(|n| n.index()).collect();
                let mut internal = false;
                let mut exits = false;
                for &s in &states {
                    for t in self.transitions[s].iter().flatten() {
                        if comp_of[*t] == c {
                            internal = true;
                        } else {
                            exits = true;
                        }
                    }
                }
                Component { states, nontrivial: internal, bottom: !exits }
            })
            .collect()
    }
}

struct Component {
    states: Vec<usize>,
    nontrivial: bool,
    bottom: bool,
}

impl Serialize for SubshiftAutomaton {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SubshiftAutomaton", 4)?;
        st.serialize_field("alpha", &self.alpha.to_string())?;
        st.serialize_field("states", &self.states)?;
        let edges: Vec<(usize, Digit, usize)> = self.edges().collect();
        st.serialize_field("transitions", &edges)?;
        st.serialize_field("start", &self.start())?;
        st.end()
    }
}

/// The automaton of `V_q` for `α = α(q)`; `α` must be quasi-greedy and lie in `V`.
pub fn build_automaton(alpha: &EpSequence) -> Result<SubshiftAutomaton> {
    if !is_quasi_greedy_admissible(alpha) {
        return Err(Error::NotQuasiGreedy(alpha.to_string()));
    }
    if !is_admissible_v(alpha) {
        return Err(Error::NotAdmissible(alpha.to_string()));
    }
    SubshiftAutomaton::for_quasi_greedy(alpha)
}

/// `#B_n`: the number of length-`n` paths from the start state.
pub fn count_words(aut: &SubshiftAutomaton, n: usize) -> BigUint {
    let mut v = vec![BigUint::zero(); aut.state_count()];
    v[aut.start()] = BigUint::one();
    for _ in 0..n {
        let mut w = vec![BigUint::zero(); aut.state_count()];
        for (s, _, t) in aut.edges() {
            if !v[s].is_zero() {
                w[t] += &v[s];
            }
        }
        v = w;
    }
    v.into_iter().sum()
}

/// Certified enclosure of a topological entropy, in nats per symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyEnclosure {
    pub lo: BigRational,
    pub hi: BigRational,
    /// The exact growth rate `e^h`, when the bounds pin it to a rational.
    pub growth: Option<BigRational>,
}

impl EntropyEnclosure {
    pub fn zero() -> Self {
        EntropyEnclosure {
            lo: BigRational::zero(),
            hi: BigRational::zero(),
            growth: Some(BigRational::one()),
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        crate::numeric::to_f64(&self.lo) <= x && x <= crate::numeric::to_f64(&self.hi)
    }

    /// Do the two enclosures come within `slack` of each other?
    pub fn overlaps(&self, other: &EntropyEnclosure, slack: &BigRational) -> bool {
        self.lo <= &other.hi + slack && other.lo <= &self.hi + slack
    }

    /// Certified strict order: every value here is below every value there.
    pub fn strictly_below(&self, other: &EntropyEnclosure) -> bool {
        self.hi < other.lo
    }

    pub fn scale(&self, factor: &BigRational) -> EntropyEnclosure {
        EntropyEnclosure { lo: &self.lo * factor, hi: &self.hi * factor, growth: None }
    }

    /// Intersection with another enclosure of the same quantity.
    pub fn meet(&self, other: &EntropyEnclosure) -> EntropyEnclosure {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        let growth = self.growth.clone().or_else(|| other.growth.clone());
        EntropyEnclosure { lo, hi, growth }
    }

    /// Smallest enclosure containing both.
    pub fn join(&self, other: &EntropyEnclosure) -> EntropyEnclosure {
        let lo = (&self.lo).min(&other.lo).clone();
        let hi = (&self.hi).max(&other.hi).clone();
        let growth = if self.growth == other.growth { self.growth.clone() } else { None };
        EntropyEnclosure { lo, hi, growth }
    }
}

impl Serialize for EntropyEnclosure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("EntropyEnclosure", 2)?;
        st.serialize_field("lo", &to_fraction(&self.lo))?;
        st.serialize_field("hi", &to_fraction(&self.hi))?;
        st.end()
    }
}

/// Bits of working precision for a tolerance.
fn bits_for(tol: &BigRational) -> u32 {
    let mut bits = 8u32;
    while pow2_neg(bits) > *tol && bits < 4096 {
        bits += 1;
    }
    bits + 8
}

/// Collatz–Wielandt bounds on the spectral radius of `A + I` restricted to one
/// component, from power iteration with renormalized integer vectors.
fn component_growth(aut: &SubshiftAutomaton, comp: &[usize], rel_tol: f64) -> (BigRational, BigRational) {
    let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    // adjacency of A + I restricted to the component
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); comp.len()];
    for (k, &s) in comp.iter().enumerate() {
        adj[k].push(k);
        for t in aut.transitions[s].iter().flatten() {
            if let Some(&kt) = local.get(t) {
                adj[k].push(kt);
            }
        }
    }
    const TOP: u128 = 1 << 62;
    let mut v: Vec<u128> = vec![1; comp.len()];
    let mut best_lo = BigRational::one();
    let mut best_hi: Option<BigRational> = None;
    for _ in 0..200_000 {
        let bv: Vec<u128> = adj.iter().map(|row| row.iter().map(|&k| v[k]).sum()).collect();
        // bounds: min and max of (Bv)_k / v_k
        let mut lo_k = 0usize;
        let mut hi_k = 0usize;
        for k in 1..comp.len() {
            // (bv[k]/v[k]) < (bv[lo_k]/v[lo_k])  <=>  bv[k] v[lo_k] < bv[lo_k] v[k]
            if cross_lt(bv[k], v[k], bv[lo_k], v[lo_k]) {
                lo_k = k;
            }
            if cross_lt(bv[hi_k], v[hi_k], bv[k], v[k]) {
                hi_k = k;
            }
        }
        let lo = BigRational::new(bv[lo_k].into(), v[lo_k].into());
        let hi = BigRational::new(bv[hi_k].into(), v[hi_k].into());
        if lo > best_lo {
            best_lo = lo;
        }
        if best_hi.as_ref().is_none_or(|h| &hi < h) {
            best_hi = Some(hi);
        }
        let h = best_hi.as_ref().unwrap();
        let gap = crate::numeric::to_f64(&(h - &best_lo)) / crate::numeric::to_f64(&best_lo);
        if gap <= rel_tol {
            break;
        }
        let max = *bv.iter().max().unwrap();
        let shift = if max > TOP { 128 - max.leading_zeros() - 62 } else { 0 };
        v = bv.iter().map(|&x| (x >> shift).max(1)).collect();
    }
    let one = BigRational::one();
    let lo = (&best_lo - &one).max(one.clone());
    let hi = (best_hi.unwrap() - &one).max(one);
    (lo, hi)
}

#[inline]
fn cross_lt(a_num: u128, a_den: u128, b_num: u128, b_den: u128) -> bool {
    // a_num / a_den < b_num / b_den, all values below 2^66 so products fit in 2^132: use widening
    let lhs = BigUint::from(a_num) * BigUint::from(b_den);
    let rhs = BigUint::from(b_num) * BigUint::from(a_den);
    lhs < rhs
}

/// Topological entropy of the language of `aut`, enclosed to width about `tol`.
pub fn entropy(aut: &SubshiftAutomaton, tol: &BigRational) -> EntropyEnclosure {
    let bits = bits_for(tol);
    let rel_tol = (crate::numeric::to_f64(tol) / 4.0).max(1e-17);
    let mut best: Option<(BigRational, BigRational)> = None;
    for comp in aut.components().into_iter().filter(|c| c.nontrivial) {
        let (lo, hi) = component_growth(aut, &comp.states, rel_tol);
        best = Some(match best {
            None => (lo, hi),
            Some((blo, bhi)) => (blo.max(lo), bhi.max(hi)),
        });
    }
    let Some((glo, ghi)) = best else {
        return EntropyEnclosure::zero();
    };
    let ln_lo = if glo.is_one() { BigRational::zero() } else { ln_enclosure(&glo, bits).0 };
    let ln_hi = if ghi.is_one() { BigRational::zero() } else { ln_enclosure(&ghi, bits).1 };
    let growth = if glo == ghi { Some(glo) } else { None };
    EntropyEnclosure { lo: ln_lo.max(BigRational::zero()), hi: ln_hi, growth }
}

/// Outcome of the transitivity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitivityReport {
    pub transitive: bool,
    pub states: usize,
    pub components: usize,
    pub nontrivial_components: usize,
    pub bottom_components: usize,
}

/// Is every word readable from the start state also readable from some state of `comp`?
fn component_covers_language(aut: &SubshiftAutomaton, comp: &[usize]) -> bool {
    let size = aut.alphabet().size();
    let mut start_set: Vec<usize> = comp.to_vec();
    start_set.sort_unstable();
    let mut seen: HashSet<(usize, Vec<usize>)> = HashSet::new();
    let mut queue = VecDeque::new();
    queue.push_back((aut.start(), start_set));
    while let Some((x, set)) = queue.pop_front() {
        if set.binary_search(&x).is_ok() {
            continue;
        }
        if !seen.insert((x, set.clone())) {
            continue;
        }
        for d in 0..size as Digit {
            let Some(nx) = aut.next(x, d) else { continue };
            let mut nset: Vec<usize> = set.iter().filter_map(|&s| aut.next(s, d)).collect();
            if nset.is_empty() {
                return false;
            }
            nset.sort_unstable();
            nset.dedup();
            queue.push_back((nx, nset));
        }
    }
    true
}

/// Transitivity of the presented subshift, with the component structure behind it.
///
/// The language is transitive exactly when every bottom strongly connected
/// component can read every word of the language.
pub fn transitivity_report(aut: &SubshiftAutomaton) -> TransitivityReport {
    let comps = aut.components();
    let bottoms: Vec<&Component> = comps.iter().filter(|c| c.bottom).collect();
    let transitive = bottoms
        .iter()
        .all(|c| c.nontrivial && component_covers_language(aut, &c.states));
    TransitivityReport {
        transitive,
        states: aut.state_count(),
        components: comps.len(),
        nontrivial_components: comps.iter().filter(|c| c.nontrivial).count(),
        bottom_components: bottoms.len(),
    }
}

pub fn is_transitive(aut: &SubshiftAutomaton) -> bool {
    transitivity_report(aut).transitive
}

/// The shortest (then lexicographically smallest) `w` with `u·w·v` in the language.
pub fn connect_words(aut: &SubshiftAutomaton, u: &Word, v: &Word) -> Result<Vec<Digit>> {
    let after_u = aut.run(u.digits()).ok_or_else(|| Error::NotInLanguage(u.to_string()))?;
    if !aut.accepts(v.digits()) {
        return Err(Error::NotInLanguage(v.to_string()));
    }
    let size = aut.alphabet().size();
    let reads_v = |s: usize| aut.run_from(s, v.digits()).is_some();
    let mut parent: Vec<Option<(usize, Digit)>> = vec![None; aut.state_count()];
    let mut seen = vec![false; aut.state_count()];
    seen[after_u] = true;
    let mut queue = VecDeque::from([after_u]);
    while let Some(s) = queue.pop_front() {
        if reads_v(s) {
            let mut w = Vec::new();
            let mut at = s;
            while let Some((prev, d)) = parent[at] {
                w.push(d);
                at = prev;
            }
            w.reverse();
            return Ok(w);
        }
        for d in 0..size as Digit {
            if let Some(t) = aut.next(s, d) {
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((s, d));
                    queue.push_back(t);
                }
            }
        }
    }
    Err(Error::NoConnection)
}

/// Number of length-`n` words all of whose factors lie between the matching
/// prefixes of `reflect(α)` and `α`. Only the first `n` digits of `α` matter.
pub fn count_prefix_constrained(alphabet: Alphabet, prefix: &[Digit], n: usize) -> BigUint {
    assert!(prefix.len() >= n, "need n digits of α");
    let max = alphabet.max_digit();
    let mut layer: HashMap<(usize, usize), BigUint> = HashMap::from([((0, 0), BigUint::one())]);
    for _ in 0..n {
        let mut next: HashMap<(usize, usize), BigUint> = HashMap::new();
        for ((i, j), c) in &layer {
            for d in 0..=max {
                let up = match d.cmp(&prefix[*i]) {
                    Ordering::Greater => continue,
                    Ordering::Less => 0,
                    Ordering::Equal => i + 1,
                };
                let low = match d.cmp(&(max - prefix[*j])) {
                    Ordering::Less => continue,
                    Ordering::Greater => 0,
                    Ordering::Equal => j + 1,
                };
                // a full-length match can only happen on the last step; clamp so the
                // index stays valid (it is never read again)
                let key = (up.min(n - 1), low.min(n - 1));
                *next.entry(key).or_insert_with(BigUint::zero) += c;
            }
        }
        layer = next;
    }
    layer.into_values().sum()
}

/// Entropy bounds at a base known only through an enclosure, using `n` digits of `α(q)`.
pub fn entropy_bounds_at(q: &BaseEnclosure, n: usize) -> Result<EntropyEnclosure> {
    let prefix = alpha_digits_partial(q, n);
    if prefix.len() < n {
        return Err(Error::PrecisionExhausted { certified: prefix.len() });
    }
    Ok(entropy_bounds_from_prefix(q, &prefix, &default_entropy_tolerance()))
}

/// Entropy bounds from a certified prefix of `α(q)` (possibly shorter than requested).
pub fn entropy_bounds_from_prefix(q: &BaseEnclosure, prefix: &[Digit], tol: &BigRational) -> EntropyEnclosure {
    let alphabet = q.alphabet();
    let n = prefix.len();
    let bits = bits_for(tol);
    let upper = if n == 0 {
        ln_enclosure(&BigRational::from_integer((alphabet.size() as i64).into()), bits).1
    } else {
        let count = count_prefix_constrained(alphabet, prefix, n);
        if count <= BigUint::one() {
            BigRational::zero()
        } else {
            let (_, hi) = ln_enclosure(&BigRational::from_integer(count.into()), bits);
            hi / BigRational::from_integer((n as i64).into())
        }
    };
    let upper_enc = EntropyEnclosure { lo: BigRational::zero(), hi: upper, growth: None };

    if let Some(alpha) = q.defining_alpha() {
        let aut = SubshiftAutomaton::for_quasi_greedy(alpha).expect("defining sequences are quasi-greedy");
        return entropy(&aut, tol).meet(&upper_enc);
    }
    let lower = largest_periodic_below(alphabet, prefix)
        .and_then(|c| SubshiftAutomaton::for_quasi_greedy(&c).ok())
        .map(|aut| entropy(&aut, tol).lo)
        .unwrap_or_else(BigRational::zero);
    let lower = if lower > upper_enc.hi { upper_enc.hi.clone() } else { lower };
    EntropyEnclosure { lo: lower, hi: upper_enc.hi, growth: None }
}

/// The lexicographically largest sequence among `(a_1…a_k)^∞` and `(a_1…a_k⁻)^∞`
/// that is quasi-greedy and certified `≼ α` by the known prefix.
pub fn largest_periodic_below(alphabet: Alphabet, prefix: &[Digit]) -> Option<EpSequence> {
    let n = prefix.len();
    let mut best: Option<EpSequence> = None;
    for k in 1..=n {
        let block = &prefix[..k];
        let mut candidates = Vec::with_capacity(2);
        // (a_1…a_k)^∞ agrees with the prefix for k digits; certified only if it drops below later
        let plain = EpSequence::from_parts(alphabet, Vec::new(), block.to_vec());
        if (k..n).any(|i| plain.digit(i) != prefix[i])
            && (k..n).find(|&i| plain.digit(i) != prefix[i]).is_some_and(|i| plain.digit(i) < prefix[i])
        {
            candidates.push(plain);
        }
        if block[k - 1] > 0 {
            let mut dec = block.to_vec();
            dec[k - 1] -= 1;
            candidates.push(EpSequence::from_parts(alphabet, Vec::new(), dec));
        }
        for c in candidates {
            if !is_quasi_greedy_admissible(&c) {
                continue;
            }
            if best.as_ref().is_none_or(|b| lex_compare(&c, b) == Ordering::Greater) {
                best = Some(c);
            }
        }
    }
    best
}

/// Enclosure of `h / ln q`, the Hausdorff dimension of the univoque set.
pub fn hausdorff_dimension(q: &BaseEnclosure, h: &EntropyEnclosure) -> (BigRational, BigRational) {
    if h.hi.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    if let Some(g) = &h.growth {
        if q.is_point() && q.lo() == g {
            return (BigRational::one(), BigRational::one());
        }
    }
    let mut bits = 64u32;
    loop {
        let (ln_lo, _) = ln_enclosure(q.lo(), bits);
        let (_, ln_hi) = ln_enclosure(q.hi(), bits);
        if ln_lo > BigRational::zero() {
            return (&h.lo / ln_hi, &h.hi / ln_lo);
        }
        bits *= 2;
    }
}

/// Lossy value of a count's logarithm per symbol, for diagnostics.
pub fn approx_log_growth(count: &BigUint, n: usize) -> f64 {
    let bits = count.bits() as f64;
    let lead = count.to_f64().unwrap_or(f64::INFINITY);
    if lead.is_finite() {
        lead.ln() / n as f64
    } else {
        bits * std::f64::consts::LN_2 / n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansions::{base_from_alpha, default_tolerance};
    use crate::numeric::{int, to_f64};

    fn ab(m: Digit) -> Alphabet {
        Alphabet::new(m).unwrap()
    }

    fn ep(m: Digit, s: &str) -> EpSequence {
        EpSequence::parse(ab(m), s).unwrap()
    }

    fn tol() -> BigRational {
        default_entropy_tolerance()
    }

    #[test]
    fn full_shift() {
        let aut = build_automaton(&ep(1, "(1)")).unwrap();
        assert_eq!(aut.state_count(), 1);
        assert_eq!(aut.edges().count(), 2);
        assert_eq!(count_words(&aut, 10), BigUint::from(1024u32));
        let h = entropy(&aut, &tol());
        assert_eq!(h.growth, Some(int(2)));
        assert!(h.contains(2f64.ln()));
        assert!(is_transitive(&aut));
    }

    #[test]
    fn golden_mean_type_shifts() {
        let aut = build_automaton(&ep(1, "(110)")).unwrap();
        assert_eq!(count_words(&aut, 4), BigUint::from(10u32));
        let h = entropy(&aut, &tol());
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(h.contains(phi.ln()), "{:?}", (to_f64(&h.lo), to_f64(&h.hi)));
        assert!(to_f64(&h.width()) < 1e-11);
        assert!(is_transitive(&aut));
        // no 000 and no 111
        assert!(!aut.accepts(&[1, 1, 1]) && !aut.accepts(&[0, 0, 0]) && aut.accepts(&[1, 1, 0, 1, 1]));
    }

    #[test]
    fn alternating_shift() {
        let aut = build_automaton(&ep(1, "(10)")).unwrap();
        assert_eq!(count_words(&aut, 5), BigUint::from(2u32));
        assert_eq!(count_words(&aut, 0), BigUint::from(1u32));
        let h = entropy(&aut, &tol());
        assert_eq!(h, EntropyEnclosure::zero());
    }

    #[test]
    fn transitive_base_entropy() {
        let aut = build_automaton(&ep(1, "11(01)")).unwrap();
        let h = entropy(&aut, &tol());
        assert!(h.contains(2f64.ln() / 2.0));
        assert!(to_f64(&h.width()) < 1e-11);
    }

    #[test]
    fn rejects_non_admissible() {
        assert!(matches!(build_automaton(&ep(1, "(100)")), Err(Error::NotAdmissible(_))));
        assert!(matches!(build_automaton(&ep(1, "(01)")), Err(Error::NotQuasiGreedy(_))));
    }

    #[test]
    fn connecting_words() {
        let aut = build_automaton(&ep(1, "(110)")).unwrap();
        let u = Word::parse(ab(1), "110").unwrap();
        let v = Word::parse(ab(1), "001").unwrap();
        let w = connect_words(&aut, &u, &v).unwrap();
        assert!(!w.is_empty());
        let mut all = u.digits().to_vec();
        all.extend(&w);
        all.extend(v.digits());
        assert!(aut.accepts(&all));
        let bad = Word::parse(ab(1), "111").unwrap();
        assert!(matches!(connect_words(&aut, &u, &bad), Err(Error::NotInLanguage(_))));
    }

    #[test]
    fn reducible_word_is_not_transitive() {
        // 110100 = 10 ∘ 110
        let aut = build_automaton(&ep(1, "(110100)")).unwrap();
        let report = transitivity_report(&aut);
        assert!(!report.transitive, "{report:?}");
    }

    #[test]
    fn bounds_at_top_base() {
        let two = BaseEnclosure::point(ab(1), int(2)).unwrap();
        let h = entropy_bounds_at(&two, 10).unwrap();
        assert!(h.contains(2f64.ln()));
        assert_eq!(h.growth, Some(int(2)));
    }

    #[test]
    fn bounds_at_transitive_base_without_sequence() {
        let qt = base_from_alpha(&ep(1, "11(01)"), &default_tolerance()).unwrap();
        let bare = BaseEnclosure::new(ab(1), qt.lo().clone(), qt.hi().clone()).unwrap();
        match entropy_bounds_at(&bare, 20) {
            Ok(h) => assert!(h.contains(2f64.ln() / 2.0)),
            Err(Error::PrecisionExhausted { .. }) => {}
            Err(e) => panic!("{e}"),
        }
        let h = entropy_bounds_at(&qt, 20).unwrap();
        assert!(h.contains(2f64.ln() / 2.0));
    }

    #[test]
    fn dimension_examples() {
        let two = BaseEnclosure::point(ab(1), int(2)).unwrap();
        let h = entropy(&build_automaton(&ep(1, "(1)")).unwrap(), &tol());
        assert_eq!(hausdorff_dimension(&two, &h), (int(1), int(1)));
        let three = BaseEnclosure::point(ab(2), int(3)).unwrap();
        let h = entropy(&build_automaton(&ep(2, "(2)")).unwrap(), &tol());
        assert_eq!(hausdorff_dimension(&three, &h), (int(1), int(1)));
        let qt = base_from_alpha(&ep(1, "11(01)"), &default_tolerance()).unwrap();
        let h = entropy(&build_automaton(&ep(1, "11(01)")).unwrap(), &tol());
        let (lo, hi) = hausdorff_dimension(&qt, &h);
        let want = 2f64.ln() / 2.0 / 1.801_937_735_804_838f64.ln();
        assert!(to_f64(&lo) <= want + 1e-12 && want - 1e-12 <= to_f64(&hi));
    }
}
