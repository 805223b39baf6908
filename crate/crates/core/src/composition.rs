//! The block automaton of a fundamental word, the substitution maps built on
//! it, composition of fundamental words and irreducible decomposition.
//!
//! The automaton has vertices Start, A, B and five edges, each carrying a block
//! label (one of `a⁺`, `reflect(a⁺)`, `a`, `ā`) and a bit:
//!
//! | edge | from  | to | block          | bit |
//! |------|-------|----|----------------|-----|
//! | e0   | Start | A  | `a⁺`           | 1   |
//! | e1   | A     | B  | `reflect(a⁺)`  | 0   |
//! | e2   | B     | B  | `a`            | 0   |
//! | e3   | B     | A  | `a⁺`           | 1   |
//! | e4   | A     | A  | `ā`            | 1   |

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::expansions::{base_from_alpha, base_from_digit_stream, thue_morse, BaseEnclosure};
use crate::words::{
    is_quasi_greedy_admissible, lex_compare, Alphabet, Digit, EpSequence, FundamentalWord, Word,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vertex {
    Start,
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edge {
    E0,
    E1,
    E2,
    E3,
    E4,
}

/// The four blocks a word of `X_a` is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    /// `a`
    Word,
    /// `a⁺`
    Plus,
    /// `ā`
    Bar,
    /// `reflect(a⁺)`
    PlusBar,
}

impl Edge {
    pub const ALL: [Edge; 5] = [Edge::E0, Edge::E1, Edge::E2, Edge::E3, Edge::E4];

    pub fn source(self) -> Vertex {
        match self {
            Edge::E0 => Vertex::Start,
            Edge::E1 | Edge::E4 => Vertex::A,
            Edge::E2 | Edge::E3 => Vertex::B,
        }
    }

    pub fn target(self) -> Vertex {
        match self {
            Edge::E0 | Edge::E3 | Edge::E4 => Vertex::A,
            Edge::E1 | Edge::E2 => Vertex::B,
        }
    }

    pub fn bit(self) -> Digit {
        match self {
            Edge::E0 | Edge::E3 | Edge::E4 => 1,
            Edge::E1 | Edge::E2 => 0,
        }
    }

    pub fn block(self) -> Block {
        match self {
            Edge::E0 | Edge::E3 => Block::Plus,
            Edge::E1 => Block::PlusBar,
            Edge::E2 => Block::Word,
            Edge::E4 => Block::Bar,
        }
    }

    /// The out-edge of `from` carrying `bit`, if any.
    pub fn by_bit(from: Vertex, bit: Digit) -> Option<Edge> {
        match (from, bit) {
            (Vertex::Start, 1) => Some(Edge::E0),
            (Vertex::A, 1) => Some(Edge::E4),
            (Vertex::A, 0) => Some(Edge::E1),
            (Vertex::B, 0) => Some(Edge::E2),
            (Vertex::B, 1) => Some(Edge::E3),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.index())
    }
}

impl Serialize for Edge {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The labeled graph for one fundamental word: the fixed edge set plus the four blocks.
#[derive(Debug, Clone)]
pub struct BlockAutomaton {
    word: FundamentalWord,
    blocks: [Vec<Digit>; 4],
}

impl BlockAutomaton {
    pub fn new(a: &FundamentalWord) -> Self {
        let blocks = [
            a.word().digits().to_vec(),
            a.plus().into_digits(),
            a.bar().into_digits(),
            a.plus_bar().into_digits(),
        ];
        BlockAutomaton { word: a.clone(), blocks }
    }

    pub fn word(&self) -> &FundamentalWord {
        &self.word
    }

    pub fn block_len(&self) -> usize {
        self.word.len()
    }

    pub fn block(&self, b: Block) -> &[Digit] {
        let i = match b {
            Block::Word => 0,
            Block::Plus => 1,
            Block::Bar => 2,
            Block::PlusBar => 3,
        };
        &self.blocks[i]
    }

    /// The out-edge of `from` whose block label is `chunk`. Out-edges of A and B
    /// always carry distinct blocks, so this is deterministic.
    pub fn step(&self, from: Vertex, chunk: &[Digit]) -> Option<Edge> {
        Edge::ALL
            .into_iter()
            .find(|e| e.source() == from && self.block(e.block()) == chunk)
    }

    /// The first edge of a parse, for a word whose first block is `chunk`.
    fn first_edge(&self, chunk: &[Digit], whole: &Word) -> Result<Edge> {
        if chunk == self.block(Block::Plus) {
            return Ok(Edge::E0);
        }
        if chunk == self.block(Block::PlusBar) {
            return Ok(Edge::E1);
        }
        let is_word = chunk == self.block(Block::Word);
        let is_bar = chunk == self.block(Block::Bar);
        if (is_word || is_bar) && self.word.is_self_reflected() {
            return Err(Error::AmbiguousStart(whole.to_string()));
        }
        if is_word {
            return Ok(Edge::E2);
        }
        if is_bar {
            return Ok(Edge::E4);
        }
        Err(Error::NotInXa(whole.to_string()))
    }
}

/// The edge path spelling a block concatenation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockParse {
    pub path: Vec<Edge>,
    #[serde(skip)]
    pub blocks: Vec<Block>,
}

impl BlockParse {
    pub fn bits(&self) -> Vec<Digit> {
        self.path.iter().map(|e| e.bit()).collect()
    }
}

fn check_same_alphabet(a: &FundamentalWord, w: &Word) -> Result<()> {
    if a.alphabet() != w.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: a.alphabet().max_digit(),
            right: w.alphabet().max_digit(),
        });
    }
    Ok(())
}

fn parse_with(aut: &BlockAutomaton, w: &Word) -> Result<BlockParse> {
    let len = aut.block_len();
    if w.len() % len != 0 {
        return Err(Error::NotInXa(w.to_string()));
    }
    let mut chunks = w.digits().chunks(len);
    let first = aut.first_edge(chunks.next().expect("nonempty word"), w)?;
    let mut path = vec![first];
    let mut at = first.target();
    for chunk in chunks {
        let e = aut.step(at, chunk).ok_or_else(|| Error::NotInXa(w.to_string()))?;
        path.push(e);
        at = e.target();
    }
    let blocks = path.iter().map(|e| e.block()).collect();
    Ok(BlockParse { path, blocks })
}

/// The unique path through the block automaton of `a` that spells `w`.
pub fn parse_blocks(a: &FundamentalWord, w: &Word) -> Result<BlockParse> {
    check_same_alphabet(a, w)?;
    parse_with(&BlockAutomaton::new(a), w)
}

/// `Φ_a(w)`: the bits along the parsed path.
pub fn phi(a: &FundamentalWord, w: &Word) -> Result<Word> {
    let parse = parse_blocks(a, w)?;
    Ok(Word::new(Alphabet::BINARY, parse.bits()).expect("bits are binary digits"))
}

fn bits_to_blocks(aut: &BlockAutomaton, bits: &[Digit], start: Vertex) -> Result<(Vec<Digit>, Vertex)> {
    let mut out = Vec::with_capacity(bits.len() * aut.block_len());
    let mut at = start;
    for &bit in bits {
        let e = Edge::by_bit(at, bit).ok_or_else(|| {
            Error::BadStart(bits.iter().map(|d| d.to_string()).collect::<String>())
        })?;
        out.extend_from_slice(aut.block(e.block()));
        at = e.target();
    }
    Ok((out, at))
}

/// `Φ_a^{-1}(b)` for a binary word starting with 1.
pub fn phi_inverse(a: &FundamentalWord, b: &Word) -> Result<Word> {
    if b.alphabet() != Alphabet::BINARY {
        return Err(Error::AlphabetMismatch { left: 1, right: b.alphabet().max_digit() });
    }
    if b.first() != 1 {
        return Err(Error::BadStart(b.to_string()));
    }
    let aut = BlockAutomaton::new(a);
    let (digits, _) = bits_to_blocks(&aut, b.digits(), Vertex::Start)?;
    Word::new(a.alphabet(), digits)
}

/// `a ∘ b = Φ_a^{-1}(b)` for `a` fundamental over any alphabet and `b` fundamental over `{0,1}`.
pub fn compose(a: &FundamentalWord, b: &FundamentalWord) -> Result<FundamentalWord> {
    let w = phi_inverse(a, b.word())?;
    FundamentalWord::new(w).map_err(|e| {
        Error::InternalInvariant(format!("composition {a} ∘ {b} is not fundamental: {e}"))
    })
}

/// An irreducible factorization `c = head ∘ tail_1 ∘ … ∘ tail_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub head: FundamentalWord,
    pub tail: Vec<FundamentalWord>,
}

impl Decomposition {
    pub fn factors(&self) -> impl Iterator<Item = &FundamentalWord> {
        std::iter::once(&self.head).chain(self.tail.iter())
    }

    pub fn len(&self) -> usize {
        1 + self.tail.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Folds the factors back together with `∘`.
    pub fn recompose(&self) -> Result<FundamentalWord> {
        self.tail.iter().try_fold(self.head.clone(), |acc, t| compose(&acc, t))
    }
}

impl Serialize for Decomposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.factors().map(|w| w.to_string()))
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors().map(|w| w.to_string()).collect();
        write!(f, "{}", parts.join(" ∘ "))
    }
}

/// The shortest proper head `h` with `c = h ∘ rest`, and the rest.
fn split_head(c: &FundamentalWord) -> Option<(FundamentalWord, FundamentalWord)> {
    let n = c.len();
    let min_len = if c.alphabet().max_digit() == 1 { 2 } else { 1 };
    for d in (min_len..n).filter(|d| n % d == 0) {
        let Ok(candidate) = c.word().prefix(d).decrement_last() else {
            continue;
        };
        let Ok(head) = FundamentalWord::new(candidate) else {
            continue;
        };
        let Ok(image) = phi(&head, c.word()) else {
            continue;
        };
        if let Ok(rest) = FundamentalWord::new(image) {
            return Some((head, rest));
        }
    }
    None
}

/// The unique factorization of `c` into irreducible fundamental words.
pub fn decompose(c: &FundamentalWord) -> Decomposition {
    let (head, mut rest) = match split_head(c) {
        Some(parts) => parts,
        None => return Decomposition { head: c.clone(), tail: Vec::new() },
    };
    let mut tail = Vec::new();
    while let Some((h, r)) = split_head(&rest) {
        tail.push(h);
        rest = r;
    }
    tail.push(rest);
    Decomposition { head, tail }
}

/// Where a fundamental word sits in the irreducibility hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WordClass {
    Irreducible,
    /// `u ∘ (10)^{∘(n-1)} ∘ b` with `u` the unit lift and `b` irreducible over `{0,1}`.
    NIrreducible(u32),
    Reducible,
}

impl WordClass {
    pub fn tag(&self) -> String {
        match self {
            WordClass::Irreducible => "irreducible".to_string(),
            WordClass::NIrreducible(n) => format!("{n}-irreducible"),
            WordClass::Reducible => "reducible".to_string(),
        }
    }
}

impl fmt::Display for WordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl Serialize for WordClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn classify_decomposition(dec: &Decomposition) -> WordClass {
    if dec.tail.is_empty() {
        return WordClass::Irreducible;
    }
    let unit = unit_lift(dec.head.alphabet());
    let ten = ten();
    let middle = &dec.tail[..dec.tail.len() - 1];
    if dec.head == unit && middle.iter().all(|w| w == &ten) {
        WordClass::NIrreducible(dec.tail.len() as u32)
    } else {
        WordClass::Reducible
    }
}

pub fn classify(c: &FundamentalWord) -> WordClass {
    classify_decomposition(&decompose(c))
}

/// The binary fundamental word `10`.
pub fn ten() -> FundamentalWord {
    FundamentalWord::new(Word::new(Alphabet::BINARY, vec![1, 0]).expect("binary")).expect("10 is fundamental")
}

/// The unit lift: `k` for `M = 2k`, `(k+1)k` for `M = 2k+1`.
pub fn unit_lift(alphabet: Alphabet) -> FundamentalWord {
    let m = alphabet.max_digit();
    let k = m / 2;
    let digits = if m % 2 == 0 { vec![k] } else { vec![k + 1, k] };
    FundamentalWord::new(Word::new(alphabet, digits).expect("digits below M"))
        .expect("the unit lift is fundamental")
}

/// `a_n = u ∘ (10)^{∘(n-1)}`, whose interval has right endpoint `q_n′`.
pub fn ladder_word(alphabet: Alphabet, n: u32) -> FundamentalWord {
    assert!(n >= 1);
    let mut w = unit_lift(alphabet);
    for _ in 1..n {
        w = compose(&w, &ten()).expect("composition with 10 is defined");
    }
    w
}

/// Rewrites `s` as `blocks(pre) blocks(period)^∞` with both parts a multiple of `len` long.
fn block_aligned(s: &EpSequence, len: usize) -> (Vec<Digit>, Vec<Digit>) {
    let p = s.preperiod().len().div_ceil(len) * len;
    let m = num_integer::lcm(s.period().len(), len);
    let pre = (0..p).map(|i| s.digit(i)).collect();
    let period = (p..p + m).map(|i| s.digit(i)).collect();
    (pre, period)
}

/// `Φ_a` applied to an eventually periodic sequence beginning with `a⁺`.
pub fn phi_sequence(a: &FundamentalWord, s: &EpSequence) -> Result<EpSequence> {
    if a.alphabet() != s.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: a.alphabet().max_digit(),
            right: s.alphabet().max_digit(),
        });
    }
    let aut = BlockAutomaton::new(a);
    let len = aut.block_len();
    let (pre, period) = block_aligned(s, len);
    let not_in = || Error::NotInXa(s.to_string());

    let mut bits = Vec::new();
    let mut at = Vertex::Start;
    let feed = |at: &mut Vertex, chunk: &[Digit], bits: &mut Vec<Digit>| -> Result<()> {
        let e = match *at {
            Vertex::Start if chunk == aut.block(Block::Plus) => Edge::E0,
            Vertex::Start => return Err(not_in()),
            v => aut.step(v, chunk).ok_or_else(not_in)?,
        };
        bits.push(e.bit());
        *at = e.target();
        Ok(())
    };
    for chunk in pre.chunks(len) {
        feed(&mut at, chunk, &mut bits)?;
    }
    // run the period until the vertex at a period boundary repeats
    let mut seen: HashMap<Vertex, usize> = HashMap::new();
    loop {
        if let Some(&start) = seen.get(&at) {
            let periodic = bits.split_off(start);
            return Ok(EpSequence::new(Alphabet::BINARY, bits, periodic).expect("binary bits"));
        }
        seen.insert(at, bits.len());
        for chunk in period.chunks(len) {
            feed(&mut at, chunk, &mut bits)?;
        }
    }
}

/// `Φ_a^{-1}` applied to an eventually periodic binary sequence beginning with 1.
pub fn phi_inverse_sequence(a: &FundamentalWord, b: &EpSequence) -> Result<EpSequence> {
    if b.alphabet() != Alphabet::BINARY || b.digit(0) != 1 {
        return Err(Error::BadStart(b.to_string()));
    }
    let aut = BlockAutomaton::new(a);
    let (mut out, mut at) = bits_to_blocks(&aut, b.preperiod(), Vertex::Start)?;
    let mut seen: HashMap<Vertex, usize> = HashMap::new();
    loop {
        if let Some(&start) = seen.get(&at) {
            let periodic = out.split_off(start);
            return EpSequence::new(a.alphabet(), out, periodic);
        }
        seen.insert(at, out.len());
        let (chunk, next) = bits_to_blocks(&aut, b.period(), at)?;
        out.extend(chunk);
        at = next;
    }
}

/// `Φ̂_a(q)`: the binary base whose quasi-greedy expansion is `Φ_a(α(q))`.
///
/// `q` must carry its defining sequence and lie in `(q_L(a), q_R(a)]`.
pub fn phi_hat(a: &FundamentalWord, q: &BaseEnclosure, tol: &BigRational) -> Result<BaseEnclosure> {
    let alpha = q.defining_alpha().ok_or(Error::NeedsDefiningSequence)?;
    let above_left = lex_compare(alpha, &a.left_alpha()).is_gt();
    let below_right = lex_compare(alpha, &a.right_alpha()).is_le();
    if !(above_left && below_right) {
        return Err(Error::NotInXa(alpha.to_string()));
    }
    let image = phi_sequence(a, alpha)?;
    if !is_quasi_greedy_admissible(&image) {
        return Err(Error::NotQuasiGreedy(image.to_string()));
    }
    base_from_alpha(&image, tol)
}

/// `Φ̂_a^{-1}(q̂)` for a binary base given by its defining sequence.
pub fn phi_hat_inverse(a: &FundamentalWord, q_hat: &BaseEnclosure, tol: &BigRational) -> Result<BaseEnclosure> {
    let alpha = q_hat.defining_alpha().ok_or(Error::NeedsDefiningSequence)?;
    let image = phi_inverse_sequence(a, alpha)?;
    base_from_alpha(&image, tol)
}

/// The de Vries–Komornik number of `a`: the base whose expansion of 1 is `Φ_a^{-1}(τ)`.
pub fn de_vries_komornik(a: &FundamentalWord, tol: &BigRational) -> BaseEnclosure {
    let aut = BlockAutomaton::new(a);
    let len = aut.block_len();
    let mut buffer: Vec<Digit> = Vec::new();
    let stream = |i: usize| -> Digit {
        if i >= buffer.len() {
            let blocks = (2 * (i / len + 1)).max(64);
            let tau = thue_morse(blocks);
            let (digits, _) =
                bits_to_blocks(&aut, tau.digits(), Vertex::Start).expect("τ starts with 1");
            buffer = digits;
        }
        buffer[i]
    };
    base_from_digit_stream(a.alphabet(), stream, tol).expect("Φ_a^{-1}(τ) expands 1 in a base of J_a")
}
