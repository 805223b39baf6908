use num_rational::BigRational;

use univoque::composition::{classify, decompose, WordClass};
use univoque::expansions::{default_tolerance, fundamental_interval, special_base, BaseEnclosure, SpecialBase};
use univoque::numeric::{int, ln2_enclosure, pow2_neg, rat, to_f64};
use univoque::plateaus::{
    bridge_factor, enumerate_fundamental, enumerate_plateaus, entropy_at, ladder, plateau_json_lines, staircase,
    uniform_grid, verify_entropy_bridge, PlateauKind, RowStatus,
};
use univoque::subshift::default_entropy_tolerance;
use univoque::{lex_compare, Alphabet, Digit, FundamentalWord};

fn ab(m: Digit) -> Alphabet {
    Alphabet::new(m).unwrap()
}

/// Is `J_inner ⊆ J_outer`, decided from the defining sequences?
fn nested(inner: &FundamentalWord, outer: &FundamentalWord) -> bool {
    lex_compare(&outer.left_alpha(), &inner.left_alpha()).is_le()
        && lex_compare(&inner.right_alpha(), &outer.right_alpha()).is_le()
}

#[test]
fn irreducible_intervals_are_the_maximal_ones() {
    for (m, len) in [(1, 6), (2, 6)] {
        let words = enumerate_fundamental(ab(m), len);
        for a in &words {
            let maximal = !words.iter().any(|b| b != a && nested(a, b));
            let irreducible = classify(a) == WordClass::Irreducible;
            assert_eq!(maximal, irreducible, "M={m} {a}");
        }
    }
}

#[test]
fn enumeration_is_sorted_by_left_alpha() {
    for m in 1..=3 {
        let words = enumerate_fundamental(ab(m), 6);
        for pair in words.windows(2) {
            assert!(lex_compare(&pair[0].left_alpha(), &pair[1].left_alpha()).is_lt());
        }
    }
}

#[test]
fn ladder_partitions_above_komornik_loreti() {
    let tol = pow2_neg(160);
    for m in 1..=3 {
        let steps = ladder(ab(m), 3, &tol);
        assert_eq!(steps[0].upper.lo(), &int(m as i64 + 1));
        for pair in steps.windows(2) {
            assert_eq!(pair[0].lower, pair[1].upper, "steps must share endpoints");
        }
        let kl = special_base(ab(m), SpecialBase::KomornikLoreti, &tol);
        assert!(kl.hi() < steps.last().unwrap().lower.lo());
    }
}

#[test]
fn ladder_entropies_halve() {
    let tol = default_entropy_tolerance();
    let (ln2_lo, ln2_hi) = ln2_enclosure(80);
    for m in 1..=3 {
        for n in 1..=4u32 {
            let q = special_base(ab(m), SpecialBase::Prime(n), &default_tolerance());
            let h = entropy_at(&q, &tol).unwrap();
            let scale = bridge_factor(ab(m)) / BigRational::from_integer((1i64 << (n - 1)).into());
            let slack = rat(1, 100_000_000);
            assert!(h.lo <= &ln2_hi * &scale + &slack && &ln2_lo * &scale <= &h.hi + &slack, "M={m} n={n}");
        }
    }
}

#[test]
fn bridge_halves_entropy_between_levels() {
    let tol = default_entropy_tolerance();
    let records = enumerate_plateaus(ab(1), 8, None).unwrap();
    let mut checked = 0;
    for r in records.iter().filter(|r| r.kind == PlateauKind::Plateau) {
        let WordClass::NIrreducible(n) = r.class else { continue };
        let dec = decompose(&r.word);
        // drop the leading unit lift: the partner is the binary word it acts on
        let partner = dec.tail.iter().skip(1).try_fold(dec.tail[0].clone(), |acc, t| {
            univoque::composition::compose(&acc, t)
        });
        let partner = partner.unwrap();
        let want_class = if n == 1 { WordClass::Irreducible } else { WordClass::NIrreducible(n - 1) };
        assert_eq!(classify(&partner), want_class, "{}", r.word);
        let (pl, _) = fundamental_interval(&partner, &default_tolerance());
        let hp = entropy_at(&pl, &tol).unwrap();
        let doubled = r.entropy.scale(&int(2));
        assert!(doubled.overlaps(&hp, &rat(1, 100_000_000)), "{} vs {partner}", r.word);
        checked += 1;
    }
    assert!(checked >= 2, "only {checked} records");
}

#[test]
fn records_are_placed_on_their_step() {
    for (m, len) in [(1, 8), (2, 5)] {
        let records = enumerate_plateaus(ab(m), len, None).unwrap();
        for r in &records {
            assert!(r.q_l.certified_lt(&r.q_r));
            match (r.kind, r.class) {
                (PlateauKind::Plateau, WordClass::Irreducible) => assert_eq!(r.ladder_index, Some(0), "{}", r.word),
                (PlateauKind::Plateau, WordClass::NIrreducible(n)) => assert_eq!(r.ladder_index, Some(n), "{}", r.word),
                (PlateauKind::Plateau, WordClass::Reducible) => panic!("reducible record {}", r.word),
                _ => assert_eq!(r.ladder_index, None),
            }
            if r.kind == PlateauKind::Plateau {
                assert!(r.entropy.overlaps(&r.entropy_right, &rat(1, 50_000_000)), "{}", r.word);
            }
        }
    }
}

#[test]
fn json_lines_start_with_meta() {
    let records = enumerate_plateaus(ab(1), 4, None).unwrap();
    let text = plateau_json_lines(ab(1), 4, None, &records);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), records.len() + 1);
    let meta: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(meta["meta"]["max_len"], 4);
    assert!(meta["meta"]["completeness"].as_str().unwrap().contains("length <= 4"));
    for line in &lines[1..] {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["q_l"]["lo"].is_string() && v["entropy"]["hi"].is_string());
    }
}

#[test]
fn staircase_is_consistent() {
    let alphabet = ab(1);
    let plateaus = enumerate_plateaus(alphabet, 7, None).unwrap();
    let grid = uniform_grid(alphabet, &rat(3, 2), &int(2), 40, &pow2_neg(60)).unwrap();
    let table = staircase(alphabet, &grid, 24, &plateaus).unwrap();
    assert!(table.monotone);
    for pair in table.rows.windows(2) {
        assert!(pair[0].q.lo() <= pair[1].q.lo());
        assert!(pair[0].entropy.lo <= pair[1].entropy.lo);
        assert!(pair[0].entropy.hi <= pair[1].entropy.hi);
    }
    let phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let golden_rows: Vec<_> = table.rows.iter().filter(|r| r.status == RowStatus::Plateau("110".into())).collect();
    assert!(!golden_rows.is_empty());
    for r in golden_rows {
        assert!(r.entropy.contains(phi));
    }
    let last = table.rows.last().unwrap();
    assert_eq!(last.dimension, (int(1), int(1)));
}

#[test]
fn staircase_upper_bounds_shrink_below_komornik_loreti() {
    let alphabet = ab(1);
    let q = BaseEnclosure::around(alphabet, rat(177, 100), pow2_neg(80)).unwrap();
    let mut first = None;
    let mut previous = f64::INFINITY;
    for depth in [8, 16, 32, 64] {
        let table = staircase(alphabet, std::slice::from_ref(&q), depth, &[]).unwrap();
        let hi = to_f64(&table.rows[0].entropy.hi);
        assert!(hi <= previous + 1e-15);
        previous = hi;
        first.get_or_insert(hi);
    }
    assert!(previous < first.unwrap() / 2.0, "{previous}");
}

#[test]
fn bridge_examples() {
    let tol = rat(1, 1_000_000);
    // q_L(10∘110) maps to q_L(110)
    let c = FundamentalWord::parse(ab(1), "110100").unwrap();
    let (left, _) = fundamental_interval(&c, &default_tolerance());
    let report = verify_entropy_bridge(&FundamentalWord::parse(ab(1), "10").unwrap(), &left, &tol).unwrap();
    assert_eq!(report.image.defining_alpha().unwrap().to_string(), "(110)");
    assert!(report.agree);
    let phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    assert!(report.direct.contains(phi / 2.0));
}
