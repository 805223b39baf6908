use std::cmp::Ordering;

use proptest::prelude::*;

use univoque::composition::{
    classify, compose, decompose, phi, phi_inverse, phi_inverse_sequence, phi_sequence, unit_lift, WordClass,
};
use univoque::plateaus::enumerate_fundamental;
use univoque::{lex_compare, Alphabet, Digit, EpSequence, FundamentalWord, Word};

fn ab(m: Digit) -> Alphabet {
    Alphabet::new(m).unwrap()
}

fn pool(m: Digit, len: usize) -> Vec<FundamentalWord> {
    enumerate_fundamental(ab(m), len)
}

fn binary_word() -> impl Strategy<Value = Vec<Digit>> {
    prop::collection::vec(0u16..=1, 0..12).prop_map(|mut v| {
        v.insert(0, 1);
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn composition_is_associative(m in 1u16..=3, i in 0usize..500, j in 0usize..500, k in 0usize..500) {
        let lifts = pool(m, 4);
        let bin = pool(1, 6);
        let (a, b, c) = (&lifts[i % lifts.len()], &bin[j % bin.len()], &bin[k % bin.len()]);
        let left = compose(&compose(a, b).unwrap(), c).unwrap();
        let right = compose(a, &compose(b, c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn block_map_round_trips(m in 1u16..=3, i in 0usize..500, bits in binary_word()) {
        let lifts = pool(m, 4);
        let a = &lifts[i % lifts.len()];
        let b = Word::new(Alphabet::BINARY, bits).unwrap();
        let blocks = phi_inverse(a, &b).unwrap();
        prop_assert_eq!(blocks.len(), a.len() * b.len());
        prop_assert_eq!(phi(a, &blocks).unwrap(), b);
    }

    #[test]
    fn block_map_preserves_order(m in 1u16..=2, i in 0usize..500, x in binary_word(), y in binary_word()) {
        let lifts = pool(m, 4);
        let a = &lifts[i % lifts.len()];
        let n = x.len().min(y.len());
        let (x, y) = (Word::new(Alphabet::BINARY, x[..n].to_vec()).unwrap(), Word::new(Alphabet::BINARY, y[..n].to_vec()).unwrap());
        let (bx, by) = (phi_inverse(a, &x).unwrap(), phi_inverse(a, &y).unwrap());
        prop_assert_eq!(bx.digits().cmp(by.digits()), x.digits().cmp(y.digits()));
    }

    #[test]
    fn sequence_map_round_trips(i in 0usize..500, pre in prop::collection::vec(0u16..=1, 0..3), per in prop::collection::vec(0u16..=1, 1..4)) {
        let lifts = pool(2, 3);
        let a = &lifts[i % lifts.len()];
        let mut pre = pre;
        pre.insert(0, 1);
        let s = EpSequence::new(Alphabet::BINARY, pre, per).unwrap();
        let lifted = phi_inverse_sequence(a, &s).unwrap();
        prop_assert_eq!(phi_sequence(a, &lifted).unwrap(), s);
    }
}

#[test]
fn decomposition_round_trips_for_larger_alphabets() {
    for (m, len) in [(2, 6), (3, 5), (4, 4)] {
        for c in pool(m, len) {
            let dec = decompose(&c);
            assert_eq!(dec.recompose().unwrap(), c);
            for f in dec.factors() {
                assert!(decompose(f).tail.is_empty(), "{c}: factor {f} splits further");
            }
        }
    }
}

#[test]
fn lifting_an_irreducible_word_gives_first_level() {
    for m in 1..=4 {
        let u = unit_lift(ab(m));
        for b in pool(1, 7) {
            if classify(&b) != WordClass::Irreducible {
                continue;
            }
            assert_eq!(classify(&compose(&u, &b).unwrap()), WordClass::NIrreducible(1), "M={m} b={b}");
        }
    }
}

#[test]
fn composition_lands_inside_the_outer_interval() {
    // a∘b lies in J_a: a^∞ ≺ (a∘b)^∞ and (a∘b)⁺… ≼ a⁺ā^∞
    for m in 1..=2 {
        for a in pool(m, 3) {
            for b in pool(1, 5) {
                let c = compose(&a, &b).unwrap();
                assert_eq!(lex_compare(&a.left_alpha(), &c.left_alpha()), Ordering::Less, "{a}∘{b}");
                assert_ne!(lex_compare(&c.right_alpha(), &a.right_alpha()), Ordering::Greater, "{a}∘{b}");
            }
        }
    }
}
