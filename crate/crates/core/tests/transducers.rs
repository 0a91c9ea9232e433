use std::collections::BTreeSet;

use cobweave_core::automata::{Automaton, Fsa, Word};
use cobweave_core::transducer::Transducer;
use cobweave_core::{fixtures, gen, oracle};
use proptest::prelude::*;

fn language(m: &Fsa, maxlen: usize) -> BTreeSet<Word> {
    m.enumerate_language(maxlen).unwrap().into_iter().collect()
}

fn instance(seed: u64) -> (Transducer, Fsa) {
    let mut rng = gen::rng(seed);
    let m = gen::random_trimmed_fsa(&mut rng, 4, 2);
    let t = gen::random_transducer(&mut rng, m.alphabet(), &gen::alphabet('x', 2));
    (t, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apply_matches_the_word_oracle(seed in any::<u64>()) {
        let (t, m) = instance(seed);
        prop_assert_eq!(language(&t.apply(&m).unwrap(), 8), oracle::transduction_words(&t, &m, 8));
    }

    #[test]
    fn apply_is_the_union_of_word_transductions(seed in any::<u64>()) {
        let (t, m) = instance(seed);
        let applied = language(&t.apply(&m).unwrap(), 4);
        let mut union = BTreeSet::new();
        for w in oracle::nfa_language(&m, 8) {
            let r = t.transduce_word(w.symbols(), 8).unwrap();
            union.extend(r.outputs.into_iter().filter(|o| o.len() <= 4));
        }
        // Outputs of length ≤ 4 need middle words of length ≤ 4 (β is
        // nonerasing), whose inputs have length ≤ 8.
        prop_assert_eq!(applied, union);
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let m = gen::random_trimmed_fsa(&mut rng, 3, 2);
        let t1 = gen::random_transducer(&mut rng, m.alphabet(), &gen::alphabet('x', 2));
        let t2 = gen::random_transducer(&mut rng, t1.beta().target(), &gen::alphabet('m', 2));
        let t3 = gen::random_transducer(&mut rng, t2.beta().target(), &gen::alphabet('u', 2));
        let left = t3.compose(&t2).unwrap().compose(&t1).unwrap();
        let right = t3.compose(&t2.compose(&t1).unwrap()).unwrap();
        prop_assert_eq!(language(&left.apply(&m).unwrap(), 6), language(&right.apply(&m).unwrap(), 6));
    }

    #[test]
    fn identity_transducers_are_units(seed in any::<u64>()) {
        let (t, m) = instance(seed);
        let before = Transducer::identity(t.alpha().target());
        let after = Transducer::identity(t.beta().target());
        let want = language(&t.apply(&m).unwrap(), 6);
        prop_assert_eq!(language(&t.compose(&before).unwrap().apply(&m).unwrap(), 6), want.clone());
        prop_assert_eq!(language(&after.compose(&t).unwrap().apply(&m).unwrap(), 6), want);
    }
}

#[test]
fn substitution_fixture() {
    let t = fixtures::c_to_ab();
    let out: Vec<String> = t.apply(&fixtures::ab_star()).unwrap().enumerate_language(3).unwrap().iter().map(|w| w.to_string()).collect();
    assert_eq!(out, ["", "x", "xx", "xxx"]);
    let r = t.transduce_word(Word::from("ABAB").symbols(), 4).unwrap();
    assert_eq!(r.outputs, BTreeSet::from([Word::from("xx")]));
}
