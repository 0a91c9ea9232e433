use std::collections::BTreeSet;

use cobweave_core::automata::{Automaton, Word};
use cobweave_core::budget::Budget;
use cobweave_core::catauto::{cat_apply, check_ulf, encode_fsa, encode_transducer};
use cobweave_core::tqft::TqftFunctor;
use cobweave_core::{fixtures, gen, oracle};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn encoding_round_trips(seed in any::<u64>()) {
        let m = gen::random_trimmed_fsa(&mut gen::rng(seed), 5, 2);
        let c = encode_fsa(&m);
        let words: BTreeSet<Word> = m.enumerate_language(6).unwrap().into_iter().collect();
        prop_assert_eq!(c.arrow_words(6).unwrap(), words);
        let phi = TqftFunctor::untrimmed(m.clone());
        for l in m.alphabet().letters() {
            let p = c.base().path(&[l.as_str()]).unwrap();
            prop_assert_eq!(c.t_phi(&p).unwrap(), phi.defect_operator(l).unwrap());
        }
    }

    #[test]
    fn operators_compose_along_paths(seed in any::<u64>()) {
        let m = gen::random_cat_fsa(&mut gen::rng(seed));
        prop_assert!(check_ulf(m.tau()).holds);
        let paths = m.base().paths_up_to(2);
        for p1 in &paths {
            let t1 = m.t_phi(p1).unwrap();
            prop_assert_eq!(&t1, &oracle::cat_operator_by_paths(&m, p1, p1.len()));
            for p2 in &paths {
                let product = m.t_phi(p2).unwrap().mul(&t1).unwrap();
                match p1.then(p2) {
                    Some(p) => prop_assert_eq!(product, m.t_phi(&p).unwrap()),
                    None => prop_assert!(product.is_zero()),
                }
            }
        }
    }

    #[test]
    fn categorical_apply_matches_classical_apply(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let m = gen::random_trimmed_fsa(&mut rng, 3, 2);
        let t = gen::random_natural_transducer(&mut rng, m.alphabet());
        let applied = cat_apply(&encode_transducer(&t).unwrap(), &encode_fsa(&m), 8, &Budget::default()).unwrap();
        prop_assert!(!applied.truncated);
        let classical: BTreeSet<Word> = t.apply(&m).unwrap().enumerate_language(6).unwrap().into_iter().collect();
        prop_assert_eq!(applied.machine.arrow_words(6).unwrap(), classical);
    }
}

#[test]
fn substitution_image_is_x_star() {
    let applied = cat_apply(&encode_transducer(&fixtures::c_to_ab()).unwrap(), &encode_fsa(&fixtures::ab_star()), 8, &Budget::default()).unwrap();
    let words: Vec<String> = applied.machine.arrow_words(3).unwrap().iter().map(|w| w.to_string()).collect();
    assert_eq!(words, ["", "x", "xx", "xxx"]);
}
