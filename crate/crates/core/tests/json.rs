use cobweave_core::automata::{Fsa, Word};
use cobweave_core::boolsemi::BoolMat;
use cobweave_core::catauto::{CatFsa, CatTransducer};
use cobweave_core::cobordism::{floating_line, snakes, Term};
use cobweave_core::operad::CfGrammar;
use cobweave_core::par::Exec;
use cobweave_core::suite::{self, SuiteConfig};
use cobweave_core::transducer::Transducer;
use cobweave_core::{fixtures, gen};
use proptest::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn round_trip<T: Serialize + DeserializeOwned>(x: &T) -> T {
    serde_json::from_str(&serde_json::to_string(x).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn machines_round_trip(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let m = gen::random_fsa(&mut rng, 5, &gen::alphabet('a', 3), 0.3);
        prop_assert_eq!(round_trip(&m), m.clone());
        let t = gen::random_transducer(&mut rng, m.alphabet(), &gen::alphabet('x', 2));
        let back: Transducer = round_trip(&t);
        prop_assert_eq!(serde_json::to_value(&back).unwrap(), serde_json::to_value(&t).unwrap());
        let c = gen::random_cat_fsa(&mut rng);
        let back: CatFsa = round_trip(&c);
        prop_assert_eq!(serde_json::to_value(&back).unwrap(), serde_json::to_value(&c).unwrap());
    }

    #[test]
    fn matrices_round_trip(rows in 1..6usize, cols in 1..6usize, bits in any::<u64>()) {
        let m = BoolMat::from_fn(rows, cols, |i, j| bits >> ((i * cols + j) % 64) & 1 == 1);
        prop_assert_eq!(round_trip(&m), m);
    }
}

#[test]
fn matrices_are_rows_of_bits() {
    let m = BoolMat::from_rows(&[vec![true, false], vec![false, true]]).unwrap();
    assert_eq!(serde_json::to_string(&m).unwrap(), "[[1,0],[0,1]]");
}

#[test]
fn fixtures_round_trip() {
    for (_, m) in fixtures::fixture_fsas() {
        assert_eq!(round_trip::<Fsa>(&m), m);
    }
    for g in [fixtures::dyck_grammar(), fixtures::right_linear_grammar()] {
        assert_eq!(round_trip::<CfGrammar>(&g), g);
    }
    let t = fixtures::bracket_transducer();
    let back: CatTransducer = round_trip(&t);
    assert_eq!(serde_json::to_value(&back).unwrap(), serde_json::to_value(&t).unwrap());
    for d in snakes::<Word>().into_iter().chain([floating_line(Word::from("AB"))]) {
        let term = d.to_term();
        let back: Term<Word> = round_trip(&term);
        assert_eq!(back.typecheck().unwrap().to_term(), term);
    }
}

#[test]
fn reports_depend_only_on_the_seed() {
    let cfg = SuiteConfig {
        seed: 11,
        ..SuiteConfig::default()
    };
    let seq = SuiteConfig {
        exec: Exec::Sequential,
        ..cfg
    };
    for id in [2, 4, 6] {
        let a = serde_json::to_string(&suite::run(id, &cfg)).unwrap();
        let b = serde_json::to_string(&suite::run(id, &cfg)).unwrap();
        let c = serde_json::to_string(&suite::run(id, &seq)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }
}
