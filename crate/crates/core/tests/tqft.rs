use cobweave_core::automata::{words_up_to, Word};
use cobweave_core::boolsemi::BoolMat;
use cobweave_core::cobordism::{defect, floating_line, snakes, Diagram, Sign};
use cobweave_core::tqft::{check_naturality_with, generator_probes, modified_pullback, NaturalityOptions, TqftFunctor};
use cobweave_core::{gen, oracle};
use proptest::prelude::*;
use rand::Rng;

fn machine(seed: u64) -> cobweave_core::automata::Fsa {
    gen::random_trimmed_fsa(&mut gen::rng(seed), 5, 2)
}

fn word(m: &cobweave_core::automata::Fsa, seed: u64, max: usize) -> Word {
    let mut rng = gen::rng(seed);
    let n = rng.gen_range(0..=max);
    Word((0..n).map(|_| m.alphabet().letter(rng.gen_range(0..m.alphabet().len())).to_string()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn floating_lines_decide_membership(seed in any::<u64>()) {
        let m = machine(seed);
        let phi = TqftFunctor::new(&m);
        for w in words_up_to(m.alphabet().len(), 6) {
            let v = phi.eval(&floating_line(m.alphabet().decode(&w))).unwrap();
            prop_assert_eq!(v.get(0, 0), oracle::nfa_accepts(&m, &w));
        }
    }

    #[test]
    fn zigzags_are_identities(seed in any::<u64>()) {
        let phi = TqftFunctor::new(&machine(seed));
        let n = phi.machine().len();
        for s in snakes::<Word>() {
            prop_assert_eq!(phi.eval(&s).unwrap(), BoolMat::identity(n));
        }
    }

    #[test]
    fn defects_compose_contravariantly(seed in any::<u64>(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let m = machine(seed);
        let phi = TqftFunctor::new(&m);
        let (w1, w2) = (word(&m, s1, 3), word(&m, s2, 3));
        let line = Diagram::compose(defect(Sign::Plus, w2.clone()), defect(Sign::Plus, w1.clone())).unwrap();
        let chained = phi.eval(&defect(Sign::Plus, w2)).unwrap().mul(&phi.eval(&defect(Sign::Plus, w1.clone())).unwrap()).unwrap();
        prop_assert_eq!(phi.eval(&line).unwrap(), chained.clone());
        prop_assert_eq!(phi.eval(&defect(Sign::Plus, w1.concat(&word(&m, s2, 3)))).unwrap(), chained);
    }

    #[test]
    fn tensor_evaluates_to_kron(seed in any::<u64>(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let m = machine(seed);
        let phi = TqftFunctor::new(&m);
        let a = defect(Sign::Plus, word(&m, s1, 2));
        let b = defect(Sign::Minus, word(&m, s2, 2));
        let whole = phi.eval(&Diagram::tensor(a.clone(), b.clone())).unwrap();
        prop_assert_eq!(whole, phi.eval(&a).unwrap().kron(&phi.eval(&b).unwrap()).unwrap());
    }

    #[test]
    fn invariant_states_are_kept_and_closed(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let m = gen::random_fsa(&mut rng, 6, &gen::alphabet('A', 2), 0.3).trim();
        let t = gen::random_transducer(&mut rng, m.alphabet(), &gen::alphabet('x', 1));
        let p = modified_pullback(&TqftFunctor::untrimmed(m.clone()), t.alpha()).unwrap();
        let d = p.discrepancy();
        prop_assert!(d.only_invariant.is_empty(), "{:?}", d);
        let inside = p.invariant_states();
        for c in 0..t.alpha().source().len() {
            let op = m.word_matrix(t.alpha().image_of(c));
            for &q in inside {
                for r in 0..m.len() {
                    prop_assert!(!op.get(r, q) || inside.contains(&r));
                }
            }
        }
    }

    #[test]
    fn random_natural_transducers_commute(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let m = gen::random_trimmed_fsa(&mut rng, 4, 2);
        let t = gen::random_natural_transducer(&mut rng, m.alphabet());
        let image = t.apply(&m).unwrap();
        prop_assume!(!image.is_language_empty() && image.len() <= 16);
        let r = check_naturality_with(&t, &m, &generator_probes(t.mid_alphabet()), &NaturalityOptions::default()).unwrap();
        prop_assert!(r.all_commute, "{:?}", r.probes.iter().filter(|p| !p.commutes).map(|p| &p.name).collect::<Vec<_>>());
    }
}
