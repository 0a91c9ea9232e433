use std::collections::BTreeSet;

use cobweave_core::automata::{words_up_to, Automaton, MonoidHom, Word};
use cobweave_core::{gen, oracle};
use proptest::prelude::*;
use rand::Rng;

fn language(m: &impl Automaton, maxlen: usize) -> BTreeSet<Word> {
    m.enumerate_language(maxlen).unwrap().into_iter().collect()
}

fn random_hom(seed: u64, source: &cobweave_core::automata::Alphabet, target: &cobweave_core::automata::Alphabet, lo: usize) -> MonoidHom {
    let mut rng = gen::rng(seed);
    let images: Vec<(String, Word)> = source
        .letters()
        .iter()
        .map(|l| {
            let n = rng.gen_range(lo..=2);
            (l.clone(), Word((0..n).map(|_| target.letter(rng.gen_range(0..target.len())).to_string()).collect()))
        })
        .collect();
    MonoidHom::new(source.clone(), target.clone(), images.iter().map(|(l, w)| (l.as_str(), w.clone()))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn acceptance_matches_subset_simulation(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let m = gen::random_fsa(&mut rng, 6, &gen::alphabet('a', 2), 0.3);
        for w in words_up_to(2, 8) {
            let word = m.alphabet().decode(&w);
            prop_assert_eq!(m.accepts(word.symbols()).unwrap(), oracle::nfa_accepts(&m, &w));
        }
    }

    #[test]
    fn trim_preserves_language(seed in any::<u64>()) {
        let m = gen::random_fsa(&mut gen::rng(seed), 6, &gen::alphabet('a', 2), 0.3);
        let t = m.trim();
        prop_assert!(t.len() <= m.len());
        prop_assert_eq!(language(&t, 8), oracle::nfa_language(&m, 8));
    }

    #[test]
    fn product_is_intersection(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let alpha = gen::alphabet('a', 2);
        let (a, b) = (gen::random_fsa(&mut rng, 4, &alpha, 0.4), gen::random_fsa(&mut rng, 4, &alpha, 0.4));
        let both: BTreeSet<Word> = oracle::nfa_language(&a, 7).intersection(&oracle::nfa_language(&b, 7)).cloned().collect();
        prop_assert_eq!(language(&a.product(&b).unwrap(), 7), both);
    }

    #[test]
    fn preimage_is_inverse_image(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let m = gen::random_fsa(&mut rng, 4, &gen::alphabet('a', 2), 0.4);
        let h = random_hom(seed ^ 1, &gen::alphabet('c', 2), m.alphabet(), 0);
        let pre = m.preimage(&h).unwrap();
        let want: BTreeSet<Word> = words_up_to(2, 6)
            .into_iter()
            .filter(|u| oracle::nfa_accepts(&m, &h.apply_indices(u)))
            .map(|u| h.source().decode(&u))
            .collect();
        prop_assert_eq!(language(&pre, 6), want);
    }

    #[test]
    fn image_is_direct_image(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let m = gen::random_fsa(&mut rng, 4, &gen::alphabet('a', 2), 0.4);
        let h = random_hom(seed ^ 2, m.alphabet(), &gen::alphabet('x', 2), 1);
        // Nonerasing images: words of length ≤ 7 come from words of length ≤ 7.
        let want: BTreeSet<Word> = oracle::nfa_language(&m, 7)
            .iter()
            .map(|w| h.apply(w.symbols()).unwrap())
            .filter(|w| w.len() <= 7)
            .collect();
        prop_assert_eq!(language(&m.image(&h).unwrap(), 7), want);
    }
}
