use std::collections::BTreeSet;

use cobweave_core::automata::Word;
use cobweave_core::budget::Budget;
use cobweave_core::catauto::{FreeCat, Path};
use cobweave_core::operad::{
    apply_grammar, cs_factorize, grammar_transduce, language_of_arrows, language_words, spliced_defect_operator, splice_compose, trees_up_to_depth,
    treecont, CfGrammar, SplicedSeq,
};
use cobweave_core::{fixtures, gen, oracle};
use proptest::prelude::*;
use proptest::sample::select;

fn two_objects() -> FreeCat {
    fixtures::two_object_machine().base().clone()
}

fn seq(paths: Vec<Path>) -> SplicedSeq {
    SplicedSeq::new(paths).unwrap()
}

fn seqs(cat: FreeCat, max_parts: usize) -> impl Strategy<Value = SplicedSeq> {
    proptest::collection::vec(select(cat.paths_up_to(3)), 1..=max_parts).prop_map(seq)
}

/// A sequence whose out colour is `(x, y)`: first part from `x`, last into `y`.
fn fitting(cat: &FreeCat, (x, y): (usize, usize), parts: usize, picks: &[usize]) -> Option<SplicedSeq> {
    let all = cat.paths_up_to(2);
    let mut out = Vec::new();
    for (i, &k) in picks.iter().take(parts).enumerate() {
        let candidates: Vec<&Path> = all.iter().filter(|p| (i > 0 || p.src == x) && (i + 1 < parts || p.dst == y)).collect();
        if candidates.is_empty() {
            return None;
        }
        out.push(candidates[k % candidates.len()].clone());
    }
    Some(seq(out))
}

fn words(g: &CfGrammar, paths: &BTreeSet<Path>) -> BTreeSet<Word> {
    paths.iter().map(|p| Word::from_symbols(g.base().labels(p))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn identities_are_units(f in seqs(two_objects(), 4)) {
        let (x, y) = f.out_color();
        prop_assert_eq!(splice_compose(&SplicedSeq::identity(x, y), 0, &f).unwrap(), f.clone());
        for i in 0..f.gaps() {
            let (a, b) = f.gap_color(i);
            prop_assert_eq!(splice_compose(&f, i, &SplicedSeq::identity(a, b)).unwrap(), f.clone());
        }
    }

    #[test]
    fn splicing_is_associative(
        f in seqs(two_objects(), 4),
        ng in 1..4usize, nh in 1..4usize,
        picks in proptest::collection::vec(any::<usize>(), 6),
        i in any::<usize>(), j in any::<usize>(), k in any::<usize>(),
    ) {
        let cat = two_objects();
        prop_assume!(f.gaps() > 0);
        let i = i % f.gaps();
        let Some(g) = fitting(&cat, f.gap_color(i), ng, &picks[..3]) else { return Ok(()) };
        let fg = splice_compose(&f, i, &g).unwrap();
        if g.gaps() > 0 {
            let j = j % g.gaps();
            if let Some(h) = fitting(&cat, g.gap_color(j), nh, &picks[3..]) {
                let lhs = splice_compose(&fg, i + j, &h).unwrap();
                let rhs = splice_compose(&f, i, &splice_compose(&g, j, &h).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
        if f.gaps() > 1 {
            // Two distinct gaps a < b: filling b then a equals filling a then
            // the shifted b.
            let (a, b) = (k % f.gaps(), (k % f.gaps() + 1 + j % (f.gaps() - 1)) % f.gaps());
            let (a, b) = (a.min(b), a.max(b));
            if let (Some(ga), Some(hb)) = (fitting(&cat, f.gap_color(a), ng, &picks[..3]), fitting(&cat, f.gap_color(b), nh, &picks[3..])) {
                let lhs = splice_compose(&splice_compose(&f, b, &hb).unwrap(), a, &ga).unwrap();
                let rhs = splice_compose(&splice_compose(&f, a, &ga).unwrap(), b + ga.gaps() - 1, &hb).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn gap_free_operators_are_path_operators(seed in any::<u64>()) {
        let m = gen::random_cat_fsa(&mut gen::rng(seed));
        for p in m.base().paths_up_to(3) {
            let op = spliced_defect_operator(&m, &SplicedSeq::constant(p.clone()), p.len() + (p.len() + 1) * m.len()).unwrap();
            prop_assert!(op.complete);
            prop_assert_eq!(op.matrix, m.t_phi(&p).unwrap());
        }
    }
}

#[test]
fn apply_grammar_respects_grafting() {
    for g in [fixtures::dyck_grammar(), fixtures::right_linear_grammar()] {
        let s = g.species();
        let trees: Vec<_> = (0..s.colors().len()).map(|c| trees_up_to_depth(s, c, 2, &Budget::default()).unwrap()).collect();
        for t1 in trees.iter().flatten() {
            for (i, &c) in t1.leaves().iter().enumerate() {
                for t2 in &trees[c] {
                    let lhs = apply_grammar(&g, &t1.graft(s, i, t2).unwrap()).unwrap();
                    let rhs = splice_compose(&apply_grammar(&g, t1).unwrap(), i, &apply_grammar(&g, t2).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "{} / {i} / {}", t1.show(s), t2.show(s));
                }
            }
        }
    }
}

#[test]
fn dyck_language_matches_the_counter() {
    let g = fixtures::dyck_grammar();
    assert_eq!(language_words(&g, 10).unwrap(), oracle::dyck_words("(", ")", 10));
}

#[test]
fn tree_contours_reproduce_the_languages() {
    let budget = Budget::default();
    for g in [fixtures::dyck_grammar(), fixtures::right_linear_grammar()] {
        let cs = cs_factorize(&g, 3, &budget).unwrap();
        let tc = treecont(g.species(), g.start()).unwrap();
        let back = grammar_transduce(&cs.transducer, &tc, &budget).unwrap();
        assert_eq!(words(&g, &language_of_arrows(&back, 8).unwrap()), words(&g, &language_of_arrows(&g, 8).unwrap()));
    }
}

#[test]
fn right_linear_grammar_generates_ab_star() {
    let g = fixtures::right_linear_grammar();
    assert_eq!(language_words(&g, 8).unwrap(), oracle::nfa_language(&fixtures::ab_star(), 8));
}
