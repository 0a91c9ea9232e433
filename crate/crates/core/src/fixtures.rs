//! Small named instances shared by the tests, the CLI suite and the benches.

use std::collections::BTreeSet;

use crate::automata::{Alphabet, Fsa, MonoidHom, Word};
use crate::budget::Budget;
use crate::catauto::{cat_apply, encode_fsa, encode_transducer, CatFsa, CatFunctor, CatTransducer, FreeCat, Path};
use crate::operad::{CfGrammar, SplicedSeq, Species};
use crate::transducer::Transducer;

/// `(AB)*`: `q0 -A-> q1 -B-> q0`, accepting at `q0`.
pub fn ab_star() -> Fsa {
    Fsa::from_strs(&["q0", "q1"], &["A", "B"], &[("q0", "A", "q1"), ("q1", "B", "q0")], "q0", &["q0"]).unwrap()
}

/// Words over `{a, b}` with an even number of `a`.
pub fn even_a() -> Fsa {
    Fsa::from_strs(
        &["e", "o"],
        &["a", "b"],
        &[("e", "a", "o"), ("o", "a", "e"), ("e", "b", "e"), ("o", "b", "o")],
        "e",
        &["e"],
    )
    .unwrap()
}

/// Words over `{a, b}` whose second letter from the end is `a`; nondeterministic.
pub fn second_last_a() -> Fsa {
    Fsa::from_strs(
        &["s", "t", "f"],
        &["a", "b"],
        &[("s", "a", "s"), ("s", "b", "s"), ("s", "a", "t"), ("t", "a", "f"), ("t", "b", "f")],
        "s",
        &["f"],
    )
    .unwrap()
}

pub fn fixture_fsas() -> Vec<(&'static str, Fsa)> {
    vec![("ab_star", ab_star()), ("even_a", even_a()), ("second_last_a", second_last_a())]
}

/// One-state core, `C ↦ AB` on the input side and `C ↦ x` on the output side.
pub fn c_to_ab() -> Transducer {
    let c = Alphabet::chars("C").unwrap();
    Transducer::new(
        MonoidHom::new(c.clone(), Alphabet::chars("AB").unwrap(), [("C", Word::from("AB"))]).unwrap(),
        MonoidHom::new(c.clone(), Alphabet::chars("x").unwrap(), [("C", Word::from("x"))]).unwrap(),
        Fsa::universal(&c),
    )
    .unwrap()
}

/// `A ↦ x`, `B ↦ y` with a one-state core.
pub fn rename_ab() -> Transducer {
    let ab = Alphabet::chars("AB").unwrap();
    Transducer::new(
        MonoidHom::identity(&ab),
        MonoidHom::new(ab.clone(), Alphabet::chars("xy").unwrap(), [("A", Word::from("x")), ("B", Word::from("y"))]).unwrap(),
        Fsa::universal(&ab),
    )
    .unwrap()
}

/// Categorical automata used wherever "the fixture suite" is asked for:
/// the encoded classical fixtures, the encoded `C ↦ AB` image of `(AB)*`,
/// and a two-object machine.
pub fn fixture_cat_fsas() -> Vec<(&'static str, CatFsa)> {
    let mut out: Vec<(&'static str, CatFsa)> = fixture_fsas().into_iter().map(|(n, m)| (n, encode_fsa(&m))).collect();
    let applied = cat_apply(&encode_transducer(&c_to_ab()).unwrap(), &encode_fsa(&ab_star()), 8, &Budget::default()).unwrap();
    out.push(("c_to_ab_image", applied.machine));
    out.push(("two_objects", two_object_machine()));
    out
}

/// Base `x ⇄ y` with `f : x → y`, `g : y → x`, `h : x → x`; two states over
/// `x` and one over `y`.
pub fn two_object_machine() -> CatFsa {
    let base = FreeCat::new(["x", "y"], [("x", "f", "y"), ("y", "g", "x"), ("x", "h", "x")]).unwrap();
    let states = FreeCat::new(
        ["p", "p'", "r"],
        [("p", "f1", "r"), ("r", "g1", "p'"), ("p'", "h1", "p"), ("p", "h2", "p")],
    )
    .unwrap();
    let tau = CatFunctor::new(
        states,
        base.clone(),
        vec![0, 0, 1],
        vec![base.path(&["f"]).unwrap(), base.path(&["g"]).unwrap(), base.path(&["h"]).unwrap(), base.path(&["h"]).unwrap()],
    )
    .unwrap();
    CatFsa::new(tau, Some(0), BTreeSet::from([1])).unwrap()
}

fn binary_species() -> Species {
    Species::from_strs(&["S"], &[("p", &["S", "S"], "S"), ("e", &[], "S")]).unwrap()
}

/// `S → ( S ) S | ε` over the one-object category on `(` and `)`.
pub fn dyck_grammar() -> CfGrammar {
    let base = FreeCat::monoid(["(", ")"]).unwrap();
    let p = SplicedSeq::new(vec![base.path(&["("]).unwrap(), base.path(&[")"]).unwrap(), Path::identity(0)]).unwrap();
    let e = SplicedSeq::constant(Path::identity(0));
    CfGrammar::new(base, binary_species(), vec![(0, 0)], Some(0), vec![p, e]).unwrap()
}

/// `q0 → A q1 | ε`, `q1 → B q0`: the right-linear grammar of `(AB)*`.
/// Both colours sit on the single object, so it is not chromatic.
pub fn right_linear_grammar() -> CfGrammar {
    let base = FreeCat::monoid(["A", "B"]).unwrap();
    let s = Species::from_strs(&["q0", "q1"], &[("a", &["q1"], "q0"), ("b", &["q0"], "q1"), ("f", &[], "q0")]).unwrap();
    let id = Path::identity(0);
    let rules = vec![
        SplicedSeq::new(vec![base.path(&["A"]).unwrap(), id.clone()]).unwrap(),
        SplicedSeq::new(vec![base.path(&["B"]).unwrap(), id.clone()]).unwrap(),
        SplicedSeq::constant(id),
    ];
    CfGrammar::new(base, s, vec![(0, 0), (0, 0)], Some(0), rules).unwrap()
}

/// `( ↦ [`, `) ↦ ]` on the Dyck base, with the identity input leg.
pub fn bracket_transducer() -> CatTransducer {
    let qt = FreeCat::monoid(["(", ")"]).unwrap();
    let out = FreeCat::monoid(["[", "]"]).unwrap();
    let beta = CatFunctor::new(qt.clone(), out.clone(), vec![0], vec![out.gen_path(0), out.gen_path(1)]).unwrap();
    CatTransducer::new(CatFunctor::identity(&qt), beta).unwrap()
}
