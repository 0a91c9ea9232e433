//! The transformation `γ_T : α*Φ_M ⇒ β*Φ_{T(M)}` of a transducer, checked
//! square by square on probe diagrams.
//!
//! The apex is the state space of the middle machine `core × α⁻¹(M)`, whose
//! functor `H` drives both squares: the left leg sends a pair `(t, q)` to `q`
//! and the right leg sends it to itself as a state of `T(M)`, each leg being
//! zero on states outside the kept subspace. For a probe `𝔠` the two map
//! squares are `f·H(𝔠) = A(𝔠)·f` and `g·H(𝔠) = B(𝔠)·g`, with `A`, `B` the
//! two pulled-back functors. The span square `γ ∘ A = B ∘ γ` is also
//! compared whenever its pullback is small enough to enumerate.

use serde::Serialize;

use super::pullback::modified_pullback;
use super::span::{span_compose_with, SemiSpan};
use super::{kron_power, PullbackFunctor, TqftFunctor};
use crate::automata::{Alphabet, Automaton, Fsa, Word};
use crate::boolsemi::BoolMat;
use crate::budget::Budget;
use crate::cobordism::{Diagram, Generator, Sign, Term, View};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::transducer::Transducer;

#[derive(Clone, Debug, Default)]
pub struct NaturalityOptions {
    pub exec: Exec,
    pub budget: Budget,
    /// Negative control: zero the right leg on this apex state.
    pub drop_right: Option<usize>,
    /// Also compare the span squares.
    pub spans: bool,
}

/// A basis vector of the probe's domain on which a square fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub side: &'static str,
    /// Apex states, one per domain strand.
    pub apex: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub name: String,
    pub probe: Term<Word>,
    pub left: bool,
    pub right: bool,
    pub commutes: bool,
    /// `None` when the span pullback exceeds the enumeration budget or was not requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span_equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NaturalityReport {
    pub apex: Vec<String>,
    pub left_kept: Vec<String>,
    pub right_kept: Vec<String>,
    pub probes: Vec<ProbeReport>,
    pub all_commute: bool,
}

/// Identities, both defects per letter, cup, cap, the four transpositions
/// and both half-lines.
pub fn generator_probes(alphabet: &Alphabet) -> Vec<Diagram<Word>> {
    use Sign::*;
    let g = Diagram::gen;
    let mut out = vec![g(Generator::Id(Plus)), g(Generator::Id(Minus))];
    for l in alphabet.letters() {
        for s in [Plus, Minus] {
            out.push(g(Generator::Defect(s, Word::from_symbols([l.clone()]))));
        }
    }
    out.push(g(Generator::Cup));
    out.push(g(Generator::Cap));
    for a in [Plus, Minus] {
        for b in [Plus, Minus] {
            out.push(g(Generator::Perm(a, b)));
        }
    }
    out.push(g(Generator::HalfStart));
    out.push(g(Generator::HalfEnd));
    out
}

fn probe_name(d: &Diagram<Word>) -> String {
    match d.view() {
        View::Gen(Generator::Defect(s, w)) => format!("defect({s},{w})"),
        View::Gen(Generator::Id(s)) => format!("id({s})"),
        View::Gen(Generator::Perm(a, b)) => format!("perm({a},{b})"),
        View::Gen(g) => g.name().to_string(),
        _ => format!("diagram {} → {}", d.dom(), d.cod()),
    }
}

pub fn check_naturality(t: &Transducer, m: &Fsa, probes: &[Diagram<Word>]) -> Result<NaturalityReport> {
    check_naturality_with(t, m, probes, &NaturalityOptions::default())
}

struct Setup {
    apex: Vec<String>,
    mid: TqftFunctor,
    a: PullbackFunctor,
    b: PullbackFunctor,
    f: BoolMat,
    g: BoolMat,
}

fn setup(t: &Transducer, m: &Fsa, opts: &NaturalityOptions) -> Result<Setup> {
    let budget = opts.budget;
    let pre = m.preimage(t.alpha())?;
    let middle = Fsa::product_after(t.core(), &pre)?;
    let image = middle.image(t.beta())?;
    let (nz, np) = (middle.len(), pre.len());
    budget.check_states("naturality apex", nz)?;

    let a = modified_pullback(&TqftFunctor::untrimmed(m.clone()).with_budget(budget), t.alpha())?;
    let b = modified_pullback(&TqftFunctor::untrimmed(image).with_budget(budget), t.beta())?;
    let mut f = BoolMat::zeros(a.dim(), nz);
    let mut g = BoolMat::zeros(b.dim(), nz);
    for z in 0..nz {
        let name = pre.state_name(z % np);
        let q = m
            .state_index(name)
            .ok_or_else(|| Error::Consistency(format!("preimage state `{name}` not in the machine")))?;
        if let Some(i) = a.kept_states().iter().position(|&k| k == q) {
            f.set(i, z, true);
        }
        if opts.drop_right == Some(z) {
            continue;
        }
        if let Some(i) = b.kept_states().iter().position(|&k| k == z) {
            g.set(i, z, true);
        }
    }
    Ok(Setup {
        apex: middle.states().to_vec(),
        mid: TqftFunctor::untrimmed(middle).with_budget(budget),
        a,
        b,
        f,
        g,
    })
}

fn first_difference(x: &BoolMat, y: &BoolMat) -> Option<usize> {
    (0..x.cols()).find(|&j| x.column(j) != y.column(j))
}

fn decode_apex(apex: &[String], mut index: usize, strands: usize) -> Vec<String> {
    let n = apex.len().max(1);
    let mut out = vec![String::new(); strands];
    for slot in out.iter_mut().rev() {
        *slot = apex[index % n].clone();
        index /= n;
    }
    out
}

fn check_probe(s: &Setup, d: &Diagram<Word>, opts: &NaturalityOptions) -> Result<ProbeReport> {
    let budget = &opts.budget;
    let h = s.mid.eval(d)?;
    let a = s.a.eval(d)?;
    let b = s.b.eval(d)?;
    let (kd, kc) = (d.dom().len(), d.cod().len());
    let (fd, fc) = (kron_power(&s.f, kd, budget)?, kron_power(&s.f, kc, budget)?);
    let (gd, gc) = (kron_power(&s.g, kd, budget)?, kron_power(&s.g, kc, budget)?);
    let (l1, l2) = (fc.mul(&h)?, a.mul(&fd)?);
    let (r1, r2) = (gc.mul(&h)?, b.mul(&gd)?);
    let witness = match (first_difference(&l1, &l2), first_difference(&r1, &r2)) {
        (Some(j), _) => Some(Witness {
            side: "left",
            apex: decode_apex(&s.apex, j, kd),
        }),
        (None, Some(j)) => Some(Witness {
            side: "right",
            apex: decode_apex(&s.apex, j, kd),
        }),
        (None, None) => None,
    };
    let span_equal = if opts.spans {
        let gamma_dom = SemiSpan::new(fd, gd)?;
        let gamma_cod = SemiSpan::new(fc, gc)?;
        match span_compose_with(&gamma_cod, &SemiSpan::of_map(a), budget) {
            Ok(upper) => Some(upper.is_isomorphic(&gamma_dom.then_map(&b)?)),
            Err(e) if e.is_budget() => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let (left, right) = (l1 == l2, r1 == r2);
    Ok(ProbeReport {
        name: probe_name(d),
        probe: d.to_term(),
        left,
        right,
        commutes: left && right,
        span_equal,
        witness,
    })
}

/// Checks every probe square; probes run in parallel under `opts.exec` and
/// are reported in input order.
pub fn check_naturality_with(t: &Transducer, m: &Fsa, probes: &[Diagram<Word>], opts: &NaturalityOptions) -> Result<NaturalityReport> {
    for d in probes {
        if !d.holes().is_empty() {
            return Err(Error::typing("probe", "probes may not contain holes"));
        }
    }
    let s = setup(t, m, opts)?;
    let probes = par::map(opts.exec, probes, |d| check_probe(&s, d, opts))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(NaturalityReport {
        all_commute: probes.iter().all(|p| p.commutes),
        left_kept: s.a.kept_names(),
        right_kept: s.b.kept_names(),
        apex: s.apex,
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::MonoidHom;

    fn fixture() -> Fsa {
        Fsa::from_strs(&["q0", "q1"], &["A", "B"], &[("q0", "A", "q1"), ("q1", "B", "q0")], "q0", &["q0"]).unwrap()
    }

    fn c_to_ab() -> Transducer {
        let c = Alphabet::chars("C").unwrap();
        Transducer::new(
            MonoidHom::new(c.clone(), Alphabet::chars("AB").unwrap(), [("C", Word::from("AB"))]).unwrap(),
            MonoidHom::new(c.clone(), Alphabet::chars("x").unwrap(), [("C", Word::from("x"))]).unwrap(),
            Fsa::universal(&c),
        )
        .unwrap()
    }

    fn opts() -> NaturalityOptions {
        NaturalityOptions {
            spans: true,
            ..NaturalityOptions::default()
        }
    }

    #[test]
    fn identity_transducer_is_natural() {
        let m = fixture();
        let t = Transducer::identity(m.alphabet());
        let r = check_naturality_with(&t, &m, &generator_probes(m.alphabet()), &opts()).unwrap();
        assert!(r.all_commute, "{r:#?}");
        for p in &r.probes {
            assert_ne!(p.span_equal, Some(false), "{}", p.name);
        }
    }

    #[test]
    fn substitution_on_fixture_is_natural() {
        let t = c_to_ab();
        let r = check_naturality_with(&t, &fixture(), &generator_probes(t.mid_alphabet()), &opts()).unwrap();
        assert!(r.all_commute, "{r:#?}");
        assert_eq!(r.left_kept, vec!["q0"]);
    }

    #[test]
    fn dropped_pair_state_is_detected() {
        let m = fixture();
        let t = Transducer::identity(m.alphabet());
        let o = NaturalityOptions {
            drop_right: Some(1),
            ..opts()
        };
        let r = check_naturality_with(&t, &m, &generator_probes(m.alphabet()), &o).unwrap();
        assert!(!r.all_commute);
        let bad = r.probes.iter().find(|p| p.name == "defect(+,A)").unwrap();
        assert!(!bad.right);
        assert_eq!(bad.witness.as_ref().unwrap().side, "right");
    }

    #[test]
    fn multi_state_cores_break_the_cap_square() {
        // Two core states over the same machine state are identified by the
        // left leg but kept apart by the middle cap, so strict maps cannot commute.
        let m = fixture();
        let core = Fsa::from_strs(&["s0", "s1"], &["A", "B"], &[("s0", "A", "s1"), ("s1", "B", "s0")], "s0", &["s0"]).unwrap();
        let id = MonoidHom::identity(m.alphabet());
        let t = Transducer::new(id.clone(), id, core).unwrap();
        let r = check_naturality(&t, &m, &generator_probes(m.alphabet())).unwrap();
        let cap = r.probes.iter().find(|p| p.name == "cap").unwrap();
        assert!(!cap.left, "{r:#?}");
        // A core state without an outgoing `A` edge kills the middle defect
        // while the machine defect below it survives.
        assert!(!r.probes.iter().find(|p| p.name == "defect(+,A)").unwrap().left);
    }

    #[test]
    fn overlapping_output_images_break_the_cup_square() {
        // With `C ↦ xx` the subdivision state of each edge starts an
        // out-of-phase `xx`-path, so it lies in the kept subspace of `T(M)`
        // although no apex state maps onto it.
        let c = Alphabet::chars("C").unwrap();
        let t = Transducer::new(
            MonoidHom::new(c.clone(), Alphabet::chars("AB").unwrap(), [("C", Word::from("AB"))]).unwrap(),
            MonoidHom::new(c.clone(), Alphabet::chars("x").unwrap(), [("C", Word::from("xx"))]).unwrap(),
            Fsa::universal(&c),
        )
        .unwrap();
        let r = check_naturality(&t, &fixture(), &generator_probes(t.mid_alphabet())).unwrap();
        assert!(r.right_kept.len() > r.apex.len(), "{r:#?}");
        let cup = r.probes.iter().find(|p| p.name == "cup").unwrap();
        assert!(cup.left && !cup.right);
    }

    #[test]
    fn empty_preimage_breaks_the_half_line_squares() {
        // `C ↦ AB` against `B+`: the pruned preimage keeps q0 and the final
        // state, so the apex is nonempty while both kept sets are empty.
        let m = Fsa::from_strs(&["q0", "q1"], &["A", "B"], &[("q0", "B", "q0"), ("q0", "B", "q1")], "q0", &["q1"]).unwrap();
        let t = c_to_ab();
        let r = check_naturality_with(&t, &m, &generator_probes(t.mid_alphabet()), &opts()).unwrap();
        assert!(r.left_kept.is_empty() && !r.apex.is_empty(), "{r:#?}");
        let end = r.probes.iter().find(|p| p.name == "half_end").unwrap();
        assert!(!end.left && end.span_equal == Some(true));
    }
}
