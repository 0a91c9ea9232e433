use serde::Serialize;

use super::grammar::{grammar_pullback, grammar_tqft_operator, CfGrammar};
use super::splice::SplicedSeq;
use crate::boolsemi::{BoolMat, BoolVec};
use crate::budget::Budget;
use crate::catauto::{CatFsa, CatFunctor, CatTransducer, FreeCat, Path};
use crate::cobordism::{Diagram, Generator, Sign, Term, View};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::tqft::{eval_diagram, kron_power, DefectModel, Witness};

/// Paths of the source of `f` starting at `from` whose image is `phi`, of
/// length at most `max_len`. The flag is false when some lift was cut off
/// by the length limit.
pub fn lifts(f: &CatFunctor, phi: &Path, from: usize, max_len: usize) -> (Vec<Path>, bool) {
    let src = f.source();
    let mut out = Vec::new();
    let mut complete = true;
    if f.object(from) != phi.src {
        return (out, complete);
    }
    let mut stack = vec![(from, 0usize, Vec::<usize>::new())];
    while let Some((q, i, gens)) = stack.pop() {
        if i == phi.len() {
            out.push(Path { src: from, dst: q, gens: gens.clone() });
        }
        for &g in src.out_generators(q) {
            let img = &f.generator(g).gens;
            if phi.gens[i..].starts_with(img) {
                if gens.len() == max_len {
                    complete = false;
                    continue;
                }
                let mut next = gens.clone();
                next.push(g);
                stack.push((src.generators()[g].dst, i + img.len(), next));
            }
        }
    }
    out.sort();
    (out, complete)
}

/// `T_{ψ₀ □ ⋯ □ ψ_n}` over the objects of `𝒬`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplicedOperator {
    pub matrix: BoolMat,
    /// False when some lift search hit the length limit.
    pub complete: bool,
}

/// Entry `(q', q)` is set when some `w₀ □ ⋯ □ w_n` in `𝒲𝒬` with image `d`
/// has `s(w₀) = q` and `t(w_n) = q'`. Lifts of the parts are independent, so
/// this enumerates lifts part by part, up to `max_lift_len` generators each.
pub fn spliced_defect_operator(m: &CatFsa, d: &SplicedSeq, max_lift_len: usize) -> Result<SplicedOperator> {
    let base = m.base();
    if d.parts().iter().any(|p| p.src >= base.object_count() || p.dst >= base.object_count() || p.gens.iter().any(|&g| g >= base.generators().len())) {
        return Err(Error::input("spliced sequence is not over the machine's base category"));
    }
    let n = m.len();
    let tau = m.tau();
    let parts = d.parts();
    let mut complete = true;
    let mut lifts_from = |phi: &Path, q: usize| {
        let (ls, c) = lifts(tau, phi, q, max_lift_len);
        complete &= c;
        ls
    };
    let mut matrix = BoolMat::zeros(n, n);
    let last = parts.len() - 1;
    let mut middle_ok = true;
    for phi in &parts[1..last.max(1)] {
        if !(0..n).any(|q| !lifts_from(phi, q).is_empty()) {
            middle_ok = false;
            break;
        }
    }
    if middle_ok {
        let ends: Vec<usize> = if last == 0 {
            Vec::new()
        } else {
            let mut e: Vec<usize> = (0..n).flat_map(|r| lifts_from(&parts[last], r)).map(|p| p.dst).collect();
            e.sort_unstable();
            e.dedup();
            e
        };
        for q in 0..n {
            let first = lifts_from(&parts[0], q);
            if last == 0 {
                for p in first {
                    matrix.set(p.dst, q, true);
                }
            } else if !first.is_empty() {
                for &e in &ends {
                    matrix.set(e, q, true);
                }
            }
        }
    }
    Ok(SplicedOperator { matrix, complete })
}

/// A length limit under which every lift of `phi` is found when no cycle of
/// `τ` is collapsed: between two consumed generators a lift takes fewer than
/// `|Q|` collapsed steps.
fn lift_limit(m: &CatFsa, d: &SplicedSeq) -> usize {
    let longest = d.parts().iter().map(Path::len).max().unwrap_or(0);
    longest + (longest + 1) * m.len()
}

impl DefectModel<SplicedSeq> for CatFsa {
    fn dim(&self) -> usize {
        self.len()
    }

    fn defect(&self, label: &SplicedSeq) -> Result<BoolMat> {
        let op = spliced_defect_operator(self, label, lift_limit(self, label))?;
        if !op.complete {
            return Err(Error::Bound(format!("lifts of {} are unbounded: τ collapses a cycle", label.show(self.base()))));
        }
        Ok(op.matrix)
    }

    fn half_start(&self) -> BoolVec {
        self.initial_vector()
    }

    fn half_end(&self) -> BoolVec {
        self.final_vector()
    }
}

/// The operadic TQFT of a grammar over `𝔹𝒳`, `𝒳 = π₁(Col) ∩ π₂(Col)`.
/// The half-lines pick the two ends `(C, C')` of the start colour.
#[derive(Clone, Debug)]
pub struct GrammarModel<'a> {
    grammar: &'a CfGrammar,
    xs: Vec<usize>,
}

impl<'a> GrammarModel<'a> {
    pub fn new(grammar: &'a CfGrammar) -> GrammarModel<'a> {
        GrammarModel {
            xs: grammar.objects_x(),
            grammar,
        }
    }

    pub fn objects(&self) -> &[usize] {
        &self.xs
    }

    pub fn object_names(&self) -> Vec<String> {
        self.xs.iter().map(|&x| self.grammar.base().objects()[x].clone()).collect()
    }

    fn end(&self, second: bool) -> BoolVec {
        let mut v = BoolVec::zeros(self.xs.len());
        if let Some(s) = self.grammar.start() {
            let (c, c2) = self.grammar.color_map()[s];
            if let Ok(i) = self.xs.binary_search(if second { &c2 } else { &c }) {
                v.set(i, true);
            }
        }
        v
    }
}

impl DefectModel<SplicedSeq> for GrammarModel<'_> {
    fn dim(&self) -> usize {
        self.xs.len()
    }

    fn defect(&self, label: &SplicedSeq) -> Result<BoolMat> {
        grammar_tqft_operator(self.grammar, label)
    }

    fn half_start(&self) -> BoolVec {
        self.end(false)
    }

    fn half_end(&self) -> BoolVec {
        self.end(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperadicValue<L> {
    Value(BoolMat),
    /// Fewer fillings than holes: the partially filled operation.
    Residual(Term<L>),
}

/// Fills the holes of `term` in order, then evaluates if none remain.
pub fn operadic_eval<L: Clone, M: DefectModel<L> + ?Sized>(model: &M, term: &Term<L>, fillings: &[Term<L>], budget: &Budget) -> Result<OperadicValue<L>> {
    let d = term.typecheck()?;
    let holes = d.holes().len();
    if fillings.len() > holes {
        return Err(Error::typing("$", format!("{} fillings for {holes} holes", fillings.len())));
    }
    let fills = fillings
        .iter()
        .enumerate()
        .map(|(i, f)| f.typecheck().map_err(|e| retag(e, i)))
        .collect::<Result<Vec<_>>>()?;
    let filled = d.fill(&fills)?;
    if fills.len() < holes {
        return Ok(OperadicValue::Residual(filled.to_term()));
    }
    Ok(OperadicValue::Value(eval_diagram(model, &filled, budget)?))
}

fn retag(e: Error, i: usize) -> Error {
    match e {
        Error::Type { path, message } => Error::Type {
            path: format!("fillings[{i}]{}", path.trim_start_matches('$')),
            message,
        },
        other => other,
    }
}

#[derive(Clone, Debug, Default)]
pub struct GrammarNaturalityOptions {
    pub exec: Exec,
    pub budget: Budget,
    /// Negative control: zero the right leg on this apex object.
    pub drop: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrammarProbeReport {
    pub name: String,
    pub left: bool,
    pub right: bool,
    pub commutes: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrammarNaturalityReport {
    /// `𝒳` of the lifted grammar, as objects of `𝒬_T`.
    pub apex: Vec<String>,
    pub left_space: Vec<String>,
    pub right_space: Vec<String>,
    pub probes: Vec<GrammarProbeReport>,
    pub all_commute: bool,
}

/// The matrix `𝔹𝒳_apex → 𝔹𝒳_target` of an object map.
fn leg(apex: &[usize], target: &[usize], f: &CatFunctor) -> BoolMat {
    let mut m = BoolMat::zeros(target.len(), apex.len());
    for (j, &q) in apex.iter().enumerate() {
        if let Ok(i) = target.binary_search(&f.object(q)) {
            m.set(i, j, true);
        }
    }
    m
}

fn structural_probes<L>() -> Vec<Diagram<L>>
where
    L: Clone,
{
    use Sign::*;
    let g = Diagram::gen;
    let mut out = vec![g(Generator::Id(Plus)), g(Generator::Id(Minus)), g(Generator::Cup), g(Generator::Cap)];
    for a in [Plus, Minus] {
        for b in [Plus, Minus] {
            out.push(g(Generator::Perm(a, b)));
        }
    }
    out.push(g(Generator::HalfStart));
    out.push(g(Generator::HalfEnd));
    out
}

fn probe_name(states: &FreeCat, d: &Diagram<SplicedSeq>) -> String {
    match d.view() {
        View::Gen(Generator::Defect(s, p)) => format!("defect({s},{})", p.show(states)),
        View::Gen(Generator::Id(s)) => format!("id({s})"),
        View::Gen(Generator::Perm(a, b)) => format!("perm({a},{b})"),
        View::Gen(g) => g.name().to_string(),
        _ => format!("diagram {} → {}", d.dom(), d.cod()),
    }
}

pub fn grammar_naturality_check(t: &CatTransducer, g: &CfGrammar, probes: &[SplicedSeq]) -> Result<GrammarNaturalityReport> {
    grammar_naturality_check_with(t, g, probes, &GrammarNaturalityOptions::default())
}

/// Checks both squares of the span `𝒳_𝒢 ← 𝒳_apex → 𝒳_{𝒢'}` with legs
/// `α` and `β` on objects: for every probe `D` over `𝒬_T`,
/// `f·Ψ_apex(D) = Ψ_𝒢(𝒲α D)·f` and `g·Ψ_apex(D) = Ψ_{𝒢'}(𝒲β D)·g`, tensor
/// powers taken per strand. The apex is the pullback grammar and `𝒢'` the
/// transduced grammar. Probes are the given spliced sequences on both
/// orientations (the rules of the pullback grammar when none are given)
/// together with the structural generators.
pub fn grammar_naturality_check_with(t: &CatTransducer, g: &CfGrammar, probes: &[SplicedSeq], opts: &GrammarNaturalityOptions) -> Result<GrammarNaturalityReport> {
    if !g.is_chromatic() {
        return Err(Error::input("naturality is stated for chromatic grammars"));
    }
    let budget = &opts.budget;
    let apex = grammar_pullback(t, g, budget)?;
    let right = apex.map_base(t.beta())?;
    let (mh, ma, mb) = (GrammarModel::new(&apex), GrammarModel::new(g), GrammarModel::new(&right));
    let f = leg(mh.objects(), ma.objects(), t.alpha());
    let mut gl = leg(mh.objects(), mb.objects(), t.beta());
    if let Some(k) = opts.drop {
        for i in 0..gl.rows() {
            if k < gl.cols() {
                gl.set(i, k, false);
            }
        }
    }
    let seqs: Vec<SplicedSeq> = if probes.is_empty() { apex.rules().to_vec() } else { probes.to_vec() };
    let states = t.states();
    for s in &seqs {
        if s.parts().iter().any(|p| p.src >= states.object_count() || p.dst >= states.object_count() || p.gens.iter().any(|&h| h >= states.generators().len())) {
            return Err(Error::input("probe is not over the transducer's state category"));
        }
    }
    let mut diagrams = structural_probes();
    for s in seqs {
        for sign in [Sign::Plus, Sign::Minus] {
            diagrams.push(Diagram::gen(Generator::Defect(sign, s.clone())));
        }
    }
    let apex_names = mh.object_names();
    let check = |d: &Diagram<SplicedSeq>| -> Result<GrammarProbeReport> {
        let h = eval_diagram(&mh, d, budget)?;
        let a = eval_diagram(&ma, &d.map_labels(&mut |s: &SplicedSeq| Ok(s.map(t.alpha())))?, budget)?;
        let b = eval_diagram(&mb, &d.map_labels(&mut |s: &SplicedSeq| Ok(s.map(t.beta())))?, budget)?;
        let (kd, kc) = (d.dom().len(), d.cod().len());
        let l1 = kron_power(&f, kc, budget)?.mul(&h)?;
        let l2 = a.mul(&kron_power(&f, kd, budget)?)?;
        let r1 = kron_power(&gl, kc, budget)?.mul(&h)?;
        let r2 = b.mul(&kron_power(&gl, kd, budget)?)?;
        let diff = |x: &BoolMat, y: &BoolMat| (0..x.cols()).find(|&j| x.column(j) != y.column(j));
        let witness = match (diff(&l1, &l2), diff(&r1, &r2)) {
            (Some(j), _) => Some(("left", j)),
            (None, Some(j)) => Some(("right", j)),
            _ => None,
        }
        .map(|(side, mut j)| {
            let n = apex_names.len().max(1);
            let mut names = vec![String::new(); kd];
            for slot in names.iter_mut().rev() {
                *slot = apex_names[j % n].clone();
                j /= n;
            }
            Witness { side, apex: names }
        });
        let (left, right) = (l1 == l2, r1 == r2);
        Ok(GrammarProbeReport {
            name: probe_name(states, d),
            left,
            right,
            commutes: left && right,
            witness,
        })
    };
    let reports = par::map(opts.exec, &diagrams, check).into_iter().collect::<Result<Vec<_>>>()?;
    Ok(GrammarNaturalityReport {
        apex: apex_names,
        left_space: ma.object_names(),
        right_space: mb.object_names(),
        all_commute: reports.iter().all(|r| r.commutes),
        probes: reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Fsa;
    use crate::catauto::encode_fsa;
    use crate::cobordism::{floating_line_of, SignedBoundary};
    use crate::operad::grammar::language_of_arrows;
    use crate::operad::Species;

    fn fixture() -> CatFsa {
        encode_fsa(&Fsa::from_strs(&["q0", "q1"], &["A", "B"], &[("q0", "A", "q1"), ("q1", "B", "q0")], "q0", &["q0"]).unwrap())
    }

    fn seq(c: &FreeCat, parts: &[&[&str]]) -> SplicedSeq {
        SplicedSeq::new(parts.iter().map(|p| if p.is_empty() { Path::identity(0) } else { c.path(p).unwrap() }).collect()).unwrap()
    }

    fn dyck() -> CfGrammar {
        let base = FreeCat::monoid(["(", ")"]).unwrap();
        let s = Species::from_strs(&["S"], &[("p", &["S", "S"], "S"), ("e", &[], "S")]).unwrap();
        let p = seq(&base, &[&["("], &[")"], &[]]);
        let e = seq(&base, &[&[]]);
        CfGrammar::new(base, s, vec![(0, 0)], Some(0), vec![p, e]).unwrap()
    }

    #[test]
    fn gap_free_sequences_agree_with_path_operators() {
        let m = fixture();
        for p in m.base().paths_up_to(4) {
            let op = spliced_defect_operator(&m, &SplicedSeq::constant(p.clone()), 8).unwrap();
            assert!(op.complete);
            assert_eq!(op.matrix, m.t_phi(&p).unwrap());
        }
    }

    #[test]
    fn one_gap_lift_through_q1() {
        let m = fixture();
        let op = spliced_defect_operator(&m, &seq(m.base(), &[&["A"], &["B"]]), 4).unwrap();
        assert_eq!(op.matrix.ones(), vec![(0, 0)]);
        let none = spliced_defect_operator(&m, &seq(m.base(), &[&["A", "A"], &["B"]]), 4).unwrap();
        assert!(none.matrix.is_zero());
    }

    #[test]
    fn filled_floating_line_decides_membership() {
        let m = fixture();
        let ab = SplicedSeq::constant(m.base().path(&["A", "B"]).unwrap());
        let plus = SignedBoundary::plus();
        let hole = Term::Hole(plus.clone(), plus.clone());
        let line = Term::Compose(
            Box::new(Term::Gen(Generator::HalfEnd)),
            Box::new(Term::Compose(Box::new(hole), Box::new(Term::Gen(Generator::HalfStart)))),
        );
        let fill = Term::Gen(Generator::Defect(Sign::Plus, ab.clone()));
        let b = Budget::default();
        let v = operadic_eval(&m, &line, &[fill], &b).unwrap();
        assert_eq!(v, OperadicValue::Value(BoolMat::identity(1)));
        let direct = eval_diagram(&m, &floating_line_of(Some(ab)), &b).unwrap();
        assert_eq!(v, OperadicValue::Value(direct));
        assert!(matches!(operadic_eval(&m, &line, &[], &b).unwrap(), OperadicValue::Residual(_)));
    }

    #[test]
    fn dyck_floating_lines_follow_the_language() {
        let g = dyck();
        let model = GrammarModel::new(&g);
        let b = Budget::default();
        let lang = language_of_arrows(&g, 6).unwrap();
        for p in g.base().paths_up_to(6) {
            let v = eval_diagram(&model, &floating_line_of(Some(SplicedSeq::constant(p.clone()))), &b).unwrap();
            assert_eq!(v.get(0, 0), lang.contains(&p), "{}", g.base().show(&p));
        }
    }

    #[test]
    fn relabelling_is_natural_and_a_dropped_leg_is_caught() {
        let g = dyck();
        let out = FreeCat::monoid(["[", "]"]).unwrap();
        let qt = g.base().clone();
        let beta = CatFunctor::new(qt.clone(), out.clone(), vec![0], vec![out.gen_path(0), out.gen_path(1)]).unwrap();
        let t = CatTransducer::new(CatFunctor::identity(&qt), beta).unwrap();
        let r = grammar_naturality_check(&t, &g, &[]).unwrap();
        assert!(r.all_commute, "{r:?}");
        let id = grammar_naturality_check(&CatTransducer::identity(g.base()), &g, &[seq(&qt, &[&["("], &[")"]])]).unwrap();
        assert!(id.all_commute);
        let opts = GrammarNaturalityOptions {
            drop: Some(0),
            ..Default::default()
        };
        let bad = grammar_naturality_check_with(&t, &g, &[], &opts).unwrap();
        assert!(!bad.all_commute);
        let w = bad.probes.iter().find_map(|p| p.witness.clone()).unwrap();
        assert_eq!(w.side, "right");
    }
}
