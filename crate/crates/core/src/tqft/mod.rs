/*!
Boolean-valued TQFTs with defects.

An automaton `M` with state set `Q` gives a symmetric monoidal functor
`Φ_M` from signed boundaries and cobordisms to free Boolean semimodules:
`(+)` and `(−)` both go to `𝔹^Q`, a strand carrying the word `w` goes to
`T_w` (its transpose on a `(−)` strand), the cup to `Σ_q e_q ⊗ e_q`, the cap
to the matching evaluation, and the two half-lines to the initial state and
to the indicator of the final states.

Evaluation is generic over the defect labels through [`DefectModel`], so the
categorical and operadic layers reuse the same interpreter.
*/

mod naturality;
mod pullback;
mod span;

pub use naturality::{check_naturality, check_naturality_with, generator_probes, NaturalityOptions, NaturalityReport, ProbeReport, Witness};
pub use pullback::{modified_pullback, PullbackFunctor, PullbackDiscrepancy};
pub use span::{span_compose, span_compose_with, SemiSpan};

use serde::{Deserialize, Serialize};

use crate::automata::{Fsa, Word};
use crate::boolsemi::{BoolMat, BoolVec};
use crate::budget::Budget;
use crate::cobordism::{Diagram, Generator, Sign, SignedBoundary, Term, View};
use crate::error::{Error, Result};

/// What a diagram interpreter needs to know about the strand space.
pub trait DefectModel<L> {
    /// Dimension of the space attached to a single strand.
    fn dim(&self) -> usize;
    /// Operator of a defect on a `(+)` strand, entry `(q', q)`.
    fn defect(&self, label: &L) -> Result<BoolMat>;
    /// Vector chosen by the incoming half-line.
    fn half_start(&self) -> BoolVec;
    /// Covector evaluated by the outgoing half-line.
    fn half_end(&self) -> BoolVec;
}

/// `dim^k`, checked against the budget.
pub(crate) fn power_dim(dim: usize, k: usize, budget: &Budget) -> Result<usize> {
    let mut n: usize = 1;
    for _ in 0..k {
        n = n.checked_mul(dim).filter(|&n| n <= budget.max_entries).ok_or(Error::Size {
            what: "boundary dimension",
            requested: dim.saturating_pow(k as u32),
            cap: budget.max_entries,
        })?;
    }
    Ok(n)
}

/// Swap of two tensor factors of dimension `n`: `e_i ⊗ e_j ↦ e_j ⊗ e_i`.
pub(crate) fn swap_matrix(n: usize) -> BoolMat {
    let mut m = BoolMat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            m.set(j * n + i, i * n + j, true);
        }
    }
    m
}

/// `Σ_q e_q ⊗ e_q` as an `n² × 1` column.
pub(crate) fn cup_matrix(n: usize) -> BoolMat {
    let mut m = BoolMat::zeros(n * n, 1);
    for q in 0..n {
        m.set(q * n + q, 0, true);
    }
    m
}

/// `k`-fold Kronecker power.
pub(crate) fn kron_power(m: &BoolMat, k: usize, budget: &Budget) -> Result<BoolMat> {
    let mut acc = BoolMat::identity(1);
    for _ in 0..k {
        acc = acc.kron_capped(m, budget.max_entries)?;
    }
    Ok(acc)
}

fn generator_matrix<L, M: DefectModel<L> + ?Sized>(model: &M, g: &Generator<L>, budget: &Budget) -> Result<BoolMat> {
    let n = model.dim();
    Ok(match g {
        Generator::Empty => BoolMat::identity(1),
        Generator::Id(_) => BoolMat::identity(n),
        Generator::Cup => {
            budget.check_entries("cup", n * n, 1)?;
            cup_matrix(n)
        }
        Generator::Cap => {
            budget.check_entries("cap", 1, n * n)?;
            cup_matrix(n).transpose()
        }
        Generator::Perm(..) => {
            budget.check_entries("permutation", n * n, n * n)?;
            swap_matrix(n)
        }
        Generator::HalfStart => BoolMat::column_of(&model.half_start()),
        Generator::HalfEnd => BoolMat::row_of(&model.half_end()),
        Generator::Defect(Sign::Plus, l) => model.defect(l)?,
        Generator::Defect(Sign::Minus, l) => model.defect(l)?.transpose(),
    })
}

/// Evaluates a diagram; the result maps `𝔹^{dim^|dom|}` to `𝔹^{dim^|cod|}`.
pub fn eval_diagram<L: Clone, M: DefectModel<L> + ?Sized>(model: &M, d: &Diagram<L>, budget: &Budget) -> Result<BoolMat> {
    power_dim(model.dim(), d.dom().len(), budget)?;
    power_dim(model.dim(), d.cod().len(), budget)?;
    match d.view() {
        View::Gen(g) => generator_matrix(model, g, budget),
        View::Hole => Err(Error::typing("hole", format!("unfilled hole {} → {}", d.dom(), d.cod()))),
        View::Compose(outer, inner) => {
            let a = eval_diagram(model, outer, budget)?;
            let b = eval_diagram(model, inner, budget)?;
            budget.check_entries("composite", a.rows(), b.cols())?;
            a.mul(&b)
        }
        View::Tensor(l, r) => {
            let a = eval_diagram(model, l, budget)?;
            let b = eval_diagram(model, r, budget)?;
            a.kron_capped(&b, budget.max_entries)
        }
    }
}

/// Which of the two unit/counit conventions is in use. Only one is
/// implemented; the tag travels with serialized functors for clarity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Cup is the unit `∅ → (+,−)`, cap the evaluation `(+,−) → ∅`.
    #[default]
    CupUnitCapEval,
}

/// `Φ_M` for a finite automaton.
#[derive(Clone, Debug)]
pub struct TqftFunctor {
    machine: Fsa,
    convention: Convention,
    budget: Budget,
}

impl TqftFunctor {
    /// The functor of the trimmed machine.
    pub fn new(machine: &Fsa) -> Self {
        TqftFunctor::untrimmed(machine.trim())
    }

    /// The functor of the machine exactly as given, on its full state set.
    pub fn untrimmed(machine: Fsa) -> Self {
        TqftFunctor {
            machine,
            convention: Convention::default(),
            budget: Budget::default(),
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn machine(&self) -> &Fsa {
        &self.machine
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// `T_a` in the state basis.
    pub fn defect_operator(&self, letter: &str) -> Result<BoolMat> {
        let a = self
            .machine
            .alphabet()
            .index_of(letter)
            .ok_or_else(|| Error::input(format!("unknown letter `{letter}`")))?;
        Ok(self.machine.letter_matrix(a))
    }

    /// `T_w = T_{w_k} ··· T_{w_1}`.
    pub fn word_operator(&self, word: &Word) -> Result<BoolMat> {
        let w = self.machine.alphabet().encode(word.symbols())?;
        Ok(self.machine.word_matrix(&w))
    }

    pub fn eval(&self, d: &Diagram<Word>) -> Result<BoolMat> {
        eval_diagram(self, d, &self.budget)
    }

    /// Typechecks and evaluates a raw term.
    pub fn eval_term(&self, t: &Term<Word>) -> Result<BoolMat> {
        self.eval(&t.typecheck()?)
    }

    /// Dimension of the space attached to a boundary.
    pub fn boundary_dim(&self, b: &SignedBoundary) -> Result<usize> {
        power_dim(self.machine.len(), b.len(), &self.budget)
    }
}

impl DefectModel<Word> for TqftFunctor {
    fn dim(&self) -> usize {
        self.machine.len()
    }

    fn defect(&self, label: &Word) -> Result<BoolMat> {
        self.word_operator(label)
    }

    fn half_start(&self) -> BoolVec {
        self.machine.initial_vector()
    }

    fn half_end(&self) -> BoolVec {
        self.machine.final_vector()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{Alphabet, Automaton};
    use crate::cobordism::{floating_line, snakes, Sign::*};

    fn fixture() -> Fsa {
        Fsa::from_strs(&["q0", "q1"], &["A", "B"], &[("q0", "A", "q1"), ("q1", "B", "q0")], "q0", &["q0"]).unwrap()
    }

    #[test]
    fn defect_operator_of_fixture() {
        let f = TqftFunctor::new(&fixture());
        let ta = f.defect_operator("A").unwrap();
        assert_eq!(ta.ones(), vec![(1, 0)]);
        assert!(f.defect_operator("C").is_err());
        let m = Fsa::from_strs(&["q0"], &["A", "B"], &[("q0", "A", "q0")], "q0", &["q0"]).unwrap();
        assert!(TqftFunctor::new(&m).defect_operator("B").unwrap().is_zero());
    }

    #[test]
    fn floating_lines_decide_membership() {
        let f = TqftFunctor::new(&fixture());
        let one = BoolMat::identity(1);
        assert_eq!(f.eval(&floating_line(Word::from("ABAB"))).unwrap(), one);
        assert!(f.eval(&floating_line(Word::from("ABA"))).unwrap().is_zero());
        assert_eq!(f.eval(&floating_line(Word::from(""))).unwrap(), one);
    }

    #[test]
    fn snakes_are_identities() {
        let f = TqftFunctor::new(&fixture());
        for s in snakes::<Word>() {
            assert_eq!(f.eval(&s).unwrap(), BoolMat::identity(2));
        }
    }

    #[test]
    fn tensor_is_kronecker() {
        let f = TqftFunctor::new(&fixture());
        let a = crate::cobordism::defect(Plus, Word::from("A"));
        let b = crate::cobordism::defect(Minus, Word::from("B"));
        let t = Diagram::tensor(a.clone(), b.clone());
        let expect = f.eval(&a).unwrap().kron(&f.eval(&b).unwrap()).unwrap();
        assert_eq!(f.eval(&t).unwrap(), expect);
        // kron(T_A, T_A) sends δ_q0 ⊗ δ_q0 to δ_q1 ⊗ δ_q1.
        let ta = f.defect_operator("A").unwrap();
        let v = ta.kron(&ta).unwrap().apply(&BoolVec::basis(4, 0)).unwrap();
        assert_eq!(v, BoolVec::basis(4, 3));
    }

    #[test]
    fn holes_do_not_evaluate() {
        let f = TqftFunctor::new(&fixture());
        let h = Diagram::<Word>::hole(SignedBoundary::plus(), SignedBoundary::plus());
        assert!(matches!(f.eval(&h), Err(Error::Type { .. })));
    }

    #[test]
    fn budget_caps_boundary_size() {
        let alphabet = Alphabet::chars("A").unwrap();
        let f = TqftFunctor::untrimmed(Fsa::universal(&alphabet)).with_budget(Budget {
            max_entries: 4,
            ..Budget::default()
        });
        let wide = Diagram::identity(&SignedBoundary(vec![Plus; 3]));
        assert!(f.eval(&wide).is_ok());
        let two = TqftFunctor::untrimmed(fixture()).with_budget(Budget {
            max_entries: 4,
            ..Budget::default()
        });
        assert!(two.eval(&wide).unwrap_err().is_budget());
        assert!(fixture().accepts(&Word::from("AB").0).unwrap());
    }
}
