use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{unique_label, CatFunctor, FreeCat, FunctorSpec, Path, PathSpec};
use crate::automata::{Fsa, Word};
use crate::boolsemi::{BoolMat, BoolVec};
use crate::budget::Budget;
use crate::cobordism::Diagram;
use crate::error::{Error, Result};
use crate::tqft::{eval_diagram, DefectModel};

/// Outcome of a structural check on a functor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctorCheck {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl FunctorCheck {
    fn ok() -> FunctorCheck {
        FunctorCheck { holds: true, witness: None }
    }

    fn fail(witness: String) -> FunctorCheck {
        FunctorCheck {
            holds: false,
            witness: Some(witness),
        }
    }
}

/// Every arrow has finitely many preimages. Between free categories this
/// fails exactly when the generators sent to identities contain a cycle.
pub fn check_finitary(f: &CatFunctor) -> FunctorCheck {
    let src = f.source();
    let collapsed: HashSet<usize> = f.collapsed_generators().into_iter().collect();
    // Colour-based DFS over the subgraph of collapsed generators.
    let n = src.object_count();
    let mut colour = vec![0u8; n];
    let mut via: Vec<Option<usize>> = vec![None; n];
    for root in 0..n {
        if colour[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        colour[root] = 1;
        while let Some(top) = stack.last_mut() {
            let (x, i) = *top;
            let out: Vec<usize> = src.out_generators(x).iter().copied().filter(|g| collapsed.contains(g)).collect();
            if i < out.len() {
                top.1 += 1;
                let g = out[i];
                let y = src.generators()[g].dst;
                match colour[y] {
                    0 => {
                        colour[y] = 1;
                        via[y] = Some(g);
                        stack.push((y, 0));
                    }
                    1 => {
                        let mut cycle = vec![src.generators()[g].label.clone()];
                        let mut z = x;
                        while z != y {
                            let h = via[z].expect("on the stack");
                            cycle.push(src.generators()[h].label.clone());
                            z = src.generators()[h].src;
                        }
                        cycle.reverse();
                        return FunctorCheck::fail(format!("cycle of collapsed generators: {}", cycle.join(" ")));
                    }
                    _ => {}
                }
            } else {
                colour[x] = 2;
                stack.pop();
            }
        }
    }
    FunctorCheck::ok()
}

/// Unique lifting of factorisations. In a free category the factorisations
/// of a path are its split points, and a split point of `f(ψ)` lifts exactly
/// when it falls on a generator boundary of `ψ`; so the property holds iff
/// every generator is sent to a single generator.
pub fn check_ulf(f: &CatFunctor) -> FunctorCheck {
    for (g, gen) in f.source().generators().iter().enumerate() {
        let img = f.generator(g);
        match img.len() {
            1 => {}
            0 => {
                return FunctorCheck::fail(format!(
                    "`{}` is sent to an identity, so id = id ∘ id lifts twice",
                    gen.label
                ))
            }
            _ => {
                return FunctorCheck::fail(format!(
                    "`{}` ↦ {} has a split point with no lift",
                    gen.label,
                    f.target().show(img)
                ))
            }
        }
    }
    FunctorCheck::ok()
}

/// A categorical automaton `τ : 𝒬 → 𝒞` with initial object and final objects.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CatFsaJson", into = "CatFsaJson")]
pub struct CatFsa {
    tau: CatFunctor,
    initial: Option<usize>,
    finals: BTreeSet<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatFsaJson {
    states: FreeCat,
    base: FreeCat,
    tau: FunctorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial: Option<String>,
    #[serde(default)]
    finals: Vec<String>,
    #[serde(default, rename = "final", skip_serializing)]
    single_final: Option<String>,
}

impl TryFrom<CatFsaJson> for CatFsa {
    type Error = Error;

    fn try_from(j: CatFsaJson) -> Result<CatFsa> {
        let tau = CatFunctor::from_spec(&j.states, &j.base, &j.tau)?;
        let initial = j.initial.as_deref().map(|n| j.states.object(n)).transpose()?;
        let finals = j
            .finals
            .iter()
            .chain(&j.single_final)
            .map(|n| j.states.object(n))
            .collect::<Result<BTreeSet<_>>>()?;
        CatFsa::new(tau, initial, finals)
    }
}

impl From<CatFsa> for CatFsaJson {
    fn from(m: CatFsa) -> CatFsaJson {
        let states = m.states().clone();
        CatFsaJson {
            tau: m.tau.to_spec(),
            base: m.base().clone(),
            initial: m.initial.map(|q| states.objects()[q].clone()),
            finals: m.finals.iter().map(|&q| states.objects()[q].clone()).collect(),
            single_final: None,
            states,
        }
    }
}

impl CatFsa {
    /// `initial = None` is the automaton with no runs.
    pub fn new(tau: CatFunctor, initial: Option<usize>, finals: BTreeSet<usize>) -> Result<CatFsa> {
        let n = tau.source().object_count();
        if initial.map_or(false, |q| q >= n) || finals.iter().any(|&q| q >= n) {
            return Err(Error::input("initial or final object out of range"));
        }
        Ok(CatFsa { tau, initial, finals })
    }

    pub fn tau(&self) -> &CatFunctor {
        &self.tau
    }

    pub fn states(&self) -> &FreeCat {
        self.tau.source()
    }

    pub fn base(&self) -> &FreeCat {
        self.tau.target()
    }

    pub fn initial(&self) -> Option<usize> {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn len(&self) -> usize {
        self.states().object_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states().objects()[q]
    }

    pub fn is_finitary(&self) -> FunctorCheck {
        check_finitary(&self.tau)
    }

    pub fn is_ulf(&self) -> FunctorCheck {
        check_ulf(&self.tau)
    }

    /// Images of accepted runs, up to length `bound` in the base.
    pub fn arrow_language(&self, bound: usize) -> Result<BTreeSet<Path>> {
        self.arrow_language_with(bound, &Budget::default())
    }

    pub fn arrow_language_with(&self, bound: usize, budget: &Budget) -> Result<BTreeSet<Path>> {
        let mut out = BTreeSet::new();
        let Some(q0) = self.initial else {
            return Ok(out);
        };
        let start = (q0, Path::identity(self.tau.object(q0)));
        let mut seen: HashSet<(usize, Path)> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some((q, p)) = queue.pop_front() {
            if self.finals.contains(&q) {
                out.insert(p.clone());
            }
            for &g in self.states().out_generators(q) {
                let img = self.tau.generator(g);
                if p.len() + img.len() > bound {
                    continue;
                }
                let next = (self.states().generators()[g].dst, p.then(img).expect("functor respects endpoints"));
                if seen.insert(next.clone()) {
                    if seen.len() > budget.max_configs {
                        return Err(Error::Size {
                            what: "arrow language search",
                            requested: seen.len(),
                            cap: budget.max_configs,
                        });
                    }
                    queue.push_back(next);
                }
            }
        }
        Ok(out)
    }

    /// The arrow language as words of base generator labels.
    pub fn arrow_words(&self, bound: usize) -> Result<BTreeSet<Word>> {
        Ok(self
            .arrow_language(bound)?
            .iter()
            .map(|p| Word::from_symbols(self.base().labels(p)))
            .collect())
    }

    /// `T_φ`: entry `(q', q)` is set when some run `q → q'` has image `φ`.
    pub fn t_phi(&self, phi: &Path) -> Result<BoolMat> {
        let base = self.base();
        if phi.src >= base.object_count() || phi.dst >= base.object_count() || phi.gens.iter().any(|&g| g >= base.generators().len()) {
            return Err(Error::input("path is not an arrow of the base category"));
        }
        let n = self.len();
        let states = self.states();
        let mut out = BoolMat::zeros(n, n);
        for q in (0..n).filter(|&q| self.tau.object(q) == phi.src) {
            let mut seen: HashSet<(usize, usize)> = HashSet::from([(q, 0)]);
            let mut stack = vec![(q, 0)];
            while let Some((s, i)) = stack.pop() {
                if i == phi.len() {
                    out.set(s, q, true);
                }
                for &g in states.out_generators(s) {
                    let img = &self.tau.generator(g).gens;
                    if phi.gens[i..].starts_with(img) {
                        let next = (states.generators()[g].dst, i + img.len());
                        if seen.insert(next) {
                            stack.push(next);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn t_phi_spec(&self, phi: &PathSpec) -> Result<BoolMat> {
        self.t_phi(&self.base().resolve(phi)?)
    }

    pub fn initial_vector(&self) -> BoolVec {
        let mut v = BoolVec::zeros(self.len());
        if let Some(q) = self.initial {
            v.set(q, true);
        }
        v
    }

    pub fn final_vector(&self) -> BoolVec {
        let mut v = BoolVec::zeros(self.len());
        for &q in &self.finals {
            v.set(q, true);
        }
        v
    }

    /// Evaluates a diagram whose defects carry base arrows.
    pub fn eval(&self, d: &Diagram<Path>, budget: &Budget) -> Result<BoolMat> {
        eval_diagram(self, d, budget)
    }
}

impl DefectModel<Path> for CatFsa {
    fn dim(&self) -> usize {
        self.len()
    }

    fn defect(&self, label: &Path) -> Result<BoolMat> {
        self.t_phi(label)
    }

    fn half_start(&self) -> BoolVec {
        self.initial_vector()
    }

    fn half_end(&self) -> BoolVec {
        self.final_vector()
    }
}

/// An automaton as a functor into the one-object category on its letters:
/// one object per state and one generator per transition.
pub fn encode_fsa(m: &Fsa) -> CatFsa {
    let base = FreeCat::monoid(m.alphabet().letters()).expect("letters are distinct");
    let mut taken = HashSet::new();
    let mut gens = Vec::new();
    let mut images = Vec::new();
    for &(p, a, q) in m.transitions() {
        let label = unique_label(format!("{}-{}->{}", m.state_name(p), m.alphabet().letter(a), m.state_name(q)), &mut taken);
        gens.push(super::Generator { src: p, label, dst: q });
        images.push(base.gen_path(a));
    }
    let states = FreeCat::from_parts(m.states().to_vec(), gens);
    let tau = CatFunctor::new(states, base, vec![0; m.len()], images).expect("transitions are arrows of the one-object category");
    CatFsa::new(tau, Some(m.initial()), m.finals().clone()).expect("states in range")
}
