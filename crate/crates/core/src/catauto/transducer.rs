use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{unique_label, CatFsa, CatFunctor, FreeCat, FunctorSpec, Generator as CatGen, Path};
use crate::boolsemi::BoolMat;
use crate::budget::Budget;
use crate::cobordism::{Diagram, Generator, Sign, View};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::tqft::{eval_diagram, kron_power};
use crate::transducer::Transducer;

/// A categorical transducer: two functors `α : 𝒬_T → 𝒞`, `β : 𝒬_T → 𝒞'`
/// out of a common free category, with `α` injective on objects.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CatTransducerJson", into = "CatTransducerJson")]
pub struct CatTransducer {
    alpha: CatFunctor,
    beta: CatFunctor,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatTransducerJson {
    states: FreeCat,
    input: FreeCat,
    output: FreeCat,
    alpha: FunctorSpec,
    beta: FunctorSpec,
}

impl TryFrom<CatTransducerJson> for CatTransducer {
    type Error = Error;

    fn try_from(j: CatTransducerJson) -> Result<CatTransducer> {
        CatTransducer::new(
            CatFunctor::from_spec(&j.states, &j.input, &j.alpha)?,
            CatFunctor::from_spec(&j.states, &j.output, &j.beta)?,
        )
    }
}

impl From<CatTransducer> for CatTransducerJson {
    fn from(t: CatTransducer) -> CatTransducerJson {
        CatTransducerJson {
            states: t.states().clone(),
            input: t.alpha.target().clone(),
            output: t.beta.target().clone(),
            alpha: t.alpha.to_spec(),
            beta: t.beta.to_spec(),
        }
    }
}

impl CatTransducer {
    pub fn new(alpha: CatFunctor, beta: CatFunctor) -> Result<CatTransducer> {
        if alpha.source() != beta.source() {
            return Err(Error::input("alpha and beta must share their source category"));
        }
        if !alpha.is_injective_on_objects() {
            return Err(Error::input("alpha must be injective on objects"));
        }
        Ok(CatTransducer { alpha, beta })
    }

    /// `α = β = id`.
    pub fn identity(c: &FreeCat) -> CatTransducer {
        let id = CatFunctor::identity(c);
        CatTransducer { alpha: id.clone(), beta: id }
    }

    pub fn alpha(&self) -> &CatFunctor {
        &self.alpha
    }

    pub fn beta(&self) -> &CatFunctor {
        &self.beta
    }

    pub fn states(&self) -> &FreeCat {
        self.alpha.source()
    }

    /// The object of `𝒬_T` over an input object, if any.
    pub fn over(&self, x: usize) -> Option<usize> {
        self.alpha.object_map().iter().position(|&y| y == x)
    }
}

/// The pullback `𝒜 ×_𝒞 ℬ` of two functors into the same free category,
/// with its projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub cat: FreeCat,
    pub left: CatFunctor,
    pub right: CatFunctor,
    /// Whether some generator longer than the bound was cut off.
    pub truncated: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Lead {
    Left,
    Right,
}

struct Frame {
    a: usize,
    b: usize,
    u: Vec<usize>,
    w: Vec<usize>,
    lead: Lead,
    rest: Vec<usize>,
}

/// Generators of the pullback are the minimal pairs `(u, w)` of nonempty
/// paths with `f(u) = g(w)`: every arrow splits uniquely at the positions
/// where both sides cross a generator boundary. They are found by extending
/// whichever side lags behind, so each pair is reached exactly once.
/// Pairs with `|u|` or `|w|` above `bound` are cut off and flagged.
pub fn pullback(f: &CatFunctor, g: &CatFunctor, bound: usize, budget: &Budget) -> Result<Pullback> {
    if f.target() != g.target() {
        return Err(Error::input("pullback of functors into different categories"));
    }
    for (h, side) in [(f, "left"), (g, "right")] {
        if let Some(&c) = h.collapsed_generators().first() {
            return Err(Error::input(format!(
                "{side} functor sends generator `{}` to an identity; the pullback is then not free",
                h.source().generators()[c].label
            )));
        }
    }
    let (ca, cb) = (f.source(), g.source());
    let mut pairs = Vec::new();
    let mut index = HashMap::new();
    for a in 0..ca.object_count() {
        for b in 0..cb.object_count() {
            if f.object(a) == g.object(b) {
                index.insert((a, b), pairs.len());
                pairs.push((a, b));
            }
        }
    }
    budget.check_states("pullback objects", pairs.len())?;

    let mut gens: Vec<(usize, usize, Vec<usize>, Vec<usize>)> = Vec::new();
    let mut truncated = false;
    let mut visited = 0usize;
    for (p, &(a0, b0)) in pairs.iter().enumerate() {
        let mut stack: Vec<Frame> = Vec::new();
        if bound > 0 {
            for &ga in ca.out_generators(a0) {
                stack.push(Frame {
                    a: ca.generators()[ga].dst,
                    b: b0,
                    u: vec![ga],
                    w: Vec::new(),
                    lead: Lead::Left,
                    rest: f.generator(ga).gens.clone(),
                });
            }
        } else {
            truncated = !ca.generators().is_empty();
        }
        while let Some(fr) = stack.pop() {
            visited += 1;
            if visited > budget.max_configs {
                return Err(Error::Size {
                    what: "pullback generator search",
                    requested: visited,
                    cap: budget.max_configs,
                });
            }
            let (cat, fun, at, len) = match fr.lead {
                Lead::Left => (cb, g, fr.b, fr.w.len()),
                Lead::Right => (ca, f, fr.a, fr.u.len()),
            };
            for &h in cat.out_generators(at) {
                let img = &fun.generator(h).gens;
                let (rest, lead) = if fr.rest.starts_with(img) {
                    (fr.rest[img.len()..].to_vec(), fr.lead)
                } else if img.starts_with(&fr.rest) {
                    let flip = match fr.lead {
                        Lead::Left => Lead::Right,
                        Lead::Right => Lead::Left,
                    };
                    (img[fr.rest.len()..].to_vec(), flip)
                } else {
                    continue;
                };
                if len == bound {
                    truncated = true;
                    continue;
                }
                let (mut u, mut w, mut a, mut b) = (fr.u.clone(), fr.w.clone(), fr.a, fr.b);
                match fr.lead {
                    Lead::Left => {
                        w.push(h);
                        b = cb.generators()[h].dst;
                    }
                    Lead::Right => {
                        u.push(h);
                        a = ca.generators()[h].dst;
                    }
                }
                if rest.is_empty() {
                    gens.push((p, index[&(a, b)], u, w));
                    budget.check_states("pullback generators", gens.len())?;
                } else {
                    stack.push(Frame { a, b, u, w, lead, rest });
                }
            }
        }
    }

    let mut taken = HashSet::new();
    let objects: Vec<String> = pairs
        .iter()
        .map(|&(a, b)| unique_label(format!("({},{})", ca.objects()[a], cb.objects()[b]), &mut taken))
        .collect();
    let mut taken = HashSet::new();
    let mut cat_gens = Vec::with_capacity(gens.len());
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for (s, d, u, w) in gens {
        let lu: Vec<String> = u.iter().map(|&x| ca.generators()[x].label.clone()).collect();
        let lw: Vec<String> = w.iter().map(|&x| cb.generators()[x].label.clone()).collect();
        let label = unique_label(format!("{}|{}", lu.join("."), lw.join(".")), &mut taken);
        cat_gens.push(CatGen { src: s, label, dst: d });
        left.push(Path {
            src: pairs[s].0,
            dst: pairs[d].0,
            gens: u,
        });
        right.push(Path {
            src: pairs[s].1,
            dst: pairs[d].1,
            gens: w,
        });
    }
    let cat = FreeCat::from_parts(objects, cat_gens);
    let left = CatFunctor::new(cat.clone(), ca.clone(), pairs.iter().map(|p| p.0).collect(), left)?;
    let right = CatFunctor::new(cat.clone(), cb.clone(), pairs.iter().map(|p| p.1).collect(), right)?;
    Ok(Pullback {
        cat,
        left,
        right,
        truncated,
    })
}

/// `T(M)` together with the pullback that produced it.
#[derive(Clone, Debug)]
pub struct CatApplied {
    pub machine: CatFsa,
    /// Object of `T(M)` over each object of `M`.
    pub over: Vec<Option<usize>>,
    pub truncated: bool,
}

/// `T(M) = 𝒬_M ×_𝒞 𝒬_T` with `τ' = β ∘ π`, initial object over `q₀` and
/// final objects over the finals of `M`. Pullback generators are searched up
/// to `bound` generators per side.
pub fn cat_apply(t: &CatTransducer, m: &CatFsa, bound: usize, budget: &Budget) -> Result<CatApplied> {
    if m.base() != t.alpha.target() {
        return Err(Error::input("transducer input category differs from the automaton base"));
    }
    let pb = pullback(m.tau(), &t.alpha, bound, budget)?;
    let tau = t.beta.after(&pb.right)?;
    let mut over = vec![None; m.len()];
    for (i, &q) in pb.left.object_map().iter().enumerate() {
        over[q] = Some(i);
    }
    let initial = m.initial().and_then(|q| over[q]);
    let finals = m.finals().iter().filter_map(|&q| over[q]).collect();
    Ok(CatApplied {
        machine: CatFsa::new(tau, initial, finals)?,
        over,
        truncated: pb.truncated,
    })
}

/// `t2 ∘ t1` on `𝒬_{T1} ×_{𝒞'} 𝒬_{T2}`, with `α = α₁ ∘ π₁`, `β = β₂ ∘ π₂`.
/// The flag reports truncation of the pullback search.
pub fn cat_compose(t2: &CatTransducer, t1: &CatTransducer, bound: usize, budget: &Budget) -> Result<(CatTransducer, bool)> {
    if t1.beta.target() != t2.alpha.target() {
        return Err(Error::input("output category of the first transducer is not the input of the second"));
    }
    let pb = pullback(&t1.beta, &t2.alpha, bound, budget)?;
    let t = CatTransducer::new(t1.alpha.after(&pb.left)?, t2.beta.after(&pb.right)?)?;
    Ok((t, pb.truncated))
}

/// A transducer with a one-state core as a categorical transducer between
/// one-object categories: one generator per core loop.
pub fn encode_transducer(t: &Transducer) -> Result<CatTransducer> {
    let core = t.core();
    if core.len() != 1 || !core.is_final(0) {
        return Err(Error::input("only transducers with a single accepting core state have a categorical form"));
    }
    let mid = t.mid_alphabet();
    let state = core.state_name(0).to_string();
    let loops: Vec<usize> = core.transitions().iter().map(|&(_, a, _)| a).collect();
    let states = FreeCat::new(
        vec![state.clone()],
        loops.iter().map(|&a| (state.clone(), mid.letter(a).to_string(), state.clone())),
    )?;
    let functor = |h: &crate::automata::MonoidHom| -> Result<CatFunctor> {
        let target = FreeCat::monoid(h.target().letters())?;
        let gens = loops
            .iter()
            .map(|&a| Path {
                src: 0,
                dst: 0,
                gens: h.image_of(a).to_vec(),
            })
            .collect();
        CatFunctor::new(states.clone(), target, vec![0], gens)
    };
    CatTransducer::new(functor(t.alpha())?, functor(t.beta())?)
}

#[derive(Clone, Debug)]
pub struct CatNaturalityOptions {
    pub exec: Exec,
    pub budget: Budget,
    /// Pullback search bound, in generators per side.
    pub bound: usize,
    /// Negative control: send this object of `M` to zero under `γ`.
    pub drop: Option<usize>,
}

impl Default for CatNaturalityOptions {
    fn default() -> Self {
        CatNaturalityOptions {
            exec: Exec::default(),
            budget: Budget::default(),
            bound: 8,
            drop: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatProbeReport {
    pub name: String,
    pub commutes: bool,
    /// Objects of `M`, one per domain strand, on which the square fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatNaturalityReport {
    /// `γ(q)` for each object `q` of `M`.
    pub gamma: Vec<(String, Option<String>)>,
    pub probes: Vec<CatProbeReport>,
    pub all_commute: bool,
    pub truncated: bool,
}

/// Identities, both defects on every path of `𝒬_T` up to `max_len`, cup,
/// cap, the four transpositions and both half-lines.
pub fn cat_generator_probes(states: &FreeCat, max_len: usize) -> Vec<Diagram<Path>> {
    use Sign::*;
    let g = Diagram::gen;
    let mut out = vec![g(Generator::Id(Plus)), g(Generator::Id(Minus))];
    for p in states.paths_up_to(max_len) {
        for s in [Plus, Minus] {
            out.push(g(Generator::Defect(s, p.clone())));
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

fn probe_name(states: &FreeCat, d: &Diagram<Path>) -> String {
    match d.view() {
        View::Gen(Generator::Defect(s, p)) => format!("defect({s},{})", states.show(p)),
        View::Gen(Generator::Id(s)) => format!("id({s})"),
        View::Gen(Generator::Perm(a, b)) => format!("perm({a},{b})"),
        View::Gen(g) => g.name().to_string(),
        _ => format!("diagram {} → {}", d.dom(), d.cod()),
    }
}

pub fn cat_naturality_check(t: &CatTransducer, m: &CatFsa, probes: &[Diagram<Path>]) -> Result<CatNaturalityReport> {
    cat_naturality_check_with(t, m, probes, &CatNaturalityOptions::default())
}

/// Checks `γ ∘ Φ_M(α 𝔠) = Φ_{T(M)}(β 𝔠) ∘ γ` on every probe, where
/// `γ(q) = (q, α⁻¹τ(q))`, or zero when no object of `𝒬_T` lies over `τ(q)`.
pub fn cat_naturality_check_with(t: &CatTransducer, m: &CatFsa, probes: &[Diagram<Path>], opts: &CatNaturalityOptions) -> Result<CatNaturalityReport> {
    for d in probes {
        if !d.holes().is_empty() {
            return Err(Error::typing("probe", "probes may not contain holes"));
        }
    }
    let budget = &opts.budget;
    let applied = cat_apply(t, m, opts.bound, budget)?;
    let tm = &applied.machine;
    let mut gamma = BoolMat::zeros(tm.len(), m.len());
    for (q, img) in applied.over.iter().enumerate() {
        if let (Some(i), false) = (img, opts.drop == Some(q)) {
            gamma.set(*i, q, true);
        }
    }
    let states = t.states();
    let check = |d: &Diagram<Path>| -> Result<CatProbeReport> {
        let da = d.map_labels(&mut |p: &Path| Ok(t.alpha.apply(p)))?;
        let db = d.map_labels(&mut |p: &Path| Ok(t.beta.apply(p)))?;
        let a = eval_diagram(m, &da, budget)?;
        let b = eval_diagram(tm, &db, budget)?;
        let (kd, kc) = (d.dom().len(), d.cod().len());
        let lhs = kron_power(&gamma, kc, budget)?.mul(&a)?;
        let rhs = b.mul(&kron_power(&gamma, kd, budget)?)?;
        let witness = (0..lhs.cols()).find(|&j| lhs.column(j) != rhs.column(j)).map(|mut j| {
            let n = m.len().max(1);
            let mut names = vec![String::new(); kd];
            for slot in names.iter_mut().rev() {
                *slot = m.state_name(j % n).to_string();
                j /= n;
            }
            names
        });
        Ok(CatProbeReport {
            name: probe_name(states, d),
            commutes: witness.is_none(),
            witness,
        })
    };
    let probes = par::map(opts.exec, probes, check).into_iter().collect::<Result<Vec<_>>>()?;
    Ok(CatNaturalityReport {
        gamma: applied
            .over
            .iter()
            .enumerate()
            .map(|(q, img)| (m.state_name(q).to_string(), img.map(|i| tm.state_name(i).to_string())))
            .collect(),
        all_commute: probes.iter().all(|p| p.commutes),
        truncated: applied.truncated,
        probes,
    })
}
