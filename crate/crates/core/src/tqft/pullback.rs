//! Restriction of `Φ_M` along a homomorphism `α : A* → Σ*`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{eval_diagram, kron_power, TqftFunctor};
use crate::automata::{Automaton, MonoidHom, Word};
use crate::boolsemi::BoolMat;
use crate::cobordism::Diagram;
use crate::error::{Error, Result};

/// `α*Φ_M`: diagrams over `A` are relabelled by `α` and evaluated on the
/// span of the kept states.
#[derive(Clone, Debug)]
pub struct PullbackFunctor {
    base: TqftFunctor,
    hom: MonoidHom,
    kept: Vec<usize>,
    gfp: Vec<usize>,
}

/// States on which the two characterisations of the kept subspace disagree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PullbackDiscrepancy {
    pub only_endpoints: Vec<String>,
    pub only_invariant: Vec<String>,
}

impl PullbackDiscrepancy {
    pub fn is_empty(&self) -> bool {
        self.only_endpoints.is_empty() && self.only_invariant.is_empty()
    }
}

/// Builds `α*Φ` for `h : A* → Σ*` where `Σ` is the machine's alphabet.
pub fn modified_pullback(f: &TqftFunctor, h: &MonoidHom) -> Result<PullbackFunctor> {
    let m = f.machine();
    if !h.target().same_letters(m.alphabet()) {
        return Err(Error::input(format!(
            "homomorphism target {:?} differs from the machine alphabet {:?}",
            h.target(),
            m.alphabet()
        )));
    }
    let images: Vec<Vec<usize>> = (0..h.source().len())
        .map(|a| m.alphabet().encode(h.target().decode(h.image_of(a)).symbols()))
        .collect::<Result<_>>()?;
    let succ = m.successors();
    let n = m.len();
    // α-edges: q → q' whenever q' is reached from q by reading some α(a).
    let mut edges = BTreeSet::new();
    for img in &images {
        for q in 0..n {
            for r in m.run_from(&succ, q, img) {
                edges.insert((q, r));
            }
        }
    }

    let mut kept = vec![false; n];
    for &(q, r) in &edges {
        kept[q] = true;
        kept[r] = true;
    }
    if !m.preimage(h)?.is_language_empty() {
        kept[m.initial()] = true;
        for &q in m.finals() {
            kept[q] = true;
        }
    }

    // Greatest subset closed under α-successors in which every state meets an α-edge.
    let mut inside = vec![true; n];
    loop {
        let mut changed = false;
        for q in 0..n {
            if !inside[q] {
                continue;
            }
            let escapes = edges.iter().any(|&(p, r)| p == q && !inside[r]);
            let touches = edges.iter().any(|&(p, r)| inside[p] && inside[r] && (p == q || r == q));
            if escapes || !touches {
                inside[q] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let collect = |v: &[bool]| (0..n).filter(|&q| v[q]).collect::<Vec<_>>();
    Ok(PullbackFunctor {
        base: f.clone(),
        hom: h.clone(),
        kept: collect(&kept),
        gfp: collect(&inside),
    })
}

impl PullbackFunctor {
    pub fn base(&self) -> &TqftFunctor {
        &self.base
    }

    pub fn hom(&self) -> &MonoidHom {
        &self.hom
    }

    /// Indices of the kept states: endpoints of `α(a)`-paths, plus the
    /// initial and final states when `α⁻¹(L)` is nonempty.
    pub fn kept_states(&self) -> &[usize] {
        &self.kept
    }

    pub fn kept_names(&self) -> Vec<String> {
        self.names(&self.kept)
    }

    /// The largest state set that is invariant under every `T_{α(a)}` and
    /// in which each state meets an `α(a)`-path.
    pub fn invariant_states(&self) -> &[usize] {
        &self.gfp
    }

    pub fn discrepancy(&self) -> PullbackDiscrepancy {
        let a: BTreeSet<usize> = self.kept.iter().copied().collect();
        let b: BTreeSet<usize> = self.gfp.iter().copied().collect();
        PullbackDiscrepancy {
            only_endpoints: self.names(&a.difference(&b).copied().collect::<Vec<_>>()),
            only_invariant: self.names(&b.difference(&a).copied().collect::<Vec<_>>()),
        }
    }

    fn names(&self, qs: &[usize]) -> Vec<String> {
        qs.iter().map(|&q| self.base.machine().state_name(q).to_string()).collect()
    }

    pub fn dim(&self) -> usize {
        self.kept.len()
    }

    /// Projection `𝔹^Q → 𝔹^K` onto the kept states.
    pub fn projection(&self) -> BoolMat {
        let mut p = BoolMat::zeros(self.kept.len(), self.base.machine().len());
        for (i, &q) in self.kept.iter().enumerate() {
            p.set(i, q, true);
        }
        p
    }

    /// Relabels a diagram over `A` by `α`.
    pub fn relabel(&self, d: &Diagram<Word>) -> Result<Diagram<Word>> {
        d.map_labels(&mut |w: &Word| self.hom.apply(w.symbols()))
    }

    /// `P_cod · Φ(𝔠 ∘ α) · P_domᵀ`.
    pub fn eval(&self, d: &Diagram<Word>) -> Result<BoolMat> {
        let budget = self.base.budget();
        let inner = eval_diagram(&self.base, &self.relabel(d)?, budget)?;
        let p = self.projection();
        let left = kron_power(&p, d.cod().len(), budget)?;
        let right = kron_power(&p, d.dom().len(), budget)?.transpose();
        left.mul(&inner)?.mul(&right)
    }
}
