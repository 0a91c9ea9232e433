//! Spans of free Boolean semimodules.
//!
//! A span `X ← 𝔹^Z → Y` is recorded by its two leg matrices. Two spans are
//! identified when their joint images `{(f z, g z)}` generate the same
//! subsemimodule of `X ⊕ Y`; the canonical form keeps only the
//! join-irreducible generators of that subsemimodule.

use std::collections::{BTreeSet, HashMap};

use crate::boolsemi::{BoolMat, BoolVec};
use crate::budget::Budget;
use crate::error::{Error, Result};

type Pair = (BoolVec, BoolVec);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiSpan {
    apex_dim: usize,
    left: BoolMat,
    right: BoolMat,
}

impl SemiSpan {
    pub fn new(left: BoolMat, right: BoolMat) -> Result<SemiSpan> {
        if left.cols() != right.cols() {
            return Err(Error::Dimension {
                left: left.shape(),
                right: right.shape(),
            });
        }
        Ok(SemiSpan {
            apex_dim: left.cols(),
            left,
            right,
        })
    }

    pub fn identity(n: usize) -> SemiSpan {
        SemiSpan::of_map(BoolMat::identity(n))
    }

    /// The span `X = X → Y` of a plain map.
    pub fn of_map(f: BoolMat) -> SemiSpan {
        SemiSpan {
            apex_dim: f.cols(),
            left: BoolMat::identity(f.cols()),
            right: f,
        }
    }

    pub fn apex_dim(&self) -> usize {
        self.apex_dim
    }

    pub fn left(&self) -> &BoolMat {
        &self.left
    }

    pub fn right(&self) -> &BoolMat {
        &self.right
    }

    /// Dimensions of the two feet `(X, Y)`.
    pub fn feet(&self) -> (usize, usize) {
        (self.left.rows(), self.right.rows())
    }

    /// Join-irreducible generators of the joint image, sorted.
    pub fn generators(&self) -> Vec<Pair> {
        irredundant((0..self.apex_dim).map(|z| (self.left.column(z), self.right.column(z))).collect())
    }

    /// The span on the canonical generators.
    pub fn canonical(&self) -> SemiSpan {
        from_pairs(&self.generators(), self.feet())
    }

    pub fn is_isomorphic(&self, other: &SemiSpan) -> bool {
        self.feet() == other.feet() && self.generators() == other.generators()
    }

    /// `(B ∘ -)`: postcomposition of the right leg with a map.
    pub fn then_map(&self, b: &BoolMat) -> Result<SemiSpan> {
        SemiSpan::new(self.left.clone(), b.mul(&self.right)?)
    }
}

fn from_pairs(pairs: &[Pair], (x, y): (usize, usize)) -> SemiSpan {
    let left = BoolMat::from_fn(x, pairs.len(), |i, z| pairs[z].0.get(i));
    let right = BoolMat::from_fn(y, pairs.len(), |i, z| pairs[z].1.get(i));
    SemiSpan {
        apex_dim: pairs.len(),
        left,
        right,
    }
}

fn pair_le(a: &Pair, b: &Pair) -> bool {
    a.0.le(&b.0) && a.1.le(&b.1)
}

fn pair_join(a: &Pair, b: &Pair) -> Pair {
    (a.0.join(&b.0).expect("equal dims"), a.1.join(&b.1).expect("equal dims"))
}

/// Drops zero, duplicate and redundant generators: `c` is redundant when it
/// is the join of the other generators strictly below it.
fn irredundant(cols: Vec<Pair>) -> Vec<Pair> {
    let set: BTreeSet<Pair> = cols.into_iter().filter(|(l, r)| !(l.is_zero() && r.is_zero())).collect();
    let all: Vec<Pair> = set.into_iter().collect();
    all.iter()
        .filter(|c| {
            let mut acc: Option<Pair> = None;
            for d in &all {
                if d != *c && pair_le(d, c) {
                    acc = Some(match acc {
                        None => d.clone(),
                        Some(a) => pair_join(&a, d),
                    });
                }
            }
            acc.as_ref() != Some(*c)
        })
        .cloned()
        .collect()
}

/// Every join of a subset of the generators.
fn elements(gens: &[Pair], dims: (usize, usize), budget: &Budget) -> Result<Vec<Pair>> {
    if gens.len() > budget.state_cap {
        return Err(Error::Size {
            what: "span apex enumeration",
            requested: gens.len(),
            cap: budget.state_cap,
        });
    }
    let mut out: BTreeSet<Pair> = [(BoolVec::zeros(dims.0), BoolVec::zeros(dims.1))].into();
    for g in gens {
        let next: Vec<Pair> = out.iter().map(|e| pair_join(e, g)).collect();
        out.extend(next);
    }
    Ok(out.into_iter().collect())
}

/// `s2 ∘ s1` with the default budget.
pub fn span_compose(s2: &SemiSpan, s1: &SemiSpan) -> Result<SemiSpan> {
    span_compose_with(s2, s1, &Budget::default())
}

/// Composition by pullback: the composite is generated by the pairs
/// `(l₁ x, r₂ y)` with `r₁ x = l₂ y`, over all elements `x`, `y` of the
/// two apices. Both apices are first reduced to their canonical generators;
/// each may have at most `budget.state_cap` of them.
pub fn span_compose_with(s2: &SemiSpan, s1: &SemiSpan, budget: &Budget) -> Result<SemiSpan> {
    if s1.right.rows() != s2.left.rows() {
        return Err(Error::Dimension {
            left: s2.left.shape(),
            right: s1.right.shape(),
        });
    }
    let e1 = elements(&s1.generators(), s1.feet(), budget)?;
    let e2 = elements(&s2.generators(), s2.feet(), budget)?;
    let mut by_middle: HashMap<&BoolVec, Vec<&BoolVec>> = HashMap::new();
    for (l, r) in &e1 {
        by_middle.entry(r).or_default().push(l);
    }
    let limit = 1usize << budget.state_cap.min(usize::BITS as usize - 1);
    let mut pulled: BTreeSet<Pair> = BTreeSet::new();
    for (l2, r2) in &e2 {
        for l1 in by_middle.get(l2).into_iter().flatten() {
            pulled.insert(((*l1).clone(), r2.clone()));
            if pulled.len() > limit {
                return Err(Error::Size {
                    what: "span pullback",
                    requested: pulled.len(),
                    cap: limit,
                });
            }
        }
    }
    Ok(from_pairs(&irredundant(pulled.into_iter().collect()), (s1.feet().0, s2.feet().1)))
}
