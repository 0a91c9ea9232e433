use std::collections::HashMap;

use super::grammar::{apply_grammar, CfGrammar};
use super::splice::SplicedSeq;
use super::{trees_up_to_depth, OperadTree, Species};
use crate::budget::Budget;
use crate::catauto::{CatFunctor, CatTransducer, FreeCat, Generator, Path};
use crate::error::{Error, Result};

fn up(c: usize) -> usize {
    2 * c
}

fn down(c: usize) -> usize {
    2 * c + 1
}

/// The contour category `Cont(𝒪_𝕊)`: objects `N^u`, `N^d` per colour and,
/// for a vertex `x : N₁ ⋯ N_n → N₀`, arrows
/// `(x,0) : N₀^u → N₁^u`, `(x,i) : Nᵢ^d → N_{i+1}^u` for `0 < i < n` and
/// `(x,n) : N_n^d → N₀^d`. A leaf vertex has the single arrow
/// `(x,0) : N₀^u → N₀^d`. Objects are numbered `N^u = 2N`, `N^d = 2N + 1`,
/// generators vertex by vertex.
pub fn contour(s: &Species) -> FreeCat {
    let objects = s.colors().iter().flat_map(|c| [format!("{c}^u"), format!("{c}^d")]).collect();
    let mut gens = Vec::new();
    for vx in s.vertices() {
        let n = vx.inputs.len();
        for i in 0..=n {
            let src = if i == 0 { up(vx.output) } else { down(vx.inputs[i - 1]) };
            let dst = if i == n { down(vx.output) } else { up(vx.inputs[i]) };
            gens.push(Generator {
                src,
                label: format!("({},{})", vx.name, i),
                dst,
            });
        }
    }
    FreeCat::from_parts(objects, gens)
}

/// Index of `(v, 0)` in [`contour`]; `(v, i)` follows at offset `i`.
fn first_generator(s: &Species) -> Vec<usize> {
    let mut at = 0;
    s.vertices()
        .iter()
        .map(|vx| {
            let here = at;
            at += vx.inputs.len() + 1;
            here
        })
        .collect()
}

/// The tree-contour grammar: colours go to `(N^u, N^d)` and each vertex to
/// `(x,0) □ (x,1) □ ⋯ □ (x,n)`.
pub fn treecont(s: &Species, start: Option<usize>) -> Result<CfGrammar> {
    let cat = contour(s);
    let first = first_generator(s);
    let rules = s
        .vertices()
        .iter()
        .enumerate()
        .map(|(v, vx)| SplicedSeq::new((0..=vx.inputs.len()).map(|i| cat.gen_path(first[v] + i)).collect()))
        .collect::<Result<Vec<_>>>()?;
    let color_map = (0..s.colors().len()).map(|c| (up(c), down(c))).collect();
    CfGrammar::new(cat, s.clone(), color_map, start, rules)
}

/// Result of factoring a grammar through its tree-contour grammar.
#[derive(Clone, Debug)]
pub struct CsFactorization {
    /// `P_V` over the colours merged by object pair.
    pub chromatic: CfGrammar,
    /// `φ_Col`: old colour to merged colour.
    pub relabel: Vec<usize>,
    /// `τ_V : Cont(𝒪_{𝕊_V}) → 𝒞`.
    pub tau_v: CatFunctor,
    /// `Cont(φ_Col) : Cont(𝒪_𝕊) → Cont(𝒪_{𝕊_V})`.
    pub cont_map: CatFunctor,
    /// `τ_𝒢 = τ_V ∘ Cont(φ_Col)`.
    pub tau_g: CatFunctor,
    /// `(Cont(𝒪_𝕊), id, τ_𝒢)`, which carries the tree-contour grammar of `𝕊`
    /// to the original grammar.
    pub transducer: CatTransducer,
    /// Trees on which both triangles were checked.
    pub checked_trees: usize,
}

/// Splits `g` into the colour quotient `φ_Col`, the chromatic grammar `P_V`
/// and the contour functor `τ_V`, then checks `P = 𝒲τ_𝒢 ∘ P_𝕊` and
/// `P_V ∘ φ_Col = P` on every tree of depth at most `depth`.
pub fn cs_factorize(g: &CfGrammar, depth: usize, budget: &Budget) -> Result<CsFactorization> {
    let s = g.species();
    let cm = g.color_map();
    let mut classes: Vec<(usize, usize)> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut relabel = Vec::with_capacity(cm.len());
    let mut by_pair: HashMap<(usize, usize), usize> = HashMap::new();
    for (c, &pair) in cm.iter().enumerate() {
        let k = *by_pair.entry(pair).or_insert_with(|| {
            classes.push(pair);
            members.push(Vec::new());
            classes.len() - 1
        });
        members[k].push(c);
        relabel.push(k);
    }
    let names: Vec<String> = members
        .iter()
        .map(|m| m.iter().map(|&c| s.colors()[c].as_str()).collect::<Vec<_>>().join("+"))
        .collect();
    let sv = Species::new(
        names.clone(),
        s.vertices()
            .iter()
            .map(|vx| {
                (
                    vx.name.clone(),
                    vx.inputs.iter().map(|&c| names[relabel[c]].clone()).collect(),
                    names[relabel[vx.output]].clone(),
                )
            })
            .collect(),
    )?;
    let chromatic = CfGrammar::new(g.base().clone(), sv.clone(), classes.clone(), g.start().map(|c| relabel[c]), g.rules().to_vec())?;

    let cont_s = contour(s);
    let cont_v = contour(&sv);
    let cont_map = CatFunctor::new(
        cont_s.clone(),
        cont_v.clone(),
        (0..cont_s.object_count()).map(|o| 2 * relabel[o / 2] + o % 2).collect(),
        (0..cont_s.generators().len()).map(|h| cont_v.gen_path(h)).collect(),
    )?;
    let first = first_generator(&sv);
    let mut gens = Vec::with_capacity(cont_v.generators().len());
    for (v, vx) in sv.vertices().iter().enumerate() {
        debug_assert_eq!(gens.len(), first[v]);
        gens.extend(g.rule(v).parts().iter().take(vx.inputs.len() + 1).cloned());
    }
    let tau_v = CatFunctor::new(
        cont_v,
        g.base().clone(),
        (0..2 * classes.len()).map(|o| if o % 2 == 0 { classes[o / 2].0 } else { classes[o / 2].1 }).collect(),
        gens,
    )?;
    let tau_g = tau_v.after(&cont_map)?;
    let transducer = CatTransducer::new(CatFunctor::identity(&cont_s), tau_g.clone())?;

    let tc = treecont(s, g.start())?;
    let mut checked = 0;
    for c in 0..s.colors().len() {
        for t in trees_up_to_depth(s, c, depth, budget)? {
            let p = apply_grammar(g, &t)?;
            let via_contour = apply_grammar(&tc, &t)?.map(&tau_g);
            let via_quotient = apply_grammar(&chromatic, &relabel_tree(&t, &relabel))?;
            for (side, got) in [("contour", via_contour), ("quotient", via_quotient)] {
                if got != p {
                    return Err(Error::Consistency(format!(
                        "{side} triangle fails on {}: {} vs {}",
                        t.show(s),
                        got.show(g.base()),
                        p.show(g.base())
                    )));
                }
            }
            checked += 1;
        }
    }
    Ok(CsFactorization {
        chromatic,
        relabel,
        tau_v,
        cont_map,
        tau_g,
        transducer,
        checked_trees: checked,
    })
}

fn relabel_tree(t: &OperadTree, relabel: &[usize]) -> OperadTree {
    match t {
        OperadTree::Leaf(c) => OperadTree::Leaf(relabel[*c]),
        OperadTree::Node(v, ch) => OperadTree::Node(*v, ch.iter().map(|c| relabel_tree(c, relabel)).collect()),
    }
}

/// The contour word of a closed tree: the arrow of `Cont(𝒪_𝕊)` it traces.
pub fn tree_contour(s: &Species, t: &OperadTree) -> Result<Path> {
    let seq = apply_grammar(&treecont(s, None)?, t)?;
    seq.as_path()
        .cloned()
        .ok_or_else(|| Error::input("only trees without open leaves have a contour arrow"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::grammar::{grammar_transduce, language_of_arrows};
    use std::collections::BTreeSet;

    fn binary() -> Species {
        Species::from_strs(&["S"], &[("p", &["S", "S"], "S"), ("e", &[], "S")]).unwrap()
    }

    fn dyck() -> CfGrammar {
        let base = FreeCat::monoid(["(", ")"]).unwrap();
        let p = SplicedSeq::new(vec![base.path(&["("]).unwrap(), base.path(&[")"]).unwrap(), Path::identity(0)]).unwrap();
        let e = SplicedSeq::identity(0, 0);
        let e = SplicedSeq::constant(e.parts()[0].clone());
        CfGrammar::new(base, binary(), vec![(0, 0)], Some(0), vec![p, e]).unwrap()
    }

    #[test]
    fn contour_generators_follow_the_schema() {
        let s = binary();
        let c = contour(&s);
        assert_eq!(c.objects(), ["S^u", "S^d"]);
        let shown: Vec<String> = c
            .generators()
            .iter()
            .map(|g| format!("{}: {} -> {}", g.label, c.objects()[g.src], c.objects()[g.dst]))
            .collect();
        assert_eq!(
            shown,
            ["(p,0): S^u -> S^u", "(p,1): S^d -> S^u", "(p,2): S^d -> S^d", "(e,0): S^u -> S^d"]
        );
        let unary = Species::from_strs(&["A", "B"], &[("u", &["B"], "A")]).unwrap();
        let cu = contour(&unary);
        let labels: Vec<&str> = cu.generators().iter().map(|g| g.label.as_str()).collect();
        assert_eq!(labels, ["(u,0)", "(u,1)"]);
        assert!(contour(&Species::from_strs(&["A"], &[]).unwrap()).generators().is_empty());
    }

    #[test]
    fn contours_of_binary_trees_are_the_language() {
        let s = binary();
        let b = Budget::default();
        let tc = treecont(&s, Some(0)).unwrap();
        let closed: BTreeSet<Path> = trees_up_to_depth(&s, 0, 3, &b)
            .unwrap()
            .iter()
            .filter(|t| t.leaves().is_empty())
            .map(|t| tree_contour(&s, t).unwrap())
            .filter(|p| p.len() <= 9)
            .collect();
        // Trees with at most 2 binary vertices have contour length ≤ 9 and depth ≤ 3.
        assert_eq!(language_of_arrows(&tc, 9).unwrap(), closed);
        assert_eq!(closed.len(), 1 + 1 + 2);
        let leaf = OperadTree::Node(1, vec![]);
        assert_eq!(tc.base().show(&tree_contour(&s, &leaf).unwrap()), "(e,0)");
        let only_leaf = Species::from_strs(&["S"], &[("e", &[], "S")]).unwrap();
        assert_eq!(language_of_arrows(&treecont(&only_leaf, Some(0)).unwrap(), 5).unwrap().len(), 1);
    }

    #[test]
    fn dyck_factors_through_its_contours() {
        let g = dyck();
        let cs = cs_factorize(&g, 3, &Budget::default()).unwrap();
        assert_eq!(cs.relabel, vec![0]);
        assert_eq!(cs.checked_trees, 123);
        let tc = treecont(g.species(), g.start()).unwrap();
        let back = grammar_transduce(&cs.transducer, &tc, &Budget::default()).unwrap();
        assert_eq!(language_of_arrows(&back, 8).unwrap(), language_of_arrows(&g, 8).unwrap());
    }

    #[test]
    fn merged_colours_share_object_pairs() {
        let base = FreeCat::monoid(["a"]).unwrap();
        let a = base.path(&["a"]).unwrap();
        let s = Species::from_strs(&["S", "T"], &[("f", &["T"], "S"), ("g", &[], "T")]).unwrap();
        let g = CfGrammar::new(
            base,
            s,
            vec![(0, 0), (0, 0)],
            Some(0),
            vec![SplicedSeq::new(vec![a.clone(), a.clone()]).unwrap(), SplicedSeq::constant(a)],
        )
        .unwrap();
        assert!(!g.is_chromatic());
        let cs = cs_factorize(&g, 3, &Budget::default()).unwrap();
        assert_eq!(cs.relabel, vec![0, 0]);
        assert_eq!(cs.chromatic.species().colors(), ["S+T"]);
        assert!(cs.chromatic.is_chromatic());
    }
}
