/*!
Coloured operads, spliced arrows and categorical context-free grammars.

A [`Species`] lists typed vertices; the free operad on it has planar trees
as operations, composed by grafting. The spliced-arrow operad of a free
category has sequences `w₀ □ w₁ □ ⋯ □ w_n` of paths as operations, composed
by splicing into gaps. A grammar is an operad morphism between the two,
given on vertices.
*/

mod contour;
mod grammar;
mod splice;
mod spliced_tqft;

pub use contour::{contour, cs_factorize, tree_contour, treecont, CsFactorization};
pub use grammar::{
    apply_grammar, grammar_pullback, grammar_tqft_operator, grammar_transduce, language_of_arrows, language_of_arrows_with, language_words, CfGrammar, GrammarSpec,
};
pub use splice::{splice_all, splice_compose, PartSpec, SplicedSeq, SplicedSpec};
pub use spliced_tqft::{
    grammar_naturality_check, grammar_naturality_check_with, lifts, operadic_eval, spliced_defect_operator, GrammarModel, GrammarNaturalityOptions,
    GrammarNaturalityReport, GrammarProbeReport, OperadicValue, SplicedOperator,
};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub inputs: Vec<usize>,
    pub output: usize,
}

/// Colours and typed vertices `v : N₁ ⋯ N_n → N`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "SpeciesJson", into = "SpeciesJson")]
pub struct Species {
    colors: Vec<String>,
    vertices: Vec<Vertex>,
    color_index: HashMap<String, usize>,
    vertex_index: HashMap<String, usize>,
}

impl PartialEq for Species {
    fn eq(&self, other: &Species) -> bool {
        self.colors == other.colors && self.vertices == other.vertices
    }
}

impl Eq for Species {}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpeciesJson {
    colors: Vec<String>,
    vertices: Vec<VertexJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexJson {
    name: String,
    #[serde(default)]
    inputs: Vec<String>,
    output: String,
}

impl TryFrom<SpeciesJson> for Species {
    type Error = Error;

    fn try_from(j: SpeciesJson) -> Result<Species> {
        Species::new(j.colors, j.vertices.into_iter().map(|v| (v.name, v.inputs, v.output)).collect())
    }
}

impl From<Species> for SpeciesJson {
    fn from(s: Species) -> SpeciesJson {
        SpeciesJson {
            vertices: s
                .vertices
                .iter()
                .map(|v| VertexJson {
                    name: v.name.clone(),
                    inputs: v.inputs.iter().map(|&c| s.colors[c].clone()).collect(),
                    output: s.colors[v.output].clone(),
                })
                .collect(),
            colors: s.colors,
        }
    }
}

impl Species {
    pub fn new<S: Into<String>>(colors: impl IntoIterator<Item = S>, vertices: Vec<(String, Vec<String>, String)>) -> Result<Species> {
        let colors: Vec<String> = colors.into_iter().map(Into::into).collect();
        let mut color_index = HashMap::new();
        for (i, c) in colors.iter().enumerate() {
            if color_index.insert(c.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate colour `{c}`")));
            }
        }
        let color = |c: &str| color_index.get(c).copied().ok_or_else(|| Error::input(format!("unknown colour `{c}`")));
        let mut vertex_index = HashMap::new();
        let mut vs = Vec::with_capacity(vertices.len());
        for (name, inputs, output) in vertices {
            if vertex_index.insert(name.clone(), vs.len()).is_some() {
                return Err(Error::input(format!("duplicate vertex `{name}`")));
            }
            vs.push(Vertex {
                inputs: inputs.iter().map(|c| color(c)).collect::<Result<_>>()?,
                output: color(&output)?,
                name,
            });
        }
        Ok(Species {
            colors,
            vertices: vs,
            color_index,
            vertex_index,
        })
    }

    /// Convenience constructor from string slices.
    pub fn from_strs(colors: &[&str], vertices: &[(&str, &[&str], &str)]) -> Result<Species> {
        Species::new(
            colors.iter().copied(),
            vertices
                .iter()
                .map(|(n, ins, out)| (n.to_string(), ins.iter().map(|s| s.to_string()).collect(), out.to_string()))
                .collect(),
        )
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn color(&self, name: &str) -> Result<usize> {
        self.color_index.get(name).copied().ok_or_else(|| Error::input(format!("unknown colour `{name}`")))
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.vertex_index.get(name).copied().ok_or_else(|| Error::input(format!("unknown vertex `{name}`")))
    }

    pub fn arity(&self, v: usize) -> usize {
        self.vertices[v].inputs.len()
    }

    /// Vertices with the given output colour.
    pub fn producing(&self, color: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(move |&v| self.vertices[v].output == color)
    }
}

/// A planar tree of the free operad: open leaves are inputs of the operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperadTree {
    Leaf(usize),
    Node(usize, Vec<OperadTree>),
}

/// JSON form: `{"leaf": colour}` or `{"vertex": name, "children": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum TreeSpec {
    Leaf { leaf: String },
    Node {
        vertex: String,
        #[serde(default)]
        children: Vec<TreeSpec>,
    },
}

impl OperadTree {
    /// Output colour.
    pub fn color(&self, s: &Species) -> usize {
        match self {
            OperadTree::Leaf(c) => *c,
            OperadTree::Node(v, _) => s.vertices[*v].output,
        }
    }

    /// Colours of the open leaves, left to right.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            OperadTree::Leaf(c) => out.push(*c),
            OperadTree::Node(_, ch) => ch.iter().for_each(|t| t.collect_leaves(out)),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            OperadTree::Leaf(_) => 1,
            OperadTree::Node(_, ch) => ch.iter().map(OperadTree::arity).sum(),
        }
    }

    /// Number of vertices.
    pub fn size(&self) -> usize {
        match self {
            OperadTree::Leaf(_) => 0,
            OperadTree::Node(_, ch) => 1 + ch.iter().map(OperadTree::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            OperadTree::Leaf(_) => 0,
            OperadTree::Node(_, ch) => 1 + ch.iter().map(OperadTree::depth).max().unwrap_or(0),
        }
    }

    /// Checks arities and colours; returns the output colour.
    pub fn typecheck(&self, s: &Species) -> Result<usize> {
        self.typecheck_at(s, "$")
    }

    fn typecheck_at(&self, s: &Species, path: &str) -> Result<usize> {
        match self {
            OperadTree::Leaf(c) if *c < s.colors.len() => Ok(*c),
            OperadTree::Leaf(_) => Err(Error::typing(path, "leaf colour out of range")),
            OperadTree::Node(v, ch) => {
                let vx = s.vertices.get(*v).ok_or_else(|| Error::typing(path, "vertex out of range"))?;
                if ch.len() != vx.inputs.len() {
                    return Err(Error::typing(path, format!("vertex `{}` takes {} inputs, got {}", vx.name, vx.inputs.len(), ch.len())));
                }
                for (i, (t, &want)) in ch.iter().zip(&vx.inputs).enumerate() {
                    let p = format!("{path}.children[{i}]");
                    let got = t.typecheck_at(s, &p)?;
                    if got != want {
                        return Err(Error::typing(&p, format!("expected colour `{}`, found `{}`", s.colors[want], s.colors[got])));
                    }
                }
                Ok(vx.output)
            }
        }
    }

    /// Grafts `t2` onto open leaf `leaf` (0-based, left to right).
    pub fn graft(&self, s: &Species, leaf: usize, t2: &OperadTree) -> Result<OperadTree> {
        let leaves = self.leaves();
        let want = *leaves
            .get(leaf)
            .ok_or_else(|| Error::typing("$", format!("leaf {leaf} out of range (arity {})", leaves.len())))?;
        let got = t2.color(s);
        if want != got {
            return Err(Error::typing(
                "$",
                format!("leaf {leaf} has colour `{}`, grafted tree has `{}`", s.colors[want], s.colors[got]),
            ));
        }
        let mut counter = leaf;
        Ok(self.replace_leaf(&mut counter, t2))
    }

    fn replace_leaf(&self, counter: &mut usize, t2: &OperadTree) -> OperadTree {
        match self {
            OperadTree::Leaf(_) if *counter == 0 => {
                *counter = usize::MAX;
                t2.clone()
            }
            OperadTree::Leaf(c) => {
                *counter = counter.wrapping_sub(1);
                OperadTree::Leaf(*c)
            }
            OperadTree::Node(v, ch) => OperadTree::Node(*v, ch.iter().map(|t| t.replace_leaf(counter, t2)).collect()),
        }
    }

    pub fn from_spec(s: &Species, spec: &TreeSpec) -> Result<OperadTree> {
        let t = Self::from_spec_raw(s, spec)?;
        t.typecheck(s)?;
        Ok(t)
    }

    fn from_spec_raw(s: &Species, spec: &TreeSpec) -> Result<OperadTree> {
        Ok(match spec {
            TreeSpec::Leaf { leaf } => OperadTree::Leaf(s.color(leaf)?),
            TreeSpec::Node { vertex, children } => OperadTree::Node(
                s.vertex(vertex)?,
                children.iter().map(|c| Self::from_spec_raw(s, c)).collect::<Result<_>>()?,
            ),
        })
    }

    pub fn to_spec(&self, s: &Species) -> TreeSpec {
        match self {
            OperadTree::Leaf(c) => TreeSpec::Leaf { leaf: s.colors[*c].clone() },
            OperadTree::Node(v, ch) => TreeSpec::Node {
                vertex: s.vertices[*v].name.clone(),
                children: ch.iter().map(|t| t.to_spec(s)).collect(),
            },
        }
    }

    /// Bracketed form, e.g. `p(S, e)`.
    pub fn show(&self, s: &Species) -> String {
        match self {
            OperadTree::Leaf(c) => s.colors[*c].clone(),
            OperadTree::Node(v, ch) if ch.is_empty() => s.vertices[*v].name.clone(),
            OperadTree::Node(v, ch) => format!(
                "{}({})",
                s.vertices[*v].name,
                ch.iter().map(|t| t.show(s)).collect::<Vec<_>>().join(", ")
            ),
        }
    }
}

/// All trees of the given colour with depth at most `depth`, open leaves included.
pub fn trees_up_to_depth(s: &Species, color: usize, depth: usize, budget: &Budget) -> Result<Vec<OperadTree>> {
    let mut memo: HashMap<(usize, usize), Vec<OperadTree>> = HashMap::new();
    trees_rec(s, color, depth, budget, &mut memo)
}

fn trees_rec(s: &Species, color: usize, depth: usize, budget: &Budget, memo: &mut HashMap<(usize, usize), Vec<OperadTree>>) -> Result<Vec<OperadTree>> {
    if let Some(v) = memo.get(&(color, depth)) {
        return Ok(v.clone());
    }
    let mut out = vec![OperadTree::Leaf(color)];
    if depth > 0 {
        for v in s.producing(color).collect::<Vec<_>>() {
            let mut partial: Vec<Vec<OperadTree>> = vec![Vec::new()];
            for &c in &s.vertices[v].inputs {
                let subs = trees_rec(s, c, depth - 1, budget, memo)?;
                let mut next = Vec::with_capacity(partial.len() * subs.len());
                for p in &partial {
                    for t in &subs {
                        let mut q = p.clone();
                        q.push(t.clone());
                        next.push(q);
                    }
                }
                budget.check_states("tree enumeration", next.len() + out.len())?;
                partial = next;
            }
            out.extend(partial.into_iter().map(|ch| OperadTree::Node(v, ch)));
            budget.check_states("tree enumeration", out.len())?;
        }
    }
    memo.insert((color, depth), out.clone());
    Ok(out)
}
