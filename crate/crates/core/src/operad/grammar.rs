use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::splice::{splice_all, SplicedSeq, SplicedSpec};
use super::spliced_tqft::lifts;
use super::{OperadTree, Species};
use crate::automata::Word;
use crate::boolsemi::BoolMat;
use crate::budget::Budget;
use crate::catauto::{CatFunctor, CatTransducer, FreeCat, Path};
use crate::error::{Error, Result};

/// A categorical context-free grammar `P : 𝒪_𝕊 → 𝒲𝒞`, given by a colour map
/// `Col(𝕊) → Obj(𝒞)²` and one spliced sequence per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GrammarSpec", into = "GrammarSpec")]
pub struct CfGrammar {
    base: FreeCat,
    species: Species,
    color_map: Vec<(usize, usize)>,
    start: Option<usize>,
    rules: Vec<SplicedSeq>,
}

/// JSON form. `colors` may be omitted when every colour occurs in a rule.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrammarSpec {
    pub base: FreeCat,
    pub species: Species,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<BTreeMap<String, (String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
    pub rules: BTreeMap<String, SplicedSpec>,
}

impl TryFrom<GrammarSpec> for CfGrammar {
    type Error = Error;

    fn try_from(j: GrammarSpec) -> Result<CfGrammar> {
        let (base, species) = (j.base, j.species);
        let mut rules = Vec::with_capacity(species.vertices().len());
        for v in species.vertices() {
            let spec = j
                .rules
                .get(&v.name)
                .ok_or_else(|| Error::typing("$.rules", format!("no rule for vertex `{}`", v.name)))?;
            rules.push(SplicedSeq::from_spec(&base, spec).map_err(|e| prefix(e, &format!("$.rules.{}", v.name)))?);
        }
        for k in j.rules.keys() {
            species.vertex(k).map_err(|_| Error::typing("$.rules", format!("rule for unknown vertex `{k}`")))?;
        }
        let mut map: Vec<Option<(usize, usize)>> = vec![None; species.colors().len()];
        if let Some(cols) = &j.colors {
            for (c, (x, y)) in cols {
                let i = species.color(c).map_err(|e| prefix(e, "$.colors"))?;
                map[i] = Some((base.object(x)?, base.object(y)?));
            }
        } else {
            for (v, r) in species.vertices().iter().zip(&rules) {
                map[v.output].get_or_insert(r.out_color());
                for (&c, gc) in v.inputs.iter().zip(r.gap_colors()) {
                    map[c].get_or_insert(gc);
                }
            }
        }
        let color_map = map
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| Error::typing("$.colors", format!("colour `{}` has no object pair", species.colors()[i]))))
            .collect::<Result<Vec<_>>>()?;
        let start = j.start.as_deref().map(|s| species.color(s)).transpose()?;
        CfGrammar::new(base, species, color_map, start, rules)
    }
}

fn prefix(e: Error, path: &str) -> Error {
    match e {
        Error::Type { path: p, message } => Error::Type {
            path: format!("{path}{}", p.trim_start_matches('$')),
            message,
        },
        other => Error::Type {
            path: path.to_string(),
            message: other.to_string(),
        },
    }
}

impl From<CfGrammar> for GrammarSpec {
    fn from(g: CfGrammar) -> GrammarSpec {
        let obj = |x: usize| g.base.objects()[x].clone();
        GrammarSpec {
            colors: Some(
                g.species
                    .colors()
                    .iter()
                    .zip(&g.color_map)
                    .map(|(c, &(x, y))| (c.clone(), (obj(x), obj(y))))
                    .collect(),
            ),
            start: g.start.map(|s| g.species.colors()[s].clone()),
            rules: g
                .species
                .vertices()
                .iter()
                .zip(&g.rules)
                .map(|(v, r)| (v.name.clone(), r.to_spec(&g.base)))
                .collect(),
            base: g.base,
            species: g.species,
        }
    }
}

impl CfGrammar {
    /// Checks the morphism condition on every vertex: the rule has one gap
    /// per input, coloured by the input colours, and the output colour.
    pub fn new(base: FreeCat, species: Species, color_map: Vec<(usize, usize)>, start: Option<usize>, rules: Vec<SplicedSeq>) -> Result<CfGrammar> {
        if color_map.len() != species.colors().len() || rules.len() != species.vertices().len() {
            return Err(Error::input("grammar needs one object pair per colour and one rule per vertex"));
        }
        if color_map.iter().any(|&(x, y)| x >= base.object_count() || y >= base.object_count()) {
            return Err(Error::input("colour mapped to an unknown object"));
        }
        if start.map_or(false, |s| s >= color_map.len()) {
            return Err(Error::input("start colour out of range"));
        }
        for (v, r) in species.vertices().iter().zip(&rules) {
            let path = format!("$.rules.{}", v.name);
            if r.parts().iter().flat_map(|p| &p.gens).any(|&g| g >= base.generators().len()) {
                return Err(Error::typing(&path, "rule uses generators outside the base"));
            }
            if r.gaps() != v.inputs.len() {
                return Err(Error::typing(&path, format!("{} gaps for {} inputs", r.gaps(), v.inputs.len())));
            }
            for (i, (&c, gc)) in v.inputs.iter().zip(r.gap_colors()).enumerate() {
                if color_map[c] != gc {
                    return Err(Error::typing(&path, format!("gap {i} does not carry the colour of input `{}`", species.colors()[c])));
                }
            }
            if color_map[v.output] != r.out_color() {
                return Err(Error::typing(&path, format!("rule does not carry the colour of `{}`", species.colors()[v.output])));
            }
        }
        Ok(CfGrammar {
            base,
            species,
            color_map,
            start,
            rules,
        })
    }

    pub fn base(&self) -> &FreeCat {
        &self.base
    }

    pub fn species(&self) -> &Species {
        &self.species
    }

    pub fn color_map(&self) -> &[(usize, usize)] {
        &self.color_map
    }

    pub fn start(&self) -> Option<usize> {
        self.start
    }

    pub fn rules(&self) -> &[SplicedSeq] {
        &self.rules
    }

    pub fn rule(&self, v: usize) -> &SplicedSeq {
        &self.rules[v]
    }

    /// Injective on colours.
    pub fn is_chromatic(&self) -> bool {
        let set: BTreeSet<_> = self.color_map.iter().collect();
        set.len() == self.color_map.len()
    }

    /// `𝒳 = π₁(Col) ∩ π₂(Col)`, sorted.
    pub fn objects_x(&self) -> Vec<usize> {
        let firsts: BTreeSet<usize> = self.color_map.iter().map(|p| p.0).collect();
        let seconds: BTreeSet<usize> = self.color_map.iter().map(|p| p.1).collect();
        firsts.intersection(&seconds).copied().collect()
    }

    /// The grammar `𝒲f ∘ P` over the target of `f`.
    pub fn map_base(&self, f: &CatFunctor) -> Result<CfGrammar> {
        if f.source() != &self.base {
            return Err(Error::input("functor does not start at the grammar's base category"));
        }
        CfGrammar::new(
            f.target().clone(),
            self.species.clone(),
            self.color_map.iter().map(|&(x, y)| (f.object(x), f.object(y))).collect(),
            self.start,
            self.rules.iter().map(|r| r.map(f)).collect(),
        )
    }

    /// Image of the identity tree of a colour.
    pub fn identity_of(&self, color: usize) -> SplicedSeq {
        let (x, y) = self.color_map[color];
        SplicedSeq::identity(x, y)
    }
}

/// `P(t)`: the fold of the rules over the tree by full splicing.
pub fn apply_grammar(g: &CfGrammar, t: &OperadTree) -> Result<SplicedSeq> {
    t.typecheck(&g.species)?;
    fold(g, t)
}

fn fold(g: &CfGrammar, t: &OperadTree) -> Result<SplicedSeq> {
    match t {
        OperadTree::Leaf(c) => Ok(g.identity_of(*c)),
        OperadTree::Node(v, ch) => {
            let subs = ch.iter().map(|c| fold(g, c)).collect::<Result<Vec<_>>>()?;
            splice_all(&g.rules[*v], &subs)
        }
    }
}

/// Constants of the start colour with at most `bound` generators: the least
/// fixed point of the rules on per-colour sets of short arrows. Growth is
/// monotone and the candidate set finite, so the iteration is exact even in
/// the presence of ε-rules and unit cycles.
pub fn language_of_arrows(g: &CfGrammar, bound: usize) -> Result<BTreeSet<Path>> {
    language_of_arrows_with(g, bound, &Budget::default())
}

pub fn language_of_arrows_with(g: &CfGrammar, bound: usize, budget: &Budget) -> Result<BTreeSet<Path>> {
    let Some(start) = g.start else {
        return Ok(BTreeSet::new());
    };
    Ok(constants_by_color(g, bound, budget)?.swap_remove(start))
}

pub(crate) fn constants_by_color(g: &CfGrammar, bound: usize, budget: &Budget) -> Result<Vec<BTreeSet<Path>>> {
    let nc = g.species.colors().len();
    let mut lang: Vec<BTreeSet<Path>> = vec![BTreeSet::new(); nc];
    loop {
        let mut changed = false;
        for (v, vx) in g.species.vertices().iter().enumerate() {
            let parts = g.rules[v].parts();
            let mut partial = vec![parts[0].clone()];
            for (i, &c) in vx.inputs.iter().enumerate() {
                let mut next = Vec::new();
                for p in &partial {
                    for x in &lang[c] {
                        if p.len() + x.len() + parts[i + 1].len() <= bound {
                            let q = p.then(x).and_then(|q| q.then(&parts[i + 1])).expect("rules are typed");
                            next.push(q);
                        }
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            for p in partial {
                if p.len() <= bound && lang[vx.output].insert(p) {
                    changed = true;
                }
            }
            let total: usize = lang.iter().map(BTreeSet::len).sum();
            budget.check_states("language enumeration", total)?;
        }
        if !changed {
            return Ok(lang);
        }
    }
}

/// The arrow language as words of base generator labels.
pub fn language_words(g: &CfGrammar, bound: usize) -> Result<BTreeSet<Word>> {
    Ok(language_of_arrows(g, bound)?
        .iter()
        .map(|p| Word::from_symbols(g.base.labels(p)))
        .collect())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Tok {
    Gen(usize),
    Gap,
}

/// For each colour, whether some tree of that colour has image exactly `d`.
/// A chart over (colour, token span) closed under the rules: a leaf spans one
/// gap of matching colour, a vertex spans its rule's paths interleaved with
/// spans of its inputs.
pub(crate) fn derives(g: &CfGrammar, d: &SplicedSeq) -> Vec<bool> {
    let mut toks = Vec::new();
    let mut obj = vec![d.parts()[0].src];
    for (i, p) in d.parts().iter().enumerate() {
        if i > 0 {
            toks.push(Tok::Gap);
            obj.push(p.src);
        }
        for &h in &p.gens {
            toks.push(Tok::Gen(h));
            obj.push(g.base.generators()[h].dst);
        }
    }
    let n = toks.len();
    let nc = g.species.colors().len();
    let mut chart = vec![vec![vec![false; n + 1]; n + 1]; nc];
    for (p, t) in toks.iter().enumerate() {
        if *t == Tok::Gap {
            for c in 0..nc {
                if g.color_map[c] == (obj[p], obj[p + 1]) {
                    chart[c][p][p + 1] = true;
                }
            }
        }
    }
    // Whether `path` reads off the tokens at `at`; returns the end position.
    let matches = |path: &Path, at: usize| -> Option<usize> {
        if obj[at] != path.src || at + path.len() > n {
            return None;
        }
        path.gens
            .iter()
            .enumerate()
            .all(|(k, &h)| toks[at + k] == Tok::Gen(h))
            .then_some(at + path.len())
    };
    loop {
        let mut changed = false;
        for (v, vx) in g.species.vertices().iter().enumerate() {
            let parts = g.rules[v].parts();
            for i in 0..=n {
                let Some(p0) = matches(&parts[0], i) else { continue };
                let mut frontier: BTreeSet<usize> = [p0].into();
                for (k, &c) in vx.inputs.iter().enumerate() {
                    let mut next = BTreeSet::new();
                    for &p in &frontier {
                        for j in p..=n {
                            if chart[c][p][j] {
                                if let Some(e) = matches(&parts[k + 1], j) {
                                    next.insert(e);
                                }
                            }
                        }
                    }
                    frontier = next;
                }
                for e in frontier {
                    if !chart[vx.output][i][e] {
                        chart[vx.output][i][e] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..nc).map(|c| chart[c][0][n]).collect()
}

/// The operator of a defect `d` over `𝔹𝒳`: entry `(C', C)` is set when some
/// tree `𝕋` has `P(𝕋) = d`, `s(𝕋) = C`, `t(𝕋) = C'`. The chart search is
/// exact, so no size bound is involved.
pub fn grammar_tqft_operator(g: &CfGrammar, d: &SplicedSeq) -> Result<BoolMat> {
    if d.parts().iter().any(|p| p.src >= g.base.object_count() || p.dst >= g.base.object_count()) {
        return Err(Error::input("defect is not over the grammar's base category"));
    }
    let xs = g.objects_x();
    let mut m = BoolMat::zeros(xs.len(), xs.len());
    let (x, y) = d.out_color();
    if let (Ok(i), Ok(j)) = (xs.binary_search(&x), xs.binary_search(&y)) {
        if derives(g, d).iter().any(|&b| b) {
            m.set(j, i, true);
        }
    }
    Ok(m)
}

/// The pullback grammar `𝒪_𝕊 ×_{𝒲𝒞} 𝒲𝒬_T` with its projection `π` to
/// `𝒲𝒬_T`, presented over `𝒬_T`. Colours are the colours of `𝕊` whose
/// object pair lies in the image of `α`; vertices pair a vertex of `𝕊` with
/// a choice of lift of each part of its rule.
pub fn grammar_pullback(t: &CatTransducer, g: &CfGrammar, budget: &Budget) -> Result<CfGrammar> {
    let alpha = t.alpha();
    if alpha.target() != &g.base {
        return Err(Error::input("transducer input category differs from the grammar's base"));
    }
    if let Some(&c) = alpha.collapsed_generators().first() {
        return Err(Error::input(format!(
            "alpha sends `{}` to an identity; lifts of rules would not be finite",
            alpha.source().generators()[c].label
        )));
    }
    let over = |x: usize| t.over(x);
    let mut new_color = vec![None; g.species.colors().len()];
    let mut colors = Vec::new();
    let mut color_map = Vec::new();
    for (c, &(x, y)) in g.color_map.iter().enumerate() {
        if let (Some(a), Some(b)) = (over(x), over(y)) {
            new_color[c] = Some(colors.len());
            colors.push(g.species.colors()[c].clone());
            color_map.push((a, b));
        }
    }
    let mut vertices = Vec::new();
    let mut rules = Vec::new();
    for (v, vx) in g.species.vertices().iter().enumerate() {
        let Some(out) = new_color[vx.output] else { continue };
        let Some(ins) = vx.inputs.iter().map(|&c| new_color[c]).collect::<Option<Vec<_>>>() else { continue };
        let mut choices: Vec<Vec<Path>> = vec![Vec::new()];
        for part in g.rules[v].parts() {
            let Some(from) = over(part.src) else {
                choices.clear();
                break;
            };
            let found = lifts(alpha, part, from, part.len());
            let mut next = Vec::new();
            for c in &choices {
                for l in &found.0 {
                    let mut c = c.clone();
                    c.push(l.clone());
                    next.push(c);
                }
            }
            budget.check_states("grammar pullback vertices", next.len() + vertices.len())?;
            choices = next;
        }
        let single = choices.len() == 1;
        for (k, parts) in choices.into_iter().enumerate() {
            let name = if single { vx.name.clone() } else { format!("{}.{}", vx.name, k) };
            vertices.push((name, ins.iter().map(|&c| colors[c].clone()).collect(), colors[out].clone()));
            rules.push(SplicedSeq::new(parts)?);
        }
    }
    let species = Species::new(colors, vertices)?;
    let start = g.start.and_then(|s| new_color[s]);
    CfGrammar::new(t.states().clone(), species, color_map, start, rules)
}

/// `𝒲β ∘ π` on the pullback grammar.
pub fn grammar_transduce(t: &CatTransducer, g: &CfGrammar, budget: &Budget) -> Result<CfGrammar> {
    grammar_pullback(t, g, budget)?.map_base(t.beta())
}
