/*!
Categorical automata over free categories.

A categorical automaton is a functor `τ : 𝒬 → 𝒞` between free categories
with an initial object and final objects of `𝒬`. Runs are paths in `𝒬`,
and the accepted arrows are their images in `𝒞`. A one-object base
category recovers ordinary automata over its generators. Transducers
are pairs of functors `α : 𝒬_T → 𝒞`, `β : 𝒬_T → 𝒞'` acting by pullback.
*/

mod machine;
mod transducer;

pub use machine::{check_finitary, check_ulf, encode_fsa, FunctorCheck, CatFsa};
pub use transducer::{
    cat_apply, cat_compose, cat_generator_probes, cat_naturality_check, cat_naturality_check_with, encode_transducer, pullback, CatApplied,
    CatNaturalityOptions, CatNaturalityReport, CatProbeReport, CatTransducer, Pullback,
};

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automata::fresh_name;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub src: usize,
    pub label: String,
    pub dst: usize,
}

/// A path of generators; the empty path is the identity at `src = dst`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub src: usize,
    pub dst: usize,
    pub gens: Vec<usize>,
}

impl Path {
    pub fn identity(x: usize) -> Path {
        Path {
            src: x,
            dst: x,
            gens: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_identity(&self) -> bool {
        self.gens.is_empty()
    }

    /// `next ∘ self`, when the endpoints match.
    pub fn then(&self, next: &Path) -> Option<Path> {
        (self.dst == next.src).then(|| Path {
            src: self.src,
            dst: next.dst,
            gens: self.gens.iter().chain(&next.gens).copied().collect(),
        })
    }
}

/// A path as written in JSON: a list of generator labels, or an identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PathSpec {
    Labels(Vec<String>),
    Identity { id: String },
}

/// The free category on a finite directed multigraph with distinct labels.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "FreeCatJson", into = "FreeCatJson")]
pub struct FreeCat {
    objects: Vec<String>,
    gens: Vec<Generator>,
    object_index: HashMap<String, usize>,
    gen_index: HashMap<String, usize>,
    out: Vec<Vec<usize>>,
}

impl PartialEq for FreeCat {
    fn eq(&self, other: &FreeCat) -> bool {
        self.objects == other.objects && self.gens == other.gens
    }
}

impl Eq for FreeCat {}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FreeCatJson {
    objects: Vec<String>,
    generators: Vec<(String, String, String)>,
}

impl TryFrom<FreeCatJson> for FreeCat {
    type Error = Error;

    fn try_from(j: FreeCatJson) -> Result<FreeCat> {
        FreeCat::new(j.objects, j.generators)
    }
}

impl From<FreeCat> for FreeCatJson {
    fn from(c: FreeCat) -> FreeCatJson {
        FreeCatJson {
            generators: c
                .gens
                .iter()
                .map(|g| (c.objects[g.src].clone(), g.label.clone(), c.objects[g.dst].clone()))
                .collect(),
            objects: c.objects,
        }
    }
}

impl FreeCat {
    pub fn new<S: Into<String>>(objects: impl IntoIterator<Item = S>, generators: impl IntoIterator<Item = (S, S, S)>) -> Result<FreeCat> {
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        let mut object_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if object_index.insert(o.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate object `{o}`")));
            }
        }
        let mut gens = Vec::new();
        let mut gen_index = HashMap::new();
        for (s, l, d) in generators {
            let (s, l, d): (String, String, String) = (s.into(), l.into(), d.into());
            let obj = |n: &str| object_index.get(n).copied().ok_or_else(|| Error::input(format!("unknown object `{n}` in generator `{l}`")));
            let g = Generator {
                src: obj(&s)?,
                label: l.clone(),
                dst: obj(&d)?,
            };
            if gen_index.insert(l.clone(), gens.len()).is_some() {
                return Err(Error::input(format!("duplicate generator label `{l}`")));
            }
            gens.push(g);
        }
        let mut out = vec![Vec::new(); objects.len()];
        for (i, g) in gens.iter().enumerate() {
            out[g.src].push(i);
        }
        Ok(FreeCat {
            objects,
            gens,
            object_index,
            gen_index,
            out,
        })
    }

    pub(crate) fn from_parts(objects: Vec<String>, gens: Vec<Generator>) -> FreeCat {
        let triples: Vec<(String, String, String)> = gens
            .iter()
            .map(|g| (objects[g.src].clone(), g.label.clone(), objects[g.dst].clone()))
            .collect();
        FreeCat::new(objects, triples).expect("constructed categories are well formed")
    }

    /// One object `*` with a loop per letter: words as arrows.
    pub fn monoid<S: AsRef<str>>(letters: impl IntoIterator<Item = S>) -> Result<FreeCat> {
        FreeCat::new(["*".to_string()], letters.into_iter().map(|l| ("*".to_string(), l.as_ref().to_string(), "*".to_string())))
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.object_index.get(name).copied()
    }

    pub fn generator_index(&self, label: &str) -> Option<usize> {
        self.gen_index.get(label).copied()
    }

    pub fn object(&self, name: &str) -> Result<usize> {
        self.object_index(name).ok_or_else(|| Error::input(format!("unknown object `{name}`")))
    }

    /// Generators leaving an object.
    pub fn out_generators(&self, x: usize) -> &[usize] {
        &self.out[x]
    }

    pub fn gen_path(&self, g: usize) -> Path {
        Path {
            src: self.gens[g].src,
            dst: self.gens[g].dst,
            gens: vec![g],
        }
    }

    /// Path through the labelled generators, which must be composable.
    pub fn path<S: AsRef<str>>(&self, labels: &[S]) -> Result<Path> {
        let mut iter = labels.iter();
        let first = iter.next().ok_or_else(|| Error::input("an empty label list does not name an identity; use {\"id\": object}"))?;
        let g = self.gen_of(first.as_ref())?;
        let mut p = self.gen_path(g);
        for l in iter {
            let g = self.gen_of(l.as_ref())?;
            p = p
                .then(&self.gen_path(g))
                .ok_or_else(|| Error::input(format!("generator `{}` does not continue the path", l.as_ref())))?;
        }
        Ok(p)
    }

    fn gen_of(&self, label: &str) -> Result<usize> {
        self.generator_index(label).ok_or_else(|| Error::input(format!("unknown generator `{label}`")))
    }

    pub fn resolve(&self, spec: &PathSpec) -> Result<Path> {
        match spec {
            PathSpec::Labels(ls) => self.path(ls),
            PathSpec::Identity { id } => Ok(Path::identity(self.object(id)?)),
        }
    }

    pub fn spec_of(&self, p: &Path) -> PathSpec {
        if p.is_identity() {
            PathSpec::Identity {
                id: self.objects[p.src].clone(),
            }
        } else {
            PathSpec::Labels(self.labels(p))
        }
    }

    pub fn labels(&self, p: &Path) -> Vec<String> {
        p.gens.iter().map(|&g| self.gens[g].label.clone()).collect()
    }

    /// Human-readable form: labels joined by spaces, or `id_x`.
    pub fn show(&self, p: &Path) -> String {
        if p.is_identity() {
            format!("id_{}", self.objects[p.src])
        } else {
            self.labels(p).join(" ")
        }
    }

    /// All paths of length at most `maxlen`, identities first, then by length.
    pub fn paths_up_to(&self, maxlen: usize) -> Vec<Path> {
        let mut out: Vec<Path> = (0..self.objects.len()).map(Path::identity).collect();
        let mut layer = out.clone();
        for _ in 0..maxlen {
            let mut next = Vec::new();
            for p in &layer {
                for &g in &self.out[p.dst] {
                    let mut q = p.clone();
                    q.gens.push(g);
                    q.dst = self.gens[g].dst;
                    next.push(q);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

/// A functor between free categories, given on objects and generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatFunctor {
    source: FreeCat,
    target: FreeCat,
    objects: Vec<usize>,
    gens: Vec<Path>,
}

/// JSON form of a functor, resolved against known categories.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    pub objects: BTreeMap<String, String>,
    pub generators: BTreeMap<String, Vec<String>>,
}

impl CatFunctor {
    pub fn new(source: FreeCat, target: FreeCat, objects: Vec<usize>, gens: Vec<Path>) -> Result<CatFunctor> {
        if objects.len() != source.object_count() || gens.len() != source.gens.len() {
            return Err(Error::input("functor must be given on every object and generator"));
        }
        if let Some(&bad) = objects.iter().find(|&&x| x >= target.object_count()) {
            return Err(Error::input(format!("object image {bad} out of range")));
        }
        for (g, p) in source.gens.iter().zip(&gens) {
            let ok = p.src == objects[g.src]
                && p.dst == objects[g.dst]
                && p.gens.iter().all(|&h| h < target.gens.len())
                && p.gens.windows(2).all(|w| target.gens[w[0]].dst == target.gens[w[1]].src)
                && p.gens.first().map_or(true, |&h| target.gens[h].src == p.src)
                && p.gens.last().map_or(true, |&h| target.gens[h].dst == p.dst);
            if !ok {
                return Err(Error::input(format!(
                    "image of generator `{}` is not a path from {} to {}",
                    g.label, target.objects[objects[g.src]], target.objects[objects[g.dst]]
                )));
            }
        }
        Ok(CatFunctor {
            source,
            target,
            objects,
            gens,
        })
    }

    pub fn identity(c: &FreeCat) -> CatFunctor {
        CatFunctor {
            source: c.clone(),
            target: c.clone(),
            objects: (0..c.object_count()).collect(),
            gens: (0..c.gens.len()).map(|g| c.gen_path(g)).collect(),
        }
    }

    pub fn from_spec(source: &FreeCat, target: &FreeCat, spec: &FunctorSpec) -> Result<CatFunctor> {
        let mut objects = Vec::with_capacity(source.object_count());
        for o in &source.objects {
            let img = spec
                .objects
                .get(o)
                .ok_or_else(|| Error::input(format!("functor misses object `{o}`")))?;
            objects.push(target.object(img)?);
        }
        for k in spec.objects.keys() {
            source.object(k)?;
        }
        for k in spec.generators.keys() {
            source.gen_of(k)?;
        }
        let mut gens = Vec::with_capacity(source.gens.len());
        for g in &source.gens {
            let labels = spec
                .generators
                .get(&g.label)
                .ok_or_else(|| Error::input(format!("functor misses generator `{}`", g.label)))?;
            gens.push(if labels.is_empty() {
                Path::identity(objects[g.src])
            } else {
                target.path(labels)?
            });
        }
        CatFunctor::new(source.clone(), target.clone(), objects, gens)
    }

    pub fn to_spec(&self) -> FunctorSpec {
        FunctorSpec {
            objects: self
                .source
                .objects
                .iter()
                .zip(&self.objects)
                .map(|(o, &x)| (o.clone(), self.target.objects[x].clone()))
                .collect(),
            generators: self
                .source
                .gens
                .iter()
                .zip(&self.gens)
                .map(|(g, p)| (g.label.clone(), self.target.labels(p)))
                .collect(),
        }
    }

    pub fn source(&self) -> &FreeCat {
        &self.source
    }

    pub fn target(&self) -> &FreeCat {
        &self.target
    }

    pub fn object(&self, x: usize) -> usize {
        self.objects[x]
    }

    pub fn object_map(&self) -> &[usize] {
        &self.objects
    }

    pub fn generator(&self, g: usize) -> &Path {
        &self.gens[g]
    }

    pub fn apply(&self, p: &Path) -> Path {
        let mut out = Path::identity(self.objects[p.src]);
        for &g in &p.gens {
            out.gens.extend(&self.gens[g].gens);
        }
        out.dst = self.objects[p.dst];
        out
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &CatFunctor) -> Result<CatFunctor> {
        if first.target != self.source {
            return Err(Error::input("functors are not composable"));
        }
        Ok(CatFunctor {
            source: first.source.clone(),
            target: self.target.clone(),
            objects: first.objects.iter().map(|&x| self.objects[x]).collect(),
            gens: first.gens.iter().map(|p| self.apply(p)).collect(),
        })
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let set: HashSet<usize> = self.objects.iter().copied().collect();
        set.len() == self.objects.len()
    }

    /// Generators sent to identities.
    pub fn collapsed_generators(&self) -> Vec<usize> {
        (0..self.gens.len()).filter(|&g| self.gens[g].is_identity()).collect()
    }

    pub fn max_image_len(&self) -> usize {
        self.gens.iter().map(Path::len).max().unwrap_or(0)
    }

    /// Whether distinct source paths have distinct images: true when every
    /// generator image has the same nonzero length and images are distinct.
    pub fn is_uniform_code(&self) -> bool {
        let lens: HashSet<usize> = self.gens.iter().map(Path::len).collect();
        let images: HashSet<&Path> = self.gens.iter().collect();
        !lens.contains(&0) && lens.len() <= 1 && images.len() == self.gens.len()
    }
}

impl fmt::Display for CatFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, p) in self.source.gens.iter().zip(&self.gens) {
            writeln!(f, "{} ↦ {}", g.label, self.target.show(p))?;
        }
        Ok(())
    }
}

/// A label unused by `taken`, recorded there.
pub(crate) fn unique_label(base: String, taken: &mut HashSet<String>) -> String {
    let name = fresh_name(base, taken);
    taken.insert(name.clone());
    name
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> FreeCat {
        FreeCat::new(["x", "y"], [("x", "f", "y"), ("y", "g", "x")]).unwrap()
    }

    #[test]
    fn paths_compose_by_concatenation() {
        let c = square();
        let fg = c.path(&["f", "g"]).unwrap();
        assert_eq!((fg.src, fg.dst), (0, 0));
        assert!(c.path(&["f", "f"]).is_err());
        let id = Path::identity(0);
        assert_eq!(id.then(&fg).unwrap(), fg);
        assert!(c.gen_path(0).then(&c.gen_path(0)).is_none());
        // 2 identities, 2 generators, 2 paths of length 2.
        assert_eq!(c.paths_up_to(2).len(), 6);
    }

    #[test]
    fn json_round_trip() {
        let c = square();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"{"objects":["x","y"],"generators":[["x","f","y"],["y","g","x"]]}"#);
        let back: FreeCat = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<FreeCat>(r#"{"objects":["x"],"generators":[["x","f","z"]]}"#).is_err());
        assert!(FreeCat::new(["x"], [("x", "f", "x"), ("x", "f", "x")]).is_err());
    }

    #[test]
    fn functors_check_typing() {
        let c = square();
        let b = FreeCat::monoid(["A", "B"]).unwrap();
        let spec: FunctorSpec = serde_json::from_str(r#"{"objects":{"x":"*","y":"*"},"generators":{"f":["A"],"g":["B","A"]}}"#).unwrap();
        let tau = CatFunctor::from_spec(&c, &b, &spec).unwrap();
        assert_eq!(b.labels(&tau.apply(&c.path(&["f", "g"]).unwrap())), vec!["A", "B", "A"]);
        assert!(!tau.is_injective_on_objects());
        assert!(!tau.is_uniform_code());
        let id = CatFunctor::identity(&c);
        assert_eq!(tau.after(&id).unwrap(), tau);
        let bad: FunctorSpec = serde_json::from_str(r#"{"objects":{"x":"x","y":"y"},"generators":{"f":["g"],"g":["g"]}}"#).unwrap();
        assert!(CatFunctor::from_spec(&c, &c, &bad).is_err());
    }
}
