use serde::{Deserialize, Serialize};

use crate::catauto::{CatFunctor, FreeCat, Path, PathSpec};
use crate::error::{Error, Result};

/// An operation `w₀ □ w₁ □ ⋯ □ w_n` of the spliced-arrow operad: `n + 1`
/// paths around `n` gaps. Gap `i` has colour `(t(wᵢ), s(wᵢ₊₁))` and the
/// whole sequence has colour `(s(w₀), t(w_n))`, so any list of paths is
/// well typed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplicedSeq {
    parts: Vec<Path>,
}

/// JSON form: `{"parts": [path, "gap", path, ...]}` with optional colour
/// annotations that are checked when present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplicedSpec {
    pub parts: Vec<PartSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_colors: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_color: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PartSpec {
    Path(PathSpec),
    Marker(String),
}

impl SplicedSeq {
    pub fn new(parts: Vec<Path>) -> Result<SplicedSeq> {
        if parts.is_empty() {
            return Err(Error::input("a spliced sequence has at least one part"));
        }
        Ok(SplicedSeq { parts })
    }

    /// A gap-free sequence: a plain arrow.
    pub fn constant(p: Path) -> SplicedSeq {
        SplicedSeq { parts: vec![p] }
    }

    /// `id_X □ id_Y`, the identity of colour `(X, Y)`.
    pub fn identity(x: usize, y: usize) -> SplicedSeq {
        SplicedSeq {
            parts: vec![Path::identity(x), Path::identity(y)],
        }
    }

    pub fn parts(&self) -> &[Path] {
        &self.parts
    }

    pub fn gaps(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn out_color(&self) -> (usize, usize) {
        (self.parts[0].src, self.parts[self.parts.len() - 1].dst)
    }

    pub fn gap_color(&self, i: usize) -> (usize, usize) {
        (self.parts[i].dst, self.parts[i + 1].src)
    }

    pub fn gap_colors(&self) -> Vec<(usize, usize)> {
        (0..self.gaps()).map(|i| self.gap_color(i)).collect()
    }

    pub fn as_path(&self) -> Option<&Path> {
        (self.parts.len() == 1).then(|| &self.parts[0])
    }

    /// Total number of generators over all parts.
    pub fn len(&self) -> usize {
        self.parts.iter().map(Path::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `𝒲f`: the functor applied part by part.
    pub fn map(&self, f: &CatFunctor) -> SplicedSeq {
        SplicedSeq {
            parts: self.parts.iter().map(|p| f.apply(p)).collect(),
        }
    }

    pub fn show(&self, cat: &FreeCat) -> String {
        self.parts.iter().map(|p| cat.show(p)).collect::<Vec<_>>().join(" □ ")
    }

    pub fn from_spec(cat: &FreeCat, spec: &SplicedSpec) -> Result<SplicedSeq> {
        let mut parts = Vec::new();
        for (i, part) in spec.parts.iter().enumerate() {
            let want_path = i % 2 == 0;
            match (part, want_path) {
                (PartSpec::Path(p), true) => parts.push(cat.resolve(p)?),
                (PartSpec::Marker(m), false) if m == "gap" => {}
                (PartSpec::Marker(m), _) if m != "gap" => {
                    return Err(Error::typing(format!("$.parts[{i}]"), format!("unknown marker `{m}`; expected \"gap\"")))
                }
                _ => return Err(Error::typing(format!("$.parts[{i}]"), "parts must alternate path, \"gap\", path, ...")),
            }
        }
        if spec.parts.len() % 2 == 0 {
            return Err(Error::typing("$.parts", "a spliced sequence starts and ends with a path"));
        }
        let seq = SplicedSeq::new(parts)?;
        let name = |(x, y): (usize, usize)| (cat.objects()[x].clone(), cat.objects()[y].clone());
        if let Some(gc) = &spec.gap_colors {
            let got: Vec<_> = seq.gap_colors().into_iter().map(name).collect();
            if &got != gc {
                return Err(Error::typing("$.gap_colors", format!("declared {gc:?}, paths give {got:?}")));
            }
        }
        if let Some(oc) = &spec.out_color {
            if &name(seq.out_color()) != oc {
                return Err(Error::typing("$.out_color", format!("declared {oc:?}, paths give {:?}", name(seq.out_color()))));
            }
        }
        Ok(seq)
    }

    pub fn to_spec(&self, cat: &FreeCat) -> SplicedSpec {
        let mut parts = Vec::new();
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                parts.push(PartSpec::Marker("gap".into()));
            }
            parts.push(PartSpec::Path(cat.spec_of(p)));
        }
        let name = |(x, y): (usize, usize)| (cat.objects()[x].clone(), cat.objects()[y].clone());
        SplicedSpec {
            parts,
            gap_colors: Some(self.gap_colors().into_iter().map(name).collect()),
            out_color: Some(name(self.out_color())),
        }
    }
}

fn join(a: &Path, b: &Path) -> Result<Path> {
    a.then(b).ok_or_else(|| Error::typing("$", "spliced paths do not meet at the gap"))
}

/// `f ∘ᵢ g`: splices `g` into gap `i` (0-based) of `f`.
pub fn splice_compose(f: &SplicedSeq, i: usize, g: &SplicedSeq) -> Result<SplicedSeq> {
    if i >= f.gaps() {
        return Err(Error::typing("$", format!("gap {i} out of range ({} gaps)", f.gaps())));
    }
    if f.gap_color(i) != g.out_color() {
        return Err(Error::typing("$", format!("gap {i} has colour {:?}, spliced sequence has {:?}", f.gap_color(i), g.out_color())));
    }
    let mut parts: Vec<Path> = f.parts[..i].to_vec();
    let m = g.parts.len() - 1;
    let mut first = join(&f.parts[i], &g.parts[0])?;
    if m == 0 {
        first = join(&first, &f.parts[i + 1])?;
        parts.push(first);
    } else {
        parts.push(first);
        parts.extend(g.parts[1..m].iter().cloned());
        parts.push(join(&g.parts[m], &f.parts[i + 1])?);
    }
    parts.extend(f.parts[i + 2..].iter().cloned());
    Ok(SplicedSeq { parts })
}

/// Full composition `f ∘ (g₁, …, g_n)`, one sequence per gap.
pub fn splice_all(f: &SplicedSeq, gs: &[SplicedSeq]) -> Result<SplicedSeq> {
    if gs.len() != f.gaps() {
        return Err(Error::typing("$", format!("{} gaps, {} sequences", f.gaps(), gs.len())));
    }
    let mut parts = Vec::with_capacity(f.parts.len());
    let mut cur = f.parts[0].clone();
    for (i, g) in gs.iter().enumerate() {
        if f.gap_color(i) != g.out_color() {
            return Err(Error::typing(
                format!("$[{i}]"),
                format!("gap {i} has colour {:?}, spliced sequence has {:?}", f.gap_color(i), g.out_color()),
            ));
        }
        cur = join(&cur, &g.parts[0])?;
        for p in &g.parts[1..] {
            parts.push(std::mem::replace(&mut cur, p.clone()));
        }
        cur = join(&cur, &f.parts[i + 1])?;
    }
    parts.push(cur);
    Ok(SplicedSeq { parts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> FreeCat {
        FreeCat::monoid(["A", "B"]).unwrap()
    }

    fn seq(c: &FreeCat, parts: &[&[&str]]) -> SplicedSeq {
        SplicedSeq::new(
            parts
                .iter()
                .map(|p| if p.is_empty() { Path::identity(0) } else { c.path(p).unwrap() })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn splicing_into_the_first_gap() {
        let c = cat();
        let f = seq(&c, &[&["A"], &["B"], &["A", "A"], &["B", "B"]]);
        let g = seq(&c, &[&["B"], &[], &["A"]]);
        let r = splice_compose(&f, 0, &g).unwrap();
        assert_eq!(r.show(&c), "A B □ id_* □ A B □ A A □ B B");
        let id = SplicedSeq::identity(0, 0);
        for i in 0..f.gaps() {
            assert_eq!(splice_compose(&f, i, &id).unwrap(), f);
        }
        assert_eq!(splice_compose(&id, 0, &f).unwrap(), f);
    }

    #[test]
    fn full_composition_agrees_with_partial() {
        let c = cat();
        let f = seq(&c, &[&["A"], &["B"], &[]]);
        let g1 = seq(&c, &[&["B"], &["B"]]);
        let g2 = seq(&c, &[&["A"]]);
        let all = splice_all(&f, &[g1.clone(), g2.clone()]).unwrap();
        let step = splice_compose(&splice_compose(&f, 1, &g2).unwrap(), 0, &g1).unwrap();
        assert_eq!(all, step);
        assert_eq!(all.show(&c), "A B □ B B A");
    }

    #[test]
    fn colours_are_checked() {
        let c = FreeCat::new(["x", "y"], [("x", "f", "y")]).unwrap();
        let f = SplicedSeq::new(vec![c.path(&["f"]).unwrap(), Path::identity(1)]).unwrap();
        assert_eq!(f.gap_color(0), (1, 1));
        assert!(splice_compose(&f, 0, &SplicedSeq::identity(0, 0)).is_err());
        assert!(splice_compose(&f, 0, &SplicedSeq::identity(1, 1)).is_ok());
    }

    #[test]
    fn json_parts_alternate() {
        let c = cat();
        let spec: SplicedSpec = serde_json::from_str(r#"{"parts":[["A"],"gap",{"id":"*"}],"out_color":["*","*"]}"#).unwrap();
        let s = SplicedSeq::from_spec(&c, &spec).unwrap();
        assert_eq!(s.gaps(), 1);
        assert_eq!(SplicedSeq::from_spec(&c, &s.to_spec(&c)).unwrap(), s);
        let bad: SplicedSpec = serde_json::from_str(r#"{"parts":[["A"],"hole",["B"]]}"#).unwrap();
        assert!(SplicedSeq::from_spec(&c, &bad).is_err());
        let bad: SplicedSpec = serde_json::from_str(r#"{"parts":[["A"],"gap"]}"#).unwrap();
        assert!(SplicedSeq::from_spec(&c, &bad).is_err());
    }
}
