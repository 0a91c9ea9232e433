/*!
Typed terms for oriented 1-dimensional cobordisms with defects.

Objects are sequences of signs. Morphisms are built from identities, the
cup `∅ → (+,−)`, the cap `(+,−) → ∅`, transpositions of two adjacent
strands, the half-lines `∅ → (+)` and `(+) → ∅`, and defects marking a
strand with a label. `Compose(f, g)` is `f ∘ g`: `g` happens first.

Labels are generic: words for classical automata, base paths for
categorical automata, spliced sequences for grammars. A term may also contain
typed holes, which the operadic layer fills.
*/

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automata::Word;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// A boundary object; the empty sequence is the monoidal unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignedBoundary(pub Vec<Sign>);

impl SignedBoundary {
    pub fn empty() -> Self {
        SignedBoundary(Vec::new())
    }

    pub fn plus() -> Self {
        SignedBoundary(vec![Sign::Plus])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &SignedBoundary) -> SignedBoundary {
        SignedBoundary(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl fmt::Display for SignedBoundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.0.iter().map(Sign::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Generating cobordisms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator<L> {
    /// The identity of the empty boundary.
    Empty,
    Id(Sign),
    Cup,
    Cap,
    /// `(a, b) → (b, a)`.
    Perm(Sign, Sign),
    HalfStart,
    HalfEnd,
    /// A strand of the given orientation carrying a label, read along the
    /// orientation.
    Defect(Sign, L),
}

impl<L> Generator<L> {
    pub fn boundaries(&self) -> (SignedBoundary, SignedBoundary) {
        use Sign::*;
        let b = |v: &[Sign]| SignedBoundary(v.to_vec());
        match self {
            Generator::Empty => (b(&[]), b(&[])),
            Generator::Id(s) | Generator::Defect(s, _) => (b(&[*s]), b(&[*s])),
            Generator::Cup => (b(&[]), b(&[Plus, Minus])),
            Generator::Cap => (b(&[Plus, Minus]), b(&[])),
            Generator::Perm(x, y) => (b(&[*x, *y]), b(&[*y, *x])),
            Generator::HalfStart => (b(&[]), b(&[Plus])),
            Generator::HalfEnd => (b(&[Plus]), b(&[])),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Generator::Empty => "empty",
            Generator::Id(_) => "id",
            Generator::Cup => "cup",
            Generator::Cap => "cap",
            Generator::Perm(..) => "perm",
            Generator::HalfStart => "half_start",
            Generator::HalfEnd => "half_end",
            Generator::Defect(..) => "defect",
        }
    }
}

/// An untyped term, as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term<L> {
    Gen(Generator<L>),
    Hole(SignedBoundary, SignedBoundary),
    Compose(Box<Term<L>>, Box<Term<L>>),
    Tensor(Box<Term<L>>, Box<Term<L>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node<L> {
    Gen(Generator<L>),
    Hole,
    Compose(Box<Diagram<L>>, Box<Diagram<L>>),
    Tensor(Box<Diagram<L>>, Box<Diagram<L>>),
}

/// A well-typed term with cached domain and codomain at every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram<L> {
    node: Node<L>,
    dom: SignedBoundary,
    cod: SignedBoundary,
}

/// A read-only view of a diagram node.
pub enum View<'a, L> {
    Gen(&'a Generator<L>),
    Hole,
    Compose(&'a Diagram<L>, &'a Diagram<L>),
    Tensor(&'a Diagram<L>, &'a Diagram<L>),
}

impl<L: Clone> Diagram<L> {
    pub fn gen(g: Generator<L>) -> Self {
        let (dom, cod) = g.boundaries();
        Diagram {
            node: Node::Gen(g),
            dom,
            cod,
        }
    }

    pub fn hole(dom: SignedBoundary, cod: SignedBoundary) -> Self {
        Diagram { node: Node::Hole, dom, cod }
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: Diagram<L>, inner: Diagram<L>) -> Result<Self> {
        if inner.cod != outer.dom {
            return Err(Error::typing(
                "compose",
                format!("inner codomain {} does not match outer domain {}", inner.cod, outer.dom),
            ));
        }
        Ok(Diagram {
            dom: inner.dom.clone(),
            cod: outer.cod.clone(),
            node: Node::Compose(Box::new(outer), Box::new(inner)),
        })
    }

    /// Composite of a chain, listed from last-applied to first-applied.
    pub fn chain(parts: Vec<Diagram<L>>) -> Result<Self> {
        let mut iter = parts.into_iter().rev();
        let mut acc = iter.next().ok_or_else(|| Error::typing("chain", "empty chain"))?;
        for outer in iter {
            acc = Diagram::compose(outer, acc)?;
        }
        Ok(acc)
    }

    pub fn tensor(left: Diagram<L>, right: Diagram<L>) -> Self {
        Diagram {
            dom: left.dom.concat(&right.dom),
            cod: left.cod.concat(&right.cod),
            node: Node::Tensor(Box::new(left), Box::new(right)),
        }
    }

    /// Tensor of several diagrams; the empty tensor is the identity of `∅`.
    pub fn tensor_all(parts: Vec<Diagram<L>>) -> Self {
        let mut iter = parts.into_iter();
        match iter.next() {
            None => Diagram::gen(Generator::Empty),
            Some(first) => iter.fold(first, Diagram::tensor),
        }
    }

    pub fn identity(boundary: &SignedBoundary) -> Self {
        Diagram::tensor_all(boundary.0.iter().map(|&s| Diagram::gen(Generator::Id(s))).collect())
    }

    /// Transposition of strands `i` and `i + 1` of `boundary`.
    pub fn swap(boundary: &SignedBoundary, i: usize) -> Result<Self> {
        if i + 1 >= boundary.len() {
            return Err(Error::typing("swap", format!("no strands {i},{} in {boundary}", i + 1)));
        }
        let s = &boundary.0;
        Ok(Diagram::tensor_all(vec![
            Diagram::identity(&SignedBoundary(s[..i].to_vec())),
            Diagram::gen(Generator::Perm(s[i], s[i + 1])),
            Diagram::identity(&SignedBoundary(s[i + 2..].to_vec())),
        ]))
    }

    pub fn dom(&self) -> &SignedBoundary {
        &self.dom
    }

    pub fn cod(&self) -> &SignedBoundary {
        &self.cod
    }

    pub fn view(&self) -> View<'_, L> {
        match &self.node {
            Node::Gen(g) => View::Gen(g),
            Node::Hole => View::Hole,
            Node::Compose(a, b) => View::Compose(a, b),
            Node::Tensor(a, b) => View::Tensor(a, b),
        }
    }

    /// Hole boundaries in left-to-right term order.
    pub fn holes(&self) -> Vec<(SignedBoundary, SignedBoundary)> {
        let mut out = Vec::new();
        self.collect_holes(&mut out);
        out
    }

    fn collect_holes(&self, out: &mut Vec<(SignedBoundary, SignedBoundary)>) {
        match &self.node {
            Node::Gen(_) => {}
            Node::Hole => out.push((self.dom.clone(), self.cod.clone())),
            Node::Compose(a, b) | Node::Tensor(a, b) => {
                a.collect_holes(out);
                b.collect_holes(out);
            }
        }
    }

    /// Replaces the holes, in order, by the given diagrams. With fewer
    /// fillings than holes the remaining holes stay open.
    pub fn fill(&self, fillings: &[Diagram<L>]) -> Result<Diagram<L>> {
        let mut rest = fillings;
        let out = self.fill_rec(&mut rest)?;
        if !rest.is_empty() {
            return Err(Error::typing("fill", format!("{} fillings left over", rest.len())));
        }
        Ok(out)
    }

    fn fill_rec(&self, rest: &mut &[Diagram<L>]) -> Result<Diagram<L>> {
        Ok(match &self.node {
            Node::Gen(_) => self.clone(),
            Node::Hole => match rest.split_first() {
                None => self.clone(),
                Some((f, tail)) => {
                    if f.dom != self.dom || f.cod != self.cod {
                        return Err(Error::typing(
                            "fill",
                            format!("hole {} → {} filled with {} → {}", self.dom, self.cod, f.dom, f.cod),
                        ));
                    }
                    *rest = tail;
                    f.clone()
                }
            },
            Node::Compose(a, b) => {
                let a = a.fill_rec(rest)?;
                let b = b.fill_rec(rest)?;
                Diagram::compose(a, b)?
            }
            Node::Tensor(a, b) => {
                let a = a.fill_rec(rest)?;
                let b = b.fill_rec(rest)?;
                Diagram::tensor(a, b)
            }
        })
    }

    /// Relabels every defect.
    pub fn map_labels<M: Clone>(&self, f: &mut impl FnMut(&L) -> Result<M>) -> Result<Diagram<M>> {
        let node = match &self.node {
            Node::Gen(g) => Node::Gen(match g {
                Generator::Defect(s, l) => Generator::Defect(*s, f(l)?),
                Generator::Empty => Generator::Empty,
                Generator::Id(s) => Generator::Id(*s),
                Generator::Cup => Generator::Cup,
                Generator::Cap => Generator::Cap,
                Generator::Perm(a, b) => Generator::Perm(*a, *b),
                Generator::HalfStart => Generator::HalfStart,
                Generator::HalfEnd => Generator::HalfEnd,
            }),
            Node::Hole => Node::Hole,
            Node::Compose(a, b) => Node::Compose(Box::new(a.map_labels(f)?), Box::new(b.map_labels(f)?)),
            Node::Tensor(a, b) => Node::Tensor(Box::new(a.map_labels(f)?), Box::new(b.map_labels(f)?)),
        };
        Ok(Diagram {
            node,
            dom: self.dom.clone(),
            cod: self.cod.clone(),
        })
    }

    pub fn to_term(&self) -> Term<L> {
        match &self.node {
            Node::Gen(g) => Term::Gen(g.clone()),
            Node::Hole => Term::Hole(self.dom.clone(), self.cod.clone()),
            Node::Compose(a, b) => Term::Compose(Box::new(a.to_term()), Box::new(b.to_term())),
            Node::Tensor(a, b) => Term::Tensor(Box::new(a.to_term()), Box::new(b.to_term())),
        }
    }
}

impl<L: Clone> Term<L> {
    /// Typechecks the term, reporting the path of the first offending subterm.
    pub fn typecheck(&self) -> Result<Diagram<L>> {
        self.check_at("$")
    }

    fn check_at(&self, path: &str) -> Result<Diagram<L>> {
        match self {
            Term::Gen(g) => Ok(Diagram::gen(g.clone())),
            Term::Hole(d, c) => Ok(Diagram::hole(d.clone(), c.clone())),
            Term::Compose(a, b) => {
                let outer = a.check_at(&format!("{path}.args[0]"))?;
                let inner = b.check_at(&format!("{path}.args[1]"))?;
                if inner.cod != outer.dom {
                    return Err(Error::typing(
                        path,
                        format!(
                            "compose: codomain {} of args[1] differs from domain {} of args[0]",
                            inner.cod, outer.dom
                        ),
                    ));
                }
                Diagram::compose(outer, inner)
            }
            Term::Tensor(a, b) => Ok(Diagram::tensor(
                a.check_at(&format!("{path}.args[0]"))?,
                b.check_at(&format!("{path}.args[1]"))?,
            )),
        }
    }
}

/// `(dom, cod)` of a term, or the typing error.
pub fn typecheck<L: Clone>(term: &Term<L>) -> Result<(SignedBoundary, SignedBoundary)> {
    let d = term.typecheck()?;
    Ok((d.dom, d.cod))
}

pub type WordDiagram = Diagram<Word>;

/// A defect strand; the empty word gives the plain identity strand.
pub fn defect(sign: Sign, word: Word) -> WordDiagram {
    if word.is_empty() {
        Diagram::gen(Generator::Id(sign))
    } else {
        Diagram::gen(Generator::Defect(sign, word))
    }
}

/// `HalfEnd ∘ Defect(+, w) ∘ HalfStart`.
pub fn floating_line(word: Word) -> WordDiagram {
    floating_line_of(if word.is_empty() { None } else { Some(word) })
}

/// Floating line around an optional defect of any label type.
pub fn floating_line_of<L: Clone>(label: Option<L>) -> Diagram<L> {
    let mut parts = vec![Diagram::gen(Generator::HalfEnd)];
    if let Some(l) = label {
        parts.push(Diagram::gen(Generator::Defect(Sign::Plus, l)));
    }
    parts.push(Diagram::gen(Generator::HalfStart));
    Diagram::chain(parts).expect("floating line is well typed")
}

/// The two zig-zags, `(+) → (+)` and `(−) → (−)`.
pub fn snakes<L: Clone>() -> [Diagram<L>; 2] {
    use Sign::*;
    let g = Diagram::gen;
    let flipped_cap = Diagram::compose(g(Generator::Cap), g(Generator::Perm(Minus, Plus))).unwrap();
    let plus = Diagram::compose(
        Diagram::tensor(g(Generator::Id(Plus)), flipped_cap.clone()),
        Diagram::tensor(g(Generator::Cup), g(Generator::Id(Plus))),
    )
    .unwrap();
    let minus = Diagram::compose(
        Diagram::tensor(flipped_cap, g(Generator::Id(Minus))),
        Diagram::tensor(g(Generator::Id(Minus)), g(Generator::Cup)),
    )
    .unwrap();
    [plus, minus]
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
enum TermRepr<L> {
    Gen(GenRepr<L>),
    Hole { dom: SignedBoundary, cod: SignedBoundary },
    Compose { args: (Box<TermRepr<L>>, Box<TermRepr<L>>) },
    Tensor { args: (Box<TermRepr<L>>, Box<TermRepr<L>>) },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "gen", rename_all = "snake_case")]
enum GenRepr<L> {
    Empty,
    Id {
        sign: Sign,
    },
    Cup,
    Cap,
    Perm {
        signs: (Sign, Sign),
    },
    HalfStart,
    HalfEnd,
    Defect {
        sign: Sign,
        #[serde(alias = "word")]
        label: L,
    },
}

impl<L> From<TermRepr<L>> for Term<L> {
    fn from(r: TermRepr<L>) -> Term<L> {
        match r {
            TermRepr::Gen(g) => Term::Gen(match g {
                GenRepr::Empty => Generator::Empty,
                GenRepr::Id { sign } => Generator::Id(sign),
                GenRepr::Cup => Generator::Cup,
                GenRepr::Cap => Generator::Cap,
                GenRepr::Perm { signs } => Generator::Perm(signs.0, signs.1),
                GenRepr::HalfStart => Generator::HalfStart,
                GenRepr::HalfEnd => Generator::HalfEnd,
                GenRepr::Defect { sign, label } => Generator::Defect(sign, label),
            }),
            TermRepr::Hole { dom, cod } => Term::Hole(dom, cod),
            TermRepr::Compose { args } => Term::Compose(Box::new((*args.0).into()), Box::new((*args.1).into())),
            TermRepr::Tensor { args } => Term::Tensor(Box::new((*args.0).into()), Box::new((*args.1).into())),
        }
    }
}

impl<L: Clone> From<&Term<L>> for TermRepr<L> {
    fn from(t: &Term<L>) -> TermRepr<L> {
        match t {
            Term::Gen(g) => TermRepr::Gen(match g {
                Generator::Empty => GenRepr::Empty,
                Generator::Id(sign) => GenRepr::Id { sign: *sign },
                Generator::Cup => GenRepr::Cup,
                Generator::Cap => GenRepr::Cap,
                Generator::Perm(a, b) => GenRepr::Perm { signs: (*a, *b) },
                Generator::HalfStart => GenRepr::HalfStart,
                Generator::HalfEnd => GenRepr::HalfEnd,
                Generator::Defect(sign, label) => GenRepr::Defect {
                    sign: *sign,
                    label: label.clone(),
                },
            }),
            Term::Hole(dom, cod) => TermRepr::Hole {
                dom: dom.clone(),
                cod: cod.clone(),
            },
            Term::Compose(a, b) => TermRepr::Compose {
                args: (Box::new((&**a).into()), Box::new((&**b).into())),
            },
            Term::Tensor(a, b) => TermRepr::Tensor {
                args: (Box::new((&**a).into()), Box::new((&**b).into())),
            },
        }
    }
}

impl<L: Serialize + Clone> Serialize for Term<L> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TermRepr::from(self).serialize(s)
    }
}

impl<'de, L: Deserialize<'de>> Deserialize<'de> for Term<L> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        TermRepr::deserialize(d).map(Into::into)
    }
}

impl<L: Serialize + Clone> Serialize for Diagram<L> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_term().serialize(s)
    }
}
