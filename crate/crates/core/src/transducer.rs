/*!
Rational transducers in `(α, β, core)` normal form.

A transducer over the middle alphabet `A` relates `α(u)` to `β(u)` for every
`u` accepted by the core automaton. It acts on an automaton `M` by
`β(core × α⁻¹(M))`, and two transducers compose by synchronising the output
of the first with the input of the second.
*/

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::automata::{Alphabet, Automaton, Fsa, MonoidHom, Symbol, Word};
use crate::budget::Budget;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TransducerJson", into = "TransducerJson")]
pub struct Transducer {
    alpha: MonoidHom,
    beta: MonoidHom,
    core: Fsa,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransducerJson {
    alpha: BTreeMap<String, Word>,
    beta: BTreeMap<String, Word>,
    core: Fsa,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    input_alphabet: Option<Alphabet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    output_alphabet: Option<Alphabet>,
}

/// Letters used by the images, in order of first use.
fn inferred_target(mid: &Alphabet, images: &BTreeMap<String, Word>, side: &str) -> Result<Alphabet> {
    let mut seen = Vec::<String>::new();
    for l in mid.letters() {
        for s in images.get(l).map(Word::symbols).unwrap_or_default() {
            if !seen.contains(s) {
                seen.push(s.clone());
            }
        }
    }
    Alphabet::new(seen).map_err(|_| Error::input(format!("{side} images are all empty; give `{side}_alphabet` explicitly")))
}

impl TryFrom<TransducerJson> for Transducer {
    type Error = Error;

    fn try_from(j: TransducerJson) -> Result<Transducer> {
        let mid = j.core.alphabet().clone();
        let input = match j.input_alphabet {
            Some(a) => a,
            None => inferred_target(&mid, &j.alpha, "input")?,
        };
        let output = match j.output_alphabet {
            Some(a) => a,
            None => inferred_target(&mid, &j.beta, "output")?,
        };
        let alpha = MonoidHom::new(mid.clone(), input, j.alpha.iter().map(|(k, v)| (k.as_str(), v.clone())))?;
        let beta = MonoidHom::new(mid, output, j.beta.iter().map(|(k, v)| (k.as_str(), v.clone())))?;
        Transducer::new(alpha, beta, j.core)
    }
}

impl From<Transducer> for TransducerJson {
    fn from(t: Transducer) -> TransducerJson {
        TransducerJson {
            alpha: t.alpha.to_map().into_iter().collect(),
            beta: t.beta.to_map().into_iter().collect(),
            input_alphabet: Some(t.alpha.target().clone()),
            output_alphabet: Some(t.beta.target().clone()),
            core: t.core,
        }
    }
}

/// Outputs of [`Transducer::transduce_word`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transduced {
    pub outputs: BTreeSet<Word>,
    /// False when some middle word reached the length bound while it could
    /// still have been extended, so outputs may be missing.
    pub complete: bool,
}

/// Result of [`Transducer::apply_tracked`].
#[derive(Clone, Debug)]
pub struct Applied {
    pub machine: Fsa,
    /// For each state of `machine`, the `(core state, input state)` pair it
    /// came from, or `None` for a subdivision state.
    pub pair_of: Vec<Option<(usize, usize)>>,
}

impl Transducer {
    pub fn new(alpha: MonoidHom, beta: MonoidHom, core: Fsa) -> Result<Transducer> {
        if !alpha.source().same_letters(core.alphabet()) || !beta.source().same_letters(core.alphabet()) {
            return Err(Error::input("alpha, beta and the core must share the middle alphabet"));
        }
        Ok(Transducer { alpha, beta, core })
    }

    /// `α = β = id` with a one-state universal core.
    pub fn identity(alphabet: &Alphabet) -> Transducer {
        let id = MonoidHom::identity(alphabet);
        Transducer {
            alpha: id.clone(),
            beta: id,
            core: Fsa::universal(alphabet),
        }
    }

    pub fn alpha(&self) -> &MonoidHom {
        &self.alpha
    }

    pub fn beta(&self) -> &MonoidHom {
        &self.beta
    }

    pub fn core(&self) -> &Fsa {
        &self.core
    }

    pub fn mid_alphabet(&self) -> &Alphabet {
        self.core.alphabet()
    }

    /// `{ β(u) : |u| ≤ maxmid, α(u) = w, u ∈ L(core) }`.
    pub fn transduce_word(&self, word: &[Symbol], maxmid: usize) -> Result<Transduced> {
        let w = self.alpha.target().encode(word)?;
        let mid = self.mid_alphabet();
        let to_alpha: Vec<usize> = mid.letters().iter().map(|l| self.alpha.source().index_of(l).unwrap()).collect();
        let to_beta: Vec<usize> = mid.letters().iter().map(|l| self.beta.source().index_of(l).unwrap()).collect();
        let succ = self.core.successors();
        let mut outputs = BTreeSet::new();
        let mut complete = true;
        // (core state, matched prefix length, middle word)
        let mut stack = vec![(self.core.initial(), 0usize, Vec::<usize>::new())];
        while let Some((q, pos, u)) = stack.pop() {
            if pos == w.len() && self.core.is_final(q) {
                let out = self.beta.apply_indices(&u.iter().map(|&a| to_beta[a]).collect::<Vec<_>>());
                outputs.insert(self.beta.target().decode(&out));
            }
            for a in 0..mid.len() {
                let image = self.alpha.image_of(to_alpha[a]);
                if succ[q][a].is_empty() || !w[pos..].starts_with(image) {
                    continue;
                }
                if u.len() == maxmid {
                    complete = false;
                    continue;
                }
                for &r in &succ[q][a] {
                    let mut u2 = u.clone();
                    u2.push(a);
                    stack.push((r, pos + image.len(), u2));
                }
            }
        }
        Ok(Transduced { outputs, complete })
    }

    /// `T(M) = β(core × α⁻¹(M))` for finite or pushdown `M`.
    pub fn apply<A: Automaton>(&self, m: &A) -> Result<A> {
        let pre = m.preimage(&self.alpha)?;
        A::product_after(&self.core, &pre)?.image(&self.beta)
    }

    /// [`Transducer::apply`], failing when the result has more than
    /// `budget.max_states` states.
    pub fn apply_with<A: Automaton>(&self, m: &A, budget: &Budget) -> Result<A> {
        let out = self.apply(m)?;
        if out.state_count() > budget.max_states {
            return Err(Error::Budget(format!(
                "transduced machine has {} states, over the cap of {}",
                out.state_count(),
                budget.max_states
            )));
        }
        Ok(out)
    }

    /// [`Transducer::apply`] on a finite automaton, keeping track of which
    /// result states are pairs `(core state, M state)`.
    pub fn apply_tracked(&self, m: &Fsa) -> Result<Applied> {
        let pre = m.preimage_unpruned(&self.alpha)?;
        let prod = Fsa::product_after(&self.core, &pre)?;
        let machine = prod.image(&self.beta)?;
        let n = m.len();
        let base = self.core.len() * n;
        let pair_of = (0..machine.len()).map(|i| (i < base).then(|| (i / n, i % n))).collect();
        Ok(Applied { machine, pair_of })
    }

    /// The product `core × α⁻¹(M)` over the middle alphabet, with states
    /// indexed `core * |M| + state`.
    pub fn middle_machine(&self, m: &Fsa) -> Result<Fsa> {
        Fsa::product_after(&self.core, &m.preimage_unpruned(&self.alpha)?)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Transducer) -> Result<Transducer> {
        self.compose_with(first, &Budget::default())
    }

    /// The middle alphabet is the disjoint union `1:a ⊔ 2:c` of the two
    /// middle alphabets. The core reads interleavings `w` with
    /// `π₁(w) ∈ L(core₁)`, `π₂(w) ∈ L(core₂)` and `β₁(π₁ w) = α₂(π₂ w)`,
    /// tracking the not yet consumed part of `β₁`'s output in a buffer.
    /// A buffer of length `max|α₂| + max|β₁|` suffices, since consuming
    /// second-stage letters as early as possible keeps it shorter than that.
    pub fn compose_with(&self, first: &Transducer, budget: &Budget) -> Result<Transducer> {
        let (t1, t2) = (first, self);
        let mut shared: Vec<String> = t1.beta.target().letters().to_vec();
        for l in t2.alpha.target().letters() {
            if !shared.contains(l) {
                shared.push(l.clone());
            }
        }
        let shared = Alphabet::new(shared)?;
        let recode = |h: &MonoidHom, mid: &Alphabet| -> Result<Vec<Vec<usize>>> {
            mid.letters()
                .iter()
                .map(|l| shared.encode(h.letter_image(l)?.symbols()))
                .collect()
        };
        let (mid1, mid2) = (t1.mid_alphabet(), t2.mid_alphabet());
        let beta1 = recode(&t1.beta, mid1)?;
        let alpha2 = recode(&t2.alpha, mid2)?;
        let cap = beta1.iter().map(Vec::len).max().unwrap_or(0) + alpha2.iter().map(Vec::len).max().unwrap_or(0);

        let letters: Vec<String> = mid1
            .letters()
            .iter()
            .map(|a| format!("1:{a}"))
            .chain(mid2.letters().iter().map(|c| format!("2:{c}")))
            .collect();
        let mid = Alphabet::new(letters)?;
        let n1 = mid1.len();

        let (c1, c2) = (&t1.core, &t2.core);
        let (succ1, succ2) = (c1.successors(), c2.successors());
        type Key = (usize, usize, Vec<usize>);
        let start: Key = (c1.initial(), c2.initial(), Vec::new());
        let mut index: HashMap<Key, usize> = HashMap::new();
        let mut keys = vec![start.clone()];
        index.insert(start, 0);
        let mut queue = VecDeque::from([0usize]);
        let mut transitions = BTreeSet::new();
        while let Some(i) = queue.pop_front() {
            let (s1, s2, buf) = keys[i].clone();
            let mut moves: Vec<(usize, Key)> = Vec::new();
            for a in 0..n1 {
                if buf.len() + beta1[a].len() > cap {
                    continue;
                }
                for &r in &succ1[s1][a] {
                    let mut b = buf.clone();
                    b.extend(&beta1[a]);
                    moves.push((a, (r, s2, b)));
                }
            }
            for (c, img) in alpha2.iter().enumerate() {
                if !buf.starts_with(img) {
                    continue;
                }
                for &r in &succ2[s2][c] {
                    moves.push((n1 + c, (s1, r, buf[img.len()..].to_vec())));
                }
            }
            for (letter, key) in moves {
                let j = match index.get(&key) {
                    Some(&j) => j,
                    None => {
                        let j = keys.len();
                        budget.check_states("composed transducer core", j + 1)?;
                        index.insert(key.clone(), j);
                        keys.push(key);
                        queue.push_back(j);
                        j
                    }
                };
                transitions.insert((i, letter, j));
            }
        }
        let states = keys
            .iter()
            .map(|(s1, s2, b)| format!("({},{},{})", c1.state_name(*s1), c2.state_name(*s2), shared.decode(b)))
            .collect();
        let finals = keys
            .iter()
            .enumerate()
            .filter(|(_, (s1, s2, b))| c1.is_final(*s1) && c2.is_final(*s2) && b.is_empty())
            .map(|(i, _)| i)
            .collect();
        let core = Fsa::from_parts(states, mid.clone(), transitions, 0, finals).trim();

        let mut alpha_images = Vec::with_capacity(mid.len());
        let mut beta_images = Vec::with_capacity(mid.len());
        for a in mid1.letters() {
            alpha_images.push(t1.alpha.target().encode(t1.alpha.letter_image(a)?.symbols())?);
            beta_images.push(Vec::new());
        }
        for c in mid2.letters() {
            alpha_images.push(Vec::new());
            beta_images.push(t2.beta.target().encode(t2.beta.letter_image(c)?.symbols())?);
        }
        Ok(Transducer {
            alpha: MonoidHom::from_indices(mid.clone(), t1.alpha.target().clone(), alpha_images),
            beta: MonoidHom::from_indices(mid, t2.beta.target().clone(), beta_images),
            core,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> Fsa {
        Fsa::from_strs(&["q0", "q1"], &["A", "B"], &[("q0", "A", "q1"), ("q1", "B", "q0")], "q0", &["q0"]).unwrap()
    }

    fn c_to_ab(core: Fsa) -> Transducer {
        let c = core.alphabet().clone();
        Transducer::new(
            MonoidHom::new(c.clone(), Alphabet::chars("AB").unwrap(), [("C", Word::from("AB"))]).unwrap(),
            MonoidHom::new(c, Alphabet::chars("x").unwrap(), [("C", Word::from("x"))]).unwrap(),
            core,
        )
        .unwrap()
    }

    #[test]
    fn transduce_word_examples() {
        let id = Transducer::identity(&Alphabet::chars("AB").unwrap());
        let out = id.transduce_word(&Word::from("AB").0, 4).unwrap();
        assert_eq!(out.outputs, [Word::from("AB")].into());
        assert!(out.complete);

        let c = Alphabet::chars("C").unwrap();
        let t = c_to_ab(Fsa::universal(&c));
        assert_eq!(t.transduce_word(&Word::from("ABAB").0, 8).unwrap().outputs, [Word::from("xx")].into());
        let dead = c_to_ab(Fsa::empty(&c));
        assert!(dead.transduce_word(&Word::from("ABAB").0, 8).unwrap().outputs.is_empty());
    }

    #[test]
    fn epsilon_inputs_exhaust_the_bound() {
        let ab = Alphabet::chars("Ae").unwrap();
        let t = Transducer::new(
            MonoidHom::new(ab.clone(), Alphabet::chars("A").unwrap(), [("A", Word::from("A")), ("e", Word::empty())]).unwrap(),
            MonoidHom::identity(&ab),
            Fsa::universal(&ab),
        )
        .unwrap();
        let out = t.transduce_word(&Word::from("A").0, 3).unwrap();
        assert!(!out.complete);
        assert!(out.outputs.contains(&Word::from("eeA")));
    }

    #[test]
    fn apply_examples() {
        let m = fixture();
        let id = Transducer::identity(m.alphabet());
        assert_eq!(id.apply(&m).unwrap().enumerate_language(8).unwrap(), m.enumerate_language(8).unwrap());
        let t = c_to_ab(Fsa::universal(&Alphabet::chars("C").unwrap()));
        assert_eq!(
            t.apply(&m).unwrap().enumerate_language(3).unwrap(),
            ["", "x", "xx", "xxx"].map(Word::from).to_vec()
        );
        assert!(t.apply(&Fsa::empty(m.alphabet())).unwrap().enumerate_language(8).unwrap().is_empty());
        let tracked = t.apply_tracked(&m).unwrap();
        assert_eq!(tracked.pair_of, vec![Some((0, 0)), Some((0, 1))]);
    }

    #[test]
    fn compose_identities_and_chain() {
        let m = fixture();
        let id = Transducer::identity(m.alphabet());
        let idid = id.compose(&id).unwrap();
        assert_eq!(idid.apply(&m).unwrap().enumerate_language(8).unwrap(), m.enumerate_language(8).unwrap());

        let t1 = c_to_ab(Fsa::universal(&Alphabet::chars("C").unwrap()));
        let x = Alphabet::chars("x").unwrap();
        let t2 = Transducer::new(
            MonoidHom::new(x.clone(), x.clone(), [("x", Word::from("xx"))]).unwrap(),
            MonoidHom::new(x.clone(), Alphabet::chars("y").unwrap(), [("x", Word::from("y"))]).unwrap(),
            Fsa::universal(&x),
        )
        .unwrap();
        let direct = t2.apply(&t1.apply(&m).unwrap()).unwrap().enumerate_language(6).unwrap();
        let composed = t2.compose(&t1).unwrap().apply(&m).unwrap().enumerate_language(6).unwrap();
        assert_eq!(direct, composed);
        assert_eq!(direct, ["", "y", "yy", "yyy", "yyyy", "yyyyy", "yyyyyy"].map(Word::from).to_vec());
    }

    #[test]
    fn json_round_trip() {
        let t = c_to_ab(Fsa::universal(&Alphabet::chars("C").unwrap()));
        let s = serde_json::to_string(&t).unwrap();
        let back: Transducer = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        let minimal = r#"{"alpha":{"C":"AB"},"beta":{"C":"x"},"core":{"states":["u"],"alphabet":["C"],"transitions":[["u","C","u"]],"initial":"u","finals":["u"]}}"#;
        let parsed: Transducer = serde_json::from_str(minimal).unwrap();
        assert_eq!(parsed.alpha().target().letters(), &["A", "B"]);
    }
}
