use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::fsa::{lookup, state_index};
use super::{fresh_name, words_up_to, Alphabet, Automaton, Fsa, MonoidHom, Symbol, Word};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Input sentinel for ε-moves in the JSON form.
pub const EPS: &str = "eps";

/// `(from, input, pop, to, push)`: in state `from` with `pop` on top of the
/// stack, read `input` (or nothing), replace `pop` by `push` (first symbol on
/// top) and move to `to`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PsaTransition {
    pub from: usize,
    pub input: Option<usize>,
    pub pop: usize,
    pub to: usize,
    pub push: Vec<usize>,
}

/// A pushdown automaton accepting by final state.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "PsaJson", into = "PsaJson")]
pub struct Psa {
    states: Vec<String>,
    alphabet: Alphabet,
    stack_alphabet: Vec<String>,
    stack_init: usize,
    transitions: BTreeSet<PsaTransition>,
    initial: usize,
    finals: BTreeSet<usize>,
}

type PsaTuple = (String, String, String, String, Vec<String>);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PsaJson {
    states: Vec<String>,
    alphabet: Alphabet,
    stack_alphabet: Vec<String>,
    stack_init: String,
    transitions: Vec<PsaTuple>,
    initial: String,
    finals: Vec<String>,
}

impl TryFrom<PsaJson> for Psa {
    type Error = Error;

    fn try_from(j: PsaJson) -> Result<Psa> {
        Psa::new(j.states, j.alphabet, j.stack_alphabet, j.stack_init, j.transitions, j.initial, j.finals)
    }
}

impl From<Psa> for PsaJson {
    fn from(m: Psa) -> PsaJson {
        let transitions = m
            .transitions
            .iter()
            .map(|t| {
                (
                    m.states[t.from].clone(),
                    t.input.map_or(EPS.to_string(), |a| m.alphabet.letter(a).to_string()),
                    m.stack_alphabet[t.pop].clone(),
                    m.states[t.to].clone(),
                    t.push.iter().map(|&z| m.stack_alphabet[z].clone()).collect(),
                )
            })
            .collect();
        PsaJson {
            stack_init: m.stack_alphabet[m.stack_init].clone(),
            initial: m.states[m.initial].clone(),
            finals: m.finals.iter().map(|&f| m.states[f].clone()).collect(),
            transitions,
            states: m.states,
            alphabet: m.alphabet,
            stack_alphabet: m.stack_alphabet,
        }
    }
}

impl Psa {
    pub fn new(
        states: Vec<String>,
        alphabet: Alphabet,
        stack_alphabet: Vec<String>,
        stack_init: String,
        transitions: Vec<PsaTuple>,
        initial: String,
        finals: Vec<String>,
    ) -> Result<Psa> {
        if alphabet.contains(EPS) {
            return Err(Error::input(format!("`{EPS}` is reserved for ε-moves")));
        }
        let idx = state_index(&states)?;
        let zidx = state_index(&stack_alphabet)?;
        let mut ts = BTreeSet::new();
        for (p, a, z, q, push) in &transitions {
            let input = if a == EPS {
                None
            } else {
                Some(
                    alphabet
                        .index_of(a)
                        .ok_or_else(|| Error::input(format!("transition letter `{a}` not in alphabet")))?,
                )
            };
            ts.insert(PsaTransition {
                from: lookup(&idx, p, "state")?,
                input,
                pop: lookup(&zidx, z, "stack symbol")?,
                to: lookup(&idx, q, "state")?,
                push: push.iter().map(|s| lookup(&zidx, s, "stack symbol")).collect::<Result<_>>()?,
            });
        }
        Ok(Psa {
            stack_init: lookup(&zidx, &stack_init, "stack symbol")?,
            initial: lookup(&idx, &initial, "initial state")?,
            finals: finals.iter().map(|f| lookup(&idx, f, "final state")).collect::<Result<_>>()?,
            transitions: ts,
            states,
            alphabet,
            stack_alphabet,
        })
    }

    /// One-counter machine for balanced words over `open`/`close`.
    ///
    /// State `top` is initial and final and sits on the bottom marker `Z`;
    /// `in` counts open brackets with `X` and returns to `top` by an ε-move.
    pub fn dyck(open: &str, close: &str) -> Result<Psa> {
        let s = |x: &str| x.to_string();
        let t = |p: &str, a: &str, z: &str, q: &str, push: &[&str]| {
            (s(p), s(a), s(z), s(q), push.iter().map(|x| s(x)).collect::<Vec<_>>())
        };
        Psa::new(
            vec![s("top"), s("in")],
            Alphabet::new([open, close])?,
            vec![s("Z"), s("X")],
            s("Z"),
            vec![
                t("top", open, "Z", "in", &["X", "Z"]),
                t("in", open, "X", "in", &["X", "X"]),
                t("in", close, "X", "in", &[]),
                t("in", EPS, "Z", "top", &["Z"]),
            ],
            s("top"),
            vec![s("top")],
        )
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn stack_alphabet(&self) -> &[String] {
        &self.stack_alphabet
    }

    pub fn transitions(&self) -> &BTreeSet<PsaTransition> {
        &self.transitions
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    fn max_push(&self) -> usize {
        self.transitions.iter().map(|t| t.push.len()).max().unwrap_or(0)
    }

    /// Configuration search on letter indices.
    pub fn accepts_indices(&self, word: &[usize], budget: &Budget) -> Result<bool> {
        let mut by_key: HashMap<(usize, usize), Vec<&PsaTransition>> = HashMap::new();
        for t in &self.transitions {
            by_key.entry((t.from, t.pop)).or_default().push(t);
        }
        let height_cap = word.len() * self.max_push() + word.len() + 1;
        let start = (self.initial, 0usize, vec![self.stack_init]);
        let mut seen: HashSet<(usize, usize, Vec<usize>)> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        let mut pruned = false;
        while let Some((q, pos, stack)) = queue.pop_front() {
            if pos == word.len() && self.finals.contains(&q) {
                return Ok(true);
            }
            let Some(&top) = stack.last() else { continue };
            for t in by_key.get(&(q, top)).into_iter().flatten() {
                let next_pos = match t.input {
                    None => pos,
                    Some(a) if pos < word.len() && word[pos] == a => pos + 1,
                    Some(_) => continue,
                };
                let mut next_stack = stack[..stack.len() - 1].to_vec();
                next_stack.extend(t.push.iter().rev());
                if next_stack.len() > height_cap {
                    pruned = true;
                    continue;
                }
                let config = (t.to, next_pos, next_stack);
                if seen.insert(config.clone()) {
                    if seen.len() > budget.max_configs {
                        return Err(Error::Budget(format!(
                            "pushdown search visited more than {} configurations",
                            budget.max_configs
                        )));
                    }
                    queue.push_back(config);
                }
            }
        }
        if pruned {
            return Err(Error::Budget(format!(
                "pushdown search reached the stack height cap {height_cap} without accepting"
            )));
        }
        Ok(false)
    }

    fn letter_map(&self, other: &Alphabet) -> Result<Vec<usize>> {
        if !self.alphabet.same_letters(other) {
            return Err(Error::input(format!(
                "alphabet mismatch: {:?} against {:?}",
                self.alphabet, other
            )));
        }
        Ok(self
            .alphabet
            .letters()
            .iter()
            .map(|l| other.index_of(l).expect("same letters"))
            .collect())
    }

    /// Product with `fsa`; `pair(p, q)` gives the index of `(psa state, fsa state)`.
    fn product_indexed(&self, fsa: &Fsa, names: Vec<String>, pair: impl Fn(usize, usize) -> usize) -> Result<Psa> {
        let to_fsa = self.letter_map(fsa.alphabet())?;
        let mut by_letter: Vec<Vec<(usize, usize)>> = vec![Vec::new(); fsa.alphabet().len()];
        for &(p, b, q) in fsa.transitions() {
            by_letter[b].push((p, q));
        }
        let mut transitions = BTreeSet::new();
        for t in &self.transitions {
            match t.input {
                None => {
                    for s in 0..fsa.len() {
                        transitions.insert(PsaTransition {
                            from: pair(t.from, s),
                            input: None,
                            pop: t.pop,
                            to: pair(t.to, s),
                            push: t.push.clone(),
                        });
                    }
                }
                Some(a) => {
                    for &(s, s2) in &by_letter[to_fsa[a]] {
                        transitions.insert(PsaTransition {
                            from: pair(t.from, s),
                            input: Some(a),
                            pop: t.pop,
                            to: pair(t.to, s2),
                            push: t.push.clone(),
                        });
                    }
                }
            }
        }
        let finals = self
            .finals
            .iter()
            .flat_map(|&f| fsa.finals().iter().map(move |&g| (f, g)))
            .map(|(f, g)| pair(f, g))
            .collect();
        Ok(Psa {
            states: names,
            alphabet: self.alphabet.clone(),
            stack_alphabet: self.stack_alphabet.clone(),
            stack_init: self.stack_init,
            transitions,
            initial: pair(self.initial, fsa.initial()),
            finals,
        })
    }

    /// Removes states touching no transition, except the initial and final ones.
    pub fn prune_isolated(&self) -> Psa {
        let mut keep = vec![false; self.states.len()];
        keep[self.initial] = true;
        for &f in &self.finals {
            keep[f] = true;
        }
        for t in &self.transitions {
            keep[t.from] = true;
            keep[t.to] = true;
        }
        let mut new_index = vec![usize::MAX; self.states.len()];
        let mut states = Vec::new();
        for (q, name) in self.states.iter().enumerate() {
            if keep[q] {
                new_index[q] = states.len();
                states.push(name.clone());
            }
        }
        Psa {
            states,
            alphabet: self.alphabet.clone(),
            stack_alphabet: self.stack_alphabet.clone(),
            stack_init: self.stack_init,
            transitions: self
                .transitions
                .iter()
                .map(|t| PsaTransition {
                    from: new_index[t.from],
                    to: new_index[t.to],
                    ..t.clone()
                })
                .collect(),
            initial: new_index[self.initial],
            finals: self.finals.iter().map(|&f| new_index[f]).collect(),
        }
    }
}

impl Automaton for Psa {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn state_count(&self) -> usize {
        self.states.len()
    }

    fn accepts_with(&self, word: &[Symbol], budget: &Budget) -> Result<bool> {
        let word = self.alphabet.encode(word)?;
        self.accepts_indices(&word, budget)
    }

    fn product(&self, other: &Fsa) -> Result<Psa> {
        let n = other.len();
        let names = self
            .states
            .iter()
            .flat_map(|a| other.states().iter().map(move |b| format!("({a},{b})")))
            .collect();
        self.product_indexed(other, names, |p, q| p * n + q)
    }

    fn product_after(core: &Fsa, m: &Psa) -> Result<Psa> {
        let n = m.states.len();
        let names = core
            .states()
            .iter()
            .flat_map(|a| m.states.iter().map(move |b| format!("({a},{b})")))
            .collect();
        m.product_indexed(core, names, |p, t| t * n + p)
    }

    /// Reads each letter `a` and then simulates the word `h(a)` through
    /// buffer states `q|a.i` with ε-moves, so the construction is exact even
    /// when the simulated path inspects the stack below its first top symbol.
    fn preimage(&self, h: &MonoidHom) -> Result<Psa> {
        let images: Vec<Vec<usize>> = (0..h.source().len())
            .map(|a| self.alphabet.encode(h.target().decode(h.image_of(a)).symbols()))
            .collect::<Result<_>>()?;
        let mut taken: HashSet<String> = self.states.iter().cloned().collect();
        let mut states = self.states.clone();
        let mut buffer: HashMap<(usize, usize, usize), usize> = HashMap::new();
        for (a, u) in images.iter().enumerate() {
            for q in 0..self.states.len() {
                for i in 1..u.len() {
                    let name = fresh_name(format!("{}|{}.{i}", self.states[q], h.source().letter(a)), &taken);
                    taken.insert(name.clone());
                    buffer.insert((q, a, i), states.len());
                    states.push(name);
                }
            }
        }
        let next = |q: usize, a: usize, i: usize| if i == images[a].len() { q } else { buffer[&(q, a, i)] };
        let mut transitions = BTreeSet::new();
        for t in &self.transitions {
            if t.input.is_none() {
                transitions.insert(t.clone());
                for (&(q, a, i), &b) in &buffer {
                    if q == t.from {
                        transitions.insert(PsaTransition {
                            from: b,
                            to: buffer[&(t.to, a, i)],
                            ..t.clone()
                        });
                    }
                }
            }
        }
        for (a, u) in images.iter().enumerate() {
            if u.is_empty() {
                for q in 0..self.states.len() {
                    for z in 0..self.stack_alphabet.len() {
                        transitions.insert(PsaTransition {
                            from: q,
                            input: Some(a),
                            pop: z,
                            to: q,
                            push: vec![z],
                        });
                    }
                }
                continue;
            }
            for t in &self.transitions {
                let Some(b) = t.input else { continue };
                if b == u[0] {
                    transitions.insert(PsaTransition {
                        from: t.from,
                        input: Some(a),
                        pop: t.pop,
                        to: next(t.to, a, 1),
                        push: t.push.clone(),
                    });
                }
                for i in 1..u.len() {
                    if b == u[i] {
                        transitions.insert(PsaTransition {
                            from: buffer[&(t.from, a, i)],
                            input: None,
                            pop: t.pop,
                            to: next(t.to, a, i + 1),
                            push: t.push.clone(),
                        });
                    }
                }
            }
        }
        Ok(Psa {
            states,
            alphabet: h.source().clone(),
            stack_alphabet: self.stack_alphabet.clone(),
            stack_init: self.stack_init,
            transitions,
            initial: self.initial,
            finals: self.finals.clone(),
        }
        .prune_isolated())
    }

    fn image(&self, h: &MonoidHom) -> Result<Psa> {
        let to_h = self.letter_map(h.source())?;
        let mut taken: HashSet<String> = self.states.iter().cloned().collect();
        let mut states = self.states.clone();
        let mut transitions = BTreeSet::new();
        for (edge, t) in self.transitions.iter().enumerate() {
            let Some(a) = t.input else {
                transitions.insert(t.clone());
                continue;
            };
            let image = h.image_of(to_h[a]);
            if image.is_empty() {
                transitions.insert(PsaTransition { input: None, ..t.clone() });
                continue;
            }
            let mut prev = t.from;
            for (offset, &b) in image.iter().enumerate() {
                let last = offset + 1 == image.len();
                let to = if last {
                    t.to
                } else {
                    let name = fresh_name(format!("e{edge}.{}", offset + 1), &taken);
                    taken.insert(name.clone());
                    states.push(name);
                    states.len() - 1
                };
                transitions.insert(PsaTransition {
                    from: prev,
                    input: Some(b),
                    pop: t.pop,
                    to,
                    push: if last { t.push.clone() } else { vec![t.pop] },
                });
                prev = to;
            }
        }
        Ok(Psa {
            states,
            alphabet: h.target().clone(),
            stack_alphabet: self.stack_alphabet.clone(),
            stack_init: self.stack_init,
            transitions,
            initial: self.initial,
            finals: self.finals.clone(),
        })
    }

    fn enumerate_language_with(&self, maxlen: usize, budget: &Budget) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        for w in words_up_to(self.alphabet.len(), maxlen) {
            if self.accepts_indices(&w, budget)? {
                out.push(self.alphabet.decode(&w));
            }
        }
        Ok(out)
    }
}
