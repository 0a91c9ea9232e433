use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{fresh_name, Alphabet, Automaton, MonoidHom, Symbol, Word};
use crate::boolsemi::{BoolMat, BoolVec};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// A nondeterministic finite automaton with named states.
///
/// Transitions are triples `(from, letter, to)` of state and letter indices.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "FsaJson", into = "FsaJson")]
pub struct Fsa {
    states: Vec<String>,
    alphabet: Alphabet,
    transitions: BTreeSet<(usize, usize, usize)>,
    initial: usize,
    finals: BTreeSet<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FsaJson {
    states: Vec<String>,
    alphabet: Alphabet,
    transitions: Vec<(String, String, String)>,
    initial: String,
    finals: Vec<String>,
}

impl TryFrom<FsaJson> for Fsa {
    type Error = Error;

    fn try_from(j: FsaJson) -> Result<Fsa> {
        Fsa::new(j.states, j.alphabet, j.transitions, j.initial, j.finals)
    }
}

impl From<Fsa> for FsaJson {
    fn from(m: Fsa) -> FsaJson {
        FsaJson {
            transitions: m
                .transitions
                .iter()
                .map(|&(p, a, q)| (m.states[p].clone(), m.alphabet.letter(a).to_string(), m.states[q].clone()))
                .collect(),
            initial: m.states[m.initial].clone(),
            finals: m.finals.iter().map(|&f| m.states[f].clone()).collect(),
            states: m.states,
            alphabet: m.alphabet,
        }
    }
}

pub(crate) fn state_index(states: &[String]) -> Result<HashMap<&str, usize>> {
    let mut idx = HashMap::new();
    for (i, s) in states.iter().enumerate() {
        if idx.insert(s.as_str(), i).is_some() {
            return Err(Error::input(format!("duplicate state `{s}`")));
        }
    }
    Ok(idx)
}

pub(crate) fn lookup(idx: &HashMap<&str, usize>, name: &str, what: &str) -> Result<usize> {
    idx.get(name)
        .copied()
        .ok_or_else(|| Error::input(format!("unknown {what} `{name}`")))
}

impl Fsa {
    pub fn new(
        states: Vec<String>,
        alphabet: Alphabet,
        transitions: Vec<(String, String, String)>,
        initial: String,
        finals: Vec<String>,
    ) -> Result<Fsa> {
        let idx = state_index(&states)?;
        let mut ts = BTreeSet::new();
        for (p, a, q) in &transitions {
            let a = alphabet
                .index_of(a)
                .ok_or_else(|| Error::input(format!("transition letter `{a}` not in alphabet")))?;
            ts.insert((lookup(&idx, p, "state")?, a, lookup(&idx, q, "state")?));
        }
        let initial = lookup(&idx, &initial, "initial state")?;
        let finals = finals.iter().map(|f| lookup(&idx, f, "final state")).collect::<Result<_>>()?;
        Ok(Fsa {
            states,
            alphabet,
            transitions: ts,
            initial,
            finals,
        })
    }

    /// Convenience constructor from string slices.
    pub fn from_strs(
        states: &[&str],
        letters: &[&str],
        transitions: &[(&str, &str, &str)],
        initial: &str,
        finals: &[&str],
    ) -> Result<Fsa> {
        Fsa::new(
            states.iter().map(|s| s.to_string()).collect(),
            Alphabet::new(letters.iter().copied())?,
            transitions
                .iter()
                .map(|(p, a, q)| (p.to_string(), a.to_string(), q.to_string()))
                .collect(),
            initial.to_string(),
            finals.iter().map(|s| s.to_string()).collect(),
        )
    }

    pub(crate) fn from_parts(
        states: Vec<String>,
        alphabet: Alphabet,
        transitions: BTreeSet<(usize, usize, usize)>,
        initial: usize,
        finals: BTreeSet<usize>,
    ) -> Fsa {
        debug_assert!(initial < states.len());
        debug_assert!(finals.iter().all(|&f| f < states.len()));
        debug_assert!(transitions
            .iter()
            .all(|&(p, a, q)| p < states.len() && q < states.len() && a < alphabet.len()));
        Fsa {
            states,
            alphabet,
            transitions,
            initial,
            finals,
        }
    }

    /// One final state looping on every letter.
    pub fn universal(alphabet: &Alphabet) -> Fsa {
        let ts = (0..alphabet.len()).map(|a| (0, a, 0)).collect();
        Fsa::from_parts(vec!["u".into()], alphabet.clone(), ts, 0, [0].into())
    }

    /// A single non-final state.
    pub fn empty(alphabet: &Alphabet) -> Fsa {
        Fsa::from_parts(vec!["z".into()], alphabet.clone(), BTreeSet::new(), 0, BTreeSet::new())
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn transitions(&self) -> &BTreeSet<(usize, usize, usize)> {
        &self.transitions
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals.contains(&q)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn initial_vector(&self) -> BoolVec {
        BoolVec::basis(self.len(), self.initial)
    }

    pub fn final_vector(&self) -> BoolVec {
        let mut v = BoolVec::zeros(self.len());
        for &f in &self.finals {
            v.set(f, true);
        }
        v
    }

    /// Matrix of `T_a`: entry `(q', q)` is set for each transition `(q, a, q')`.
    pub fn letter_matrix(&self, a: usize) -> BoolMat {
        let mut m = BoolMat::zeros(self.len(), self.len());
        for &(p, b, q) in &self.transitions {
            if a == b {
                m.set(q, p, true);
            }
        }
        m
    }

    /// Matrix of the word `w` read left to right: `T_{w_k} ··· T_{w_1}`.
    pub fn word_matrix(&self, word: &[usize]) -> BoolMat {
        let mut acc = BoolMat::identity(self.len());
        for &a in word {
            acc = self.letter_matrix(a).mul(&acc).expect("square matrices of equal size");
        }
        acc
    }

    /// Acceptance of a word given by letter indices.
    pub fn accepts_indices(&self, word: &[usize]) -> bool {
        let mats: Vec<BoolMat> = (0..self.alphabet.len()).map(|a| self.letter_matrix(a)).collect();
        let mut v = self.initial_vector();
        for &a in word {
            v = mats[a].apply(&v).expect("matching dimensions");
            if v.is_zero() {
                return false;
            }
        }
        v.pairing(&self.final_vector()).expect("matching dimensions")
    }

    /// `succ[q][a]`: targets of `a`-transitions out of `q`.
    pub(crate) fn successors(&self) -> Vec<Vec<Vec<usize>>> {
        let mut succ = vec![vec![Vec::new(); self.alphabet.len()]; self.len()];
        for &(p, a, q) in &self.transitions {
            succ[p][a].push(q);
        }
        succ
    }

    /// States reachable from `from` by reading `word`.
    pub(crate) fn run_from(&self, succ: &[Vec<Vec<usize>>], from: usize, word: &[usize]) -> BTreeSet<usize> {
        let mut cur: BTreeSet<usize> = [from].into();
        for &a in word {
            cur = cur.iter().flat_map(|&q| succ[q][a].iter().copied()).collect();
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        let succ = self.successors();
        while let Some(q) = stack.pop() {
            for r in succ[q].iter().flatten() {
                if !seen[*r] {
                    seen[*r] = true;
                    stack.push(*r);
                }
            }
        }
        seen
    }

    pub fn coreachable(&self) -> Vec<bool> {
        let mut pred = vec![Vec::new(); self.len()];
        for &(p, _, q) in &self.transitions {
            pred[q].push(p);
        }
        let mut seen = vec![false; self.len()];
        let mut stack: Vec<usize> = self.finals.iter().copied().collect();
        for &f in &stack {
            seen[f] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &pred[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    pub fn is_language_empty(&self) -> bool {
        let r = self.reachable();
        !self.finals.iter().any(|&f| r[f])
    }

    /// Restriction to the states flagged in `keep`, preserving order.
    pub(crate) fn restrict(&self, keep: &[bool]) -> Fsa {
        let mut new_index = vec![usize::MAX; self.len()];
        let mut states = Vec::new();
        for (q, name) in self.states.iter().enumerate() {
            if keep[q] {
                new_index[q] = states.len();
                states.push(name.clone());
            }
        }
        let transitions = self
            .transitions
            .iter()
            .filter(|&&(p, _, q)| keep[p] && keep[q])
            .map(|&(p, a, q)| (new_index[p], a, new_index[q]))
            .collect();
        let finals = self.finals.iter().filter(|&&f| keep[f]).map(|&f| new_index[f]).collect();
        Fsa::from_parts(states, self.alphabet.clone(), transitions, new_index[self.initial], finals)
    }

    /// Removes states that are unreachable or cannot reach a final state.
    /// The initial state is always kept.
    pub fn trim(&self) -> Fsa {
        let r = self.reachable();
        let c = self.coreachable();
        let keep: Vec<bool> = (0..self.len()).map(|q| q == self.initial || (r[q] && c[q])).collect();
        self.restrict(&keep)
    }

    /// Removes states touching no transition, except the initial and final ones.
    pub fn prune_isolated(&self) -> Fsa {
        let mut keep = vec![false; self.len()];
        keep[self.initial] = true;
        for &f in &self.finals {
            keep[f] = true;
        }
        for &(p, _, q) in &self.transitions {
            keep[p] = true;
            keep[q] = true;
        }
        self.restrict(&keep)
    }

    /// Letter indices of `other` matching each letter of this alphabet.
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

    fn pair_product(left: &Fsa, right: &Fsa) -> Result<Fsa> {
        let to_right = left.letter_map(&right.alphabet)?;
        let n = right.len();
        let mut by_letter: Vec<Vec<(usize, usize)>> = vec![Vec::new(); right.alphabet.len()];
        for &(p, b, q) in &right.transitions {
            by_letter[b].push((p, q));
        }
        let mut states = Vec::with_capacity(left.len() * n);
        for a in &left.states {
            for b in &right.states {
                states.push(format!("({a},{b})"));
            }
        }
        let mut transitions = BTreeSet::new();
        for &(p, a, p2) in &left.transitions {
            for &(q, q2) in &by_letter[to_right[a]] {
                transitions.insert((p * n + q, a, p2 * n + q2));
            }
        }
        let finals = left
            .finals
            .iter()
            .flat_map(|&f| right.finals.iter().map(move |&g| f * n + g))
            .collect();
        Ok(Fsa::from_parts(
            states,
            left.alphabet.clone(),
            transitions,
            left.initial * n + right.initial,
            finals,
        ))
    }

    /// Preimage without removing isolated states; state `q` of the result is state `q` here.
    pub(crate) fn preimage_unpruned(&self, h: &MonoidHom) -> Result<Fsa> {
        let succ = self.successors();
        let mut transitions = BTreeSet::new();
        for a in 0..h.source().len() {
            let image = h.target().decode(h.image_of(a));
            let image = self.alphabet.encode(image.symbols())?;
            for q in 0..self.len() {
                for r in self.run_from(&succ, q, &image) {
                    transitions.insert((q, a, r));
                }
            }
        }
        Ok(Fsa::from_parts(
            self.states.clone(),
            h.source().clone(),
            transitions,
            self.initial,
            self.finals.clone(),
        ))
    }

    /// Collapses the single-final normal form: a copy of every transition into
    /// a final state is redirected to a fresh sink `qF`.
    ///
    /// Fails when the empty word is accepted and there are several finals,
    /// since no single-final machine without ε-moves can then exist in general.
    pub fn with_single_final(&self) -> Result<Fsa> {
        if self.finals.len() == 1 {
            return Ok(self.clone());
        }
        if self.finals.contains(&self.initial) {
            return Err(Error::input(
                "cannot normalise to a single final state: the empty word is accepted",
            ));
        }
        let taken: HashSet<String> = self.states.iter().cloned().collect();
        let mut states = self.states.clone();
        let sink = states.len();
        states.push(fresh_name("qF".into(), &taken));
        let mut transitions = self.transitions.clone();
        for &(p, a, q) in &self.transitions {
            if self.finals.contains(&q) {
                transitions.insert((p, a, sink));
            }
        }
        Ok(Fsa::from_parts(states, self.alphabet.clone(), transitions, self.initial, [sink].into()))
    }
}

/// Builder for an automaton whose edges may carry no letter.
pub(crate) struct EpsFsa {
    pub states: Vec<String>,
    pub alphabet: Alphabet,
    pub edges: Vec<(usize, Option<usize>, usize)>,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
}

impl EpsFsa {
    /// Removes ε-edges by closure, keeping the same state set.
    pub fn into_fsa(self) -> Fsa {
        let n = self.states.len();
        let mut eps = vec![Vec::new(); n];
        let mut has_eps = false;
        for &(p, a, q) in &self.edges {
            if a.is_none() {
                eps[p].push(q);
                has_eps = true;
            }
        }
        if !has_eps {
            let ts = self.edges.iter().map(|&(p, a, q)| (p, a.unwrap(), q)).collect();
            return Fsa::from_parts(self.states, self.alphabet, ts, self.initial, self.finals);
        }
        let closure: Vec<Vec<usize>> = (0..n)
            .map(|p| {
                let mut seen = vec![false; n];
                seen[p] = true;
                let mut stack = vec![p];
                while let Some(q) = stack.pop() {
                    for &r in &eps[q] {
                        if !seen[r] {
                            seen[r] = true;
                            stack.push(r);
                        }
                    }
                }
                (0..n).filter(|&q| seen[q]).collect()
            })
            .collect();
        let mut out_edges = vec![Vec::new(); n];
        for &(p, a, q) in &self.edges {
            if let Some(a) = a {
                out_edges[p].push((a, q));
            }
        }
        let mut transitions = BTreeSet::new();
        let mut finals = BTreeSet::new();
        for p in 0..n {
            for &r in &closure[p] {
                if self.finals.contains(&r) {
                    finals.insert(p);
                }
                for &(a, s) in &out_edges[r] {
                    transitions.insert((p, a, s));
                }
            }
        }
        Fsa::from_parts(self.states, self.alphabet, transitions, self.initial, finals)
    }
}

impl Automaton for Fsa {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn state_count(&self) -> usize {
        self.len()
    }

    fn accepts_with(&self, word: &[Symbol], _budget: &Budget) -> Result<bool> {
        let word = self.alphabet.encode(word)?;
        Ok(self.accepts_indices(&word))
    }

    fn product(&self, other: &Fsa) -> Result<Fsa> {
        Fsa::pair_product(self, other)
    }

    fn product_after(core: &Fsa, m: &Fsa) -> Result<Fsa> {
        Fsa::pair_product(core, m)
    }

    fn preimage(&self, h: &MonoidHom) -> Result<Fsa> {
        Ok(self.preimage_unpruned(h)?.prune_isolated())
    }

    fn image(&self, h: &MonoidHom) -> Result<Fsa> {
        let to_h = self.letter_map(h.source())?;
        let mut taken: HashSet<String> = self.states.iter().cloned().collect();
        let mut states = self.states.clone();
        let mut edges = Vec::new();
        for (edge, &(p, a, q)) in self.transitions.iter().enumerate() {
            let image = h.image_of(to_h[a]);
            match image.len() {
                0 => edges.push((p, None, q)),
                1 => edges.push((p, Some(image[0]), q)),
                k => {
                    let mut prev = p;
                    for (offset, &b) in image.iter().enumerate() {
                        let next = if offset + 1 == k {
                            q
                        } else {
                            let name = fresh_name(format!("e{edge}.{}", offset + 1), &taken);
                            taken.insert(name.clone());
                            states.push(name);
                            states.len() - 1
                        };
                        edges.push((prev, Some(b), next));
                        prev = next;
                    }
                }
            }
        }
        Ok(EpsFsa {
            states,
            alphabet: h.target().clone(),
            edges,
            initial: self.initial,
            finals: self.finals.clone(),
        }
        .into_fsa())
    }

    fn enumerate_language_with(&self, maxlen: usize, budget: &Budget) -> Result<Vec<Word>> {
        let mats: Vec<BoolMat> = (0..self.alphabet.len()).map(|a| self.letter_matrix(a)).collect();
        let finals = self.final_vector();
        let mut out = Vec::new();
        let mut layer = vec![(Vec::<usize>::new(), self.initial_vector())];
        for len in 0..=maxlen {
            for (w, v) in &layer {
                if v.pairing(&finals)? {
                    out.push(self.alphabet.decode(w));
                }
            }
            if len == maxlen {
                break;
            }
            let mut next = Vec::new();
            for (w, v) in &layer {
                for (a, m) in mats.iter().enumerate() {
                    let u = m.apply(v)?;
                    if !u.is_zero() {
                        let mut w2 = w.clone();
                        w2.push(a);
                        next.push((w2, u));
                    }
                }
            }
            if next.len() > budget.max_configs {
                return Err(Error::Budget(format!(
                    "more than {} live prefixes of length {}",
                    budget.max_configs,
                    len + 1
                )));
            }
            layer = next;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fixture() -> Fsa {
        Fsa::from_strs(&["q0", "q1"], &["A", "B"], &[("q0", "A", "q1"), ("q1", "B", "q0")], "q0", &["q0"]).unwrap()
    }

    fn w(s: &str) -> Vec<Symbol> {
        Word::from(s).0
    }

    /// Direct path enumeration, independent of the matrix chain.
    fn oracle_accepts(m: &Fsa, word: &[usize]) -> bool {
        fn go(m: &Fsa, q: usize, rest: &[usize]) -> bool {
            match rest.split_first() {
                None => m.is_final(q),
                Some((&a, tail)) => m
                    .transitions()
                    .iter()
                    .any(|&(p, b, r)| p == q && b == a && go(m, r, tail)),
            }
        }
        go(m, m.initial(), word)
    }

    #[test]
    fn fixture_acceptance() {
        let m = fixture();
        assert!(m.accepts(&w("ABAB")).unwrap());
        assert!(m.accepts(&w("")).unwrap());
        assert!(!m.accepts(&w("ABA")).unwrap());
        assert!(matches!(m.accepts(&w("AC")), Err(Error::Input(_))));
        for word in super::super::words_up_to(2, 8) {
            assert_eq!(m.accepts_indices(&word), oracle_accepts(&m, &word));
        }
    }

    #[test]
    fn fixture_enumeration() {
        let got = fixture().enumerate_language(4).unwrap();
        assert_eq!(got, vec![Word::from(""), Word::from("AB"), Word::from("ABAB")]);
        assert!(Fsa::empty(fixture().alphabet()).enumerate_language(5).unwrap().is_empty());
    }

    #[test]
    fn product_with_even_length() {
        let even = Fsa::from_strs(
            &["e", "o"],
            &["B", "A"],
            &[("e", "A", "o"), ("e", "B", "o"), ("o", "A", "e"), ("o", "B", "e")],
            "e",
            &["e"],
        )
        .unwrap();
        let p = fixture().product(&even).unwrap();
        assert_eq!(p.enumerate_language(8).unwrap(), fixture().enumerate_language(8).unwrap());
        let u = fixture().product(&Fsa::universal(fixture().alphabet())).unwrap();
        assert_eq!(u.enumerate_language(8).unwrap(), fixture().enumerate_language(8).unwrap());
        let z = fixture().product(&Fsa::empty(fixture().alphabet())).unwrap();
        assert!(z.enumerate_language(8).unwrap().is_empty());
        let other = Fsa::universal(&Alphabet::chars("AC").unwrap());
        assert!(fixture().product(&other).is_err());
    }

    #[test]
    fn preimage_examples() {
        let m = fixture();
        let c = Alphabet::chars("C").unwrap();
        let h = MonoidHom::new(c.clone(), m.alphabet().clone(), [("C", Word::from("AB"))]).unwrap();
        let p = m.preimage(&h).unwrap();
        assert_eq!(
            p.enumerate_language(3).unwrap(),
            vec![Word::from(""), Word::from("C"), Word::from("CC"), Word::from("CCC")]
        );
        let eps = MonoidHom::new(c, m.alphabet().clone(), [("C", Word::empty())]).unwrap();
        assert_eq!(m.preimage(&eps).unwrap().enumerate_language(3).unwrap().len(), 4);
        let id = MonoidHom::identity(m.alphabet());
        assert_eq!(m.preimage(&id).unwrap().enumerate_language(8).unwrap(), m.enumerate_language(8).unwrap());
    }

    #[test]
    fn image_examples() {
        let m = fixture();
        let xyz = Alphabet::chars("xyz").unwrap();
        let h = MonoidHom::new(m.alphabet().clone(), xyz, [("A", Word::from("xy")), ("B", Word::from("z"))]).unwrap();
        assert_eq!(
            m.image(&h).unwrap().enumerate_language(6).unwrap(),
            vec![Word::from(""), Word::from("xyz"), Word::from("xyzxyz")]
        );
        let h2 = MonoidHom::new(
            m.alphabet().clone(),
            Alphabet::chars("B").unwrap(),
            [("A", Word::empty()), ("B", Word::from("B"))],
        )
        .unwrap();
        assert_eq!(
            m.image(&h2).unwrap().enumerate_language(3).unwrap(),
            vec![Word::from(""), Word::from("B"), Word::from("BB"), Word::from("BBB")]
        );
    }

    #[test]
    fn subdivision_names_are_deterministic() {
        let m = fixture();
        let h = MonoidHom::new(
            m.alphabet().clone(),
            Alphabet::chars("xyz").unwrap(),
            [("A", Word::from("xyz")), ("B", Word::from("z"))],
        )
        .unwrap();
        let a = m.image(&h).unwrap();
        assert_eq!(a.states(), &["q0", "q1", "e0.1", "e0.2"]);
        assert_eq!(a, m.image(&h).unwrap());
    }

    #[test]
    fn trim_examples() {
        let m = fixture();
        assert_eq!(m.trim(), m);
        let with_s = Fsa::from_strs(
            &["q0", "q1", "s"],
            &["A", "B"],
            &[("q0", "A", "q1"), ("q1", "B", "q0")],
            "q0",
            &["q0"],
        )
        .unwrap();
        assert_eq!(with_s.trim(), m);
    }

    #[test]
    fn single_final_helper() {
        let m = Fsa::from_strs(&["a", "b", "c"], &["x"], &[("a", "x", "b"), ("b", "x", "c")], "a", &["b", "c"]).unwrap();
        let n = m.with_single_final().unwrap();
        assert_eq!(n.finals().len(), 1);
        assert_eq!(n.enumerate_language(4).unwrap(), m.enumerate_language(4).unwrap());
        assert!(fixture().with_single_final().is_ok());
        let eps = Fsa::from_strs(&["a", "b"], &["x"], &[("a", "x", "b")], "a", &["a", "b"]).unwrap();
        assert!(eps.with_single_final().is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = fixture();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(
            s,
            r#"{"states":["q0","q1"],"alphabet":["A","B"],"transitions":[["q0","A","q1"],["q1","B","q0"]],"initial":"q0","finals":["q0"]}"#
        );
        assert_eq!(serde_json::from_str::<Fsa>(&s).unwrap(), m);
        let bad = s.replace("\"q1\",\"B\"", "\"q9\",\"B\"");
        assert!(serde_json::from_str::<Fsa>(&bad).is_err());
    }

    #[test]
    fn enumeration_respects_the_prefix_budget() {
        let u = Fsa::universal(&Alphabet::chars("ab").unwrap());
        let tight = Budget { max_configs: 16, ..Budget::default() };
        assert_eq!(u.enumerate_language_with(4, &tight).unwrap().len(), 31);
        assert!(matches!(u.enumerate_language_with(5, &tight), Err(Error::Budget(_))));
    }
}
