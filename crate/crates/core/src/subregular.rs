/*!
Factor-based subregular structure of automata.

A `k`-factor of a word is a block of `k` adjacent symbols. With markers the
word is read as `⋊w⋉`. A language is strictly `k`-local when membership is
decided by which `k`-factors occur. Forbidden factors show up as vanishing
composites of defect operators, and pairs of such operators give Boolean
analogues of `Ker/Im` cohomology.
*/

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::automata::{words_up_to, Automaton, Fsa, Symbol, Word};
use crate::boolsemi::{BoolMat, BoolVec};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::par::{self, Exec};

pub const LEFT_MARKER: &str = "⋊";
pub const RIGHT_MARKER: &str = "⋉";

fn is_marker(s: &str) -> bool {
    s == LEFT_MARKER || s == RIGHT_MARKER
}

/// Letter-bearing `k`-factors of a language.
///
/// With markers, an accepted word so short that `⋊w⋉` has no factor
/// containing a letter (`|w| ≤ max(k−3, 0)`, e.g. the empty word) is
/// listed in `short_words` instead, so that a marker-only block such as
/// `⋊⋉` never appears among the factors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FactorSet {
    pub k: usize,
    pub with_markers: bool,
    pub factors: BTreeSet<Word>,
    #[serde(skip_serializing_if = "BTreeSet::is_empty")]
    pub short_words: BTreeSet<Word>,
}

impl FactorSet {
    pub fn new(k: usize, with_markers: bool, factors: impl IntoIterator<Item = Word>) -> FactorSet {
        FactorSet {
            k,
            with_markers,
            factors: factors.into_iter().collect(),
            short_words: BTreeSet::new(),
        }
    }

    pub fn contains(&self, factor: &Word) -> bool {
        self.factors.contains(factor)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty() && self.short_words.is_empty()
    }
}

/// Exact `k`-factors of the words accepted by `m`, found by reachability
/// on the product of `m` with a window of the last `k − 1` symbols.
pub fn k_factors(m: &Fsa, k: usize, with_markers: bool) -> Result<FactorSet> {
    if k < 2 {
        return Err(Error::input("k must be at least 2"));
    }
    let m = m.trim();
    let mut out = FactorSet {
        k,
        with_markers,
        ..FactorSet::default()
    };
    if m.is_language_empty() {
        return Ok(out);
    }
    let co = m.coreachable();
    let letters = m.alphabet().letters();
    let succ = m.successors();
    let start: (usize, Vec<Symbol>) = (m.initial(), if with_markers { vec![LEFT_MARKER.into()] } else { Vec::new() });
    let mut seen: HashSet<(usize, Vec<Symbol>)> = [start.clone()].into();
    let mut queue = VecDeque::from([start]);
    let record = |block: &[Symbol], out: &mut FactorSet| {
        if block.len() == k && block.iter().any(|s| !is_marker(s)) {
            out.factors.insert(Word(block.to_vec()));
        }
    };
    while let Some((q, window)) = queue.pop_front() {
        if with_markers && m.is_final(q) {
            let mut block = window.clone();
            block.push(RIGHT_MARKER.into());
            record(&block, &mut out);
        }
        for (a, targets) in succ[q].iter().enumerate() {
            for &r in targets {
                if !co[r] {
                    continue;
                }
                let mut block = window.clone();
                block.push(letters[a].clone());
                record(&block, &mut out);
                if block.len() >= k {
                    block.remove(0);
                }
                let next = (r, block);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    if with_markers {
        let short = k.saturating_sub(3);
        out.short_words = m.enumerate_language(short)?.into_iter().collect();
    }
    Ok(out)
}

/// Composite operator of a word, `T_{w_n} ··· T_{w_1}`.
pub fn chain_operator(m: &Fsa, w: &Word) -> Result<BoolMat> {
    Ok(m.word_matrix(&m.alphabet().encode(w.symbols())?))
}

/// One forbidden factor split as `w = left · right`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilpotentEntry {
    pub left: Word,
    pub right: Word,
    /// `T_right · T_left = 0`: reading `left` then `right` is impossible.
    pub forward_zero: bool,
    /// `T_left · T_right = 0`.
    pub reverse_zero: bool,
}

/// For each length-`k` word that is not a factor of `L(m)` and each split
/// into two nonempty parts, whether the composite operators vanish.
pub fn nilpotency_report(m: &Fsa, k: usize) -> Result<Vec<NilpotentEntry>> {
    let factors = k_factors(m, k, false)?;
    let m = m.trim();
    let alphabet = m.alphabet();
    let mut out = Vec::new();
    for w in words_up_to(alphabet.len(), k).into_iter().filter(|w| w.len() == k) {
        let word = alphabet.decode(&w);
        if factors.contains(&word) {
            continue;
        }
        for cut in 1..k {
            let left = m.word_matrix(&w[..cut]);
            let right = m.word_matrix(&w[cut..]);
            out.push(NilpotentEntry {
                left: alphabet.decode(&w[..cut]),
                right: alphabet.decode(&w[cut..]),
                forward_zero: right.mul(&left)?.is_zero(),
                reverse_zero: left.mul(&right)?.is_zero(),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub ker_size: usize,
    pub im_size: usize,
    /// `Im ⊆ Ker`, i.e. the pair forms a coboundary structure.
    pub coboundary: bool,
    pub quotient_size: usize,
    /// One vector per class: `x ∧ ¬m*` where `m*` is the top of the image.
    pub class_representatives: Vec<BoolVec>,
}

/// `Ker(T_{w_ker}) / Im(T_{w_im})` by enumeration of `𝔹^Q`.
///
/// The congruence generated by `i ≈ 0` for image elements `i` relates `x`
/// and `y` exactly when `x ∨ m* = y ∨ m*`, where `m*` is the join of the
/// whole image, so classes are indexed by `x ∨ m*`.
pub fn cohomology(m: &Fsa, w_ker: &Word, w_im: &Word) -> Result<CohomologyReport> {
    cohomology_with(m, w_ker, w_im, &Budget::default(), Exec::default())
}

pub fn cohomology_with(m: &Fsa, w_ker: &Word, w_im: &Word, budget: &Budget, exec: Exec) -> Result<CohomologyReport> {
    let n = m.len();
    if n > budget.state_cap || n >= 64 {
        return Err(Error::Size {
            what: "cohomology enumeration",
            requested: n,
            cap: budget.state_cap,
        });
    }
    let tk = chain_operator(m, w_ker)?;
    let ti = chain_operator(m, w_im)?;
    let all = 1usize << n;
    let pairs: Vec<(bool, u64)> = par::map_range(exec, all, |mask| {
        let v = BoolVec::from_mask(n, mask as u64);
        let in_ker = tk.apply(&v).expect("square").is_zero();
        (in_ker, ti.apply(&v).expect("square").to_mask())
    });
    let ker: Vec<u64> = (0..all).filter(|&x| pairs[x].0).map(|x| x as u64).collect();
    let im: BTreeSet<u64> = pairs.iter().map(|p| p.1).collect();
    let ker_set: HashSet<u64> = ker.iter().copied().collect();
    let top = im.iter().fold(0u64, |acc, &x| acc | x);
    let classes: BTreeSet<u64> = ker.iter().map(|&x| x & !top).collect();
    Ok(CohomologyReport {
        ker_size: ker.len(),
        im_size: im.len(),
        coboundary: im.iter().all(|i| ker_set.contains(i)),
        quotient_size: classes.len(),
        class_representatives: classes.into_iter().map(|x| BoolVec::from_mask(n, x)).collect(),
    })
}

/// Every required factor occurs in `w`, in any order. Factors carrying
/// markers are matched against `⋊w⋉`.
pub fn lt_membership(w: &Word, required: &FactorSet) -> bool {
    let marked = marked(w);
    required.factors.iter().all(|u| occurs(&marked, u.symbols()))
}

/// The required factors occur as disjoint blocks in the given order,
/// i.e. `w ∈ A* u₁ A* u₂ ⋯ u_r A*`.
pub fn lt_membership_ordered(w: &Word, required: &[Word]) -> bool {
    let marked = marked(w);
    let mut rest: &[Symbol] = &marked;
    for u in required {
        let u = u.symbols();
        match (0..=rest.len().saturating_sub(u.len())).find(|&i| rest[i..].starts_with(u)) {
            Some(i) if rest.len() >= u.len() => rest = &rest[i + u.len()..],
            _ => return false,
        }
    }
    true
}

fn marked(w: &Word) -> Vec<Symbol> {
    let mut v = vec![LEFT_MARKER.to_string()];
    v.extend(w.symbols().iter().cloned());
    v.push(RIGHT_MARKER.into());
    v
}

fn occurs(hay: &[Symbol], needle: &[Symbol]) -> bool {
    needle.is_empty() || hay.windows(needle.len()).any(|win| win == needle)
}

/// Deterministic scanner accepting exactly the words whose marked
/// `k`-factors all lie in `factors` (short words are looked up directly).
struct Scanner<'a> {
    factors: &'a FactorSet,
}

/// `None` is the dead state.
type ScanState = Option<Vec<Symbol>>;

impl Scanner<'_> {
    fn start(&self) -> ScanState {
        Some(vec![LEFT_MARKER.into()])
    }

    fn step(&self, s: &ScanState, a: &str) -> ScanState {
        let mut block = s.clone()?;
        block.push(a.into());
        let k = self.factors.k;
        if block.len() == k && !self.factors.contains(&Word(block.clone())) {
            return None;
        }
        if block.len() >= k {
            block.remove(0);
        }
        Some(block)
    }

    fn accepts(&self, s: &ScanState) -> bool {
        let Some(window) = s else { return false };
        let k = self.factors.k;
        if window[0] == LEFT_MARKER && window.len() - 1 <= k.saturating_sub(3) {
            return self.factors.short_words.contains(&Word(window[1..].to_vec()));
        }
        let mut block = window.clone();
        block.push(RIGHT_MARKER.into());
        self.factors.contains(&Word(block))
    }
}

/// A word on which `m` and its strictly `k`-local approximation disagree.
pub fn sl_counterexample(m: &Fsa, k: usize, budget: &Budget) -> Result<Option<Word>> {
    let factors = k_factors(m, k, true)?;
    let scanner = Scanner { factors: &factors };
    let m = m.trim();
    let letters = m.alphabet().letters();
    let succ = m.successors();
    type Key = (BTreeSet<usize>, ScanState);
    let start: Key = ([m.initial()].into(), scanner.start());
    let mut parent: HashMap<Key, Option<(Key, usize)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(key) = queue.pop_front() {
        let (set, scan) = &key;
        if set.iter().any(|&q| m.is_final(q)) != scanner.accepts(scan) {
            let mut word = Vec::new();
            let mut cur = key.clone();
            while let Some(Some((prev, a))) = parent.get(&cur) {
                word.push(letters[*a].clone());
                cur = prev.clone();
            }
            word.reverse();
            return Ok(Some(Word(word)));
        }
        if set.is_empty() && scan.is_none() {
            continue;
        }
        for (a, letter) in letters.iter().enumerate() {
            let next_set: BTreeSet<usize> = set.iter().flat_map(|&q| succ[q][a].iter().copied()).collect();
            let next: Key = (next_set, scanner.step(scan, letter));
            if !parent.contains_key(&next) {
                budget.check_states("strictly local check", parent.len() + 1)?;
                parent.insert(next.clone(), Some((key.clone(), a)));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

/// Whether `L(m)` is strictly `k`-local.
pub fn sl_check(m: &Fsa, k: usize) -> Result<bool> {
    Ok(sl_counterexample(m, k, &Budget::default())?.is_none())
}

/// Cohomology of one pair of letters.
#[derive(Clone, Debug, Serialize)]
pub struct PairCohomology {
    pub ker: Word,
    pub im: Word,
    pub report: CohomologyReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub factors: FactorSet,
    pub sl: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Word>,
    pub nilpotent_pairs: Vec<NilpotentEntry>,
    /// For letter pairs `(a, b)` with `T_a T_b = 0`, when the state space
    /// is small enough to enumerate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<Vec<PairCohomology>>,
}

/// Everything the `subregular analyze` command reports.
pub fn analyze(m: &Fsa, k: usize, with_markers: bool, budget: &Budget) -> Result<Analysis> {
    let factors = k_factors(m, k, with_markers)?;
    let counterexample = sl_counterexample(m, k, budget)?;
    let nilpotent_pairs = nilpotency_report(m, k)?;
    let trimmed = m.trim();
    let cohomology = if trimmed.len() <= budget.state_cap {
        let alphabet = trimmed.alphabet();
        let mut out = Vec::new();
        for a in alphabet.letters() {
            for b in alphabet.letters() {
                let (wa, wb) = (Word::from_symbols([a.clone()]), Word::from_symbols([b.clone()]));
                let ta = chain_operator(&trimmed, &wa)?;
                let tb = chain_operator(&trimmed, &wb)?;
                if ta.mul(&tb)?.is_zero() {
                    out.push(PairCohomology {
                        report: cohomology_with(&trimmed, &wa, &wb, budget, Exec::default())?,
                        ker: wa,
                        im: wb,
                    });
                }
            }
        }
        Some(out)
    } else {
        None
    };
    Ok(Analysis {
        factors,
        sl: counterexample.is_none(),
        counterexample,
        nilpotent_pairs,
        cohomology,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Alphabet;

    fn fixture() -> Fsa {
        Fsa::from_strs(&["q0", "q1"], &["A", "B"], &[("q0", "A", "q1"), ("q1", "B", "q0")], "q0", &["q0"]).unwrap()
    }

    fn words(ws: &[&str]) -> BTreeSet<Word> {
        ws.iter().map(|w| Word::from(*w)).collect()
    }

    #[test]
    fn fixture_factors() {
        assert_eq!(k_factors(&fixture(), 2, false).unwrap().factors, words(&["AB", "BA"]));
        let marked = k_factors(&fixture(), 2, true).unwrap();
        assert_eq!(marked.factors, words(&["⋊A", "AB", "BA", "B⋉"]));
        assert_eq!(marked.short_words, words(&[""]));
        let empty = Fsa::empty(&Alphabet::chars("AB").unwrap());
        assert!(k_factors(&empty, 2, true).unwrap().is_empty());
        assert!(k_factors(&fixture(), 1, false).is_err());
    }

    #[test]
    fn fixture_operators_square_to_zero() {
        let report = nilpotency_report(&fixture(), 2).unwrap();
        let names: Vec<String> = report.iter().map(|e| format!("{}{}", e.left, e.right)).collect();
        assert_eq!(names, vec!["AA", "BB"]);
        assert!(report.iter().all(|e| e.forward_zero && e.reverse_zero));
        assert!(!chain_operator(&fixture(), &Word::from("AB")).unwrap().is_zero());
        let looped = Fsa::from_strs(&["q0"], &["A"], &[("q0", "A", "q0")], "q0", &["q0"]).unwrap();
        assert!(!chain_operator(&looped, &Word::from("AA")).unwrap().is_zero());
    }

    /// Classes of `ker` under the smallest join-compatible equivalence on
    /// `𝔹^n` relating each image element to zero, closed by brute force.
    fn quotient_oracle(n: usize, ker: &[u64], im: &[u64]) -> usize {
        let size = 1usize << n;
        let mut parent: Vec<usize> = (0..size).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &i in im {
            let (a, b) = (find(&mut parent, i as usize), find(&mut parent, 0));
            parent[a] = b;
        }
        loop {
            let mut changed = false;
            for x in 0..size {
                for y in 0..size {
                    if find(&mut parent, x) != find(&mut parent, y) {
                        continue;
                    }
                    for z in 0..size {
                        let (a, b) = (find(&mut parent, x | z), find(&mut parent, y | z));
                        if a != b {
                            parent[a] = b;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let classes: BTreeSet<usize> = ker.iter().map(|&x| find(&mut parent, x as usize)).collect();
        classes.len()
    }

    #[test]
    fn cohomology_examples() {
        let r = cohomology(&fixture(), &Word::from("B"), &Word::from("B")).unwrap();
        // T_B sends q1 to q0: Ker = {0, e_q0}, Im = {0, e_q0}.
        assert_eq!((r.ker_size, r.im_size, r.coboundary, r.quotient_size), (2, 2, true, 1));
        assert_eq!(quotient_oracle(2, &[0, 1], &[0, 1]), 1);

        let zero = Fsa::from_strs(&["p", "q"], &["A"], &[], "p", &["p"]).unwrap();
        let r = cohomology(&zero, &Word::from("A"), &Word::from("A")).unwrap();
        assert_eq!((r.ker_size, r.im_size, r.quotient_size), (4, 1, 4));

        let r = cohomology(&fixture(), &Word::from(""), &Word::from("A")).unwrap();
        assert_eq!((r.ker_size, r.quotient_size), (1, 1));
    }

    #[test]
    fn quotient_matches_oracle_on_three_states() {
        let m = Fsa::from_strs(
            &["a", "b", "c"],
            &["X", "Y"],
            &[("a", "X", "b"), ("b", "X", "c"), ("a", "Y", "c"), ("c", "Y", "a")],
            "a",
            &["c"],
        )
        .unwrap();
        for (wk, wi) in [("X", "X"), ("XX", "X"), ("Y", "X"), ("X", "Y"), ("XY", "YX")] {
            let r = cohomology(&m, &Word::from(wk), &Word::from(wi)).unwrap();
            let tk = chain_operator(&m, &Word::from(wk)).unwrap();
            let ti = chain_operator(&m, &Word::from(wi)).unwrap();
            let ker: Vec<u64> = (0..8).filter(|&x| tk.apply(&BoolVec::from_mask(3, x)).unwrap().is_zero()).collect();
            let im: Vec<u64> = (0..8).map(|x| ti.apply(&BoolVec::from_mask(3, x)).unwrap().to_mask()).collect();
            assert_eq!(r.quotient_size, quotient_oracle(3, &ker, &im), "{wk}/{wi}");
        }
    }

    #[test]
    fn lt_examples() {
        let req = |ws: &[&str]| FactorSet::new(2, false, ws.iter().map(|w| Word::from(*w)));
        assert!(lt_membership(&Word::from("BAB"), &req(&["AB"])));
        assert!(lt_membership(&Word::from(""), &req(&[])));
        assert!(!lt_membership(&Word::from("ABAB"), &req(&["AA"])));
        assert!(lt_membership(&Word::from("AB"), &FactorSet::new(2, true, [Word::from("⋊A")])));
        assert!(lt_membership_ordered(&Word::from("ABBA"), &[Word::from("AB"), Word::from("BA")]));
        assert!(!lt_membership_ordered(&Word::from("ABA"), &[Word::from("AB"), Word::from("BA")]));
        assert!(!lt_membership_ordered(&Word::from("BAAB"), &[Word::from("AB"), Word::from("BA")]));
    }

    #[test]
    fn sl_examples() {
        assert!(sl_check(&fixture(), 2).unwrap());
        let finite = Fsa::from_strs(
            &["s", "a", "b", "f"],
            &["A", "B"],
            &[("s", "A", "a"), ("a", "B", "f"), ("s", "B", "b"), ("b", "A", "f")],
            "s",
            &["f"],
        )
        .unwrap();
        assert!(!sl_check(&finite, 2).unwrap());
        let cex = sl_counterexample(&finite, 2, &Budget::default()).unwrap().unwrap();
        assert!(!finite.accepts(cex.symbols()).unwrap());
        assert!(sl_check(&Fsa::universal(&Alphabet::chars("AB").unwrap()), 2).unwrap());
        // Even-length words over one letter are not strictly local for any k.
        let even = Fsa::from_strs(&["e", "o"], &["A"], &[("e", "A", "o"), ("o", "A", "e")], "e", &["e"]).unwrap();
        for k in 2..5 {
            assert!(!sl_check(&even, k).unwrap());
        }
    }
}
