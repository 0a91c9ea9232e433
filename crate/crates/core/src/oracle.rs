//! Brute-force reference implementations used to cross-check the matrix,
//! product and fixed-point code. Nothing here shares code with the
//! constructions it checks.

use std::collections::BTreeSet;

use crate::automata::{words_up_to, Fsa, Word};
use crate::boolsemi::BoolMat;
use crate::catauto::{CatFsa, Path};
use crate::transducer::Transducer;

/// Subset simulation over the raw transition list.
pub fn nfa_accepts(m: &Fsa, word: &[usize]) -> bool {
    let mut current: BTreeSet<usize> = BTreeSet::from([m.initial()]);
    for &a in word {
        current = m
            .transitions()
            .iter()
            .filter(|&&(p, b, _)| b == a && current.contains(&p))
            .map(|&(_, _, q)| q)
            .collect();
        if current.is_empty() {
            return false;
        }
    }
    current.iter().any(|&q| m.is_final(q))
}

/// Accepted words of length at most `maxlen`, by enumeration.
pub fn nfa_language(m: &Fsa, maxlen: usize) -> BTreeSet<Word> {
    let alpha = m.alphabet();
    words_up_to(alpha.len(), maxlen)
        .into_iter()
        .filter(|w| nfa_accepts(m, w))
        .map(|w| alpha.decode(&w))
        .collect()
}

/// `β(α⁻¹(L(M)) ∩ L(core))` cut at output length `maxlen`, by enumerating
/// middle words. Complete when no middle letter has an empty `β`-image,
/// since then middle words are no longer than their outputs.
pub fn transduction_words(t: &Transducer, m: &Fsa, maxlen: usize) -> BTreeSet<Word> {
    let mid = t.mid_alphabet();
    let core = t.core();
    let symbols_of = |h: &crate::automata::MonoidHom, u: &[usize]| -> Vec<String> {
        u.iter()
            .flat_map(|&a| {
                let i = h.source().index_of(mid.letter(a)).unwrap();
                h.target().decode(h.image_of(i)).0
            })
            .collect()
    };
    let mut out = BTreeSet::new();
    for u in words_up_to(mid.len(), maxlen) {
        let core_word: Vec<usize> = u.iter().map(|&a| core.alphabet().index_of(mid.letter(a)).unwrap()).collect();
        if !nfa_accepts(core, &core_word) {
            continue;
        }
        let output = symbols_of(t.beta(), &u);
        if output.len() > maxlen {
            continue;
        }
        let Ok(input) = m.alphabet().encode(&symbols_of(t.alpha(), &u)) else { continue };
        if nfa_accepts(m, &input) {
            out.insert(Word(output));
        }
    }
    out
}

/// Balanced-parenthesis counter.
pub fn balanced(word: &[String], open: &str, close: &str) -> bool {
    let mut depth = 0i64;
    for s in word {
        if s == open {
            depth += 1;
        } else if s == close {
            depth -= 1;
            if depth < 0 {
                return false;
            }
        } else {
            return false;
        }
    }
    depth == 0
}

/// Balanced words over `{open, close}` of length at most `maxlen`.
pub fn dyck_words(open: &str, close: &str, maxlen: usize) -> BTreeSet<Word> {
    let letters = [open.to_string(), close.to_string()];
    words_up_to(2, maxlen)
        .into_iter()
        .map(|w| w.into_iter().map(|i| letters[i].clone()).collect::<Vec<_>>())
        .filter(|w| balanced(w, open, close))
        .map(Word)
        .collect()
}

/// `T_φ` by listing every path of the state category up to `max_len` and
/// keeping those whose image is `φ`.
pub fn cat_operator_by_paths(m: &CatFsa, phi: &Path, max_len: usize) -> BoolMat {
    let mut out = BoolMat::zeros(m.len(), m.len());
    for p in m.states().paths_up_to(max_len) {
        if &m.tau().apply(&p) == phi {
            out.set(p.dst, p.src, true);
        }
    }
    out
}
