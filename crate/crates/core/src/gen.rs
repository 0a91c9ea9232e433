//! Seeded random instances. Every generator takes the RNG explicitly, so a
//! seed fixes the whole sequence of instances.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automata::{Alphabet, Fsa, MonoidHom, Word};
use crate::catauto::{CatFsa, CatFunctor, CatTransducer, FreeCat, Path};
use crate::transducer::Transducer;

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Letters `A, B, C, …` or `x, y, …` style alphabets of the given size.
pub fn alphabet(first: char, n: usize) -> Alphabet {
    Alphabet::new((0..n).map(|i| char::from_u32(first as u32 + i as u32).unwrap().to_string())).unwrap()
}

/// Up to `max_states` states, each transition present with probability
/// `density`, each state final with probability 1/3.
pub fn random_fsa(rng: &mut SuiteRng, max_states: usize, alphabet: &Alphabet, density: f64) -> Fsa {
    let n = rng.gen_range(1..=max_states);
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut ts = Vec::new();
    for p in 0..n {
        for a in alphabet.letters() {
            for q in 0..n {
                if rng.gen_bool(density) {
                    ts.push((states[p].clone(), a.clone(), states[q].clone()));
                }
            }
        }
    }
    let mut finals: Vec<String> = states.iter().filter(|_| rng.gen_bool(1.0 / 3.0)).cloned().collect();
    if finals.is_empty() {
        finals.push(states[rng.gen_range(0..n)].clone());
    }
    Fsa::new(states.clone(), alphabet.clone(), ts, states[0].clone(), finals).unwrap()
}

/// A trimmed automaton with a nonempty language over 1 to `max_letters` letters.
pub fn random_trimmed_fsa(rng: &mut SuiteRng, max_states: usize, max_letters: usize) -> Fsa {
    let letters = rng.gen_range(1..=max_letters);
    let alpha = alphabet('A', letters);
    loop {
        let density = rng.gen_range(0.15..0.5);
        let m = random_fsa(rng, max_states, &alpha, density).trim();
        if !m.is_language_empty() {
            return m;
        }
    }
}

fn random_word(rng: &mut SuiteRng, alpha: &Alphabet, len: usize) -> Word {
    Word((0..len).map(|_| alpha.letters().choose(rng).unwrap().clone()).collect())
}

/// A general transducer `input → output`: a core of up to 2 states over 1 or
/// 2 middle letters, input images of length 0 to 2 and output images of
/// length 1 to 2. Nonempty output images keep word oracles finite.
pub fn random_transducer(rng: &mut SuiteRng, input: &Alphabet, output: &Alphabet) -> Transducer {
    let mid = alphabet('c', rng.gen_range(1..=2));
    let core = loop {
        let c = random_fsa(rng, 2, &mid, 0.6);
        if !c.is_language_empty() {
            break c;
        }
    };
    let mut images = |target: &Alphabet, lo: usize, hi: usize| -> Vec<(String, Word)> {
        mid.letters()
            .iter()
            .map(|l| {
                let len = rng.gen_range(lo..=hi);
                (l.clone(), random_word(rng, target, len))
            })
            .collect()
    };
    let a = images(input, 0, 2);
    let b = images(output, 1, 2);
    let hom = |target: &Alphabet, v: &[(String, Word)]| MonoidHom::new(mid.clone(), target.clone(), v.iter().map(|(l, w)| (l.as_str(), w.clone()))).unwrap();
    Transducer::new(hom(input, &a), hom(output, &b), core).unwrap()
}

/// True when no word of the set occurs inside a concatenation `uv` of two
/// of its words other than at the seam positions `0` and `|u|`.
pub fn is_comma_free(code: &[Word]) -> bool {
    code.iter().all(|u| {
        code.iter().all(|v| {
            let uv: Vec<&String> = u.0.iter().chain(&v.0).collect();
            code.iter().all(|w| {
                (1..u.len()).all(|i| i + w.len() > uv.len() || !uv[i..i + w.len()].iter().zip(&w.0).all(|(a, b)| *a == b))
            })
        })
    })
}

/// A transducer for which the strict naturality squares are expected to
/// hold: one-state universal core and an output morphism whose images are
/// distinct words of one common nonzero length forming a comma-free code,
/// so that no `β`-image path starts or ends at a subdivision state of `T(M)`.
pub fn random_natural_transducer(rng: &mut SuiteRng, input: &Alphabet) -> Transducer {
    let k = rng.gen_range(1..=2);
    let mid = alphabet('c', k);
    let out = alphabet('x', 3);
    let len = rng.gen_range(1..=2);
    let pool: Vec<Word> = crate::automata::words_up_to(3, len).into_iter().filter(|w| w.len() == len).map(|w| out.decode(&w)).collect();
    let code = loop {
        let pick: Vec<Word> = pool.choose_multiple(rng, k).cloned().collect();
        if is_comma_free(&pick) {
            break pick;
        }
    };
    let a: Vec<(String, Word)> = mid
        .letters()
        .iter()
        .map(|l| {
            let n = rng.gen_range(1..=2);
            (l.clone(), random_word(rng, input, n))
        })
        .collect();
    let alpha = MonoidHom::new(mid.clone(), input.clone(), a.iter().map(|(l, w)| (l.as_str(), w.clone()))).unwrap();
    let beta = MonoidHom::new(mid.clone(), out, mid.letters().iter().zip(&code).map(|(l, w)| (l.as_str(), w.clone()))).unwrap();
    Transducer::new(alpha, beta, Fsa::universal(&mid)).unwrap()
}

/// A free category on `objects` objects with about `gens` random generators.
pub fn random_category(rng: &mut SuiteRng, objects: usize, gens: usize) -> FreeCat {
    let names: Vec<String> = (0..objects).map(|i| format!("X{i}")).collect();
    let edges: Vec<(String, String, String)> = (0..gens)
        .map(|i| {
            let s = rng.gen_range(0..objects);
            let d = rng.gen_range(0..objects);
            (names[s].clone(), format!("g{i}"), names[d].clone())
        })
        .collect();
    FreeCat::new(names, edges).unwrap()
}

/// A ULF categorical automaton: every state generator maps to a single base
/// generator, so `T_φ` is functorial.
pub fn random_cat_fsa(rng: &mut SuiteRng) -> CatFsa {
    let (objects, gens) = (rng.gen_range(1..=2), rng.gen_range(2..=3));
    let base = random_category(rng, objects, gens);
    let nq = rng.gen_range(1..=4);
    let over: Vec<usize> = (0..nq).map(|q| if q < base.object_count() { q } else { rng.gen_range(0..base.object_count()) }).collect();
    let names: Vec<String> = (0..nq).map(|q| format!("s{q}")).collect();
    let mut edges = Vec::new();
    let mut images = Vec::new();
    for (g, gen) in base.generators().iter().enumerate() {
        for p in (0..nq).filter(|&p| over[p] == gen.src) {
            for q in (0..nq).filter(|&q| over[q] == gen.dst) {
                if rng.gen_bool(0.5) {
                    edges.push((names[p].clone(), format!("{}@{}{}", gen.label, p, q), names[q].clone()));
                    images.push(base.gen_path(g));
                }
            }
        }
    }
    let states = FreeCat::new(names, edges).unwrap();
    let tau = CatFunctor::new(states, base, over, images).unwrap();
    let finals: BTreeSet<usize> = (0..nq).filter(|_| rng.gen_bool(0.5)).collect();
    CatFsa::new(tau, Some(0), finals).unwrap()
}

/// A categorical transducer over `base` that satisfies the hypotheses of the
/// naturality check: `α` is the identity on objects and sends each generator
/// to a distinct base generator, `β` renames generators one to one.
pub fn random_natural_cat_transducer(rng: &mut SuiteRng, base: &FreeCat) -> CatTransducer {
    let kept: Vec<usize> = (0..base.generators().len()).filter(|_| rng.gen_bool(0.7)).collect();
    let copy = |prefix: &str| {
        let edges: Vec<(String, String, String)> = kept
            .iter()
            .map(|&g| {
                let gen = &base.generators()[g];
                (base.objects()[gen.src].clone(), format!("{prefix}{}", gen.label), base.objects()[gen.dst].clone())
            })
            .collect();
        FreeCat::new(base.objects().to_vec(), edges).unwrap()
    };
    let (qt, out) = (copy("t."), copy("o."));
    let ids: Vec<usize> = (0..base.object_count()).collect();
    let alpha = CatFunctor::new(qt.clone(), base.clone(), ids.clone(), kept.iter().map(|&g| base.gen_path(g)).collect()).unwrap();
    let beta_images: Vec<Path> = (0..kept.len()).map(|i| out.gen_path(i)).collect();
    let beta = CatFunctor::new(qt, out, ids, beta_images).unwrap();
    CatTransducer::new(alpha, beta).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catauto::check_ulf;

    #[test]
    fn seeds_fix_instances() {
        let a = random_trimmed_fsa(&mut rng(3), 6, 3);
        let b = random_trimmed_fsa(&mut rng(3), 6, 3);
        assert_eq!(a, b);
        assert!(a.len() <= 6 && a.alphabet().len() <= 3);
    }

    #[test]
    fn comma_free_codes() {
        let w = |s: &str| Word::from(s);
        assert!(is_comma_free(&[w("xy")]));
        assert!(is_comma_free(&[w("x"), w("y")]));
        assert!(!is_comma_free(&[w("xx")]));
        assert!(!is_comma_free(&[w("xy"), w("yx")]));
        assert!(is_comma_free(&[w("xxy"), w("xzy")]));
    }

    #[test]
    fn random_cat_automata_are_ulf() {
        let mut r = rng(11);
        for _ in 0..20 {
            let m = random_cat_fsa(&mut r);
            assert!(check_ulf(m.tau()).holds);
            let t = random_natural_cat_transducer(&mut r, m.base());
            assert!(check_ulf(t.alpha()).holds);
        }
    }
}
