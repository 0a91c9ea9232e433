/*!
Finite-state and pushdown automata over named alphabets, monoid
homomorphisms between free monoids, and the constructions that transport
automata along them (product, preimage, image, trim).
*/

mod fsa;
mod psa;

use std::collections::HashMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::budget::Budget;
use crate::error::{Error, Result};

pub use fsa::Fsa;
pub use psa::{Psa, PsaTransition};

/// A letter identifier.
pub type Symbol = String;

/// A word over some alphabet.
///
/// In JSON a word is either an array of symbols or a string, which is split
/// into one symbol per character.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_symbols<S: Into<Symbol>>(symbols: impl IntoIterator<Item = S>) -> Self {
        Word(symbols.into_iter().map(Into::into).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.extend(other.0.iter().cloned());
        Word(out)
    }

    fn single_chars(&self) -> bool {
        self.0.iter().all(|s| s.chars().count() == 1)
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word(s.chars().map(String::from).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.single_chars() {
            for s in &self.0 {
                f.write_str(s)?;
            }
            Ok(())
        } else {
            write!(f, "{}", self.0.join(" "))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.single_chars() {
            s.serialize_str(&self.to_string())
        } else {
            self.0.serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Symbols(Vec<String>),
        }
        match Repr::deserialize(d) {
            Ok(Repr::Text(s)) => Ok(Word::from(s.as_str())),
            Ok(Repr::Symbols(v)) => Ok(Word(v)),
            Err(_) => Err(D::Error::custom("a word is a string or an array of symbols")),
        }
    }
}

/// An ordered finite set of letters.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<Symbol>,
    index: HashMap<Symbol, usize>,
}

impl Alphabet {
    pub fn new<S: Into<Symbol>>(letters: impl IntoIterator<Item = S>) -> Result<Self> {
        let letters: Vec<Symbol> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::input("alphabet is empty"));
        }
        let mut index = HashMap::new();
        for (i, l) in letters.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate letter `{l}`")));
            }
        }
        Ok(Alphabet { letters, index })
    }

    /// One letter per character of `s`.
    pub fn chars(s: &str) -> Result<Self> {
        Self::new(s.chars().map(String::from))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> &str {
        &self.letters[i]
    }

    pub fn index_of(&self, letter: &str) -> Option<usize> {
        self.index.get(letter).copied()
    }

    pub fn contains(&self, letter: &str) -> bool {
        self.index.contains_key(letter)
    }

    pub fn encode(&self, word: &[Symbol]) -> Result<Vec<usize>> {
        word.iter()
            .map(|s| {
                self.index_of(s)
                    .ok_or_else(|| Error::input(format!("letter `{s}` is not in the alphabet {:?}", self.letters)))
            })
            .collect()
    }

    pub fn decode(&self, word: &[usize]) -> Word {
        Word(word.iter().map(|&i| self.letters[i].clone()).collect())
    }

    /// Same letters, possibly in another order.
    pub fn same_letters(&self, other: &Alphabet) -> bool {
        self.len() == other.len() && self.letters.iter().all(|l| other.contains(l))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.letters).finish()
    }
}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Alphabet::new(Vec::<String>::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// A monoid homomorphism `source* -> target*`, given on letters.
#[derive(Clone, PartialEq, Eq)]
pub struct MonoidHom {
    source: Alphabet,
    target: Alphabet,
    images: Vec<Vec<usize>>,
}

impl MonoidHom {
    pub fn new<'a>(source: Alphabet, target: Alphabet, images: impl IntoIterator<Item = (&'a str, Word)>) -> Result<Self> {
        let mut slots: Vec<Option<Vec<usize>>> = vec![None; source.len()];
        for (letter, word) in images {
            let i = source
                .index_of(letter)
                .ok_or_else(|| Error::input(format!("image given for unknown letter `{letter}`")))?;
            slots[i] = Some(target.encode(word.symbols())?);
        }
        let images = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::input(format!("letter `{}` has no image", source.letter(i)))))
            .collect::<Result<_>>()?;
        Ok(MonoidHom { source, target, images })
    }

    pub(crate) fn from_indices(source: Alphabet, target: Alphabet, images: Vec<Vec<usize>>) -> Self {
        debug_assert_eq!(images.len(), source.len());
        debug_assert!(images.iter().flatten().all(|&b| b < target.len()));
        MonoidHom { source, target, images }
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        let images = (0..alphabet.len()).map(|i| vec![i]).collect();
        MonoidHom::from_indices(alphabet.clone(), alphabet.clone(), images)
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    /// Image of a source letter, as target indices.
    pub fn image_of(&self, letter: usize) -> &[usize] {
        &self.images[letter]
    }

    pub fn letter_image(&self, letter: &str) -> Result<Word> {
        let i = self
            .source
            .index_of(letter)
            .ok_or_else(|| Error::input(format!("letter `{letter}` not in homomorphism source")))?;
        Ok(self.target.decode(&self.images[i]))
    }

    pub fn apply(&self, word: &[Symbol]) -> Result<Word> {
        let idx = self.source.encode(word)?;
        Ok(self.target.decode(&self.apply_indices(&idx)))
    }

    pub fn apply_indices(&self, word: &[usize]) -> Vec<usize> {
        word.iter().flat_map(|&a| self.images[a].iter().copied()).collect()
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_empty_image(&self) -> bool {
        self.images.iter().any(Vec::is_empty)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &MonoidHom) -> Result<MonoidHom> {
        if !first.target.same_letters(&self.source) {
            return Err(Error::input("homomorphisms do not chain: target and source alphabets differ"));
        }
        let images = first
            .images
            .iter()
            .map(|w| {
                let w = first.target.decode(w);
                let mid = self.source.encode(w.symbols()).expect("letters checked above");
                self.apply_indices(&mid)
            })
            .collect();
        Ok(MonoidHom::from_indices(first.source.clone(), self.target.clone(), images))
    }

    /// The images as a letter-to-word map, in source order.
    pub fn to_map(&self) -> Vec<(Symbol, Word)> {
        self.source
            .letters()
            .iter()
            .zip(&self.images)
            .map(|(l, w)| (l.clone(), self.target.decode(w)))
            .collect()
    }
}

impl fmt::Debug for MonoidHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (l, w) in self.to_map() {
            m.entry(&l, &w);
        }
        m.finish()
    }
}

/// Behaviour shared by [`Fsa`] and [`Psa`], so transducers can act on both.
pub trait Automaton: Clone + Sized {
    fn alphabet(&self) -> &Alphabet;

    fn state_count(&self) -> usize;

    fn accepts_with(&self, word: &[Symbol], budget: &Budget) -> Result<bool>;

    fn accepts(&self, word: &[Symbol]) -> Result<bool> {
        self.accepts_with(word, &Budget::default())
    }

    /// Product with a finite automaton; states are pairs `(self, other)`.
    fn product(&self, other: &Fsa) -> Result<Self>;

    /// Product with a finite automaton as the left factor; states are pairs
    /// `(core, self)` indexed `core * |self| + state`.
    fn product_after(core: &Fsa, m: &Self) -> Result<Self>;

    /// Automaton for `h⁻¹(L(self))`, where `h` lands in this alphabet.
    fn preimage(&self, h: &MonoidHom) -> Result<Self>;

    /// Automaton for `h(L(self))`, where `h` starts from this alphabet.
    fn image(&self, h: &MonoidHom) -> Result<Self>;

    fn enumerate_language_with(&self, maxlen: usize, budget: &Budget) -> Result<Vec<Word>>;

    fn enumerate_language(&self, maxlen: usize) -> Result<Vec<Word>> {
        self.enumerate_language_with(maxlen, &Budget::default())
    }
}

/// Appends primes to `base` until it is not in `taken`.
pub(crate) fn fresh_name(base: String, taken: &std::collections::HashSet<String>) -> String {
    let mut name = base;
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// All words over `alphabet_len` letters up to `maxlen`, in length-lex order.
pub fn words_up_to(alphabet_len: usize, maxlen: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..maxlen {
        let mut next = Vec::with_capacity(layer.len() * alphabet_len);
        for w in &layer {
            for a in 0..alphabet_len {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_json_forms() {
        let w: Word = serde_json::from_str("\"AB\"").unwrap();
        assert_eq!(w, Word::from("AB"));
        let v: Word = serde_json::from_str("[\"ab\",\"c\"]").unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(serde_json::to_string(&w).unwrap(), "\"AB\"");
        assert_eq!(serde_json::to_string(&v).unwrap(), "[\"ab\",\"c\"]");
    }

    #[test]
    fn alphabet_rejects_duplicates() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn hom_composition() {
        let c = Alphabet::chars("C").unwrap();
        let ab = Alphabet::chars("AB").unwrap();
        let xy = Alphabet::chars("xy").unwrap();
        let h1 = MonoidHom::new(c, ab.clone(), [("C", Word::from("AB"))]).unwrap();
        let h2 = MonoidHom::new(ab, xy, [("A", Word::from("xy")), ("B", Word::empty())]).unwrap();
        let h = h2.after(&h1).unwrap();
        assert_eq!(h.letter_image("C").unwrap(), Word::from("xy"));
    }

    #[test]
    fn length_lex_words() {
        let ws = words_up_to(2, 2);
        assert_eq!(ws, vec![vec![], vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
