//! Alphabets, letters and finite words.
//!
//! Letters are stored as indices into their [`Alphabet`], so the derived
//! ordering on [`Word`] is the lexicographic order induced by the alphabet's
//! declaration order.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a letter in its alphabet.
pub type Letter = u8;

pub const MAX_ALPHABET: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::Alphabet("empty alphabet".into()));
        }
        if symbols.len() > MAX_ALPHABET {
            return Err(Error::Alphabet(format!("{} letters, at most {MAX_ALPHABET} supported", symbols.len())));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::Alphabet(format!("duplicate letter {c:?}")));
            }
            if c.is_whitespace() || *c == ',' {
                return Err(Error::Alphabet(format!("unusable letter {c:?}")));
            }
        }
        Ok(Self { symbols })
    }

    /// The digits `0..k` in natural order.
    pub fn digits(k: usize) -> Result<Self> {
        if k > MAX_ALPHABET {
            return Err(Error::Alphabet(format!("{k} digits requested")));
        }
        Self::new((0..k as u32).map(|d| char::from_digit(d, 10).unwrap()))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.symbols.len() as Letter
    }

    pub fn symbol(&self, letter: Letter) -> char {
        self.symbols[letter as usize]
    }

    pub fn letter(&self, symbol: char) -> Result<Letter> {
        self.symbols.iter().position(|&c| c == symbol).map(|i| i as Letter).ok_or(Error::UnknownLetter(symbol))
    }

    pub fn check(&self, letter: Letter) -> Result<()> {
        if (letter as usize) < self.symbols.len() {
            Ok(())
        } else {
            Err(Error::LetterOutOfRange(letter))
        }
    }

    /// Parses a word written with this alphabet's symbols. Commas and
    /// whitespace are ignored so that both `1323` and `1,3,2,3` are accepted.
    pub fn parse(&self, text: &str) -> Result<Word> {
        text.chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| self.letter(c))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn render(&self, letters: &[Letter]) -> String {
        let sep = if self.symbols.len() > MAX_ALPHABET { "," } else { "" };
        letters.iter().map(|&l| self.symbol(l).to_string()).collect::<Vec<_>>().join(sep)
    }
}

/// A finite word; the empty word is allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }

    pub fn push_front(&self, letter: Letter) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn push_back(&self, letter: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    /// Applies a letter-to-letter map.
    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> Word {
        Word(self.0.iter().map(|&l| f(l)).collect())
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> DisplayWord<'a> {
        DisplayWord { word: &self.0, alphabet }
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl std::borrow::Borrow<[Letter]> for Word {
    fn borrow(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

pub struct DisplayWord<'a> {
    word: &'a [Letter],
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            f.write_str("ε")
        } else {
            f.write_str(&self.alphabet.render(self.word))
        }
    }
}

/// A set of letters, as a bitmask over at most [`MAX_ALPHABET`] letters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct LetterSet(u16);

impl LetterSet {
    pub fn insert(&mut self, letter: Letter) {
        self.0 |= 1 << letter;
    }

    pub fn contains(self, letter: Letter) -> bool {
        self.0 & (1 << letter) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Letter> {
        (0..16u8).filter(move |&l| self.contains(l))
    }

    pub fn only(self) -> Option<Letter> {
        if self.len() == 1 {
            self.iter().next()
        } else {
            None
        }
    }
}

impl FromIterator<Letter> for LetterSet {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        let mut s = LetterSet::default();
        for l in iter {
            s.insert(l);
        }
        s
    }
}
