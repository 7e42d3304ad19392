//! Substitutions (non-erasing morphisms) and their fixed points.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

/// Hard limit on generated prefix lengths.
pub const PREFIX_GUARD: usize = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Alphabet,
    images: Vec<Word>,
    seed: Letter,
    /// `incidence[b][c]` counts the letter `b` in the image of `c`.
    incidence: Vec<Vec<u64>>,
}

impl Substitution {
    /// `images[c]` is the image of letter `c`. Images must be non-empty.
    pub fn new(alphabet: Alphabet, images: Vec<Word>, seed: Letter) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::Parameter(format!(
                "{} images for an alphabet of {} letters",
                images.len(),
                alphabet.len()
            )));
        }
        alphabet.check(seed)?;
        let k = alphabet.len();
        let mut incidence = vec![vec![0u64; k]; k];
        for (c, image) in images.iter().enumerate() {
            if image.is_empty() {
                return Err(Error::Parameter(format!("image of {} is empty", alphabet.symbol(c as Letter))));
            }
            for &b in image.iter() {
                alphabet.check(b)?;
                incidence[b as usize][c] += 1;
            }
        }
        Ok(Self { alphabet, images, seed, incidence })
    }

    /// Convenience constructor from symbol strings, e.g. `[("0", "01"), ("1", "0")]`.
    pub fn from_rules(alphabet: &str, rules: &[(char, &str)], seed: char) -> Result<Self> {
        let alphabet = Alphabet::new(alphabet.chars())?;
        let mut images = vec![None; alphabet.len()];
        for &(c, image) in rules {
            let l = alphabet.letter(c)?;
            images[l as usize] = Some(alphabet.parse(image)?);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| {
                img.ok_or_else(|| Error::Parameter(format!("no rule for {}", alphabet.symbol(i as Letter))))
            })
            .collect::<Result<Vec<_>>>()?;
        let seed = alphabet.letter(seed)?;
        Self::new(alphabet, images, seed)
    }

    /// Parses the text format
    ///
    /// ```text
    /// alphabet: 0 1
    /// 0 -> 01
    /// 1 -> 0
    /// seed: 0
    /// ```
    ///
    /// Blank lines and lines starting with `#` are skipped. The seed defaults
    /// to the first letter of the alphabet.
    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet: Option<Alphabet> = None;
        let mut rules: Vec<(usize, char, String)> = Vec::new();
        let mut seed: Option<(usize, char)> = None;

        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse { line: lineno, message };
            if let Some(rest) = line.strip_prefix("alphabet:") {
                if alphabet.is_some() {
                    return Err(err("duplicate alphabet line".into()));
                }
                let letters = rest.chars().filter(|c| !c.is_whitespace() && *c != ',');
                alphabet = Some(Alphabet::new(letters).map_err(|e| err(e.to_string()))?);
            } else if let Some(rest) = line.strip_prefix("seed:") {
                let mut cs = rest.trim().chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) => seed = Some((lineno, c)),
                    _ => return Err(err("seed must be a single letter".into())),
                }
            } else if let Some((lhs, rhs)) = line.split_once("->") {
                let mut cs = lhs.trim().chars();
                let letter = match (cs.next(), cs.next()) {
                    (Some(c), None) => c,
                    _ => return Err(err("rule must start with a single letter".into())),
                };
                rules.push((lineno, letter, rhs.trim().to_string()));
            } else {
                return Err(err(format!("unrecognized line {line:?}")));
            }
        }

        let alphabet = alphabet.ok_or(Error::Parse { line: 0, message: "missing alphabet line".into() })?;
        let mut images: Vec<Option<Word>> = vec![None; alphabet.len()];
        for (lineno, letter, image) in rules {
            let err = |message: String| Error::Parse { line: lineno, message };
            let l = alphabet.letter(letter).map_err(|e| err(e.to_string()))?;
            if images[l as usize].is_some() {
                return Err(err(format!("duplicate rule for {letter:?}")));
            }
            let w = alphabet.parse(&image).map_err(|e| err(e.to_string()))?;
            if w.is_empty() {
                return Err(err(format!("empty image for {letter:?}")));
            }
            images[l as usize] = Some(w);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| {
                img.ok_or_else(|| Error::Parse {
                    line: 0,
                    message: format!("no rule for {:?}", alphabet.symbol(i as Letter)),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let seed = match seed {
            Some((lineno, c)) => {
                alphabet.letter(c).map_err(|e| Error::Parse { line: lineno, message: e.to_string() })?
            }
            None => 0,
        };
        Self::new(alphabet, images, seed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let symbols: String = self.alphabet.symbols().iter().collect();
        writeln!(out, "alphabet: {symbols}").unwrap();
        for l in self.alphabet.letters() {
            writeln!(out, "{} -> {}", self.alphabet.symbol(l), self.alphabet.render(&self.images[l as usize])).unwrap();
        }
        writeln!(out, "seed: {}", self.alphabet.symbol(self.seed)).unwrap();
        out
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn image(&self, letter: Letter) -> &Word {
        &self.images[letter as usize]
    }

    pub fn seed(&self) -> Letter {
        self.seed
    }

    pub fn incidence(&self) -> &[Vec<u64>] {
        &self.incidence
    }

    pub fn apply(&self, w: &[Letter]) -> Result<Word> {
        let mut out = Vec::new();
        for &l in w {
            self.alphabet.check(l)?;
            out.extend_from_slice(&self.images[l as usize]);
        }
        Ok(Word(out))
    }

    /// Checks that the seed image starts with the seed and has length at least 2.
    pub fn check_seed(&self) -> Result<()> {
        let image = self.image(self.seed);
        let s = self.alphabet.symbol(self.seed);
        if image[0] != self.seed {
            return Err(Error::Construction(format!("image of seed {s} does not start with {s}")));
        }
        if image.len() < 2 {
            return Err(Error::Construction(format!("image of seed {s} does not grow")));
        }
        Ok(())
    }

    /// Some power `k <= (n-1)^2 + 1` of the incidence matrix is positive.
    pub fn is_primitive(&self) -> bool {
        let n = self.alphabet.len();
        let m: Vec<Vec<bool>> = self.incidence.iter().map(|row| row.iter().map(|&c| c > 0).collect()).collect();
        let bound = (n - 1) * (n - 1) + 1;
        let mut power = m.clone();
        for _ in 0..bound {
            if power.iter().all(|row| row.iter().all(|&b| b)) {
                return true;
            }
            power = bool_mul(&power, &m);
        }
        false
    }

    /// Lengths of `σ^k(seed)` for `k = 0, 1, ...` while they stay at most `limit`.
    pub fn iterate_lengths(&self, limit: usize) -> Vec<usize> {
        let k = self.alphabet.len();
        let mut counts = vec![0u128; k];
        counts[self.seed as usize] = 1;
        let mut out = Vec::new();
        loop {
            let len: u128 = counts.iter().sum();
            if len > limit as u128 || out.last() == Some(&(len as usize)) {
                break;
            }
            out.push(len as usize);
            let mut next = vec![0u128; k];
            for (b, row) in self.incidence.iter().enumerate() {
                for (c, &x) in row.iter().enumerate() {
                    next[b] += x as u128 * counts[c];
                }
            }
            counts = next;
        }
        out
    }
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect()).collect()
}

/// A prefix of `σ^∞(seed)` of length at least `min_len`, made of whole iterates.
pub fn fixed_point_prefix(s: &Substitution, min_len: usize) -> Result<Word> {
    if min_len == 0 {
        return Err(Error::Parameter("min_len must be at least 1".into()));
    }
    if min_len > PREFIX_GUARD {
        return Err(Error::Parameter(format!("min_len exceeds the guard {PREFIX_GUARD}")));
    }
    s.check_seed()?;
    let mut w = vec![s.seed()];
    // σ^{k+1}(a) = σ^k(a) · σ(σ^k(a)[|σ^{k-1}(a)|..])
    let mut prev = 0;
    while w.len() < min_len {
        let end = w.len();
        if prev == 0 {
            w = s.image(s.seed()).0.clone();
        } else {
            for i in prev..end {
                let l = w[i];
                w.extend_from_slice(s.image(l));
            }
        }
        prev = end;
    }
    Ok(Word(w))
}
