//! Sliding-window scans of a finite prefix.
//!
//! Factors of length `n + 1` are numbered from factors of length `n` plus the
//! following letter, so one pass over the prefix per length suffices.

use crate::word::{Letter, Word};

/// Factor ids of one length over every window of a prefix.
pub(crate) struct Windows {
    pub n: usize,
    /// `ids[i]` identifies the factor starting at position `i`.
    pub ids: Vec<u32>,
    /// First starting position of each id.
    pub first: Vec<usize>,
}

impl Windows {
    pub fn empty_word(len: usize) -> Self {
        Windows { n: 0, ids: vec![0; len + 1], first: vec![0] }
    }

    pub fn count(&self) -> usize {
        self.first.len()
    }

    pub fn extend(&self, prefix: &[Letter], k: usize) -> Option<Windows> {
        let n = self.n + 1;
        if n > prefix.len() {
            return None;
        }
        let positions = prefix.len() - n + 1;
        let mut table = vec![u32::MAX; self.count() * k];
        let mut ids = Vec::with_capacity(positions);
        let mut first = Vec::new();
        for i in 0..positions {
            let slot = self.ids[i] as usize * k + prefix[i + n - 1] as usize;
            let id = &mut table[slot];
            if *id == u32::MAX {
                *id = first.len() as u32;
                first.push(i);
            }
            ids.push(*id);
        }
        Some(Windows { n, ids, first })
    }

    pub fn word(&self, prefix: &[Letter], id: u32) -> Word {
        let s = self.first[id as usize];
        Word(prefix[s..s + self.n].to_vec())
    }

    /// Position just after the first occurrence of every factor ends, maximized.
    pub fn last_first_end(&self) -> usize {
        self.first.iter().map(|&s| s + self.n).max().unwrap_or(0)
    }
}

/// The set of factors of length `n`, with the end of their first occurrence.
pub(crate) struct FactorLevel {
    pub factors: Vec<Word>,
    pub occurrences: Vec<usize>,
    pub last_first_end: usize,
}

/// Factor levels `0..=max_n` of `prefix` in lexicographic order.
pub(crate) fn factor_levels(prefix: &[Letter], k: usize, max_n: usize) -> Vec<FactorLevel> {
    let mut out = Vec::with_capacity(max_n + 1);
    let mut w = Windows::empty_word(prefix.len());
    loop {
        let mut counts = vec![0usize; w.count()];
        for &id in &w.ids {
            counts[id as usize] += 1;
        }
        let mut pairs: Vec<(Word, usize)> =
            (0..w.count() as u32).map(|id| (w.word(prefix, id), counts[id as usize])).collect();
        pairs.sort();
        let last_first_end = w.last_first_end();
        let (factors, occurrences) = pairs.into_iter().unzip();
        out.push(FactorLevel { factors, occurrences, last_first_end });
        if w.n == max_n {
            break;
        }
        match w.extend(prefix, k) {
            Some(next) => w = next,
            None => break,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn levels_match_brute_force() {
        let prefix: Vec<Letter> = "0110100110010110".bytes().map(|b| b - b'0').collect();
        let levels = factor_levels(&prefix, 2, 5);
        for (n, level) in levels.iter().enumerate() {
            let brute: BTreeSet<Word> = prefix.windows(n.max(1)).map(|w| Word(w[..n].to_vec())).collect();
            let got: BTreeSet<Word> = level.factors.iter().cloned().collect();
            assert_eq!(got, brute, "n={n}");
            let total: usize = level.occurrences.iter().sum();
            assert_eq!(total, prefix.len() + 1 - n);
        }
    }
}
