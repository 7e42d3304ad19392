//! Return words, computed by scanning occurrences and, independently, by
//! growing the tree of right extensions until the factor reappears.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use memchr::memmem;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factors::{build_factor_table, FactorTable, GrowingTable};
use crate::scan::Windows;
use crate::source::{Prefix, WordSource};
use crate::substitution::PREFIX_GUARD;
use crate::word::{Alphabet, Letter, Word};

const INITIAL_SCAN: usize = 1024;

/// All positions `j` with `prefix[j..j+|w|] == w`, overlaps included. The
/// empty word occurs at every position `0..=|prefix|`.
pub fn occurrences(prefix: &[Letter], w: &[Letter]) -> Vec<usize> {
    if w.is_empty() {
        return (0..=prefix.len()).collect();
    }
    let finder = memmem::Finder::new(w);
    let mut out = Vec::new();
    let mut from = 0;
    while let Some(i) = finder.find(&prefix[from..]) {
        out.push(from + i);
        from += i + 1;
        if from >= prefix.len() {
            break;
        }
    }
    out
}

/// How a return set was certified: scanning `prefix_len` letters, every
/// distinct return word had been completed (next occurrence ended) by
/// `stable_from <= prefix_len / 4`. The sets for `prefix_len / 2` and
/// `prefix_len` therefore agree, with the last new word in the first half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StabilizationCertificate {
    pub prefix_len: usize,
    pub stable_from: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnSet {
    pub factor: Word,
    /// Return words ordered by first occurrence.
    pub returns: Vec<Word>,
    pub occurrences: usize,
    pub certificate: StabilizationCertificate,
}

impl ReturnSet {
    pub fn len(&self) -> usize {
        self.returns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.returns.is_empty()
    }

    pub fn complete_returns(&self) -> Vec<Word> {
        self.returns.iter().map(|v| v.concat(&self.factor)).collect()
    }

    pub fn as_set(&self) -> BTreeSet<Word> {
        self.returns.iter().cloned().collect()
    }

    /// A single return word means the word is eventually periodic.
    pub fn eventually_periodic(&self) -> bool {
        self.returns.len() == 1
    }
}

/// Distinct return words collected while scanning one factor.
#[derive(Default)]
struct Collector {
    /// (start, length) of the first occurrence of each return word.
    words: Vec<(usize, usize)>,
    last: Option<usize>,
    count: usize,
    discovered: usize,
}

impl Collector {
    fn visit(&mut self, prefix: &[Letter], i: usize, n: usize) {
        self.count += 1;
        if let Some(p) = self.last {
            let d = i - p;
            let seen = self.words.iter().any(|&(s, len)| len == d && prefix[s..s + d] == prefix[p..i]);
            if !seen {
                self.words.push((p, d));
                self.discovered = i + n;
            }
        }
        self.last = Some(i);
    }

    fn stable(&self, scanned: usize) -> bool {
        self.count >= 2 && self.discovered <= scanned / 4
    }

    fn finish(&self, prefix: &[Letter], factor: Word, scanned: usize) -> ReturnSet {
        ReturnSet {
            factor,
            returns: self.words.iter().map(|&(s, d)| Word(prefix[s..s + d].to_vec())).collect(),
            occurrences: self.count,
            certificate: StabilizationCertificate { prefix_len: scanned, stable_from: self.discovered },
        }
    }
}

fn scan_prefix(src: &WordSource, len: usize) -> Result<Prefix> {
    Ok(Prefix::truncate(src.checkpoint(len)?, len))
}

/// Return words of `w` from successive occurrences in a certified prefix.
/// The segment before the first occurrence is not a return word.
pub fn return_set(src: &WordSource, w: &Word) -> Result<ReturnSet> {
    let mut len = INITIAL_SCAN.max(64 * (w.len() + 1));
    let mut checked_membership = false;
    loop {
        let prefix = scan_prefix(src, len)?;
        let mut c = Collector::default();
        for i in occurrences(&prefix, w) {
            c.visit(&prefix, i, w.len());
        }
        if c.stable(len) {
            return Ok(c.finish(&prefix, w.clone(), len));
        }
        if c.count < 2 && !checked_membership {
            let table = build_factor_table(src, w.len().max(1))?;
            if !table.contains(w) {
                return Err(Error::NotAFactor(src.alphabet().render(w)));
            }
            checked_membership = true;
        }
        if 2 * len > PREFIX_GUARD {
            return Err(Error::Stabilization { factor: src.alphabet().render(w), prefix_len: len });
        }
        len *= 2;
    }
}

/// Return sets of every factor of length `n` in one sweep per prefix length.
/// `start_len` is a hint for the first prefix length; the length actually
/// used is returned alongside.
pub fn return_sets_of_length(
    src: &WordSource,
    table: &FactorTable,
    n: usize,
    start_len: usize,
) -> Result<(Vec<ReturnSet>, usize)> {
    let factors = table.factors(n)?;
    let k = src.alphabet().len();
    let mut len = start_len.max(INITIAL_SCAN).max(64 * (n + 1));
    loop {
        let prefix = scan_prefix(src, len)?;
        let mut windows = Windows::empty_word(prefix.len());
        for _ in 0..n {
            windows = windows.extend(&prefix, k).expect("prefix shorter than factor length");
        }
        let mut collectors: Vec<Collector> = (0..windows.count()).map(|_| Collector::default()).collect();
        for (i, &id) in windows.ids.iter().enumerate() {
            collectors[id as usize].visit(&prefix, i, n);
        }
        let mut by_word: Vec<(Word, usize)> =
            (0..windows.count() as u32).map(|id| (windows.word(&prefix, id), id as usize)).collect();
        by_word.sort();

        let mut unstable = None;
        let mut out = Vec::with_capacity(factors.len());
        for w in factors {
            match by_word.binary_search_by(|(x, _)| x.cmp(w)) {
                Ok(j) if collectors[by_word[j].1].stable(len) => {
                    out.push(collectors[by_word[j].1].finish(&prefix, w.clone(), len));
                }
                _ => {
                    unstable = Some(w.clone());
                    break;
                }
            }
        }
        match unstable {
            None => return Ok((out, len)),
            Some(w) if 2 * len > PREFIX_GUARD => {
                return Err(Error::Stabilization { factor: src.alphabet().render(&w), prefix_len: len })
            }
            Some(_) => len *= 2,
        }
    }
}

/// `R(w) = R(wb)` when `b` is the only right extension of `w`.
pub fn reduce_right(table: &mut GrowingTable, w: &Word) -> Result<ReturnSet> {
    let right = table.right_extensions(w)?;
    let b = right.only().ok_or_else(|| {
        Error::ReductionNotApplicable(format!(
            "{} has {} right extensions",
            table.source().alphabet().render(w),
            right.len()
        ))
    })?;
    let mut set = return_set(table.source(), &w.push_back(b))?;
    set.factor = w.clone();
    Ok(set)
}

/// `R(aw) = a R(w) a⁻¹` when `a` is the only left extension of `w`.
pub fn conjugate_left(table: &mut GrowingTable, a: Letter, w: &Word) -> Result<ReturnSet> {
    let alphabet = table.source().alphabet().clone();
    let left = table.left_extensions(w)?;
    if left.only() != Some(a) {
        return Err(Error::ReductionNotApplicable(format!(
            "left extensions of {} are not {{{}}}",
            w.display(&alphabet),
            alphabet.symbol(a)
        )));
    }
    let base = return_set(table.source(), w)?;
    let mut returns = Vec::with_capacity(base.len());
    for v in &base.returns {
        if v.last() != Some(&a) {
            return Err(Error::TheoremViolation(format!(
                "return word {} of {} does not end with {}",
                v.display(&alphabet),
                w.display(&alphabet),
                alphabet.symbol(a)
            )));
        }
        returns.push(Word::from(&v[..v.len() - 1]).push_front(a));
    }
    Ok(ReturnSet { factor: w.push_front(a), returns, ..base })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrieNode {
    pub label: Word,
    pub children: Vec<usize>,
    /// `#E_r(label)`; zero for leaves, which are not expanded.
    pub right_extensions: usize,
    pub leaf: bool,
}

/// The tree of return words: the root is `w`, a node `v` gets a child `vb`
/// per right extension `b`, and expansion stops once `w` is a proper suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnTrie {
    pub root: Word,
    pub nodes: Vec<TrieNode>,
    pub depth_cap: usize,
}

pub fn default_depth_cap(w: &[Letter]) -> usize {
    64 * w.len() + 256
}

pub fn build_return_trie(table: &mut GrowingTable, w: &Word, depth_cap: usize) -> Result<ReturnTrie> {
    let alphabet = table.source().alphabet().clone();
    if depth_cap < w.len() {
        return Err(Error::Parameter(format!("depth cap {depth_cap} shorter than the factor")));
    }
    if !table.contains(w)? {
        return Err(Error::NotAFactor(alphabet.render(w)));
    }
    let mut nodes = vec![TrieNode { label: w.clone(), children: Vec::new(), right_extensions: 0, leaf: false }];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let v = nodes[i].label.clone();
        if v.len() > w.len() && v.ends_with(w) {
            nodes[i].leaf = true;
            continue;
        }
        if v.len() + 1 > depth_cap {
            return Err(Error::DepthCap { factor: alphabet.render(w), cap: depth_cap });
        }
        let right = table.right_extensions(&v)?;
        if right.is_empty() {
            return Err(Error::NotAFactor(alphabet.render(&v)));
        }
        nodes[i].right_extensions = right.len();
        for b in right.iter() {
            let j = nodes.len();
            nodes.push(TrieNode { label: v.push_back(b), children: Vec::new(), right_extensions: 0, leaf: false });
            nodes[i].children.push(j);
            queue.push_back(j);
        }
    }
    Ok(ReturnTrie { root: w.clone(), nodes, depth_cap })
}

impl ReturnTrie {
    pub fn leaves(&self) -> impl Iterator<Item = &TrieNode> {
        self.nodes.iter().filter(|n| n.leaf)
    }

    pub fn internal(&self) -> impl Iterator<Item = &TrieNode> {
        self.nodes.iter().filter(|n| !n.leaf)
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().count()
    }

    /// Leaf labels, i.e. the complete return words, in lexicographic order.
    pub fn complete_returns(&self) -> BTreeSet<Word> {
        self.leaves().map(|n| n.label.clone()).collect()
    }

    /// Leaf labels with the trailing copy of the root removed.
    pub fn returns(&self) -> BTreeSet<Word> {
        let k = self.root.len();
        self.leaves().map(|n| Word::from(&n.label[..n.label.len() - k])).collect()
    }

    /// `#leaves = 1 + Σ_{internal v} (#E_r(v) − 1)`.
    pub fn leaf_identity(&self) -> bool {
        let branching: usize = self.internal().map(|n| n.right_extensions - 1).sum();
        self.leaf_count() == 1 + branching
    }

    pub fn to_dot(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        writeln!(out, "digraph return_trie {{").unwrap();
        writeln!(out, "  rankdir=LR;").unwrap();
        writeln!(out, "  node [shape=circle];").unwrap();
        for (i, node) in self.nodes.iter().enumerate() {
            let shape = if node.leaf { ", shape=doublecircle" } else { "" };
            writeln!(out, "  n{i} [label=\"{}\"{shape}];", node.label.display(alphabet)).unwrap();
        }
        for (i, node) in self.nodes.iter().enumerate() {
            for &j in &node.children {
                writeln!(out, "  n{i} -> n{j};").unwrap();
            }
        }
        writeln!(out, "}}").unwrap();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::builtin;

    fn w(src: &WordSource, s: &str) -> Word {
        src.alphabet().parse(s).unwrap()
    }

    fn rendered(src: &WordSource, set: impl IntoIterator<Item = Word>) -> BTreeSet<String> {
        set.into_iter().map(|v| src.alphabet().render(&v)).collect()
    }

    fn strs(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn occurrence_examples() {
        let p = |s: &str| s.bytes().map(|b| b - b'0').collect::<Vec<_>>();
        assert_eq!(occurrences(&p("010010"), &p("010")), vec![0, 3]);
        assert_eq!(occurrences(&p("0101"), &p("01")), vec![0, 2]);
        assert_eq!(occurrences(&p("000"), &p("00")), vec![0, 1]);
        assert_eq!(occurrences(&p("011"), &[]), vec![0, 1, 2, 3]);
        assert_eq!(occurrences(&p("011"), &p("2")), Vec::<usize>::new());
    }

    #[test]
    fn thue_morse_01() {
        let src = builtin("thue_morse").unwrap();
        let rs = return_set(&src, &w(&src, "01")).unwrap();
        assert_eq!(rendered(&src, rs.returns.clone()), strs(&["01", "010", "011", "0110"]));
        assert_eq!(rendered(&src, rs.complete_returns()), strs(&["0101", "01001", "01101", "011001"]));
        assert!(rs.certificate.stable_from <= rs.certificate.prefix_len / 4);
    }

    #[test]
    fn r4_bispecial_return_sets() {
        let src = builtin("r4_example").unwrap();
        let rs = return_set(&src, &w(&src, "1")).unwrap();
        assert_eq!(rendered(&src, rs.returns), strs(&["13", "1323", "1424", "142324"]));
        let rs = return_set(&src, &w(&src, "2413")).unwrap();
        assert_eq!(rendered(&src, rs.returns), strs(&["241314", "24131423", "24132314", "2413231423"]));
    }

    #[test]
    fn not_a_factor() {
        let src = builtin("r4_example").unwrap();
        assert!(matches!(return_set(&src, &w(&src, "11")), Err(Error::NotAFactor(_))));
    }

    #[test]
    fn periodic_word_has_one_return() {
        let a = Alphabet::digits(2).unwrap();
        let src = WordSource::eventually_periodic(a.clone(), Word::empty(), a.parse("01").unwrap()).unwrap();
        let rs = return_set(&src, &a.parse("0").unwrap()).unwrap();
        assert!(rs.eventually_periodic());
    }

    #[test]
    fn empty_word_returns_letters() {
        let src = builtin("fibonacci").unwrap();
        let rs = return_set(&src, &Word::empty()).unwrap();
        assert_eq!(rendered(&src, rs.returns), strs(&["0", "1"]));
    }

    #[test]
    fn thue_morse_01_trie() {
        let src = builtin("thue_morse").unwrap();
        let mut g = GrowingTable::build(&src, 4).unwrap();
        let root = w(&src, "01");
        let trie = build_return_trie(&mut g, &root, default_depth_cap(&root)).unwrap();
        let internal: BTreeSet<String> = trie.internal().map(|n| src.alphabet().render(&n.label)).collect();
        assert_eq!(internal, strs(&["01", "010", "011", "0100", "0110", "01100"]));
        assert_eq!(rendered(&src, trie.complete_returns()), strs(&["0101", "01001", "01101", "011001"]));
        assert!(trie.leaf_identity());
        let dot = trie.to_dot(src.alphabet());
        assert_eq!(dot.matches("doublecircle").count(), 4);
        assert_eq!(dot.matches("->").count(), 9);
    }

    #[test]
    fn depth_cap_is_an_error() {
        let src = builtin("r4_example").unwrap();
        let mut g = GrowingTable::build(&src, 4).unwrap();
        let root = w(&src, "23");
        assert!(matches!(build_return_trie(&mut g, &root, 5), Err(Error::DepthCap { .. })));
    }

    #[test]
    fn reductions() {
        let src = builtin("fibonacci").unwrap();
        let mut g = GrowingTable::build(&src, 6).unwrap();
        let zz = w(&src, "00");
        let reduced = reduce_right(&mut g, &zz).unwrap();
        assert_eq!(reduced.as_set(), return_set(&src, &zz).unwrap().as_set());
        let one = w(&src, "1");
        let conj = conjugate_left(&mut g, 0, &one).unwrap();
        assert_eq!(conj.factor, w(&src, "01"));
        assert_eq!(conj.as_set(), return_set(&src, &w(&src, "01")).unwrap().as_set());
        assert!(matches!(reduce_right(&mut g, &w(&src, "0")), Err(Error::ReductionNotApplicable(_))));
        assert!(matches!(conjugate_left(&mut g, 1, &one), Err(Error::ReductionNotApplicable(_))));
    }

    #[test]
    fn bulk_matches_single() {
        let src = builtin("tribonacci").unwrap();
        let table = build_factor_table(&src, 6).unwrap();
        for n in 0..=6 {
            let (sets, _) = return_sets_of_length(&src, &table, n, 0).unwrap();
            assert_eq!(sets.len(), table.complexity(n).unwrap());
            for s in sets {
                assert_eq!(s.as_set(), return_set(&src, &s.factor).unwrap().as_set());
            }
        }
    }
}
