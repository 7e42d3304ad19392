//! Factor languages with extension data, complexity and bilateral orders.
//!
//! A [`FactorTable`] of max length `N` holds the factor sets of lengths
//! `0..=N+2`; the two extra lengths supply left/right extensions up to
//! `N+1` and two-sided extensions up to `N`.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scan::factor_levels;
use crate::source::{Prefix, SourceKind, WordSource};
use crate::word::{Alphabet, Letter, LetterSet, Word};

/// Evidence that a finite prefix carries the whole language up to some length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SaturationCertificate {
    /// Longest length whose factor set was compared.
    pub length: usize,
    /// The factor sets of `prefix_len` and `compared_with` letters agreed.
    pub prefix_len: usize,
    pub compared_with: usize,
    /// σ-iterations reaching `prefix_len`, for substitution sources.
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorClass {
    NonSpecial,
    LeftSpecialOnly,
    RightSpecialOnly,
    OrdinaryBispecial,
    WeakBispecial,
    StrongBispecial,
}

impl FactorClass {
    pub fn is_bispecial(self) -> bool {
        matches!(self, Self::OrdinaryBispecial | Self::WeakBispecial | Self::StrongBispecial)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::NonSpecial => "non-special",
            Self::LeftSpecialOnly => "left-special-only",
            Self::RightSpecialOnly => "right-special-only",
            Self::OrdinaryBispecial => "ordinary-bispecial",
            Self::WeakBispecial => "weak-bispecial",
            Self::StrongBispecial => "strong-bispecial",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilateralReport {
    pub factor: Word,
    pub left: LetterSet,
    pub right: LetterSet,
    /// Number of two-sided extensions `awb`.
    pub pairs: usize,
    pub bilateral_order: i64,
    pub class: FactorClass,
    pub maximal_right_special: bool,
    pub maximal_left_special: bool,
}

#[derive(Debug, Clone)]
struct Level {
    factors: Vec<Word>,
    index: HashMap<Word, usize>,
    occurrences: Vec<usize>,
    left: Vec<LetterSet>,
    right: Vec<LetterSet>,
    /// Bit `a * k + b` set when `a w b` is a factor.
    pairs: Vec<u128>,
}

#[derive(Debug, Clone)]
pub struct FactorTable {
    alphabet: Alphabet,
    max_length: usize,
    levels: Vec<Level>,
    prefix: Prefix,
    certificate: SaturationCertificate,
}

pub fn build_factor_table(src: &WordSource, max_length: usize) -> Result<FactorTable> {
    if max_length == 0 {
        return Err(Error::Parameter("max length must be at least 1".into()));
    }
    let need = max_length + 2;
    let k = src.alphabet().len();
    let saturation = |len: usize| Error::Saturation { length: need, prefix_len: len };

    let (short, long) = match src.kind() {
        SourceKind::SubstitutionFixedPoint(_) => {
            let c = src.checkpoint(4 * need + 1).map_err(|_| saturation(4 * need + 1))?.len();
            (c, src.next_checkpoint(c).map_err(|_| saturation(c))?)
        }
        _ => {
            let p = (4 * need + 1).max(64);
            (p, 2 * p)
        }
    };
    let (mut short, mut long) = (short, long);
    loop {
        let prefix = src.checkpoint(long).map_err(|_| saturation(long))?;
        let prefix = Prefix::truncate(prefix, long);
        let raw = factor_levels(&prefix, k, need);
        if let Some(bad) = raw.iter().position(|l| l.last_first_end > short) {
            if long > crate::substitution::PREFIX_GUARD / 2 {
                return Err(Error::Saturation { length: bad, prefix_len: long });
            }
            short = long;
            long = match src.kind() {
                SourceKind::SubstitutionFixedPoint(_) => src.next_checkpoint(long).map_err(|_| saturation(long))?,
                _ => 2 * long,
            };
            continue;
        }
        for n in 0..=need {
            src.record_saturation(n, short);
        }
        let certificate = SaturationCertificate {
            length: need,
            prefix_len: long,
            compared_with: short,
            iterations: src.substitution().and_then(|_| src.steps_for(long)),
        };
        return Ok(FactorTable::assemble(src.alphabet().clone(), max_length, raw, prefix, certificate));
    }
}

impl FactorTable {
    fn assemble(
        alphabet: Alphabet,
        max_length: usize,
        raw: Vec<crate::scan::FactorLevel>,
        prefix: Prefix,
        certificate: SaturationCertificate,
    ) -> Self {
        let k = alphabet.len();
        let mut levels: Vec<Level> = raw
            .into_iter()
            .map(|l| {
                let index = l.factors.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
                let c = l.factors.len();
                Level {
                    factors: l.factors,
                    index,
                    occurrences: l.occurrences,
                    left: vec![LetterSet::default(); c],
                    right: vec![LetterSet::default(); c],
                    pairs: vec![0; c],
                }
            })
            .collect();
        for n in 0..levels.len() - 1 {
            let (lower, upper) = levels.split_at_mut(n + 1);
            let (this, next) = (&mut lower[n], &upper[0]);
            for v in &next.factors {
                // v = a w = w' b
                let a = v[0];
                let b = v[n];
                let tail = this.index[&v[1..]];
                this.left[tail].insert(a);
                let head = this.index[&v[..n]];
                this.right[head].insert(b);
            }
        }
        for n in 0..levels.len().saturating_sub(2) {
            let (lower, upper) = levels.split_at_mut(n + 1);
            let (this, next2) = (&mut lower[n], &upper[1]);
            for v in &next2.factors {
                let mid = this.index[&v[1..=n]];
                this.pairs[mid] |= 1u128 << (v[0] as usize * k + v[n + 1] as usize);
            }
        }
        FactorTable { alphabet, max_length, levels, prefix, certificate }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn certificate(&self) -> SaturationCertificate {
        self.certificate
    }

    /// The certified prefix the table was read from.
    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn factors(&self, n: usize) -> Result<&[Word]> {
        self.level(n, self.max_length + 2).map(|l| l.factors.as_slice())
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        self.levels.get(w.len()).is_some_and(|l| l.index.contains_key(w))
    }

    /// Occurrences of `w` in the certified prefix.
    pub fn occurrence_count(&self, w: &[Letter]) -> Result<usize> {
        let (level, i) = self.locate(w, self.max_length + 2)?;
        Ok(level.occurrences[i])
    }

    pub fn complexity(&self, n: usize) -> Result<usize> {
        self.factors(n).map(|f| f.len())
    }

    pub fn delta_complexity(&self, n: usize) -> Result<i64> {
        if n > self.max_length + 1 {
            return Err(Error::OutOfRange { n, max: self.max_length + 1 });
        }
        Ok(self.complexity(n + 1)? as i64 - self.complexity(n)? as i64)
    }

    pub fn left_extensions(&self, w: &[Letter]) -> Result<LetterSet> {
        let (level, i) = self.locate(w, self.max_length + 1)?;
        Ok(level.left[i])
    }

    pub fn right_extensions(&self, w: &[Letter]) -> Result<LetterSet> {
        let (level, i) = self.locate(w, self.max_length + 1)?;
        Ok(level.right[i])
    }

    /// Two-sided extensions `(a, b)` with `a w b` a factor.
    pub fn two_sided_extensions(&self, w: &[Letter]) -> Result<Vec<(Letter, Letter)>> {
        let (level, i) = self.locate(w, self.max_length)?;
        let k = self.alphabet.len();
        let bits = level.pairs[i];
        Ok((0..k * k).filter(|&s| bits & (1u128 << s) != 0).map(|s| ((s / k) as Letter, (s % k) as Letter)).collect())
    }

    pub fn bilateral_order(&self, w: &[Letter]) -> Result<BilateralReport> {
        let (level, i) = self.locate(w, self.max_length)?;
        let left = level.left[i];
        let right = level.right[i];
        let pairs = level.pairs[i].count_ones() as usize;
        let direct = pairs as i64 - left.len() as i64 - right.len() as i64 + 1;

        let left_special = left.len() >= 2;
        let right_special = right.len() >= 2;
        let bilateral_order = if left_special && right_special {
            direct
        } else {
            debug_assert_eq!(direct, 0, "one-sided special factor with nonzero bilateral order");
            0
        };

        // Σ_a (#E_r(aw) − 1) < #E_r(w) − 1 and its mirror image.
        let mut right_branching = 0i64;
        for a in left.iter() {
            right_branching += self.right_extensions(&Word::from(w).push_front(a))?.len() as i64 - 1;
        }
        let mut left_branching = 0i64;
        for b in right.iter() {
            left_branching += self.left_extensions(&Word::from(w).push_back(b))?.len() as i64 - 1;
        }
        let weak = bilateral_order < 0;
        let via_right = right_branching < right.len() as i64 - 1;
        let via_left = left_branching < left.len() as i64 - 1;
        if weak != via_right || weak != via_left {
            return Err(Error::TheoremViolation(format!(
                "weak-bispecial tests disagree for {}",
                self.alphabet.render(w)
            )));
        }

        let class = match (left_special, right_special) {
            (false, false) => FactorClass::NonSpecial,
            (true, false) => FactorClass::LeftSpecialOnly,
            (false, true) => FactorClass::RightSpecialOnly,
            (true, true) => match bilateral_order.signum() {
                0 => FactorClass::OrdinaryBispecial,
                -1 => FactorClass::WeakBispecial,
                _ => FactorClass::StrongBispecial,
            },
        };
        Ok(BilateralReport {
            factor: Word::from(w),
            left,
            right,
            pairs,
            bilateral_order,
            class,
            maximal_right_special: right_special && right_branching == 0,
            maximal_left_special: left_special && left_branching == 0,
        })
    }

    /// `ΔC(n+1) − ΔC(n) = Σ_{w ∈ L_n} B(w)`.
    pub fn second_difference_identity(&self, n: usize) -> Result<bool> {
        if n > self.max_length {
            return Err(Error::OutOfRange { n, max: self.max_length });
        }
        let lhs = self.delta_complexity(n + 1)? - self.delta_complexity(n)?;
        let mut rhs = 0;
        for w in self.factors(n)? {
            rhs += self.bilateral_order(w)?.bilateral_order;
        }
        Ok(lhs == rhs)
    }

    /// `#{(a,b) : awb ∈ L} = Σ_{a ∈ E_l(w)} #E_r(aw) = Σ_{b ∈ E_r(w)} #E_l(wb)`.
    pub fn kirchhoff_identity(&self, w: &[Letter]) -> Result<bool> {
        let pairs = self.two_sided_extensions(w)?.len();
        let mut via_left = 0;
        for a in self.left_extensions(w)?.iter() {
            let mut aw = Vec::with_capacity(w.len() + 1);
            aw.push(a);
            aw.extend_from_slice(w);
            via_left += self.right_extensions(&aw)?.len();
        }
        let mut via_right = 0;
        for b in self.right_extensions(w)?.iter() {
            let mut wb = w.to_vec();
            wb.push(b);
            via_right += self.left_extensions(&wb)?.len();
        }
        Ok(pairs == via_left && pairs == via_right)
    }

    /// Reports for every left or right special factor of length `n`, in lexicographic order.
    pub fn special_factors(&self, n: usize) -> Result<Vec<BilateralReport>> {
        if n > self.max_length {
            return Err(Error::OutOfRange { n, max: self.max_length });
        }
        self.factors(n)?
            .iter()
            .map(|w| self.bilateral_order(w))
            .filter(|r| r.as_ref().map_or(true, |r| r.class != FactorClass::NonSpecial))
            .collect()
    }

    /// All reports of length `n`.
    pub fn reports(&self, n: usize) -> Result<Vec<BilateralReport>> {
        if n > self.max_length {
            return Err(Error::OutOfRange { n, max: self.max_length });
        }
        self.factors(n)?.iter().map(|w| self.bilateral_order(w)).collect()
    }

    fn level(&self, n: usize, max: usize) -> Result<&Level> {
        if n > max {
            return Err(Error::OutOfRange { n, max });
        }
        Ok(&self.levels[n])
    }

    fn locate(&self, w: &[Letter], max: usize) -> Result<(&Level, usize)> {
        let level = self.level(w.len(), max)?;
        let i = level.index.get(w).copied().ok_or_else(|| Error::NotAFactor(self.alphabet.render(w)))?;
        Ok((level, i))
    }
}

/// A factor table that is rebuilt with a larger bound whenever a query needs it.
#[derive(Debug)]
pub struct GrowingTable<'a> {
    src: &'a WordSource,
    table: FactorTable,
}

impl<'a> GrowingTable<'a> {
    pub fn new(src: &'a WordSource, table: FactorTable) -> Self {
        Self { src, table }
    }

    pub fn build(src: &'a WordSource, max_length: usize) -> Result<Self> {
        Ok(Self { src, table: build_factor_table(src, max_length)? })
    }

    pub fn source(&self) -> &'a WordSource {
        self.src
    }

    pub fn table(&self) -> &FactorTable {
        &self.table
    }

    /// Makes extension data available for words of length `n`.
    pub fn ensure(&mut self, n: usize) -> Result<&FactorTable> {
        if n > self.table.max_length {
            let target = n.max(2 * self.table.max_length);
            self.table = build_factor_table(self.src, target)?;
        }
        Ok(&self.table)
    }

    pub fn left_extensions(&mut self, w: &[Letter]) -> Result<LetterSet> {
        self.ensure(w.len())?.left_extensions(w)
    }

    pub fn right_extensions(&mut self, w: &[Letter]) -> Result<LetterSet> {
        self.ensure(w.len())?.right_extensions(w)
    }

    pub fn contains(&mut self, w: &[Letter]) -> Result<bool> {
        Ok(self.ensure(w.len())?.contains(w))
    }
}
