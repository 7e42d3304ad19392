//! Bounded verification of property R_m: every factor has exactly `m`
//! return words.
//!
//! Two methods are offered. The full scan computes the return set of every
//! factor up to the bound directly. The bispecial reduction moves each factor
//! to a bispecial factor using `R(w) = R(wb)` (unique right extension `b`)
//! and `R(aw) = a R(w) a⁻¹` (unique left extension `a`), and only scans the
//! bispecial factors reached that way.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factors::{build_factor_table, FactorClass, FactorTable, GrowingTable, SaturationCertificate};
use crate::returns::{return_set, return_sets_of_length, ReturnSet};
use crate::source::WordSource;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FullScan,
    BispecialReduction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RmStatus {
    Holds,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub factor: Word,
    pub return_count: usize,
    /// Return words in lexicographic order.
    pub returns: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthSummary {
    pub n: usize,
    /// Bispecial factors of this length with their number of return words.
    pub bispecial: Vec<(Word, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmVerdict {
    pub m: usize,
    pub max_length: usize,
    pub status: RmStatus,
    /// Shortest, then lexicographically least, factor without `m` return words.
    pub witness: Option<Witness>,
    /// Some factor has a single return word.
    pub eventually_periodic: bool,
    pub per_length: Vec<LengthSummary>,
    pub method: Method,
    pub table_certificate: SaturationCertificate,
    /// Longest prefix scanned for return words.
    pub scan_len: usize,
}

impl RmVerdict {
    pub fn holds(&self) -> bool {
        self.status == RmStatus::Holds
    }
}

/// Return words of every factor of length `0..=max_len`, per length.
struct Counts {
    per_length: Vec<Vec<(Word, BTreeSet<Word>)>>,
    scan_len: usize,
}

fn full_scan(src: &WordSource, table: &FactorTable, max_len: usize) -> Result<Counts> {
    let mut per_length = Vec::with_capacity(max_len + 1);
    let mut len = 0;
    let mut scan_len = 0;
    for n in 0..=max_len {
        let (sets, used) = return_sets_of_length(src, table, n, len)?;
        len = used;
        scan_len = scan_len.max(used);
        per_length.push(
            sets.into_iter()
                .map(|s| {
                    let set = s.as_set();
                    (s.factor, set)
                })
                .collect(),
        );
    }
    Ok(Counts { per_length, scan_len })
}

enum Step {
    Right,
    Left(Letter),
}

/// Extends `w` to a bispecial factor. `None` when the extension exceeds `cap`.
fn bispecial_closure(g: &mut GrowingTable, w: &Word, cap: usize) -> Result<Option<(Word, Vec<Step>)>> {
    let mut v = w.clone();
    let mut steps = Vec::new();
    loop {
        if v.len() > cap {
            return Ok(None);
        }
        let right = g.right_extensions(&v)?;
        let left = g.left_extensions(&v)?;
        if let Some(b) = right.only() {
            v = v.push_back(b);
            steps.push(Step::Right);
        } else if let Some(a) = left.only() {
            v = v.push_front(a);
            steps.push(Step::Left(a));
        } else {
            return Ok(Some((v, steps)));
        }
    }
}

/// Moves return words of the closure back to the original factor.
fn transport_back(returns: &BTreeSet<Word>, steps: &[Step]) -> BTreeSet<Word> {
    let mut current = returns.clone();
    for step in steps.iter().rev() {
        if let Step::Left(a) = step {
            // R(w) = a⁻¹ R(aw) a
            current = current
                .into_iter()
                .map(|v| {
                    debug_assert_eq!(v.first(), Some(a));
                    Word::from(&v[1..]).push_back(*a)
                })
                .collect();
        }
    }
    current
}

fn bispecial_scan(src: &WordSource, table: &FactorTable, max_len: usize) -> Result<Counts> {
    let cap = 64 * max_len + 256;
    let mut g = GrowingTable::new(src, table.clone());
    let mut memo: HashMap<Word, ReturnSet> = HashMap::new();
    let mut scan_len = 0;
    let mut per_length = Vec::with_capacity(max_len + 1);
    for n in 0..=max_len {
        let mut row = Vec::new();
        for w in table.factors(n)? {
            let set = match bispecial_closure(&mut g, w, cap)? {
                Some((ancestor, steps)) => {
                    if !memo.contains_key(&ancestor) {
                        let rs = return_set(src, &ancestor)?;
                        memo.insert(ancestor.clone(), rs);
                    }
                    let rs = &memo[&ancestor];
                    scan_len = scan_len.max(rs.certificate.prefix_len);
                    transport_back(&rs.as_set(), &steps)
                }
                None => {
                    let rs = return_set(src, w)?;
                    scan_len = scan_len.max(rs.certificate.prefix_len);
                    rs.as_set()
                }
            };
            row.push((w.clone(), set));
        }
        per_length.push(row);
    }
    Ok(Counts { per_length, scan_len })
}

fn counts(src: &WordSource, table: &FactorTable, max_len: usize, method: Method) -> Result<Counts> {
    match method {
        Method::FullScan => full_scan(src, table, max_len),
        Method::BispecialReduction => bispecial_scan(src, table, max_len),
    }
}

fn verdict(table: &FactorTable, m: usize, max_len: usize, method: Method, c: &Counts) -> Result<RmVerdict> {
    let mut witness = None;
    let mut eventually_periodic = false;
    let mut per_length = Vec::with_capacity(max_len + 1);
    for (n, row) in c.per_length.iter().enumerate() {
        let mut bispecial = Vec::new();
        for (w, set) in row {
            if set.len() == 1 {
                eventually_periodic = true;
            }
            if witness.is_none() && set.len() != m {
                witness = Some(Witness {
                    factor: w.clone(),
                    return_count: set.len(),
                    returns: set.iter().cloned().collect(),
                });
            }
            if table.bilateral_order(w)?.class.is_bispecial() {
                bispecial.push((w.clone(), set.len()));
            }
        }
        per_length.push(LengthSummary { n, bispecial });
    }
    Ok(RmVerdict {
        m,
        max_length: max_len,
        status: if witness.is_none() { RmStatus::Holds } else { RmStatus::Fails },
        witness,
        eventually_periodic,
        per_length,
        method,
        table_certificate: table.certificate(),
        scan_len: c.scan_len,
    })
}

/// Checks that every factor of length at most `max_len` has exactly `m` return words.
pub fn check_rm(src: &WordSource, m: usize, max_len: usize, method: Method) -> Result<RmVerdict> {
    let table = build_factor_table(src, max_len.max(1))?;
    let c = counts(src, &table, max_len, method)?;
    verdict(&table, m, max_len, method, &c)
}

/// For every `n <= max_len`: a unique left special factor of length `n` with
/// `m` left extensions, or a unique right special one with `m` right extensions.
pub fn check_unique_special_criterion(table: &FactorTable, m: usize, max_len: usize) -> Result<bool> {
    for n in 0..=max_len {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for w in table.factors(n)? {
            let l = table.left_extensions(w)?.len();
            let r = table.right_extensions(w)?.len();
            if l >= 2 {
                left.push(l);
            }
            if r >= 2 {
                right.push(r);
            }
        }
        if !(left == [m] || right == [m]) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityCriterionReport {
    pub m: usize,
    pub max_length: usize,
    pub no_weak_bispecial: bool,
    pub no_maximal_right_special: bool,
    /// `C(n) = (m-1)n + 1` for all `n <= max_length`.
    pub complexity_matches: bool,
    pub rm_holds: bool,
    /// `#R(w) >= 1 + ΔC(|w|)` was checked (no weak bispecial factor).
    pub lower_bound_checked: bool,
    /// `#R(w) <= m` was checked (additionally `ΔC(n) < m`).
    pub upper_bound_checked: bool,
}

/// Evaluates the hypotheses and conclusions linking complexity, weak
/// bispecial factors and R_m up to `max_len`. Any contradiction with the
/// known implications is returned as [`Error::TheoremViolation`].
pub fn check_complexity_criterion(src: &WordSource, m: usize, max_len: usize) -> Result<ComplexityCriterionReport> {
    let table = build_factor_table(src, max_len.max(1))?;
    let alphabet = src.alphabet();

    let mut has_weak = false;
    let mut has_max_right = false;
    for n in 0..=max_len {
        for r in table.reports(n)? {
            has_weak |= r.class == FactorClass::WeakBispecial;
            has_max_right |= r.maximal_right_special;
        }
    }
    let complexity_matches = (0..=max_len).all(|n| table.complexity(n).ok() == Some((m - 1) * n + 1));
    let deltas: Vec<i64> = (0..=max_len).map(|n| table.delta_complexity(n)).collect::<Result<_>>()?;

    if (alphabet.len() == 2 || deltas.iter().all(|&d| d == 2)) && has_weak != has_max_right {
        return Err(Error::TheoremViolation(format!(
            "weak bispecial ({has_weak}) and maximal right special ({has_max_right}) disagree on {}",
            src.name()
        )));
    }

    let c = full_scan(src, &table, max_len)?;
    let v = verdict(&table, m, max_len, Method::FullScan, &c)?;
    let rm_holds = v.holds();

    let mut lower_bound_checked = false;
    let mut upper_bound_checked = false;
    if !has_weak {
        if complexity_matches != rm_holds {
            return Err(Error::TheoremViolation(format!(
                "{}: no weak bispecial factor, C(n)=(m-1)n+1 is {complexity_matches} but R_{m} is {rm_holds}",
                src.name()
            )));
        }
        let upper = deltas.iter().all(|&d| d < m as i64);
        for (n, row) in c.per_length.iter().enumerate() {
            for (w, set) in row {
                if (set.len() as i64) < 1 + deltas[n] {
                    return Err(Error::TheoremViolation(format!(
                        "#R({}) = {} < 1 + ΔC({n})",
                        w.display(alphabet),
                        set.len()
                    )));
                }
                if upper && set.len() > m {
                    return Err(Error::TheoremViolation(format!("#R({}) = {} > {m}", w.display(alphabet), set.len())));
                }
            }
        }
        lower_bound_checked = true;
        upper_bound_checked = upper;
    }

    Ok(ComplexityCriterionReport {
        m,
        max_length: max_len,
        no_weak_bispecial: !has_weak,
        no_maximal_right_special: !has_max_right,
        complexity_matches,
        rm_holds,
        lower_bound_checked,
        upper_bound_checked,
    })
}

/// Factors `w1, w2` adjacent to a weak bispecial factor with
/// `R(w1) = {v1v3, v1v4, v2v3, v2v4}` and `R(w2) = {v3v1, v3v2, v4v1, v4v2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductWitness {
    pub w1: Word,
    pub w2: Word,
    pub v: [Word; 4],
}

/// Searches for the product structure of return sets around a weak bispecial
/// factor of a word already checked for R_4 up to `rm_bound`.
pub fn check_product_structure(src: &WordSource, w: &Word, rm_bound: usize) -> Result<Option<ProductWitness>> {
    let alphabet = src.alphabet();
    let rm = check_rm(src, 4, rm_bound, Method::FullScan)?;
    if !rm.holds() {
        return Err(Error::Precondition(format!("{} does not satisfy R_4 up to length {rm_bound}", src.name())));
    }
    let table = build_factor_table(src, rm_bound.max(w.len() + 1))?;
    let report = table.bilateral_order(w)?;
    if report.class != FactorClass::WeakBispecial {
        return Err(Error::Precondition(format!("{} is not weak bispecial", w.display(alphabet))));
    }

    let mut candidates: Vec<Word> = report.left.iter().map(|a| w.push_front(a)).collect();
    candidates.extend(report.right.iter().map(|b| w.push_back(b)));
    let sets: Vec<BTreeSet<Word>> =
        candidates.iter().map(|c| return_set(src, c).map(|r| r.as_set())).collect::<Result<_>>()?;

    for (i, w1) in candidates.iter().enumerate() {
        for (j, w2) in candidates.iter().enumerate() {
            if i == j || sets[i].len() != 4 || sets[j].len() != 4 {
                continue;
            }
            if let Some(v) = factorize(&sets[i], &sets[j]) {
                return Ok(Some(ProductWitness { w1: w1.clone(), w2: w2.clone(), v }));
            }
        }
    }
    Ok(None)
}

fn factorize(r1: &BTreeSet<Word>, r2: &BTreeSet<Word>) -> Option<[Word; 4]> {
    // Relabelling v1 <-> v2 or v3 <-> v4 preserves both equations, so the
    // least element of r1 can be taken to be v1 v3.
    let x0 = r1.iter().next()?;
    for split in 1..x0.len() {
        let v1 = Word::from(&x0[..split]);
        let v3 = Word::from(&x0[split..]);
        for y in r1.iter().filter(|y| *y != x0 && y.len() > v1.len() && y.starts_with(&v1)) {
            let v4 = Word::from(&y[v1.len()..]);
            for z in r1.iter().filter(|z| *z != x0 && z.len() > v3.len() && z.ends_with(&v3)) {
                let v2 = Word::from(&z[..z.len() - v3.len()]);
                if v2 == v1 || v4 == v3 {
                    continue;
                }
                let first: BTreeSet<Word> = [v1.concat(&v3), v1.concat(&v4), v2.concat(&v3), v2.concat(&v4)].into();
                let second: BTreeSet<Word> = [v3.concat(&v1), v3.concat(&v2), v4.concat(&v1), v4.concat(&v2)].into();
                if &first == r1 && &second == r2 {
                    return Some([v1, v2.clone(), v3, v4]);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::builtin;
    use crate::word::Alphabet;

    #[test]
    fn fibonacci_r2() {
        let src = builtin("fibonacci").unwrap();
        let v = check_rm(&src, 2, 20, Method::FullScan).unwrap();
        assert!(v.holds());
        let b = check_rm(&src, 2, 20, Method::BispecialReduction).unwrap();
        assert!(b.holds());
        assert_eq!(v.per_length, b.per_length);
    }

    #[test]
    fn wrong_m_fails_on_empty_word() {
        let src = builtin("fibonacci").unwrap();
        let v = check_rm(&src, 3, 5, Method::FullScan).unwrap();
        let w = v.witness.unwrap();
        assert!(w.factor.is_empty());
        assert_eq!(w.return_count, 2);
    }

    #[test]
    fn periodic_fails_both_methods() {
        let a = Alphabet::digits(2).unwrap();
        let src = WordSource::eventually_periodic(a.clone(), Word::empty(), a.parse("01").unwrap()).unwrap();
        for method in [Method::FullScan, Method::BispecialReduction] {
            let v = check_rm(&src, 2, 10, method).unwrap();
            assert!(!v.holds());
            let w = v.witness.unwrap();
            assert_eq!(a.render(&w.factor), "0");
            assert_eq!(w.return_count, 1);
            assert!(v.eventually_periodic);
        }
    }

    #[test]
    fn factorize_recognizes_products() {
        let a = Alphabet::digits(4).unwrap();
        let p = |s: &str| a.parse(s).unwrap();
        let (v1, v2, v3, v4) = (p("0"), p("11"), p("2"), p("33"));
        let r1: BTreeSet<Word> = [v1.concat(&v3), v1.concat(&v4), v2.concat(&v3), v2.concat(&v4)].into();
        let r2: BTreeSet<Word> = [v3.concat(&v1), v3.concat(&v2), v4.concat(&v1), v4.concat(&v2)].into();
        let v = factorize(&r1, &r2).unwrap();
        assert_eq!(v, [v1, v2, v3, v4]);
        let other: BTreeSet<Word> = [p("01"), p("02"), p("03"), p("12")].into();
        assert!(factorize(&other, &r2).is_none());
    }

    #[test]
    fn product_structure_precondition() {
        let src = builtin("r4_example").unwrap();
        let w = src.alphabet().parse("13").unwrap();
        assert!(matches!(check_product_structure(&src, &w, 6), Err(Error::Precondition(_))));
        let fib = builtin("fibonacci").unwrap();
        assert!(matches!(check_product_structure(&fib, &Word::empty(), 4), Err(Error::Precondition(_))));
    }
}
