//! β-substitutions and β-integers for simple Parry numbers.
//!
//! A coefficient vector `t = (t1, ..., tm)` defines the substitution
//! `k -> 0^{t_{k+1}} (k+1)` for `k < m-1` and `m-1 -> 0^{tm}`, and the
//! polynomial `x^m - t1 x^{m-1} - ... - tm` whose root `β > 1` is the base.
//! Lexicographic comparisons use slice ordering, where a proper prefix is
//! smaller.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rm::{check_rm, Method};
use crate::source::WordSource;
use crate::substitution::{fixed_point_prefix, Substitution};
use crate::word::{Alphabet, Letter, Word, MAX_ALPHABET};

pub const ROOT_TOLERANCE: f64 = 1e-12;
pub const GAP_TOLERANCE: f64 = 1e-9;
pub const TABLE_SEPARATION: f64 = 1e-6;

pub fn validate(t: &[u32]) -> Result<()> {
    let m = t.len();
    if m < 2 {
        return Err(Error::Parameter(format!("need at least 2 coefficients, got {m}")));
    }
    if m > MAX_ALPHABET {
        return Err(Error::Parameter(format!("at most {MAX_ALPHABET} coefficients supported, got {m}")));
    }
    if t[0] == 0 || t[m - 1] == 0 {
        return Err(Error::Parameter("first and last coefficients must be at least 1".into()));
    }
    Ok(())
}

pub fn build_beta_substitution(t: &[u32]) -> Result<Substitution> {
    validate(t)?;
    let m = t.len();
    let alphabet = Alphabet::digits(m)?;
    let images = (0..m)
        .map(|k| {
            let mut v = vec![0 as Letter; t[k] as usize];
            if k + 1 < m {
                v.push((k + 1) as Letter);
            }
            Word(v)
        })
        .collect();
    Substitution::new(alphabet, images, 0)
}

/// The fixed point of the β-substitution, named `beta:t1,...,tm`.
pub fn beta_source(t: &[u32]) -> Result<WordSource> {
    let s = build_beta_substitution(t)?;
    WordSource::from_substitution(format!("beta:{}", join(t)), s)
}

fn join(t: &[u32]) -> String {
    t.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// `t_j...t_m ≺ t_1...t_m` for every `j >= 2`.
pub fn is_parry_simple(t: &[u32]) -> bool {
    (1..t.len()).all(|j| t[j..] < *t)
}

/// `t_m = 1` and every rotation of `t_1...t_{m-1}` is `⪯ t_1...t_{m-1}`.
pub fn satisfies_rm_conditions(t: &[u32]) -> bool {
    let m = t.len();
    if m < 2 || t[m - 1] != 1 {
        return false;
    }
    let head = &t[..m - 1];
    (1..head.len()).all(|j| {
        let rotation: Vec<u32> = head[j..].iter().chain(&head[..j]).copied().collect();
        rotation.as_slice() <= head
    })
}

/// `t_1 = ... = t_{m-1}`.
pub fn arnoux_rauzy_case(t: &[u32]) -> bool {
    t[..t.len() - 1].windows(2).all(|w| w[0] == w[1])
}

fn poly(t: &[u32], x: f64) -> f64 {
    t.iter().fold(1.0, |acc, &c| acc * x - c as f64)
}

fn poly_derivative(t: &[u32], x: f64) -> f64 {
    let m = t.len();
    let mut d = m as f64 * x.powi(m as i32 - 1);
    for (j, &c) in t.iter().enumerate() {
        let e = m - 1 - j;
        if e > 0 {
            d -= c as f64 * e as f64 * x.powi(e as i32 - 1);
        }
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub beta: f64,
    /// `|β^m - Σ t_j β^{m-j}|`.
    pub residual: f64,
}

/// The unique positive root of `x^m - t1 x^{m-1} - ... - tm`.
pub fn dominant_root(t: &[u32]) -> Result<Root> {
    validate(t)?;
    let sum: f64 = t.iter().map(|&c| c as f64).sum();
    let (mut lo, mut hi) = (1.0f64, 1.0 + sum);
    // poly(lo) < 0 < poly(hi) throughout.
    while hi - lo > ROOT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if poly(t, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut beta = 0.5 * (lo + hi);
    let d = poly_derivative(t, beta);
    if d > 0.0 {
        let polished = beta - poly(t, beta) / d;
        if polished.is_finite() && (polished - beta).abs() <= ROOT_TOLERANCE {
            beta = polished;
        }
    }
    let residual = poly(t, beta).abs();
    let m = t.len() as i32;
    if residual > 1e-10 * beta.powi(m) {
        return Err(Error::NumericPrecision(format!("residual {residual:e} for beta:{}", join(t))));
    }
    Ok(Root { beta, residual })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaSpec {
    pub coefficients: Vec<u32>,
    pub beta: f64,
    pub residual: f64,
    pub parry_simple: bool,
    pub rm_conditions: bool,
    pub arnoux_rauzy_case: bool,
}

impl BetaSpec {
    pub fn new(t: &[u32]) -> Result<Self> {
        let root = dominant_root(t)?;
        Ok(BetaSpec {
            coefficients: t.to_vec(),
            beta: root.beta,
            residual: root.residual,
            parry_simple: is_parry_simple(t),
            rm_conditions: satisfies_rm_conditions(t),
            arnoux_rauzy_case: arnoux_rauzy_case(t),
        })
    }

    pub fn m(&self) -> usize {
        self.coefficients.len()
    }

    /// `D_k = t_{k+1}/β + ... + t_m/β^{m-k}`, the gap coded by letter `k`.
    pub fn distances(&self) -> Vec<f64> {
        let t = &self.coefficients;
        (0..t.len())
            .map(|k| t[k..].iter().enumerate().map(|(i, &c)| c as f64 / self.beta.powi(i as i32 + 1)).sum())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaInteger {
    /// Digits `x_J ... x_0`, most significant first.
    pub digits: Vec<u32>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaIntegerList {
    pub spec: BetaSpec,
    pub integers: Vec<BetaInteger>,
    pub distances: Vec<f64>,
    /// Letter `k` codes the gap `distances[k]` between consecutive values.
    pub gaps: Vec<Letter>,
}

/// Whether every suffix of `x` (a partial digit string) can still be `≺ t`.
fn admissible(x: &[u32], t: &[u32]) -> bool {
    (0..x.len()).all(|p| {
        let s = &x[p..];
        let k = s.len().min(t.len());
        match s[..k].cmp(&t[..k]) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => s.len() < t.len(),
        }
    })
}

fn strings_of_length(t: &[u32], len: usize, want: usize, out: &mut Vec<Vec<u32>>) {
    fn go(t: &[u32], len: usize, want: usize, x: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if out.len() >= want {
            return;
        }
        if x.len() == len {
            out.push(x.clone());
            return;
        }
        let lowest = if x.is_empty() && len > 1 { 1 } else { 0 };
        for d in lowest..=t[0] {
            x.push(d);
            if admissible(x, t) {
                go(t, len, want, x, out);
            }
            x.pop();
        }
    }
    go(t, len, want, &mut Vec::with_capacity(len), out);
}

/// The `n` smallest nonnegative β-integers, enumerated as admissible digit
/// strings by length and then lexicographically.
pub fn beta_integers(t: &[u32], n: usize) -> Result<BetaIntegerList> {
    let spec = BetaSpec::new(t)?;
    if !spec.parry_simple {
        return Err(Error::Precondition(format!("beta:{} is not a simple Parry number", join(t))));
    }
    let mut strings = Vec::with_capacity(n);
    let mut len = 1;
    while strings.len() < n {
        strings_of_length(t, len, n, &mut strings);
        len += 1;
    }
    let integers: Vec<BetaInteger> = strings
        .into_iter()
        .map(|digits| {
            let value = digits.iter().fold(0.0, |acc, &d| acc * spec.beta + d as f64);
            BetaInteger { digits, value }
        })
        .collect();

    let distances = spec.distances();
    for i in 0..distances.len() {
        for j in 0..i {
            if (distances[i] - distances[j]).abs() < TABLE_SEPARATION {
                return Err(Error::NumericPrecision(format!(
                    "gap distances {i} and {j} are not separated for beta:{}",
                    join(t)
                )));
            }
        }
    }
    let gaps =
        integers.windows(2).map(|pair| classify(pair[1].value - pair[0].value, &distances)).collect::<Result<_>>()?;
    Ok(BetaIntegerList { spec, integers, distances, gaps })
}

fn classify(gap: f64, distances: &[f64]) -> Result<Letter> {
    let (k, err) = distances
        .iter()
        .enumerate()
        .map(|(k, d)| (k, (gap - d).abs()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least two distances");
    if err > GAP_TOLERANCE {
        return Err(Error::NumericPrecision(format!("gap {gap} is {err:e} away from the nearest distance")));
    }
    Ok(k as Letter)
}

/// The first `n` gap letters between consecutive β-integers.
pub fn gap_word(t: &[u32], n: usize) -> Result<Word> {
    Ok(Word(beta_integers(t, n + 1)?.gaps))
}

/// Whether the first `n` gap letters equal the prefix of the fixed point.
pub fn gap_word_matches_fixed_point(t: &[u32], n: usize) -> Result<bool> {
    let gaps = gap_word(t, n)?;
    let fixed = fixed_point_prefix(&build_beta_substitution(t)?, n)?;
    Ok(gaps[..] == fixed[..n])
}

/// Every valid coefficient vector with `2 <= m <= max_m` and entries at most `max_t`.
pub fn coefficient_grid(max_m: usize, max_t: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for m in 2..=max_m {
        let mut t = vec![0u32; m];
        loop {
            if validate(&t).is_ok() {
                out.push(t.clone());
            }
            // Odometer over 0..=max_t, most significant first.
            let mut i = m;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if t[i] < max_t {
                    t[i] += 1;
                    break;
                }
                t[i] = 0;
            }
            if t.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub coefficients: Vec<u32>,
    /// `satisfies_rm_conditions`.
    pub predicted: bool,
    /// R_m observed on the fixed point up to the length bound.
    pub observed: bool,
    /// Shortest factor without `m` return words, with its count.
    pub witness: Option<(String, usize)>,
}

impl SweepRow {
    pub fn agrees(&self) -> bool {
        self.predicted == self.observed
    }
}

/// Compares the predicted and observed R_m verdict for every simple Parry
/// vector of the grid. Rows follow the grid order whatever the thread count.
pub fn rm_conditions_sweep(max_m: usize, max_t: u32, max_len: usize) -> Result<Vec<SweepRow>> {
    let grid: Vec<Vec<u32>> = coefficient_grid(max_m, max_t).into_iter().filter(|t| is_parry_simple(t)).collect();
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(grid.len().max(1));
    let row = |t: &Vec<u32>| -> Result<SweepRow> {
        let src = beta_source(t)?;
        let v = check_rm(&src, t.len(), max_len, Method::FullScan)?;
        Ok(SweepRow {
            coefficients: t.clone(),
            predicted: satisfies_rm_conditions(t),
            observed: v.holds(),
            witness: v.witness.map(|w| (src.alphabet().render(&w.factor), w.return_count)),
        })
    };
    let mut slots: Vec<Option<Result<SweepRow>>> = (0..grid.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunks = slots.chunks_mut(grid.len().div_ceil(threads).max(1));
        for (c, chunk) in chunks.enumerate() {
            let grid = &grid;
            let row = &row;
            scope.spawn(move || {
                let start = c * grid.len().div_ceil(threads).max(1);
                for (i, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(row(&grid[start + i]));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.expect("every slot filled")).collect()
}
