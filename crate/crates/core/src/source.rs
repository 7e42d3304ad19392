//! Reproducible generators of prefixes of infinite words.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::substitution::{Substitution, PREFIX_GUARD};
use crate::word::{Alphabet, Letter, Word};

/// Names accepted by [`builtin`].
pub const BUILTINS: [&str; 5] = ["fibonacci", "tribonacci", "thue_morse", "chacon_recoded", "r4_example"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceKind {
    SubstitutionFixedPoint(Substitution),
    /// Directive sequence `d_1, d_2, ...` of the standard-word recursion,
    /// cycled when exhausted.
    CharacteristicSturmian(Vec<u32>),
    EventuallyPeriodic {
        preperiod: Word,
        period: Word,
    },
}

/// A prefix of the infinite word, backed by the source's shared cache.
#[derive(Debug, Clone)]
pub struct Prefix {
    data: Arc<Vec<Letter>>,
    len: usize,
}

impl Prefix {
    /// The first `len` letters of `p` (or all of them if shorter).
    pub fn truncate(p: Prefix, len: usize) -> Prefix {
        Prefix { len: len.min(p.len), data: p.data }
    }
}

impl std::ops::Deref for Prefix {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.data[..self.len]
    }
}

#[derive(Debug, Default)]
struct Cache {
    data: Arc<Vec<Letter>>,
    /// Natural prefix lengths generated so far (whole iterates or standard words).
    checkpoints: Vec<usize>,
    /// State of the Sturmian recursion: (s_{k-1}, s_k, k).
    sturmian: Option<(Vec<Letter>, Vec<Letter>, usize)>,
    /// For substitutions: length of the previous iterate.
    previous_iterate: usize,
}

/// One infinite word, generated lazily. The cached prefix only ever grows.
#[derive(Debug)]
pub struct WordSource {
    name: String,
    alphabet: Alphabet,
    kind: SourceKind,
    cache: Mutex<Cache>,
    saturation: Mutex<BTreeMap<usize, usize>>,
}

impl Clone for WordSource {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            alphabet: self.alphabet.clone(),
            kind: self.kind.clone(),
            cache: Mutex::new(Cache::default()),
            saturation: Mutex::new(self.saturation_log()),
        }
    }
}

impl WordSource {
    pub fn from_substitution(name: impl Into<String>, s: Substitution) -> Result<Self> {
        s.check_seed()?;
        Ok(Self::with_kind(name.into(), s.alphabet().clone(), SourceKind::SubstitutionFixedPoint(s)))
    }

    /// Characteristic Sturmian word over `{0, 1}` from the recursion
    /// `s_{-1} = 1`, `s_0 = 0`, `s_k = s_{k-1}^{d_k} s_{k-2}`. Only `d_1` may be 0.
    pub fn sturmian(directives: Vec<u32>) -> Result<Self> {
        if directives.is_empty() {
            return Err(Error::Parameter("empty directive sequence".into()));
        }
        if directives.iter().skip(1).any(|&d| d == 0) {
            return Err(Error::Parameter("directives after the first must be positive".into()));
        }
        if directives == [0] {
            return Err(Error::Parameter("directive sequence (0) has no positive entry".into()));
        }
        let name = format!("sturmian:{}", directives.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","));
        Ok(Self::with_kind(name, Alphabet::digits(2)?, SourceKind::CharacteristicSturmian(directives)))
    }

    /// The word `preperiod · period^∞`. The alphabet is the set of letters in
    /// order of first appearance unless given explicitly.
    pub fn eventually_periodic(alphabet: Alphabet, preperiod: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Parameter("empty period".into()));
        }
        for &l in preperiod.iter().chain(period.iter()) {
            alphabet.check(l)?;
        }
        let name = format!(
            "periodic:{}{}",
            if preperiod.is_empty() { String::new() } else { format!("{}/", alphabet.render(&preperiod)) },
            alphabet.render(&period)
        );
        Ok(Self::with_kind(name, alphabet, SourceKind::EventuallyPeriodic { preperiod, period }))
    }

    fn with_kind(name: String, alphabet: Alphabet, kind: SourceKind) -> Self {
        Self { name, alphabet, kind, cache: Mutex::new(Cache::default()), saturation: Mutex::new(BTreeMap::new()) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> &SourceKind {
        &self.kind
    }

    pub fn substitution(&self) -> Option<&Substitution> {
        match &self.kind {
            SourceKind::SubstitutionFixedPoint(s) => Some(s),
            _ => None,
        }
    }

    /// The first `n` letters.
    pub fn prefix(&self, n: usize) -> Result<Word> {
        Ok(Word(self.checkpoint(n)?[..n].to_vec()))
    }

    /// The shortest natural prefix (σ-iterate, standard word, or for
    /// periodic words exactly `min_len` letters) of length at least `min_len`.
    pub fn checkpoint(&self, min_len: usize) -> Result<Prefix> {
        if min_len > PREFIX_GUARD {
            return Err(Error::Parameter(format!("prefix length {min_len} exceeds the guard {PREFIX_GUARD}")));
        }
        let mut cache = self.cache.lock().unwrap();
        if let SourceKind::EventuallyPeriodic { preperiod, period } = &self.kind {
            let n = min_len.max(1);
            if cache.data.len() < n {
                let mut data = Vec::with_capacity(n.next_power_of_two());
                data.extend_from_slice(preperiod);
                while data.len() < n.next_power_of_two() {
                    data.extend_from_slice(period);
                }
                cache.data = Arc::new(data);
            }
            return Ok(Prefix { data: cache.data.clone(), len: n });
        }
        while cache.checkpoints.last().is_none_or(|&l| l < min_len) {
            self.grow(&mut cache)?;
        }
        let len = *cache.checkpoints.iter().find(|&&l| l >= min_len).unwrap();
        Ok(Prefix { data: cache.data.clone(), len })
    }

    /// The smallest natural checkpoint strictly longer than `len`.
    pub fn next_checkpoint(&self, len: usize) -> Result<usize> {
        if matches!(self.kind, SourceKind::EventuallyPeriodic { .. }) {
            return Ok(len.max(1) * 2);
        }
        self.checkpoint(len + 1).map(|p| p.len())
    }

    /// Number of generation steps (σ-iterations or recursion steps) needed to reach `len`.
    pub fn steps_for(&self, len: usize) -> Option<usize> {
        let cache = self.cache.lock().unwrap();
        cache.checkpoints.iter().position(|&l| l == len)
    }

    fn grow(&self, cache: &mut Cache) -> Result<()> {
        match &self.kind {
            SourceKind::SubstitutionFixedPoint(s) => {
                let mut data: Vec<Letter> = (*cache.data).clone();
                if data.is_empty() {
                    data.push(s.seed());
                } else if cache.checkpoints.len() == 1 {
                    cache.previous_iterate = 1;
                    data = s.image(s.seed()).0.clone();
                } else {
                    let end = data.len();
                    for i in cache.previous_iterate..end {
                        let l = data[i];
                        data.extend_from_slice(s.image(l));
                    }
                    cache.previous_iterate = end;
                }
                if data.len() > PREFIX_GUARD {
                    return Err(Error::Parameter(format!("prefix exceeds the guard {PREFIX_GUARD}")));
                }
                cache.checkpoints.push(data.len());
                cache.data = Arc::new(data);
            }
            SourceKind::CharacteristicSturmian(directives) => {
                let (prev, cur, k) = cache.sturmian.take().unwrap_or((vec![1], vec![0], 0));
                let d = directive(directives, k + 1);
                let mut next = Vec::with_capacity(cur.len() * d as usize + prev.len());
                for _ in 0..d {
                    next.extend_from_slice(&cur);
                }
                next.extend_from_slice(&prev);
                if next.len() > PREFIX_GUARD {
                    return Err(Error::Parameter(format!("prefix exceeds the guard {PREFIX_GUARD}")));
                }
                // s_k is a prefix of s_{k+1} for every k >= 1.
                cache.checkpoints.push(next.len());
                cache.data = Arc::new(next.clone());
                cache.sturmian = Some((cur, next, k + 1));
            }
            SourceKind::EventuallyPeriodic { .. } => unreachable!(),
        }
        Ok(())
    }

    /// Records that factors of length `n` stabilized at prefix length `prefix_len`.
    pub fn record_saturation(&self, n: usize, prefix_len: usize) {
        let mut log = self.saturation.lock().unwrap();
        let e = log.entry(n).or_insert(prefix_len);
        *e = (*e).min(prefix_len);
    }

    pub fn saturation_log(&self) -> BTreeMap<usize, usize> {
        self.saturation.lock().unwrap().clone()
    }
}

/// The directive `d_k` (1-based), cycling through the list; a leading 0 is not repeated.
fn directive(directives: &[u32], k: usize) -> u32 {
    if k <= directives.len() {
        return directives[k - 1];
    }
    let block = if directives[0] == 0 { &directives[1..] } else { directives };
    let offset = directives.len() - block.len();
    block[(k - 1 - offset) % block.len()]
}

/// Prefix of the characteristic Sturmian word of the given directives.
pub fn characteristic_sturmian_prefix(directives: &[u32], min_len: usize) -> Result<Word> {
    WordSource::sturmian(directives.to_vec())?.prefix(min_len)
}

pub fn fibonacci() -> Substitution {
    Substitution::from_rules("01", &[('0', "01"), ('1', "0")], '0').unwrap()
}

pub fn tribonacci() -> Substitution {
    Substitution::from_rules("012", &[('0', "01"), ('1', "02"), ('2', "0")], '0').unwrap()
}

pub fn thue_morse() -> Substitution {
    Substitution::from_rules("01", &[('0', "01"), ('1', "10")], '0').unwrap()
}

pub fn chacon_recoded() -> Substitution {
    Substitution::from_rules("123", &[('1', "12"), ('2', "312"), ('3', "3312")], '1').unwrap()
}

pub fn r4_example() -> Substitution {
    Substitution::from_rules("1234", &[('1', "13231"), ('2', "13231424131"), ('3', "42324131424"), ('4', "42324")], '1')
        .unwrap()
}

pub fn builtin(name: &str) -> Result<WordSource> {
    let s = match name {
        "fibonacci" => fibonacci(),
        "tribonacci" => tribonacci(),
        "thue_morse" => thue_morse(),
        "chacon_recoded" => chacon_recoded(),
        "r4_example" => r4_example(),
        _ => return Err(Error::UnknownSource(name.to_string())),
    };
    WordSource::from_substitution(name, s)
}
