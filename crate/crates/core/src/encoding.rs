//! Genotype representation: alphabets, fixed-length strings, decoding
//! functions from strings to phenotype vectors, quotient partitions of the
//! string space, and entropy diagnostics.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// Probability vectors must sum to one within this tolerance.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Ordered finite set of distinct tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidInput("alphabet must not be empty".into()));
        }
        let mut seen = HashSet::new();
        for s in &symbols {
            if !seen.insert(s.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate alphabet symbol {s:?}")));
            }
        }
        Ok(Self { symbols })
    }

    pub fn binary() -> Self {
        Self::new(["0", "1"]).expect("static alphabet")
    }

    /// Tokens `"0"`, `"1"`, ..., `"k-1"`.
    pub fn integers(k: usize) -> Result<Self> {
        Self::new((0..k).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == token)
    }

    fn single_char(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        Alphabet::new(v)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.symbols
    }
}

/// Fixed-length string of alphabet indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Genotype(pub Vec<u32>);

impl Genotype {
    pub fn new(symbols: Vec<u32>) -> Self {
        Self(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }

    /// Parses a genotype from its token representation. Single-character
    /// alphabets are read character by character (`"0110"`); otherwise tokens
    /// are separated by whitespace or commas.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let tokens: Vec<String> = if alphabet.single_char() {
            text.chars().filter(|c| !c.is_whitespace()).map(String::from).collect()
        } else {
            text.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(String::from)
                .collect()
        };
        tokens
            .iter()
            .map(|t| {
                alphabet
                    .index_of(t)
                    .map(|i| i as u32)
                    .ok_or_else(|| Error::InvalidGenotype(format!("token {t:?} not in alphabet")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Genotype)
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        let sep = if alphabet.single_char() { "" } else { " " };
        self.0
            .iter()
            .map(|&i| alphabet.symbols().get(i as usize).map_or("?", String::as_str))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Checks length and per-symbol range.
    pub fn check(&self, alphabet_size: usize, length: usize) -> Result<()> {
        if self.0.len() != length {
            return Err(Error::InvalidGenotype(format!(
                "length {} does not match declared length {length}",
                self.0.len()
            )));
        }
        if let Some((pos, s)) = self.0.iter().enumerate().find(|(_, &s)| s as usize >= alphabet_size) {
            return Err(Error::InvalidGenotype(format!(
                "symbol {s} at position {pos} exceeds alphabet size {alphabet_size}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.0.iter().any(|&x| x > 9) { " " } else { "" };
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Every string of `length` symbols over an alphabet of `size` symbols, in
/// lexicographic order.
pub fn all_genotypes(size: usize, length: usize) -> impl Iterator<Item = Genotype> {
    let total = (size as u128).checked_pow(length as u32).unwrap_or(u128::MAX);
    (0..total).map(move |mut k| {
        let mut out = vec![0u32; length];
        for slot in out.iter_mut().rev() {
            *slot = (k % size as u128) as u32;
            k /= size as u128;
        }
        Genotype(out)
    })
}

/// Anything that maps fixed-length strings to phenotypes.
pub trait Decoder: Send + Sync {
    type Phenotype: Clone + Send + Sync;

    fn alphabet(&self) -> &Alphabet;

    fn length(&self) -> usize;

    fn decode(&self, s: &Genotype) -> Result<Self::Phenotype>;

    fn check(&self, s: &Genotype) -> Result<()> {
        s.check(self.alphabet().len(), self.length())
    }
}

type DecodeFn = Arc<dyn Fn(&[u32]) -> Vec<f64> + Send + Sync>;
type EncodeFn = Arc<dyn Fn(&[f64]) -> Option<Vec<u32>> + Send + Sync>;
type RangeFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// How a [`Codec`] turns strings into vectors.
#[derive(Clone)]
pub enum CodecRule {
    /// Each symbol index becomes one coordinate.
    Identity,
    /// Positional binary, most significant symbol first; one coordinate.
    BinaryInteger,
    /// Reflected Gray code, most significant symbol first; one coordinate.
    Gray,
    /// The string is split into `bounds.len()` equal binary chunks, each
    /// mapped linearly onto `[lo, hi]`. `gray` reads each chunk as Gray code.
    ScaledReal { bounds: Vec<(f64, f64)>, gray: bool },
    Custom { decode: DecodeFn, encode: Option<EncodeFn> },
}

impl fmt::Debug for CodecRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodecRule::Identity => f.write_str("Identity"),
            CodecRule::BinaryInteger => f.write_str("BinaryInteger"),
            CodecRule::Gray => f.write_str("Gray"),
            CodecRule::ScaledReal { bounds, gray } => f
                .debug_struct("ScaledReal")
                .field("bounds", bounds)
                .field("gray", gray)
                .finish(),
            CodecRule::Custom { encode, .. } => f
                .debug_struct("Custom")
                .field("invertible", &encode.is_some())
                .finish(),
        }
    }
}

/// Decoding function from `A^l` to phenotype vectors, with optional inverse
/// and an optional membership predicate for the feasible search space.
#[derive(Clone)]
pub struct Codec {
    alphabet: Alphabet,
    length: usize,
    rule: CodecRule,
    range: Option<RangeFn>,
}

impl fmt::Debug for Codec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Codec")
            .field("alphabet", &self.alphabet)
            .field("length", &self.length)
            .field("rule", &self.rule)
            .field("range", &self.range.is_some())
            .finish()
    }
}

fn bits_to_u64(bits: &[u32]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
}

fn gray_to_u64(bits: &[u32]) -> u64 {
    let mut acc = 0u64;
    let mut prev = 0u32;
    for &g in bits {
        prev ^= g;
        acc = (acc << 1) | u64::from(prev);
    }
    acc
}

fn u64_to_bits(value: u64, width: usize) -> Vec<u32> {
    (0..width).rev().map(|i| ((value >> i) & 1) as u32).collect()
}

fn u64_to_gray(value: u64, width: usize) -> Vec<u32> {
    u64_to_bits(value ^ (value >> 1), width)
}

impl Codec {
    pub fn new(alphabet: Alphabet, length: usize, rule: CodecRule) -> Result<Self> {
        if length == 0 {
            return Err(Error::InvalidInput("genotype length must be positive".into()));
        }
        match &rule {
            CodecRule::BinaryInteger | CodecRule::Gray | CodecRule::ScaledReal { .. } => {
                if alphabet.len() != 2 {
                    return Err(Error::InvalidInput(format!(
                        "{rule:?} requires a binary alphabet, got {} symbols",
                        alphabet.len()
                    )));
                }
            }
            _ => {}
        }
        match &rule {
            CodecRule::BinaryInteger | CodecRule::Gray if length > 63 => {
                return Err(Error::InvalidInput("integer codecs support at most 63 symbols".into()));
            }
            CodecRule::ScaledReal { bounds, .. } => {
                if bounds.is_empty() || length % bounds.len() != 0 {
                    return Err(Error::InvalidInput(format!(
                        "length {length} is not a multiple of the dimension {}",
                        bounds.len()
                    )));
                }
                let width = length / bounds.len();
                if width > 52 {
                    return Err(Error::InvalidInput("at most 52 bits per dimension".into()));
                }
                if bounds.iter().any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo <= hi)) {
                    return Err(Error::InvalidInput(format!("invalid bounds {bounds:?}")));
                }
            }
            _ => {}
        }
        Ok(Self {
            alphabet,
            length,
            rule,
            range: None,
        })
    }

    pub fn binary_integer(length: usize) -> Result<Self> {
        Self::new(Alphabet::binary(), length, CodecRule::BinaryInteger)
    }

    pub fn gray(length: usize) -> Result<Self> {
        Self::new(Alphabet::binary(), length, CodecRule::Gray)
    }

    pub fn scaled_real(bits_per_dim: usize, bounds: Vec<(f64, f64)>, gray: bool) -> Result<Self> {
        let length = bits_per_dim * bounds.len();
        Self::new(Alphabet::binary(), length, CodecRule::ScaledReal { bounds, gray })
    }

    pub fn identity(alphabet: Alphabet, length: usize) -> Result<Self> {
        Self::new(alphabet, length, CodecRule::Identity)
    }

    pub fn custom<F>(alphabet: Alphabet, length: usize, decode: F) -> Result<Self>
    where
        F: Fn(&[u32]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self::new(
            alphabet,
            length,
            CodecRule::Custom {
                decode: Arc::new(decode),
                encode: None,
            },
        )
    }

    /// Attaches the membership predicate for the feasible search space.
    pub fn with_range<F>(mut self, predicate: F) -> Self
    where
        F: Fn(&[f64]) -> bool + Send + Sync + 'static,
    {
        self.range = Some(Arc::new(predicate));
        self
    }

    pub fn rule(&self) -> &CodecRule {
        &self.rule
    }

    pub fn has_inverse(&self) -> bool {
        match &self.rule {
            CodecRule::Custom { encode, .. } => encode.is_some(),
            _ => true,
        }
    }

    /// Whether `s` decodes into the feasible search space.
    pub fn in_search_space(&self, s: &Genotype) -> Result<bool> {
        let x = self.decode(s)?;
        Ok(self.range.as_ref().is_none_or(|p| p(&x)))
    }

    /// Grid step per dimension of a scaled-real codec.
    pub fn resolution(&self) -> Option<Vec<f64>> {
        match &self.rule {
            CodecRule::ScaledReal { bounds, .. } => {
                let width = self.length / bounds.len();
                let steps = ((1u64 << width) - 1) as f64;
                Some(bounds.iter().map(|(lo, hi)| (hi - lo) / steps).collect())
            }
            _ => None,
        }
    }

    fn decode_unchecked(&self, s: &[u32]) -> Vec<f64> {
        match &self.rule {
            CodecRule::Identity => s.iter().map(|&x| f64::from(x)).collect(),
            CodecRule::BinaryInteger => vec![bits_to_u64(s) as f64],
            CodecRule::Gray => vec![gray_to_u64(s) as f64],
            CodecRule::ScaledReal { bounds, gray } => {
                let width = self.length / bounds.len();
                let steps = ((1u64 << width) - 1) as f64;
                s.chunks(width)
                    .zip(bounds)
                    .map(|(chunk, (lo, hi))| {
                        let k = if *gray { gray_to_u64(chunk) } else { bits_to_u64(chunk) };
                        if k as f64 == steps {
                            *hi
                        } else {
                            lo + (hi - lo) * (k as f64 / steps)
                        }
                    })
                    .collect()
            }
            CodecRule::Custom { decode, .. } => decode(s),
        }
    }

    /// Inverse of [`Decoder::decode`] for bijective rules.
    pub fn encode(&self, x: &[f64]) -> Result<Genotype> {
        let integer = |v: f64, width: usize| -> Result<u64> {
            let max = ((1u128 << width) - 1) as f64;
            if v.fract() != 0.0 || v < 0.0 || v > max {
                return Err(Error::OutOfRange(format!("{v} is not an integer in [0, {max}]")));
            }
            Ok(v as u64)
        };
        let expect_dim = |d: usize| -> Result<()> {
            if x.len() != d {
                return Err(Error::OutOfRange(format!("expected {d} coordinates, got {}", x.len())));
            }
            Ok(())
        };
        let symbols = match &self.rule {
            CodecRule::Identity => {
                expect_dim(self.length)?;
                x.iter()
                    .map(|&v| {
                        if v.fract() == 0.0 && v >= 0.0 && (v as usize) < self.alphabet.len() {
                            Ok(v as u32)
                        } else {
                            Err(Error::OutOfRange(format!("{v} is not a symbol index")))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            CodecRule::BinaryInteger => {
                expect_dim(1)?;
                u64_to_bits(integer(x[0], self.length)?, self.length)
            }
            CodecRule::Gray => {
                expect_dim(1)?;
                u64_to_gray(integer(x[0], self.length)?, self.length)
            }
            CodecRule::ScaledReal { bounds, gray } => {
                expect_dim(bounds.len())?;
                let width = self.length / bounds.len();
                let steps = ((1u64 << width) - 1) as f64;
                let mut out = Vec::with_capacity(self.length);
                for (&v, &(lo, hi)) in x.iter().zip(bounds) {
                    if !(lo..=hi).contains(&v) {
                        return Err(Error::OutOfRange(format!("{v} outside [{lo}, {hi}]")));
                    }
                    let k = if hi > lo { ((v - lo) / (hi - lo) * steps).round() } else { 0.0 };
                    let back = if k == steps { hi } else { lo + (hi - lo) * (k / steps) };
                    if (back - v).abs() > 1e-9 * (hi - lo).max(1.0) {
                        return Err(Error::OutOfRange(format!("{v} is not on the codec grid")));
                    }
                    let k = k as u64;
                    out.extend(if *gray { u64_to_gray(k, width) } else { u64_to_bits(k, width) });
                }
                out
            }
            CodecRule::Custom { encode, .. } => {
                let encode = encode
                    .as_ref()
                    .ok_or_else(|| Error::Unsupported("codec has no inverse".into()))?;
                encode(x).ok_or_else(|| Error::OutOfRange(format!("{x:?} is outside the range of the codec")))?
            }
        };
        Ok(Genotype(symbols))
    }

    /// Parses a JSON codec description.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CodecSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.build()
    }
}

impl Decoder for Codec {
    type Phenotype = Vec<f64>;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn length(&self) -> usize {
        self.length
    }

    fn decode(&self, s: &Genotype) -> Result<Vec<f64>> {
        self.check(s)?;
        Ok(self.decode_unchecked(&s.0))
    }
}

/// JSON form of a codec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodecSpec {
    pub alphabet: Alphabet,
    pub length: usize,
    #[serde(flatten)]
    pub rule: RuleSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum RuleSpec {
    BinaryInteger,
    Gray,
    ScaledReal {
        /// `[lo, hi]` per dimension.
        bounds: Vec<(f64, f64)>,
        #[serde(default)]
        gray: bool,
    },
}

impl CodecSpec {
    pub fn build(&self) -> Result<Codec> {
        let rule = match &self.rule {
            RuleSpec::BinaryInteger => CodecRule::BinaryInteger,
            RuleSpec::Gray => CodecRule::Gray,
            RuleSpec::ScaledReal { bounds, gray } => CodecRule::ScaledReal {
                bounds: bounds.clone(),
                gray: *gray,
            },
        };
        Codec::new(self.alphabet.clone(), self.length, rule)
    }
}

/// Outcome of [`verify_bijection`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BijectionReport {
    pub exhaustive: bool,
    pub checked: usize,
    /// Pairs of distinct strings that decode to the same vector.
    pub collisions: Vec<(Genotype, Genotype)>,
    /// Strings for which `encode(decode(s)) != s`.
    pub round_trip_failures: Vec<Genotype>,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.collisions.is_empty() && self.round_trip_failures.is_empty()
    }
}

/// Checks injectivity (and the round trip, when the codec is invertible)
/// exhaustively if `|A|^l <= budget`, otherwise on `budget` sampled strings.
pub fn verify_bijection(codec: &Codec, budget: usize, seed: u64) -> Result<BijectionReport> {
    if budget == 0 {
        return Err(Error::InvalidInput("budget must be at least 1".into()));
    }
    let size = codec.alphabet().len();
    let length = codec.length();
    let space = (size as u128).checked_pow(length as u32);
    let exhaustive = space.is_some_and(|n| n <= budget as u128);
    let samples: Vec<Genotype> = if exhaustive {
        all_genotypes(size, length).collect()
    } else {
        let mut rng = RandomStream::new(seed).substream("verify-bijection");
        let mut seen = HashSet::new();
        (0..budget)
            .map(|_| Genotype((0..length).map(|_| rng.index(size) as u32).collect()))
            .filter(|g| seen.insert(g.clone()))
            .collect()
    };

    let mut images: HashMap<Vec<u64>, Genotype> = HashMap::new();
    let mut report = BijectionReport {
        exhaustive,
        checked: samples.len(),
        collisions: Vec::new(),
        round_trip_failures: Vec::new(),
    };
    for s in samples {
        let x = codec.decode(&s)?;
        let key: Vec<u64> = x.iter().map(|v| v.to_bits()).collect();
        if let Some(prev) = images.get(&key) {
            report.collisions.push((prev.clone(), s.clone()));
        } else {
            images.insert(key, s.clone());
        }
        if codec.has_inverse() && codec.encode(&x).ok().as_ref() != Some(&s) {
            report.round_trip_failures.push(s);
        }
    }
    Ok(report)
}

fn check_distribution(dist: &[f64]) -> Result<()> {
    if dist.is_empty() {
        return Err(Error::InvalidDistribution("empty distribution".into()));
    }
    if let Some(p) = dist.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(Error::InvalidDistribution(format!("entry {p} is not a probability")));
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
    }
    Ok(())
}

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn shannon_entropy(dist: &[f64]) -> Result<f64> {
    check_distribution(dist)?;
    let h: f64 = dist.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum();
    Ok(h.max(0.0))
}

/// Second-order Rényi (collision) entropy in bits.
pub fn renyi2_entropy(dist: &[f64]) -> Result<f64> {
    check_distribution(dist)?;
    let collision: f64 = dist.iter().map(|p| p * p).sum();
    Ok((-collision.log2()).max(0.0))
}

/// Relative frequency of each symbol at `locus` across `members`.
pub fn allele_frequencies(members: &[Genotype], alphabet_size: usize, locus: usize) -> Vec<f64> {
    let mut counts = vec![0usize; alphabet_size];
    for m in members {
        counts[m.0[locus] as usize] += 1;
    }
    let n = members.len() as f64;
    counts.into_iter().map(|c| c as f64 / n).collect()
}

/// Mean per-locus `(Shannon, Rényi-2)` entropy of a set of strings.
pub fn mean_locus_entropy(members: &[Genotype], alphabet_size: usize) -> (f64, f64) {
    let Some(first) = members.first() else {
        return (0.0, 0.0);
    };
    let length = first.len();
    if length == 0 {
        return (0.0, 0.0);
    }
    let (mut shannon, mut renyi) = (0.0, 0.0);
    for locus in 0..length {
        let freq = allele_frequencies(members, alphabet_size, locus);
        // frequencies are exact counts / n, so the distribution checks cannot fail
        shannon += shannon_entropy(&freq).unwrap_or(0.0);
        renyi += renyi2_entropy(&freq).unwrap_or(0.0);
    }
    (shannon / length as f64, renyi / length as f64)
}

/// Quotient of a set of strings by an equivalence relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub universe: Vec<Genotype>,
    pub cells: Vec<Vec<Genotype>>,
}

impl Partition {
    pub fn cell_sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// Index of the cell holding `g`.
    pub fn cell_of(&self, g: &Genotype) -> Option<usize> {
        self.cells.iter().position(|c| c.contains(g))
    }
}

/// Number of random triples used to sample-check transitivity.
pub const RELATION_SAMPLES: usize = 1000;

/// Splits `universe` into the equivalence classes of `relation`.
///
/// Reflexivity, symmetry and transitivity are checked on every triple when
/// the universe is small enough (`|U|^3 <= 1000`) and on 1000 sampled
/// triples otherwise.
pub fn induce_partition<R>(universe: &[Genotype], relation: R) -> Result<Partition>
where
    R: Fn(&Genotype, &Genotype) -> bool,
{
    let n = universe.len();
    let violation = |a: &Genotype, b: &Genotype, c: &Genotype| -> Option<Error> {
        let bad = !relation(a, a)
            || relation(a, b) != relation(b, a)
            || (relation(a, b) && relation(b, c) && !relation(a, c));
        bad.then(|| Error::InvalidRelation(a.to_string(), b.to_string(), c.to_string()))
    };
    if n > 0 {
        if n.pow(3) <= RELATION_SAMPLES {
            for a in universe {
                for b in universe {
                    for c in universe {
                        if let Some(e) = violation(a, b, c) {
                            return Err(e);
                        }
                    }
                }
            }
        } else {
            let mut rng = RandomStream::new(0).substream("induce-partition");
            for _ in 0..RELATION_SAMPLES {
                let (a, b, c) = (rng.index(n), rng.index(n), rng.index(n));
                if let Some(e) = violation(&universe[a], &universe[b], &universe[c]) {
                    return Err(e);
                }
            }
        }
    }

    let mut cells: Vec<Vec<Genotype>> = Vec::new();
    for g in universe {
        match cells.iter_mut().find(|cell| relation(&cell[0], g)) {
            Some(cell) => cell.push(g.clone()),
            None => cells.push(vec![g.clone()]),
        }
    }
    Ok(Partition {
        universe: universe.to_vec(),
        cells,
    })
}

/// True iff the cells are non-empty, pairwise disjoint and cover the universe.
pub fn verify_partition(p: &Partition) -> bool {
    let universe: HashSet<&Genotype> = p.universe.iter().collect();
    let mut seen: HashSet<&Genotype> = HashSet::new();
    for cell in &p.cells {
        if cell.is_empty() {
            return false;
        }
        for g in cell {
            if !universe.contains(g) || !seen.insert(g) {
                return false;
            }
        }
    }
    seen.len() == universe.len()
}
