//! Multisets (urns) over a finite alphabet, bits, and the binary
//! count isomorphism `{0..K} ~ M[K](2)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::dist::{pushforward, Atom, FinDist};
use crate::error::{Error, Result};

/// Symbols in an alphabet. The alphabet order is the `Ord` order.
pub trait Symbol: Atom + fmt::Display + FromStr {}

impl<T> Symbol for T where T: Atom + fmt::Display + FromStr {}

/// An element of `2 = {0, 1}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub fn flip(self) -> Bit {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }

    pub fn from_u8(v: u8) -> Option<Bit> {
        match v {
            0 => Some(Bit::Zero),
            1 => Some(Bit::One),
            _ => None,
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

impl fmt::Debug for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

impl FromStr for Bit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Bit> {
        match s.trim() {
            "0" => Ok(Bit::Zero),
            "1" => Ok(Bit::One),
            _ => Err(Error::parse(s, "expected 0 or 1")),
        }
    }
}

impl Atom for Bit {
    fn to_json(&self) -> Value {
        json!(self.as_u8())
    }

    fn from_json(v: &Value) -> Result<Self> {
        v.as_u64()
            .and_then(|x| u8::try_from(x).ok())
            .and_then(Bit::from_u8)
            .ok_or_else(|| Error::Json(format!("expected bit, got {v}")))
    }
}

/// A finite multiset; zero counts are never stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset<X: Ord> {
    counts: BTreeMap<X, u64>,
}

impl<X: Symbol> Multiset<X> {
    pub fn empty() -> Self {
        Multiset {
            counts: BTreeMap::new(),
        }
    }

    pub fn from_counts(pairs: impl IntoIterator<Item = (X, u64)>) -> Self {
        let mut counts = BTreeMap::new();
        for (x, n) in pairs {
            *counts.entry(x).or_insert(0) += n;
        }
        counts.retain(|_, n| *n > 0);
        Multiset { counts }
    }

    pub fn count(&self, x: &X) -> u64 {
        self.counts.get(x).copied().unwrap_or(0)
    }

    pub fn size(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Symbols with a nonzero count, in alphabet order.
    pub fn support(&self) -> impl Iterator<Item = (&X, u64)> {
        self.counts.iter().map(|(x, n)| (x, *n))
    }

    /// `self + 1|x>`.
    pub fn add(&self, x: X) -> Self {
        let mut next = self.clone();
        *next.counts.entry(x).or_insert(0) += 1;
        next
    }

    /// `self - 1|x>`, or `None` when `x` is absent.
    pub fn remove(&self, x: &X) -> Option<Self> {
        let mut next = self.clone();
        let n = next.counts.get_mut(x)?;
        *n -= 1;
        if *n == 0 {
            next.counts.remove(x);
        }
        Some(next)
    }
}

impl<X: Symbol> Default for Multiset<X> {
    fn default() -> Self {
        Self::empty()
    }
}

/// Text form `3*B+2*W`, symbols in alphabet order; the empty multiset is `0`.
impl<X: Symbol> fmt::Display for Multiset<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return write!(f, "0");
        }
        for (i, (x, n)) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{n}*{x}")?;
        }
        Ok(())
    }
}

impl<X: Symbol> fmt::Debug for Multiset<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<X: Symbol> FromStr for Multiset<X> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "0" {
            return Ok(Self::empty());
        }
        let mut pairs = Vec::new();
        for term in t.split('+') {
            let (n, x) = term
                .split_once('*')
                .ok_or_else(|| Error::parse(s, format!("term {term:?} is not count*symbol")))?;
            let n: u64 = n
                .trim()
                .parse()
                .map_err(|_| Error::parse(s, format!("bad count in {term:?}")))?;
            let x: X = x
                .trim()
                .parse()
                .map_err(|_| Error::parse(s, format!("bad symbol in {term:?}")))?;
            pairs.push((x, n));
        }
        Ok(Self::from_counts(pairs))
    }
}

impl<X: Symbol> Atom for Multiset<X> {
    fn to_json(&self) -> Value {
        json!(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self> {
        v.as_str()
            .ok_or_else(|| Error::Json(format!("expected multiset string, got {v}")))?
            .parse()
    }
}

/// Counts occurrences; the result does not depend on the order of `seq`.
pub fn accumulate<X: Symbol>(seq: &[X]) -> Multiset<X> {
    Multiset::from_counts(seq.iter().map(|x| (x.clone(), 1)))
}

/// A finite sequence of bits, most recent last.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BitString(pub Vec<Bit>);

impl BitString {
    pub fn new() -> Self {
        BitString(Vec::new())
    }

    pub fn push(&self, b: Bit) -> Self {
        let mut v = self.0.clone();
        v.push(b);
        BitString(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[Bit] {
        &self.0
    }

    /// `k` ones followed by `len - k` zeros.
    pub fn ones_then_zeros(k: usize, len: usize) -> Self {
        BitString(
            std::iter::repeat_n(Bit::One, k)
                .chain(std::iter::repeat_n(Bit::Zero, len - k))
                .collect(),
        )
    }
}

impl From<&[u8]> for BitString {
    fn from(v: &[u8]) -> Self {
        BitString(
            v.iter()
                .map(|&b| Bit::from_u8(b).expect("bits are 0 or 1"))
                .collect(),
        )
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl Atom for BitString {
    fn to_json(&self) -> Value {
        json!(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self> {
        let s = v
            .as_str()
            .ok_or_else(|| Error::Json(format!("expected bit string, got {v}")))?;
        s.chars()
            .map(|c| c.to_string().parse())
            .collect::<Result<Vec<Bit>>>()
            .map(BitString)
    }
}

/// The bijection `k <-> k|1> + (K-k)|0>` between `{0..K}` and `M[K](2)`.
///
/// The count is the number of ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinaryCountIso {
    pub size: u64,
}

impl BinaryCountIso {
    pub fn new(size: u64) -> Self {
        BinaryCountIso { size }
    }

    pub fn to_multiset(&self, k: u64) -> Result<Multiset<Bit>> {
        if k > self.size {
            return Err(Error::OutOfRange {
                value: k.to_string(),
                range: format!("0..={}", self.size),
            });
        }
        Ok(Multiset::from_counts([(Bit::One, k), (Bit::Zero, self.size - k)]))
    }

    pub fn to_count(&self, phi: &Multiset<Bit>) -> Result<u64> {
        if phi.size() != self.size {
            return Err(Error::OutOfRange {
                value: phi.to_string(),
                range: format!("M[{}](2)", self.size),
            });
        }
        Ok(phi.count(&Bit::One))
    }
}

/// Transports a distribution on `{0..K}` to size-`K` binary multisets.
pub fn counts_to_multisets(d: &FinDist<u64>, size: u64) -> Result<FinDist<Multiset<Bit>>> {
    let iso = BinaryCountIso::new(size);
    if let Some(bad) = d.support().find(|&&k| k > size) {
        return Err(Error::OutOfRange {
            value: bad.to_string(),
            range: format!("0..={size}"),
        });
    }
    Ok(pushforward(|&k| iso.to_multiset(k).expect("checked"), d))
}

/// Transports a distribution on size-`K` binary multisets to `{0..K}`.
pub fn multisets_to_counts(d: &FinDist<Multiset<Bit>>, size: u64) -> Result<FinDist<u64>> {
    let iso = BinaryCountIso::new(size);
    for phi in d.support() {
        iso.to_count(phi)?;
    }
    Ok(pushforward(|phi| iso.to_count(phi).expect("checked"), d))
}

/// All multisets of the given size over `alphabet`, in canonical order.
pub fn multisets_of_size<X: Symbol>(alphabet: &[X], size: u64) -> Vec<Multiset<X>> {
    fn go<X: Symbol>(alphabet: &[X], left: u64, acc: &mut Vec<(X, u64)>, out: &mut Vec<Multiset<X>>) {
        match alphabet {
            [] => {
                if left == 0 {
                    out.push(Multiset::from_counts(acc.iter().cloned()));
                }
            }
            [last] => {
                acc.push((last.clone(), left));
                out.push(Multiset::from_counts(acc.iter().cloned()));
                acc.pop();
            }
            [head, rest @ ..] => {
                for n in 0..=left {
                    acc.push((head.clone(), n));
                    go(rest, left - n, acc, out);
                    acc.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(alphabet, size, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}
