//! Subsets of `F_2^n` as bitsets, and sumsets.

use std::fmt;
use std::str::FromStr;

use cubelab_core::function::{bits_to_hex, hex_to_bits};
use cubelab_core::spectrum::fwht_i64;
use cubelab_core::{check_arity, Error, Result, MAX_ARITY};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// A subset of `F_2^n`; element `x` is the vector whose bit `i` is coordinate `i`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct F2Set {
    n: usize,
    words: Vec<u64>,
}

impl F2Set {
    pub fn empty(n: usize) -> Result<Self> {
        check_arity("set", n, MAX_ARITY)?;
        Ok(Self {
            n,
            words: vec![0; (1usize << n).div_ceil(64)],
        })
    }

    pub fn full(n: usize) -> Result<Self> {
        Self::from_predicate(n, |_| true)
    }

    pub fn from_predicate(n: usize, mut member: impl FnMut(usize) -> bool) -> Result<Self> {
        let mut set = Self::empty(n)?;
        for x in 0..set.universe() {
            if member(x) {
                set.insert(x);
            }
        }
        Ok(set)
    }

    pub fn from_elements(n: usize, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = Self::empty(n)?;
        for x in elements {
            if x >= set.universe() {
                return Err(Error::Domain(format!("element {x:x} of F_2^{n}")));
            }
            set.insert(x);
        }
        Ok(set)
    }

    /// `{x : |x| <= radius}`.
    pub fn hamming_ball(n: usize, radius: usize) -> Result<Self> {
        Self::from_predicate(n, |x| x.count_ones() as usize <= radius)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `2^n`.
    pub fn universe(&self) -> usize {
        1 << self.n
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.universe() && self.words[x / 64] >> (x % 64) & 1 == 1
    }

    /// Panics when `x` is outside `F_2^n`.
    pub fn insert(&mut self, x: usize) {
        assert!(x < self.universe(), "element {x:x} outside F_2^{}", self.n);
        self.words[x / 64] |= 1 << (x % 64);
    }

    pub fn remove(&mut self, x: usize) {
        if x < self.universe() {
            self.words[x / 64] &= !(1 << (x % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `|A| / 2^n`.
    pub fn density(&self) -> Ratio<u64> {
        Ratio::new(self.len() as u64, self.universe() as u64)
    }

    /// Elements in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                (bits != 0).then(|| {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    w * 64 + b
                })
            })
        })
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.trim();
        out
    }

    /// `{x + t : x in A}`.
    pub fn translate(&self, t: usize) -> Self {
        let mut out = Self::empty(self.n).expect("arity already checked");
        for x in self.iter() {
            out.insert(x ^ t);
        }
        out
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        Ok(out)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        Ok(out)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.n == other.n && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Indicator as an integer vector.
    pub fn indicator(&self) -> Vec<i64> {
        (0..self.universe()).map(|x| self.contains(x) as i64).collect()
    }

    fn trim(&mut self) {
        let size = self.universe();
        if size < 64 {
            self.words[0] &= (1u64 << size) - 1;
        }
    }

    fn same_arity(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// `"<n>:<hex>"` with the membership bits most significant element first.
    pub fn to_hex(&self) -> String {
        format!(
            "{}:{}",
            self.n,
            bits_to_hex((0..self.universe()).map(|x| self.contains(x)), self.universe())
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (n, hex) = text
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("set {text:?} lacks an <n>: header")))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad dimension in {text:?}")))?;
        check_arity("set", n, MAX_ARITY)?;
        let bits = hex_to_bits(hex.trim(), 1 << n)?;
        Self::from_predicate(n, |x| bits[x])
    }
}

impl fmt::Debug for F2Set {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Set({})", self.to_hex())
    }
}

impl fmt::Display for F2Set {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl FromStr for F2Set {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl TryFrom<String> for F2Set {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        Self::parse(&s)
    }
}

impl From<F2Set> for String {
    fn from(set: F2Set) -> String {
        set.to_hex()
    }
}

/// Pair count above which sumsets go through the transform.
const DIRECT_PAIRS: usize = 1 << 22;

/// `A + B = {a + b}`.
pub fn sumset(a: &F2Set, b: &F2Set) -> Result<F2Set> {
    a.same_arity(b)?;
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if small.len().saturating_mul(large.len()) <= DIRECT_PAIRS {
        let mut out = F2Set::empty(a.n)?;
        for x in small.iter() {
            for y in large.iter() {
                out.insert(x ^ y);
            }
        }
        return Ok(out);
    }
    sumset_spectral(a, b)
}

/// Support of the convolution `1_A * 1_B`, from the product of transforms.
/// Entries stay below `4^n <= 2^48`, so `i64` is exact.
pub fn sumset_spectral(a: &F2Set, b: &F2Set) -> Result<F2Set> {
    a.same_arity(b)?;
    let mut fa = a.indicator();
    let mut fb = b.indicator();
    fwht_i64(&mut fa);
    fwht_i64(&mut fb);
    // Convolution counts are at most 2^n; the unscaled product sum fits in i128.
    let mut conv: Vec<i128> = fa.iter().zip(&fb).map(|(&x, &y)| x as i128 * y as i128).collect();
    cubelab_core::spectrum::fwht_i128(&mut conv);
    let size = a.universe() as i128;
    F2Set::from_predicate(a.n, |x| conv[x] / size > 0)
}

/// `kA = A + ... + A` (`k` copies); `1A = A` and `0A = {0}`.
pub fn iterated_sumset(a: &F2Set, k: usize) -> Result<F2Set> {
    let mut acc = F2Set::from_elements(a.n, [0])?;
    for _ in 0..k {
        acc = sumset(&acc, a)?;
    }
    Ok(acc)
}

/// `|A + A| / |A|`.
pub fn doubling(a: &F2Set) -> Result<Ratio<u64>> {
    if a.is_empty() {
        return Err(Error::Domain("doubling constant of the empty set".into()));
    }
    Ok(Ratio::new(sumset(a, a)?.len() as u64, a.len() as u64))
}
