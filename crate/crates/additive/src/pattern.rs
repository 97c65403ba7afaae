//! Linear-invariant patterns: `(M, sigma)`-freeness of a set.
//!
//! A violation is a stack `X = (x_1, ..., x_k)` of points with `M X = 0`
//! (columns of `X` in the kernel of `M`) and `[x_j in A] = sigma_j` for all
//! `j`. Stacks with repeated points count.

use cubelab_core::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::set::F2Set;

/// Largest solution-space dimension `n * dim ker M` enumerated.
pub const FREENESS_LIMIT: usize = 26;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959963984540054;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPattern", into = "RawPattern")]
pub struct PatternSystem {
    k: usize,
    /// Rows of `M` as bitmasks over the `k` columns.
    rows: Vec<u64>,
    /// Bit `j` is `sigma_j`.
    sigma: u64,
}

/// JSON form: row-major 0/1 matrix and the sigma array.
#[derive(Serialize, Deserialize)]
struct RawPattern {
    matrix: Vec<Vec<u8>>,
    sigma: Vec<u8>,
}

fn pack(bits: &[u8], what: &str) -> Result<u64> {
    bits.iter().enumerate().try_fold(0u64, |acc, (j, &b)| match b {
        0 => Ok(acc),
        1 => Ok(acc | 1 << j),
        _ => Err(Error::Parse(format!("{what} entry {b} is not 0 or 1"))),
    })
}

impl TryFrom<RawPattern> for PatternSystem {
    type Error = Error;

    fn try_from(raw: RawPattern) -> Result<Self> {
        let k = raw.sigma.len();
        if let Some(row) = raw.matrix.iter().find(|r| r.len() != k) {
            return Err(Error::Parse(format!(
                "matrix row of width {} against {k} sigma entries",
                row.len()
            )));
        }
        let rows = raw
            .matrix
            .iter()
            .map(|r| pack(r, "matrix"))
            .collect::<Result<Vec<_>>>()?;
        PatternSystem::new(k, rows, pack(&raw.sigma, "sigma")?)
    }
}

impl From<PatternSystem> for RawPattern {
    fn from(p: PatternSystem) -> Self {
        let unpack = |mask: u64| (0..p.k).map(|j| (mask >> j & 1) as u8).collect();
        RawPattern {
            matrix: p.rows.iter().map(|&r| unpack(r)).collect(),
            sigma: unpack(p.sigma),
        }
    }
}

impl PatternSystem {
    pub fn new(k: usize, rows: Vec<u64>, sigma: u64) -> Result<Self> {
        if k == 0 || k > 64 {
            return Err(Error::Domain(format!("pattern with {k} points")));
        }
        let mask = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        if rows.iter().chain([&sigma]).any(|&r| r & !mask != 0) {
            return Err(Error::Domain(format!("entries beyond the {k} columns")));
        }
        Ok(Self { k, rows, sigma })
    }

    /// `M = [1 1 1]`, `sigma = (1, 1, 1)`: triangles.
    pub fn triangle() -> Self {
        Self::new(3, vec![0b111], 0b111).expect("valid pattern")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sigma(&self, j: usize) -> bool {
        self.sigma >> j & 1 == 1
    }

    pub fn rank(&self) -> usize {
        self.k - self.kernel().len()
    }

    /// Basis of `{c in F_2^k : M c = 0}` as bitmasks.
    pub fn kernel(&self) -> Vec<u64> {
        // reduced row echelon form, pivot = lowest set bit
        let mut echelon: Vec<u64> = Vec::new();
        for &row in &self.rows {
            let mut r = row;
            for &e in &echelon {
                if r >> e.trailing_zeros() & 1 == 1 {
                    r ^= e;
                }
            }
            if r != 0 {
                let p = r.trailing_zeros();
                for e in echelon.iter_mut() {
                    if *e >> p & 1 == 1 {
                        *e ^= r;
                    }
                }
                echelon.push(r);
            }
        }
        let pivots: u64 = echelon.iter().map(|e| 1u64 << e.trailing_zeros()).sum();
        (0..self.k)
            .filter(|&j| pivots >> j & 1 == 0)
            .map(|free| {
                // set the free column, then solve each pivot row for its pivot
                let mut v = 1u64 << free;
                for &e in &echelon {
                    if e >> free & 1 == 1 {
                        v |= 1 << e.trailing_zeros();
                    }
                }
                v
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Freeness {
    Free,
    /// The lexicographically least violating stack `(x_1, ..., x_k)`.
    Violated { witness: Vec<usize> },
}

/// Points of the stack with parameters `t`: bit `b * r + i` of `t` puts
/// kernel vector `i` into column `b`.
fn stack(t: u64, n: usize, kernel: &[u64], k: usize) -> Vec<usize> {
    let r = kernel.len();
    let mut xs = vec![0usize; k];
    for b in 0..n {
        let mut column = 0u64;
        for (i, &v) in kernel.iter().enumerate() {
            if t >> (b * r + i) & 1 == 1 {
                column ^= v;
            }
        }
        for (j, x) in xs.iter_mut().enumerate() {
            if column >> j & 1 == 1 {
                *x |= 1 << b;
            }
        }
    }
    xs
}

fn matches(a: &F2Set, pattern: &PatternSystem, xs: &[usize]) -> bool {
    xs.iter().enumerate().all(|(j, &x)| a.contains(x) == pattern.sigma(j))
}

/// Exhaustive check over the `2^{n dim ker M}` solutions of `M X = 0`.
pub fn freeness_check(a: &F2Set, pattern: &PatternSystem) -> Result<Freeness> {
    let kernel = pattern.kernel();
    let n = a.n();
    let dim = n * kernel.len();
    if dim > FREENESS_LIMIT {
        return Err(Error::Capacity {
            what: "freeness check solution space",
            n: dim,
            limit: FREENESS_LIMIT,
        });
    }
    let k = pattern.k();
    let r = kernel.len();
    let total = 1u64 << dim;
    let chunks = total.min(256);
    let per = total / chunks;
    let best = (0..chunks)
        .into_par_iter()
        .filter_map(|c| {
            // Gray-code walk over t in [c * per, (c + 1) * per)
            let start = c * per;
            let mut xs = stack(start ^ (start >> 1), n, &kernel, k);
            let mut least: Option<Vec<usize>> = None;
            for t in start..start + per {
                if t > start {
                    let flip = t.trailing_zeros() as usize;
                    let (b, i) = (flip / r, flip % r);
                    for (j, x) in xs.iter_mut().enumerate() {
                        if kernel[i] >> j & 1 == 1 {
                            *x ^= 1 << b;
                        }
                    }
                }
                if matches(a, pattern, &xs) && least.as_ref().is_none_or(|l| xs < *l) {
                    least = Some(xs.clone());
                }
            }
            least
        })
        .min();
    Ok(match best {
        Some(witness) => Freeness::Violated { witness },
        None => Freeness::Free,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateEstimate {
    pub hits: u64,
    pub samples: u64,
    pub rate: f64,
    /// Wilson 95% interval.
    pub lower: f64,
    pub upper: f64,
}

impl RateEstimate {
    pub fn new(hits: u64, samples: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Domain("rate estimate from zero samples".into()));
        }
        let nn = samples as f64;
        let p = hits as f64 / nn;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / nn;
        let center = (p + z2 / (2.0 * nn)) / denom;
        let half = Z95 / denom * (p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)).sqrt();
        Ok(Self {
            hits,
            samples,
            rate: p,
            // the interval ends exactly at 0 or 1 when every sample agrees
            lower: if hits == 0 { 0.0 } else { (center - half).max(0.0) },
            upper: if hits == samples { 1.0 } else { (center + half).min(1.0) },
        })
    }
}

/// Fraction of uniformly random solutions of `M X = 0` that realize the
/// pattern. Zero whenever the set is free.
pub fn freeness_tester_estimate(
    a: &F2Set,
    pattern: &PatternSystem,
    samples: u64,
    seed: u64,
) -> Result<RateEstimate> {
    if samples == 0 {
        return Err(Error::Domain("tester with zero samples".into()));
    }
    let kernel = pattern.kernel();
    let (n, k) = (a.n(), pattern.k());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    let mut xs = vec![0usize; k];
    for _ in 0..samples {
        xs.iter_mut().for_each(|x| *x = 0);
        for b in 0..n {
            let mut column = 0u64;
            for &v in &kernel {
                if rng.random::<bool>() {
                    column ^= v;
                }
            }
            for (j, x) in xs.iter_mut().enumerate() {
                if column >> j & 1 == 1 {
                    *x |= 1 << b;
                }
            }
        }
        if matches(a, pattern, &xs) {
            hits += 1;
        }
    }
    RateEstimate::new(hits, samples)
}
