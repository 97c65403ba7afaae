//! Reproducible Monte Carlo: counter-addressed normal streams, correlated
//! pairs, and the chunked mean/standard-error reduction.

use cubelab_core::{Error, Result};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::normal::inverse_normal_cdf;

/// Samples per independent stream. Sample `k` always lives in stream
/// `k / CHUNK`, so estimates do not depend on the worker count.
pub const CHUNK: u64 = 1 << 12;

pub const CSV_HEADER: &str = "value,std_error,samples,seed";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    /// Sample standard deviation over `sqrt(samples)`; NaN for one sample.
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `|value - target| <= k * std_error`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.std_error
    }

    pub fn to_csv_row(&self) -> String {
        format!("{},{},{},{}", self.value, self.std_error, self.samples, self.seed)
    }
}

/// Standard normals drawn by inversion from one ChaCha stream.
pub struct Normals {
    rng: ChaCha8Rng,
}

impl Normals {
    /// The stream holding samples `chunk * CHUNK ..`.
    pub fn stream(seed: u64, chunk: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        Self { rng }
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn sign(&mut self) -> f64 {
        if self.rng.next_u32() & 1 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn normal(&mut self) -> f64 {
        inverse_normal_cdf(self.uniform())
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = self.normal());
    }

    /// Fills `x` and `y` with a `rho`-correlated pair: `x` first, then the
    /// independent `z` in `y = rho x + sqrt(1 - rho^2) z`.
    pub fn pair(&mut self, rho: f64, x: &mut [f64], y: &mut [f64]) {
        self.fill(x);
        self.fill(y);
        let s = (1.0 - rho * rho).sqrt();
        for (yi, &xi) in y.iter_mut().zip(x.iter()) {
            *yi = rho * xi + s * *yi;
        }
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if rho.abs() <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("correlation {rho}")))
    }
}

/// Iterator over `rho`-correlated pairs in `R^n`; the `k`-th pair is the one
/// every estimator in this crate sees as its `k`-th sample.
pub struct CorrelatedPairs {
    n: usize,
    rho: f64,
    seed: u64,
    next: u64,
    samples: u64,
    source: Option<Normals>,
}

impl Iterator for CorrelatedPairs {
    type Item = (Vec<f64>, Vec<f64>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next == self.samples {
            return None;
        }
        if self.next.is_multiple_of(CHUNK) {
            self.source = Some(Normals::stream(self.seed, self.next / CHUNK));
        }
        let source = self.source.as_mut().expect("stream opened at chunk start");
        let (mut x, mut y) = (vec![0.0; self.n], vec![0.0; self.n]);
        source.pair(self.rho, &mut x, &mut y);
        self.next += 1;
        Some((x, y))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.samples - self.next) as usize;
        (left, Some(left))
    }
}

pub fn correlated_pairs(n: usize, rho: f64, samples: u64, seed: u64) -> Result<CorrelatedPairs> {
    check_rho(rho)?;
    Ok(CorrelatedPairs {
        n,
        rho,
        seed,
        next: 0,
        samples,
        source: None,
    })
}

pub(crate) fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Count, mean and sum of squared deviations of one chunk.
#[derive(Clone, Copy)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn of(values: &[f64]) -> Self {
        let count = values.len() as f64;
        let mean = pairwise_sum(values) / count;
        let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
        Self {
            count,
            mean,
            m2: pairwise_sum(&dev),
        }
    }

    fn merge(self, other: Self) -> Self {
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        Self {
            count,
            mean: self.mean + delta * other.count / count,
            m2: self.m2 + other.m2 + delta * delta * self.count * other.count / count,
        }
    }
}

/// Averages `sample` over `samples` draws. Each chunk builds its scratch
/// state with `init`; chunk results are merged in chunk order.
pub(crate) fn estimate<S>(
    samples: u64,
    seed: u64,
    init: impl Fn() -> S + Sync,
    sample: impl Fn(&mut S, &mut Normals) -> f64 + Sync,
) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::Domain("estimate from zero samples".into()));
    }
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut source = Normals::stream(seed, c);
            let mut state = init();
            let len = CHUNK.min(samples - c * CHUNK) as usize;
            let values: Vec<f64> = (0..len).map(|_| sample(&mut state, &mut source)).collect();
            Moments::of(&values)
        })
        .collect();
    let total = parts
        .into_iter()
        .reduce(Moments::merge)
        .expect("at least one chunk");
    let std_error = if samples > 1 {
        (total.m2 / (total.count - 1.0)).sqrt() / total.count.sqrt()
    } else {
        f64::NAN
    };
    Ok(McEstimate {
        value: total.mean,
        std_error,
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_correlation_copies() {
        for (x, y) in correlated_pairs(3, 1.0, 100, 5).unwrap() {
            assert_eq!(x, y);
        }
        for (x, y) in correlated_pairs(2, -1.0, 10, 5).unwrap() {
            assert!(x.iter().zip(&y).all(|(a, b)| *a == -*b));
        }
        assert!(correlated_pairs(2, 1.01, 10, 5).is_err());
    }

    #[test]
    fn pairs_cross_chunk_boundaries() {
        let pairs: Vec<_> = correlated_pairs(1, 0.3, CHUNK + 3, 9).unwrap().collect();
        assert_eq!(pairs.len() as u64, CHUNK + 3);
        let mut fresh = Normals::stream(9, 1);
        let (mut x, mut y) = ([0.0], [0.0]);
        fresh.pair(0.3, &mut x, &mut y);
        assert_eq!(pairs[CHUNK as usize], (x.to_vec(), y.to_vec()));
    }

    #[test]
    fn estimate_of_constant_and_coin() {
        let c = estimate(10_000, 1, || (), |_, _| 2.5).unwrap();
        assert_eq!((c.value, c.std_error), (2.5, 0.0));
        let coin = estimate(100_000, 1, || (), |_, s| if s.uniform() < 0.5 { 1.0 } else { 0.0 }).unwrap();
        assert!(coin.within(0.5, 3.0));
        assert!((coin.std_error - 0.5 / (100_000f64).sqrt()).abs() < 1e-5);
        assert!(estimate(0, 1, || (), |_, _| 0.0).is_err());
        assert!(estimate(1, 1, || (), |_, _| 0.0).unwrap().std_error.is_nan());
    }

    #[test]
    fn moments_merge_like_one_pass() {
        let v: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let whole = Moments::of(&v);
        let split = Moments::of(&v[..333]).merge(Moments::of(&v[333..]));
        assert!((whole.mean - split.mean).abs() < 1e-12);
        assert!((whole.m2 - split.m2).abs() < 1e-9);
    }

    #[test]
    fn csv_row() {
        let e = McEstimate {
            value: 0.25,
            std_error: 0.001,
            samples: 10,
            seed: 7,
        };
        assert_eq!(e.to_csv_row(), "0.25,0.001,10,7");
    }
}
