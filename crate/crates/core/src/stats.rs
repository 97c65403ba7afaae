//! Fourier-analytic summary statistics of a Boolean function.

use num_rational::Ratio;

use crate::function::BooleanFunction;
use crate::spectrum::{wht, Spectrum};

#[derive(Clone, Debug, PartialEq)]
pub struct FourierStats {
    pub influences: Vec<f64>,
    pub total_influence: f64,
    pub variance: f64,
    pub degree: usize,
    /// Base-2 entropy of the distribution `{f̂(S)^2}`.
    pub spectral_entropy: f64,
    /// Level-1 weight `Σ_i f̂({i})^2`.
    pub w1: f64,
    /// `Σ_i f̂({i})`.
    pub linear_sum: f64,
    pub max_coeff_sq: f64,
    pub mean: f64,
}

pub fn fourier_stats(f: &BooleanFunction) -> FourierStats {
    stats_from_spectrum(&wht(f))
}

pub fn stats_from_spectrum(spec: &Spectrum) -> FourierStats {
    let n = spec.n();
    let c = spec.scaled();
    let denom = (spec.scale() as f64).powi(2);

    let influences = influences_scaled(spec)
        .into_iter()
        .map(|w| w as f64 / denom)
        .collect::<Vec<_>>();
    let total_influence = total_influence_scaled(spec) as f64 / denom;

    let mut entropy = 0.0;
    let mut max_sq = 0i64;
    for &v in c {
        let sq = v * v;
        max_sq = max_sq.max(sq);
        if sq != 0 {
            let w = sq as f64 / denom;
            entropy -= w * w.log2();
        }
    }

    let singletons = (0..n).map(|i| c[1 << i]);
    let w1 = singletons.clone().map(|v| (v * v) as f64).sum::<f64>() / denom;
    let linear_sum = singletons.sum::<i64>() as f64 / spec.scale() as f64;

    let mean = spec.coeff(0);
    let variance = ((1i128 << (2 * n)) - (c[0] as i128).pow(2)) as f64 / denom;

    FourierStats {
        influences,
        total_influence,
        variance,
        degree: spec.degree(),
        spectral_entropy: entropy,
        w1,
        linear_sum,
        max_coeff_sq: max_sq as f64 / denom,
        mean,
    }
}

/// `Inf_i` scaled by `4^n`, exact.
pub fn influences_scaled(spec: &Spectrum) -> Vec<u64> {
    let mut inf = vec![0u64; spec.n()];
    for (s, &v) in spec.scaled().iter().enumerate() {
        if v == 0 {
            continue;
        }
        let sq = (v * v) as u64;
        for (i, slot) in inf.iter_mut().enumerate() {
            if (s >> i) & 1 == 1 {
                *slot += sq;
            }
        }
    }
    inf
}

/// `Σ_S |S| (2^n f̂(S))^2`.
pub fn total_influence_scaled(spec: &Spectrum) -> u64 {
    spec.scaled()
        .iter()
        .enumerate()
        .map(|(s, &v)| s.count_ones() as u64 * (v * v) as u64)
        .sum()
}

/// Total influence as an exact rational.
pub fn total_influence_exact(spec: &Spectrum) -> Ratio<i64> {
    Ratio::new(total_influence_scaled(spec) as i64, 1i64 << (2 * spec.n()))
}

/// `Inf_i` as exact rationals.
pub fn influences_exact(spec: &Spectrum) -> Vec<Ratio<i64>> {
    let denom = 1i64 << (2 * spec.n());
    influences_scaled(spec)
        .into_iter()
        .map(|w| Ratio::new(w as i64, denom))
        .collect()
}
