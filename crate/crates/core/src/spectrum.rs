//! Walsh-Hadamard transform and Fourier spectra.

use crate::error::{Error, Result};
use crate::function::{BooleanFunction, RealFunction};

/// In-place unnormalized transform: `a[S] <- sum_x a[x] chi_S(x)`.
pub fn fwht_i64(a: &mut [i64]) {
    let mut h = 1;
    while h < a.len() {
        for block in a.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*u, *v);
                *u = x + y;
                *v = x - y;
            }
        }
        h *= 2;
    }
}

pub fn fwht_i128(a: &mut [i128]) {
    let mut h = 1;
    while h < a.len() {
        for block in a.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*u, *v);
                *u = x + y;
                *v = x - y;
            }
        }
        h *= 2;
    }
}

pub fn fwht_f64(a: &mut [f64]) {
    let mut h = 1;
    while h < a.len() {
        for block in a.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*u, *v);
                *u = x + y;
                *v = x - y;
            }
        }
        h *= 2;
    }
}

/// Exact spectrum of a Boolean function, stored as `2^n * f̂(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    n: usize,
    coeffs: Vec<i64>,
}

pub fn wht(f: &BooleanFunction) -> Spectrum {
    let mut coeffs: Vec<i64> = f.table().iter().map(|&v| v as i64).collect();
    fwht_i64(&mut coeffs);
    Spectrum { n: f.n(), coeffs }
}

impl Spectrum {
    pub fn from_scaled(n: usize, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != 1 << n {
            return Err(Error::TableLength {
                n,
                len: coeffs.len(),
            });
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `2^n`, the scale of the stored integers.
    pub fn scale(&self) -> i64 {
        1 << self.n
    }

    pub fn scaled(&self) -> &[i64] {
        &self.coeffs
    }

    /// `f̂(S)` as a float.
    pub fn coeff(&self, s: usize) -> f64 {
        self.coeffs[s] as f64 / self.scale() as f64
    }

    /// `f̂(S)^2` as a float.
    pub fn weight(&self, s: usize) -> f64 {
        let c = self.coeffs[s] as f64;
        c * c / (self.scale() as f64).powi(2)
    }

    /// `Σ_S (2^n f̂(S))^2`; equals `4^n` for Boolean sources.
    pub fn total_weight_scaled(&self) -> u128 {
        self.coeffs.iter().map(|&c| (c as i128 * c as i128) as u128).sum()
    }

    pub fn parseval_holds(&self) -> bool {
        self.total_weight_scaled() == 1u128 << (2 * self.n)
    }

    /// Level weights `Σ_{|S|=k} (2^n f̂(S))^2`, exact, `k = 0..=n`.
    pub fn level_weights_scaled(&self) -> Vec<u128> {
        let mut w = vec![0u128; self.n + 1];
        for (s, &c) in self.coeffs.iter().enumerate() {
            w[s.count_ones() as usize] += (c as i128 * c as i128) as u128;
        }
        w
    }

    /// Level weights `W_k = Σ_{|S|=k} f̂(S)^2`.
    pub fn level_weights(&self) -> Vec<f64> {
        let denom = (self.scale() as f64).powi(2);
        self.level_weights_scaled()
            .into_iter()
            .map(|w| w as f64 / denom)
            .collect()
    }

    /// Largest `|S|` with a nonzero coefficient; 0 for the zero spectrum.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(s, _)| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Inverse transform back to a Boolean table; fails unless every value is ±1.
    pub fn inverse(&self) -> Result<BooleanFunction> {
        let mut t = self.coeffs.clone();
        fwht_i64(&mut t);
        let scale = self.scale();
        let mut table = Vec::with_capacity(t.len());
        for (index, v) in t.into_iter().enumerate() {
            if v % scale != 0 || (v / scale).abs() != 1 {
                return Err(Error::NotBoolean {
                    index,
                    value: v as f64 / scale as f64,
                });
            }
            table.push((v / scale) as i8);
        }
        BooleanFunction::new(self.n, table)
    }

    pub fn to_real(&self) -> RealSpectrum {
        let scale = self.scale() as f64;
        RealSpectrum {
            n: self.n,
            coeffs: self.coeffs.iter().map(|&c| c as f64 / scale).collect(),
        }
    }
}

pub fn inverse_wht(spec: &Spectrum) -> Result<BooleanFunction> {
    spec.inverse()
}

/// Spectrum of a real-valued function, stored as `f̂(S)` directly.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSpectrum {
    n: usize,
    coeffs: Vec<f64>,
}

/// Comparison tolerance for real-valued spectra.
pub const REAL_TOLERANCE: f64 = 1e-12;

pub fn wht_real(f: &RealFunction) -> RealSpectrum {
    let mut coeffs = f.table().to_vec();
    fwht_f64(&mut coeffs);
    let scale = coeffs.len() as f64;
    for c in &mut coeffs {
        *c /= scale;
    }
    RealSpectrum { n: f.n(), coeffs }
}

impl RealSpectrum {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != 1 << n {
            return Err(Error::TableLength {
                n,
                len: coeffs.len(),
            });
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, s: usize) -> f64 {
        self.coeffs[s]
    }

    /// Degree with coefficients below `REAL_TOLERANCE` treated as zero.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > REAL_TOLERANCE)
            .map(|(s, _)| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn inverse(&self) -> RealFunction {
        let mut t = self.coeffs.clone();
        fwht_f64(&mut t);
        RealFunction::new(self.n, t).expect("transform preserves length")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::*;
    use crate::function::character;

    /// Direct `O(4^n)` summation.
    fn brute_coeffs(f: &BooleanFunction) -> Vec<i64> {
        (0..f.len())
            .map(|s| {
                (0..f.len())
                    .map(|x| f.value(x) as i64 * character(s, x) as i64)
                    .sum()
            })
            .collect()
    }

    #[test]
    fn majority3_matches_brute_force() {
        let f = majority(3).unwrap();
        let spec = wht(&f);
        assert_eq!(spec.scaled(), brute_coeffs(&f).as_slice());
        // f̂({i}) = 1/2, f̂({1,2,3}) = -1/2
        for s in 0..8usize {
            let expected = match s.count_ones() {
                1 => 0.5,
                3 => -0.5,
                _ => 0.0,
            };
            assert_eq!(spec.coeff(s), expected);
        }
    }

    #[test]
    fn parity_and_dictator() {
        for n in 1..=6 {
            let spec = wht(&full_parity(n).unwrap());
            let full = (1 << n) - 1;
            for s in 0..1 << n {
                assert_eq!(spec.coeff(s), if s == full { 1.0 } else { 0.0 });
            }
            assert_eq!(spec.degree(), n);
        }
        let spec = wht(&dictator(4, 0).unwrap());
        assert_eq!(spec.coeff(1), 1.0);
        assert_eq!(spec.scaled().iter().filter(|&&c| c != 0).count(), 1);
    }

    #[test]
    fn inverse_rejects_non_boolean() {
        let s = Spectrum::from_scaled(1, vec![2, 0]).unwrap();
        assert_eq!(s.inverse().unwrap().table(), &[1, 1]);
        let s = Spectrum::from_scaled(1, vec![1, 0]).unwrap();
        assert!(s.inverse().is_err());
    }

    #[test]
    fn real_round_trip() {
        let f = RealFunction::new(2, vec![0.5, -1.25, 3.0, 7.0]).unwrap();
        let back = wht_real(&f).inverse();
        for (a, b) in f.table().iter().zip(back.table()) {
            assert!((a - b).abs() < REAL_TOLERANCE);
        }
    }
}
