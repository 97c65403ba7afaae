//! Noise stability, the noise operator, and the quantities built on it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::function::{check_arity, BooleanFunction, RealFunction};
use crate::spectrum::{wht, wht_real, RealSpectrum, Spectrum};

/// One grid point of a noise profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoisePoint {
    pub rho: f64,
    pub stability: f64,
    /// `NS_δ` at `δ = (1 - ρ)/2`.
    pub noise_sensitivity: f64,
}

fn check_rho(rho: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::Domain(format!("correlation rho = {rho}")));
    }
    Ok(())
}

/// Evaluates `Σ_k ρ^k W_k` by Horner's rule.
fn eval_levels(levels: &[f64], rho: f64) -> f64 {
    levels.iter().rev().fold(0.0, |acc, &w| acc * rho + w)
}

pub fn stability_from_spectrum(spec: &Spectrum, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(eval_levels(&spec.level_weights(), rho))
}

pub fn stability(f: &BooleanFunction, rho: f64) -> Result<f64> {
    stability_from_spectrum(&wht(f), rho)
}

/// `NS_δ = 1/2 - 1/2 Stab_{1-2δ}`.
pub fn noise_sensitivity(f: &BooleanFunction, delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain(format!("noise rate delta = {delta}")));
    }
    Ok(0.5 - 0.5 * stability(f, 1.0 - 2.0 * delta)?)
}

pub fn noise_profile(f: &BooleanFunction, grid: &[f64]) -> Result<Vec<NoisePoint>> {
    let levels = wht(f).level_weights();
    grid.iter()
        .map(|&rho| {
            check_rho(rho)?;
            let stab = eval_levels(&levels, rho);
            Ok(NoisePoint {
                rho,
                stability: stab,
                noise_sensitivity: 0.5 - 0.5 * stab,
            })
        })
        .collect()
}

/// `Stab_ρ` as an exact rational for rational `ρ`.
pub fn stability_exact(spec: &Spectrum, rho: &BigRational) -> Result<BigRational> {
    if rho.abs() > BigRational::one() {
        return Err(Error::Domain(format!("correlation rho = {rho}")));
    }
    let denom = BigInt::from(1u8) << (2 * spec.n());
    let mut acc = BigRational::zero();
    for w in spec.level_weights_scaled().into_iter().rev() {
        acc = acc * rho + BigRational::new(BigInt::from(w), denom.clone());
    }
    Ok(acc)
}

/// `T_ρ f`: level-`k` coefficients scaled by `ρ^k`.
pub fn noise_operator(f: &RealFunction, rho: f64) -> Result<RealFunction> {
    check_rho(rho)?;
    Ok(apply_noise(&wht_real(f), rho))
}

fn apply_noise(spec: &RealSpectrum, rho: f64) -> RealFunction {
    let powers: Vec<f64> = (0..=spec.n()).map(|k| rho.powi(k as i32)).collect();
    let coeffs = spec
        .coeffs()
        .iter()
        .enumerate()
        .map(|(s, &c)| c * powers[s.count_ones() as usize])
        .collect();
    RealSpectrum::new(spec.n(), coeffs)
        .expect("same length")
        .inverse()
}

/// Uniform measure of `{x : g(x) >= t}`.
pub fn tail_mass(g: &RealFunction, t: f64) -> f64 {
    let count = g.table().iter().filter(|&&v| v >= t).count();
    count as f64 / g.table().len() as f64
}

/// Tolerance on `E[f] = 1` for the convolution-tail entry point.
pub const MEAN_TOLERANCE: f64 = 1e-12;

/// `Pr[T_ρ f >= t]` for a nonnegative `f` with unit mean.
pub fn convolution_tail(f: &RealFunction, rho: f64, t: f64) -> Result<f64> {
    if let Some(x) = f.table().iter().position(|&v| v < 0.0) {
        return Err(Error::Precondition(format!("f({x}) is negative")));
    }
    let mean = f.mean();
    if (mean - 1.0).abs() > MEAN_TOLERANCE {
        return Err(Error::Precondition(format!("E[f] = {mean}, expected 1")));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::Domain(format!("rho = {rho}, expected 0 < rho < 1")));
    }
    Ok(tail_mass(&noise_operator(f, rho)?, t))
}

/// Probability that `r` independent `ε`-noisy copies of a uniform `x` all
/// give the same value of `f`.
pub fn nicd_agreement(f: &BooleanFunction, r: u32, eps: f64) -> Result<f64> {
    if r < 2 {
        return Err(Error::Domain(format!("player count r = {r}")));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::Domain(format!("noise eps = {eps}")));
    }
    let noisy = apply_noise(&wht(f).to_real(), 1.0 - 2.0 * eps);
    let total: f64 = noisy
        .table()
        .iter()
        .map(|&t| {
            let p = ((1.0 + t) / 2.0).clamp(0.0, 1.0);
            p.powi(r as i32) + (1.0 - p).powi(r as i32)
        })
        .sum();
    Ok(total / f.len() as f64)
}

/// Largest arity for exact `3^n` erasure enumeration.
pub const ERASURE_LIMIT: usize = 14;

/// `E_z |f(z)|` for the multilinear extension under erasures: each `z_i`
/// is `±1` with probability `p/2` each and `0` with probability `1 - p`.
pub fn erasure_norm(f: &BooleanFunction, p: f64) -> Result<f64> {
    check_arity("erasure norm", f.n(), ERASURE_LIMIT)?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("survival probability p = {p}")));
    }
    let n = f.n();
    let total = 3usize.pow(n as u32);
    let pow3: Vec<usize> = (0..n).map(|i| 3usize.pow(i as u32)).collect();
    // Ternary digit d_i: 0 -> +1, 1 -> -1, 2 -> erased.
    let mut value = vec![0.0f64; total];
    let mut digits = vec![0u8; n];
    let half = p / 2.0;
    let keep = 1.0 - p;
    let mut weights = vec![0.0; n + 1];
    for (erased, w) in weights.iter_mut().enumerate() {
        *w = half.powi((n - erased) as i32) * keep.powi(erased as i32);
    }
    let mut acc = 0.0;
    for t in 0..total {
        if t > 0 {
            // odometer increment
            let mut i = 0;
            while digits[i] == 2 {
                digits[i] = 0;
                i += 1;
            }
            digits[i] += 1;
        }
        let first_erased = digits.iter().position(|&d| d == 2);
        let v = match first_erased {
            Some(i) => 0.5 * (value[t - 2 * pow3[i]] + value[t - pow3[i]]),
            None => {
                let x = digits
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (i, &d)| acc | ((d as usize) << i));
                f.value(x) as f64
            }
        };
        value[t] = v;
        let erased = digits.iter().filter(|&&d| d == 2).count();
        acc += weights[erased] * v.abs();
    }
    Ok(acc)
}

/// `Σ_S f̂(S) Π_{i∈S} point_i`.
pub fn multilinear_eval(f: &BooleanFunction, point: &[f64]) -> Result<f64> {
    multilinear_eval_real(&f.to_real(), point)
}

pub fn multilinear_eval_real(f: &RealFunction, point: &[f64]) -> Result<f64> {
    if point.len() != f.n() {
        return Err(Error::ArityMismatch {
            expected: f.n(),
            found: point.len(),
        });
    }
    // Contract one coordinate at a time, highest first:
    // value = (1+z)/2 * f(x_i=+1) + (1-z)/2 * f(x_i=-1).
    let mut table = f.table().to_vec();
    for &z in point.iter().rev() {
        let half = table.len() / 2;
        let (plus, minus) = table.split_at(half);
        table = plus
            .iter()
            .zip(minus)
            .map(|(a, b)| 0.5 * (1.0 + z) * a + 0.5 * (1.0 - z) * b)
            .collect();
    }
    Ok(table[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::*;
    use num_bigint::BigInt;

    #[test]
    fn dictator_profile() {
        let f = dictator(3, 1).unwrap();
        for p in noise_profile(&f, &[-0.5, 0.0, 0.3, 1.0]).unwrap() {
            assert!((p.stability - p.rho).abs() < 1e-15);
            assert!((p.noise_sensitivity - (1.0 - p.rho) / 2.0).abs() < 1e-15);
        }
        assert!(noise_profile(&f, &[1.5]).is_err());
        assert!((noise_sensitivity(&f, 0.1).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn majority3_stability_polynomial() {
        let spec = wht(&majority(3).unwrap());
        for k in 0..=10 {
            let rho = BigRational::new(BigInt::from(k), BigInt::from(10));
            let expected = BigRational::new(BigInt::from(3), BigInt::from(4)) * &rho
                + BigRational::new(BigInt::from(1), BigInt::from(4)) * &rho * &rho * &rho;
            assert_eq!(stability_exact(&spec, &rho).unwrap(), expected);
        }
    }

    #[test]
    fn parity_stability() {
        let f = full_parity(4).unwrap();
        assert!((stability(&f, 0.7).unwrap() - 0.7f64.powi(4)).abs() < 1e-15);
    }

    #[test]
    fn noise_operator_on_constants() {
        let one = RealFunction::from_fn(3, |_| 1.0).unwrap();
        for rho in [0.0, 0.25, 0.9] {
            let g = noise_operator(&one, rho).unwrap();
            assert!(g.table().iter().all(|&v| (v - 1.0).abs() < 1e-12));
            assert_eq!(tail_mass(&g, 1.0 - 1e-12), 1.0);
        }
    }

    #[test]
    fn point_mass_convolution_tail() {
        // f = 2^n at x = 0. Direct oracle: T_ρ f(x) = Σ_y f(y) Pr[y | x]
        // = 2^n ((1+ρ)/2)^{n-|x|} ((1-ρ)/2)^{|x|}.
        let n = 4;
        let f = RealFunction::from_fn(n, |x| if x == 0 { 16.0 } else { 0.0 }).unwrap();
        let g = noise_operator(&f, 0.5).unwrap();
        for x in 0..16usize {
            let d = x.count_ones() as i32;
            let direct = 16.0 * 0.75f64.powi(n as i32 - d) * 0.25f64.powi(d);
            assert!((g.value(x) - direct).abs() < 1e-12);
        }
        // values by distance: 5.0625, 1.6875, 0.5625, 0.1875, 0.0625
        assert_eq!(convolution_tail(&f, 0.5, 1.0).unwrap(), 5.0 / 16.0);
        assert_eq!(convolution_tail(&f, 0.5, 2.0).unwrap(), 1.0 / 16.0);
        assert_eq!(convolution_tail(&f, 0.5, 0.1).unwrap(), 15.0 / 16.0);
    }

    #[test]
    fn convolution_tail_preconditions() {
        let neg = RealFunction::new(1, vec![3.0, -1.0]).unwrap();
        assert!(matches!(
            convolution_tail(&neg, 0.5, 1.0),
            Err(Error::Precondition(_))
        ));
        let unnormalized = RealFunction::new(1, vec![3.0, 1.0]).unwrap();
        assert!(convolution_tail(&unnormalized, 0.5, 1.0).is_err());
        let ok = RealFunction::new(1, vec![2.0, 0.0]).unwrap();
        assert!(convolution_tail(&ok, 0.0, 1.0).is_err());
        assert!(convolution_tail(&ok, 0.5, 1.0).is_ok());
    }

    #[test]
    fn rho_zero_collapses_to_mean() {
        let f = RealFunction::from_fn(3, |x| if x < 2 { 4.0 } else { 0.0 }).unwrap();
        let g = noise_operator(&f, 0.0).unwrap();
        assert_eq!(tail_mass(&g, 1.0), 1.0);
        assert_eq!(tail_mass(&g, 1.0 + 1e-9), 0.0);
    }

    #[test]
    fn nicd_dictator() {
        let f = dictator(3, 0).unwrap();
        for r in [2u32, 3, 5, 10] {
            for eps in [0.05f64, 0.26, 0.4] {
                let expected = (1.0 - eps).powi(r as i32) + eps.powi(r as i32);
                assert!((nicd_agreement(&f, r, eps).unwrap() - expected).abs() < 1e-12);
            }
        }
        let p = nicd_agreement(&majority(5).unwrap(), 4, 1e-9).unwrap();
        assert!((p - 1.0).abs() < 1e-6);
        assert!(nicd_agreement(&f, 1, 0.1).is_err());
        assert!(nicd_agreement(&f, 2, 0.5).is_err());
    }

    #[test]
    fn erasure_small_cases() {
        for p in [0.1, 0.5, 0.9, 1.0] {
            let d = erasure_norm(&dictator(3, 2).unwrap(), p).unwrap();
            assert!((d - p).abs() < 1e-14);
            let par = erasure_norm(&full_parity(2).unwrap(), p).unwrap();
            assert!((par - p * p).abs() < 1e-14);
            // Maj_3 closed form 1.5 p (1-p) + p^3 from the spectrum.
            let m = erasure_norm(&majority(3).unwrap(), p).unwrap();
            assert!((m - (1.5 * p * (1.0 - p) + p.powi(3))).abs() < 1e-14);
        }
        assert!(erasure_norm(&dictator(3, 0).unwrap(), 0.0).is_err());
        let big = BooleanFunction::constant(15, 1).unwrap();
        assert!(erasure_norm(&big, 0.5).is_err());
    }

    #[test]
    fn multilinear_points() {
        let maj = majority(3).unwrap();
        assert_eq!(multilinear_eval(&maj, &[0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(multilinear_eval(&maj, &[1.0, 1.0, 0.0]).unwrap(), 1.0);
        for x in 0..8usize {
            let point: Vec<f64> = (0..3).map(|i| crate::function::coord(x, i) as f64).collect();
            assert_eq!(multilinear_eval(&maj, &point).unwrap(), maj.value(x) as f64);
        }
        assert!(multilinear_eval(&maj, &[0.0]).is_err());
    }
}
