//! Densities on `{0,1}^n`, their bias against characters, and how well
//! they fool Boolean functions.

use cubelab_core::spectrum::{fwht_f64, fwht_i64};
use cubelab_core::{check_arity, BooleanFunction, Dnf, Error, Result, MAX_ARITY};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Normalization tolerance of floating densities.
pub const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
enum Mass {
    Float(Vec<f64>),
    /// Multiplicities of a multiset, kept for exact answers.
    Counts { counts: Vec<u64>, total: u64 },
}

/// A probability distribution on `{0,1}^n`, indexed like truth tables.
#[derive(Clone, Debug, PartialEq)]
pub struct Density {
    n: usize,
    mass: Mass,
}

impl Density {
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self> {
        check_arity("density", n, MAX_ARITY)?;
        if probs.len() != 1 << n {
            return Err(Error::TableLength { n, len: probs.len() });
        }
        if let Some(i) = probs.iter().position(|p| !p.is_finite()) {
            return Err(Error::NotFinite { index: i });
        }
        if let Some(i) = probs.iter().position(|&p| p < 0.0) {
            return Err(Error::Domain(format!("negative mass {} at {i:x}", probs[i])));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::Domain(format!("total mass {total}")));
        }
        Ok(Self {
            n,
            mass: Mass::Float(probs),
        })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::from_multiset(n, 0..1usize << n)
    }

    /// Uniform over a multiset of points.
    pub fn from_multiset(n: usize, points: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_arity("density", n, MAX_ARITY)?;
        let mut counts = vec![0u64; 1 << n];
        let mut total = 0;
        for x in points {
            *counts
                .get_mut(x)
                .ok_or_else(|| Error::Domain(format!("point {x:x} of {{0,1}}^{n}")))? += 1;
            total += 1;
        }
        if total == 0 {
            return Err(Error::Domain("density of an empty multiset".into()));
        }
        Ok(Self {
            n,
            mass: Mass::Counts { counts, total },
        })
    }

    /// `size` independent uniform points.
    pub fn random_multiset(n: usize, size: usize, seed: u64) -> Result<Self> {
        check_arity("density", n, MAX_ARITY)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_multiset(n, (0..size).map(|_| rng.random_range(0..1usize << n)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prob(&self, x: usize) -> f64 {
        match &self.mass {
            Mass::Float(p) => p[x],
            Mass::Counts { counts, total } => counts[x] as f64 / *total as f64,
        }
    }

    pub fn probs(&self) -> Vec<f64> {
        (0..1usize << self.n).map(|x| self.prob(x)).collect()
    }

    /// `max_{S != 0} |E_phi[chi_S]|` exactly, for multiset densities.
    pub fn bias_exact(&self) -> Option<Ratio<i64>> {
        let Mass::Counts { counts, total } = &self.mass else {
            return None;
        };
        let mut hat: Vec<i64> = counts.iter().map(|&c| c as i64).collect();
        fwht_i64(&mut hat);
        let top = hat[1..].iter().map(|v| v.abs()).max().unwrap_or(0);
        Some(Ratio::new(top, *total as i64))
    }
}

/// `max_{S != 0} |sum_x phi(x) chi_S(x)|`, zero for `n = 0`.
pub fn density_bias(phi: &Density) -> f64 {
    if let Some(exact) = phi.bias_exact() {
        return *exact.numer() as f64 / *exact.denom() as f64;
    }
    let mut hat = phi.probs();
    fwht_f64(&mut hat);
    hat[1..].iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `|E_uniform[f] - E_phi[f]|`.
pub fn fooling_error(f: &BooleanFunction, phi: &Density) -> Result<f64> {
    fooling_error_by(f.n(), |x| f.value(x) as f64, phi)
}

/// As `fooling_error`, evaluating the formula pointwise (TRUE is `-1`).
pub fn fooling_error_dnf(f: &Dnf, phi: &Density) -> Result<f64> {
    fooling_error_by(f.n(), |x| if f.eval(x) { -1.0 } else { 1.0 }, phi)
}

fn fooling_error_by(n: usize, value: impl Fn(usize) -> f64, phi: &Density) -> Result<f64> {
    if n != phi.n() {
        return Err(Error::ArityMismatch {
            expected: n,
            found: phi.n(),
        });
    }
    let size = 1usize << n;
    let uniform: f64 = (0..size).map(&value).sum::<f64>() / size as f64;
    let under_phi: f64 = (0..size).map(|x| phi.prob(x) * value(x)).sum();
    Ok((uniform - under_phi).abs())
}
