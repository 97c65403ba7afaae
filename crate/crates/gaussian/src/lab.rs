//! Estimators for correlated-pair probabilities, partition stability and
//! Bernoulli/Gaussian widths.

use cubelab_core::{Error, Result};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::estimate::{check_rho, estimate, pairwise_sum, McEstimate, Normals};
use crate::region::GaussianRegion;

/// Points drawn to spot-check that cells partition space.
pub const PARTITION_CHECKS: usize = 10_000;

/// Largest dimension whose Bernoulli width is computed by enumeration.
pub const EXACT_WIDTH_LIMIT: usize = 24;

/// Coordinates enumerated by Gray code within one parallel block.
const WIDTH_BLOCK_BITS: usize = 12;

fn same_dim(regions: &[&GaussianRegion]) -> Result<usize> {
    let n = regions[0].dim();
    for r in regions {
        r.validate()?;
        if r.dim() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: r.dim(),
            });
        }
    }
    Ok(n)
}

fn indicator(b: bool) -> u32 {
    b as u32
}

/// `Pr[x in A, y in B]` for `rho`-correlated `(x, y)`. Every draw is also
/// evaluated at `(-x, -y)`; the pair is antithetic for halfspace-like
/// regions and changes nothing for symmetric ones.
pub fn joint_prob(
    a: &GaussianRegion,
    b: &GaussianRegion,
    rho: f64,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_rho(rho)?;
    let n = same_dim(&[a, b])?;
    estimate(
        samples,
        seed,
        || (vec![0.0; n], vec![0.0; n]),
        |(x, y), src| {
            src.pair(rho, x, y);
            let hits = indicator(a.contains(x) && b.contains(y))
                + indicator(a.contains_negated(x) && b.contains_negated(y));
            hits as f64 / 2.0
        },
    )
}

/// As `joint_prob`, also averaging over the exchange `(x, y) -> (y, x)`,
/// so that exchanging `A` and `B` gives a bit-identical estimate.
pub fn joint_prob_symmetrized(
    a: &GaussianRegion,
    b: &GaussianRegion,
    rho: f64,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_rho(rho)?;
    let n = same_dim(&[a, b])?;
    estimate(
        samples,
        seed,
        || (vec![0.0; n], vec![0.0; n]),
        |(x, y), src| {
            src.pair(rho, x, y);
            let hits = indicator(a.contains(x) && b.contains(y))
                + indicator(a.contains_negated(x) && b.contains_negated(y))
                + indicator(a.contains(y) && b.contains(x))
                + indicator(a.contains_negated(y) && b.contains_negated(x));
            hits as f64 / 4.0
        },
    )
}

/// Fails with the first of `PARTITION_CHECKS` seeded normal points that
/// lies in no cell or in several.
pub fn check_partition(cells: &[GaussianRegion], seed: u64) -> Result<()> {
    let refs: Vec<&GaussianRegion> = cells.iter().collect();
    if refs.is_empty() {
        return Err(Error::Domain("partition with no cells".into()));
    }
    let n = same_dim(&refs)?;
    // a stream no estimate uses
    let mut src = Normals::stream(seed, u64::MAX);
    let mut x = vec![0.0; n];
    for _ in 0..PARTITION_CHECKS {
        src.fill(&mut x);
        let owners = cells.iter().filter(|c| c.contains(&x)).count();
        if owners != 1 {
            return Err(Error::Precondition(format!(
                "point {x:?} lies in {owners} cells"
            )));
        }
    }
    Ok(())
}

/// `sum_i Pr[x in A_i, y in A_i]` for a partition `A_1, ..., A_q`.
pub fn partition_stability(
    cells: &[GaussianRegion],
    rho: f64,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_rho(rho)?;
    check_partition(cells, seed)?;
    let n = cells[0].dim();
    estimate(
        samples,
        seed,
        || (vec![0.0; n], vec![0.0; n]),
        |(x, y), src| {
            src.pair(rho, x, y);
            let hits: u32 = cells
                .iter()
                .map(|c| {
                    indicator(c.contains(x) && c.contains(y))
                        + indicator(c.contains_negated(x) && c.contains_negated(y))
                })
                .sum();
            hits as f64 / 2.0
        },
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Width {
    Exact { value: f64 },
    Estimate(McEstimate),
}

impl Width {
    pub fn value(&self) -> f64 {
        match self {
            Self::Exact { value } => *value,
            Self::Estimate(e) => e.value,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Widths {
    /// `E max_t <t, x>` for uniform `x in {-1,1}^n`.
    pub b: Width,
    /// The same for standard Gaussian `x`.
    pub g: McEstimate,
}

fn check_vectors(t: &[Vec<f64>]) -> Result<usize> {
    let Some(first) = t.first() else {
        return Err(Error::Domain("width of an empty vector set".into()));
    };
    let n = first.len();
    for v in t {
        if v.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: v.len(),
            });
        }
        if let Some(i) = v.iter().position(|c| !c.is_finite()) {
            return Err(Error::NotFinite { index: i });
        }
    }
    Ok(n)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

fn max_dot(t: &[Vec<f64>], x: &[f64]) -> f64 {
    t.iter().map(|v| dot(v, x)).fold(f64::NEG_INFINITY, f64::max)
}

fn signs(n: usize, index: usize) -> Vec<f64> {
    (0..n).map(|i| if index >> i & 1 == 1 { -1.0 } else { 1.0 }).collect()
}

/// `b(T)` by summing over all `2^n` sign vectors. Each block fixes the high
/// coordinates, computes the inner products once, and walks the low ones
/// in Gray-code order.
pub fn bernoulli_width_exact(t: &[Vec<f64>]) -> Result<f64> {
    let n = check_vectors(t)?;
    cubelab_core::check_arity("exact Bernoulli width", n, EXACT_WIDTH_LIMIT)?;
    let low = n.min(WIDTH_BLOCK_BITS);
    let blocks = 1usize << (n - low);
    let sums: Vec<f64> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut x = signs(n, block << low);
            let mut dots: Vec<f64> = t.iter().map(|v| dot(v, &x)).collect();
            let mut maxima = Vec::with_capacity(1 << low);
            maxima.push(dots.iter().copied().fold(f64::NEG_INFINITY, f64::max));
            for k in 1usize..1 << low {
                let i = k.trailing_zeros() as usize;
                x[i] = -x[i];
                for (d, v) in dots.iter_mut().zip(t) {
                    *d += 2.0 * x[i] * v[i];
                }
                maxima.push(dots.iter().copied().fold(f64::NEG_INFINITY, f64::max));
            }
            pairwise_sum(&maxima)
        })
        .collect();
    Ok(pairwise_sum(&sums) / (1u64 << n) as f64)
}

/// `b(T)` by sampling uniform sign vectors.
pub fn bernoulli_width_mc(t: &[Vec<f64>], samples: u64, seed: u64) -> Result<McEstimate> {
    let n = check_vectors(t)?;
    estimate(
        samples,
        seed,
        || vec![0.0; n],
        |x, src| {
            x.iter_mut().for_each(|v| *v = src.sign());
            max_dot(t, x)
        },
    )
}

/// `g(T)` by sampling standard Gaussian vectors.
pub fn gaussian_width(t: &[Vec<f64>], samples: u64, seed: u64) -> Result<McEstimate> {
    let n = check_vectors(t)?;
    estimate(
        samples,
        seed,
        || vec![0.0; n],
        |x, src| {
            src.fill(x);
            max_dot(t, x)
        },
    )
}

/// Both widths: `b` exactly up to `EXACT_WIDTH_LIMIT`, by sampling beyond.
/// The two estimates use unrelated seeds derived from `seed`.
pub fn widths(t: &[Vec<f64>], samples: u64, seed: u64) -> Result<Widths> {
    let n = check_vectors(t)?;
    let derived = ChaCha8Rng::seed_from_u64(seed).next_u64();
    let b = if n <= EXACT_WIDTH_LIMIT {
        Width::Exact {
            value: bernoulli_width_exact(t)?,
        }
    } else {
        Width::Estimate(bernoulli_width_mc(t, samples, derived)?)
    };
    Ok(Widths {
        b,
        g: gaussian_width(t, samples, seed)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_vectors(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect()
    }

    #[test]
    fn single_vector_has_zero_width() {
        let t = vec![vec![0.3, -1.2, 2.0]];
        assert!(bernoulli_width_exact(&t).unwrap().abs() < 1e-15);
        assert!(gaussian_width(&t, 100_000, 1).unwrap().within(0.0, 3.0));
    }

    #[test]
    fn coordinate_vectors() {
        for n in 1..=14 {
            let b = bernoulli_width_exact(&unit_vectors(n)).unwrap();
            assert!((b - (1.0 - 2f64.powi(1 - n as i32))).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn exact_width_matches_direct_sum() {
        let t = vec![vec![0.5, -1.0, 2.0, 0.25], vec![-1.0, 1.0, 0.0, 3.0], vec![0.1, 0.2, 0.3, 0.4]];
        let direct: f64 = (0..16).map(|i| max_dot(&t, &signs(4, i))).sum::<f64>() / 16.0;
        assert!((bernoulli_width_exact(&t).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn widths_choose_a_path() {
        let w = widths(&unit_vectors(3), 1000, 2).unwrap();
        assert_eq!(w.b, Width::Exact { value: 0.75 });
        assert!(widths(&[], 10, 1).is_err());
        assert!(widths(&[vec![1.0], vec![1.0, 2.0]], 10, 1).is_err());
        assert!(bernoulli_width_exact(&[vec![0.0; 25]]).is_err());
    }

    #[test]
    fn partition_check_names_a_point() {
        let h = GaussianRegion::coordinate_halfspace(2, 0, 0.0).unwrap();
        let overlap = vec![h.clone(), GaussianRegion::coordinate_halfspace(2, 1, 0.0).unwrap()];
        let err = partition_stability(&overlap, 0.5, 100, 3).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.contains("cells")));
        let split = vec![h.clone(), GaussianRegion::complement(h)];
        assert!(check_partition(&split, 3).is_ok());
    }

    #[test]
    fn full_correlation_is_stable() {
        let cells = GaussianRegion::standard_simplex(3, 2).unwrap();
        let e = partition_stability(&cells, 1.0, 10_000, 4).unwrap();
        assert_eq!((e.value, e.std_error), (1.0, 0.0));
    }
}
