//! Tail probabilities of Rademacher sums `Pr[|<a, x>| <= theta]`.

use cubelab_core::{check_arity, Error, Result};
use num_integer::Integer;
use num_rational::Ratio;

/// Largest supported dimension.
pub const TAIL_LIMIT: usize = 30;
/// Above this dimension the sums are counted by meet in the middle.
pub const BRUTE_FORCE_LIMIT: usize = 24;
/// Comparison slack for floating inputs.
pub const FLOAT_SLACK: f64 = 1e-12;

/// All `2^len` signed sums of `a`, indexed like truth tables.
fn half_sums<T: Copy + std::ops::Add<Output = T> + std::ops::Neg<Output = T>>(
    a: &[T],
    zero: T,
) -> Vec<T> {
    let mut sums = vec![zero; 1 << a.len()];
    for x in 0..sums.len() {
        // Each entry is a direct sum, so floating error does not accumulate.
        sums[x] = a
            .iter()
            .enumerate()
            .fold(zero, |acc, (i, &v)| if (x >> i) & 1 == 1 { acc + -v } else { acc + v });
    }
    sums
}

/// Counts points with `inside(s)` where `s = low + high` over the split halves.
/// `window(l)` gives the closed range of high sums accepted with low sum `l`.
fn count<T, F, W>(a: &[T], zero: T, inside: F, window: W) -> u64
where
    T: Copy + PartialOrd + std::ops::Add<Output = T> + std::ops::Neg<Output = T>,
    F: Fn(T) -> bool,
    W: Fn(T) -> (T, T, bool),
{
    let n = a.len();
    let h = n / 2;
    let low = half_sums(&a[..h], zero);
    let mut high = half_sums(&a[h..], zero);
    if n <= BRUTE_FORCE_LIMIT {
        let mut total = 0u64;
        for &r in &high {
            total += low.iter().filter(|&&l| inside(l + r)).count() as u64;
        }
        return total;
    }
    high.sort_by(|x, y| x.partial_cmp(y).expect("finite sums"));
    low.iter()
        .map(|&l| {
            let (lo, hi, strict) = window(l);
            let start = if strict {
                high.partition_point(|&r| r <= lo)
            } else {
                high.partition_point(|&r| r < lo)
            };
            let end = if strict {
                high.partition_point(|&r| r < hi)
            } else {
                high.partition_point(|&r| r <= hi)
            };
            end.saturating_sub(start) as u64
        })
        .sum()
}

fn probability(hits: u64, n: usize) -> Ratio<i64> {
    Ratio::new(hits as i64, 1i64 << n)
}

/// `Pr[|<a,x>| <= theta]` (or `< theta` when `strict`) for floating weights.
/// Comparisons carry a slack of `1e-12` in the direction that keeps exact
/// boundary cases (such as sums landing on `theta`) on the intended side.
pub fn threshold_tail(a: &[f64], theta: f64, strict: bool) -> Result<Ratio<i64>> {
    check_arity("threshold tail", a.len(), TAIL_LIMIT)?;
    if let Some(i) = a.iter().position(|v| !v.is_finite()) {
        return Err(Error::NotFinite { index: i });
    }
    if !theta.is_finite() {
        return Err(Error::Domain(format!("threshold {theta}")));
    }
    let bound = if strict {
        theta - FLOAT_SLACK
    } else {
        theta + FLOAT_SLACK
    };
    let hits = count(
        a,
        0.0,
        |s: f64| if strict { s.abs() < bound } else { s.abs() <= bound },
        |l| (-bound - l, bound - l, strict),
    );
    Ok(probability(hits, a.len()))
}

/// Exact version for rational weights and threshold.
pub fn threshold_tail_exact(
    a: &[Ratio<i64>],
    theta: Ratio<i64>,
    strict: bool,
) -> Result<Ratio<i64>> {
    check_arity("threshold tail", a.len(), TAIL_LIMIT)?;
    let overflow = || Error::Domain("weights too large for exact summation".into());
    let denom = a
        .iter()
        .chain(std::iter::once(&theta))
        .try_fold(1i128, |acc, r| {
            let d = *r.denom() as i128;
            (acc / acc.gcd(&d)).checked_mul(d)
        })
        .ok_or_else(overflow)?;
    let scale = |r: &Ratio<i64>| -> Result<i128> {
        (*r.numer() as i128)
            .checked_mul(denom / *r.denom() as i128)
            .ok_or_else(overflow)
    };
    let ints = a.iter().map(scale).collect::<Result<Vec<i128>>>()?;
    // |sum| <= 30 * max|a_i| must fit comfortably.
    if ints.iter().any(|v| v.unsigned_abs() > (i128::MAX as u128) / 64) {
        return Err(overflow());
    }
    let t = scale(&theta)?;
    let hits = count(
        &ints,
        0i128,
        |s: i128| if strict { s.abs() < t } else { s.abs() <= t },
        |l| (-t - l, t - l, strict),
    );
    Ok(probability(hits, a.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct enumeration with per-point rational sums.
    fn oracle(a: &[Ratio<i64>], theta: Ratio<i64>, strict: bool) -> Ratio<i64> {
        let n = a.len();
        let mut hits = 0i64;
        for x in 0..1usize << n {
            let s: Ratio<i64> = (0..n)
                .map(|i| if (x >> i) & 1 == 1 { -a[i] } else { a[i] })
                .sum();
            let m = if s < Ratio::from_integer(0) { -s } else { s };
            if (strict && m < theta) || (!strict && m <= theta) {
                hits += 1;
            }
        }
        Ratio::new(hits, 1 << n)
    }

    #[test]
    fn sharp_cases() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(threshold_tail(&[r, r], 1.0, false).unwrap(), Ratio::new(1, 2));
        assert_eq!(threshold_tail(&[0.5; 4], 1.0, true).unwrap(), Ratio::new(3, 8));
        let half = vec![Ratio::new(1, 2); 4];
        assert_eq!(
            threshold_tail_exact(&half, Ratio::from_integer(1), true).unwrap(),
            Ratio::new(3, 8)
        );
        assert_eq!(
            threshold_tail_exact(&half, Ratio::from_integer(1), false).unwrap(),
            Ratio::new(7, 8)
        );
        let mut e1 = vec![0.0; 7];
        e1[0] = 1.0;
        assert_eq!(threshold_tail(&e1, 1.0, false).unwrap(), Ratio::from_integer(1));
    }

    #[test]
    fn exact_matches_oracle() {
        let weights = [
            vec![Ratio::new(1, 3), Ratio::new(2, 5), Ratio::new(-1, 2), Ratio::new(3, 7)],
            vec![Ratio::new(1, 1); 5],
            vec![Ratio::new(5, 6), Ratio::new(1, 6), Ratio::new(1, 2), Ratio::new(1, 3), Ratio::new(2, 3), Ratio::new(1, 6)],
        ];
        for a in &weights {
            for theta in [Ratio::new(0, 1), Ratio::new(1, 6), Ratio::new(1, 2), Ratio::new(1, 1), Ratio::new(3, 2)] {
                for strict in [false, true] {
                    assert_eq!(threshold_tail_exact(a, theta, strict).unwrap(), oracle(a, theta, strict));
                }
            }
        }
    }

    #[test]
    fn meet_in_the_middle_matches_binomial_count() {
        // n = 26 uses the sorted path; compare with a closed form for equal weights:
        // |sum| <= 2 means the number of -1 entries is 12, 13 or 14.
        let a = vec![Ratio::from_integer(1); 26];
        let got = threshold_tail_exact(&a, Ratio::from_integer(2), false).unwrap();
        let c = |k: u64| (0..k).fold(1u64, |acc, i| acc * (26 - i) / (i + 1));
        assert_eq!(got, Ratio::new((c(12) + c(13) + c(14)) as i64, 1 << 26));
        let strict = threshold_tail_exact(&a, Ratio::from_integer(2), true).unwrap();
        assert_eq!(strict, Ratio::new(c(13) as i64, 1 << 26));
        let f = threshold_tail(&[1.0; 26], 2.0, true).unwrap();
        assert_eq!(f, strict);
    }

    #[test]
    fn full_range_is_one() {
        let a = [0.3, -1.7, 2.25, 0.01, 0.9];
        let total: f64 = a.iter().map(|v: &f64| v.abs()).sum();
        assert_eq!(threshold_tail(&a, total, false).unwrap(), Ratio::from_integer(1));
        assert!(threshold_tail(&[0.0; 31], 1.0, false).is_err());
    }
}
