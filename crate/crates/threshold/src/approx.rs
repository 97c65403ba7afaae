//! Least degree of a polynomial that approximates majority in the
//! `[2/3, 1]` / `[-1, -2/3]` band sense.

use cubelab_core::function::character;
use cubelab_core::{check_arity, Error, Result};
use rayon::prelude::*;

use crate::ltf::permutation_maps;
use crate::lp::{feasibility, Cmp, Coeff, LinearProgram, Verdict};
use crate::ptf::PtfRep;

pub const SYMMETRIC_LIMIT: usize = 20;
pub const EXACT_LIMIT: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxMode {
    /// Polynomials in `x_1 + ... + x_n` only; the degree found is an upper bound.
    Symmetric,
    /// All multilinear polynomials.
    Exact,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ApproxWitness {
    /// Coefficients of `T_j(s / n)`, `s = x_1 + ... + x_n`, Chebyshev basis.
    Chebyshev(Vec<f64>),
    Multilinear(PtfRep),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ApproxOutcome {
    Found { degree: usize, witness: ApproxWitness },
    /// No degree up to the limit works.
    InfeasibleAtLimit { limit: usize },
}

fn third(k: i128) -> Coeff {
    Coeff::new(k, 3)
}

/// Adds `lo <= a.c <= hi` for the band of the given sign.
fn push_band(lp: &mut LinearProgram, row: Vec<Coeff>, positive: bool) {
    let (lo, hi) = if positive {
        (third(2), third(3))
    } else {
        (third(-3), third(-2))
    };
    lp.push(row.clone(), Cmp::Ge, lo);
    lp.push(row, Cmp::Le, hi);
}

/// Band forced by the level `s`: `Some(true)` above `n/2`, `Some(false)` below `-n/2`.
fn forced(n: usize, s: i64) -> Option<bool> {
    if 2 * s >= n as i64 {
        Some(true)
    } else if 2 * s <= -(n as i64) {
        Some(false)
    } else {
        None
    }
}

/// `T_0 .. T_d` at `t`, exactly.
fn chebyshev(t: Coeff, d: usize) -> Vec<Coeff> {
    let mut out = vec![Coeff::from_integer(1), t];
    while out.len() <= d {
        let k = out.len();
        let next = Coeff::from_integer(2) * t * out[k - 1] - out[k - 2];
        out.push(next);
    }
    out.truncate(d + 1);
    out
}

fn symmetric_program(n: usize, d: usize, middle: &[i64], pattern: u64) -> LinearProgram {
    let mut lp = LinearProgram::new(d + 1);
    for w in 0..=n {
        let s = n as i64 - 2 * w as i64;
        let row = chebyshev(Coeff::new(s as i128, n as i128), d);
        let positive = forced(n, s).unwrap_or_else(|| {
            let j = middle.iter().position(|&m| m == s).expect("middle level");
            (pattern >> j) & 1 == 1
        });
        push_band(&mut lp, row, positive);
    }
    lp
}

/// Image of a middle-level pattern under `s -> -s`, `p -> -p`.
fn mirror_pattern(pattern: u64, len: usize) -> u64 {
    (0..len).fold(0, |acc, j| {
        let bit = (pattern >> (len - 1 - j)) & 1;
        acc | ((bit ^ 1) << j)
    })
}

fn symmetric_degree(n: usize, d: usize) -> Option<ApproxWitness> {
    let middle: Vec<i64> = (0..=n)
        .map(|w| n as i64 - 2 * w as i64)
        .filter(|&s| forced(n, s).is_none())
        .rev()
        .collect();
    let patterns: Vec<u64> = (0..1u64 << middle.len())
        .filter(|&p| p <= mirror_pattern(p, middle.len()))
        .collect();
    patterns.par_iter().find_map_first(|&p| {
        match feasibility(&symmetric_program(n, d, &middle, p)).verdict {
            Verdict::Feasible(c) => Some(ApproxWitness::Chebyshev(c)),
            Verdict::Infeasible => None,
        }
    })
}

fn exact_program(n: usize, support: &[usize], middle: &[usize], pattern: u64) -> LinearProgram {
    let mut lp = LinearProgram::new(support.len());
    for x in 0..1usize << n {
        let s = n as i64 - 2 * x.count_ones() as i64;
        let row = support
            .iter()
            .map(|&m| Coeff::from_integer(character(m, x) as i128))
            .collect();
        let positive = forced(n, s).unwrap_or_else(|| {
            let j = middle.iter().position(|&m| m == x).expect("middle point");
            (pattern >> j) & 1 == 1
        });
        push_band(&mut lp, row, positive);
    }
    lp
}

/// Patterns over the middle points, one per orbit of coordinate permutations
/// combined with the negation `x -> -x`, `p -> -p`.
fn exact_patterns(n: usize, middle: &[usize]) -> Vec<u64> {
    let full = (1usize << n) - 1;
    let index = |x: usize| middle.iter().position(|&m| m == x).expect("middle point");
    let mut images: Vec<Box<dyn Fn(u64) -> u64>> = Vec::new();
    for map in permutation_maps(n) {
        for negate in [false, true] {
            let map = map.clone();
            let middle = middle.to_vec();
            images.push(Box::new(move |p: u64| {
                middle.iter().fold(0u64, |acc, &x| {
                    let y = if negate { map[x] ^ full } else { map[x] };
                    let bit = ((p >> index(x)) & 1) ^ negate as u64;
                    acc | (bit << index(y))
                })
            }));
        }
    }
    (0..1u64 << middle.len())
        .filter(|&p| images.iter().all(|g| g(p) >= p))
        .collect()
}

fn exact_degree(n: usize, d: usize) -> Option<ApproxWitness> {
    let support: Vec<usize> = (0..1usize << n)
        .filter(|s| s.count_ones() as usize <= d)
        .collect();
    let middle: Vec<usize> = (0..1usize << n)
        .filter(|x| forced(n, n as i64 - 2 * x.count_ones() as i64).is_none())
        .collect();
    exact_patterns(n, &middle).par_iter().find_map_first(|&p| {
        match feasibility(&exact_program(n, &support, &middle, p)).verdict {
            Verdict::Feasible(c) => PtfRep::new(n, support.iter().copied().zip(c).collect())
                .ok()
                .map(ApproxWitness::Multilinear),
            Verdict::Infeasible => None,
        }
    })
}

/// Whether degree `d` admits a band approximation in the given mode.
pub fn approx_majority_at_degree(n: usize, d: usize, mode: ApproxMode) -> Result<Option<ApproxWitness>> {
    if n == 0 {
        return Err(Error::Domain("arity 0".into()));
    }
    Ok(match mode {
        ApproxMode::Symmetric => {
            check_arity("symmetric approximate degree", n, SYMMETRIC_LIMIT)?;
            symmetric_degree(n, d)
        }
        ApproxMode::Exact => {
            check_arity("approximate degree", n, EXACT_LIMIT)?;
            exact_degree(n, d)
        }
    })
}

/// Least degree with a band approximation, searching `0..=n`.
pub fn approx_majority_min_degree(n: usize, mode: ApproxMode) -> Result<ApproxOutcome> {
    for d in 0..=n {
        if let Some(witness) = approx_majority_at_degree(n, d, mode)? {
            return Ok(ApproxOutcome::Found { degree: d, witness });
        }
    }
    Ok(ApproxOutcome::InfeasibleAtLimit { limit: n })
}

/// Evaluates a Chebyshev witness at the level `s`.
pub fn eval_chebyshev(coeffs: &[f64], n: usize, s: i64) -> f64 {
    let t = s as f64 / n as f64;
    let (mut prev, mut cur) = (1.0, t);
    coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let v = match j {
                0 => 1.0,
                1 => t,
                _ => {
                    let next = 2.0 * t * cur - prev;
                    (prev, cur) = (cur, next);
                    next
                }
            };
            c * v
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SLACK: f64 = 1e-9;

    fn in_band(v: f64, positive: bool) -> bool {
        if positive {
            (2.0 / 3.0 - SLACK..=1.0 + SLACK).contains(&v)
        } else {
            (-1.0 - SLACK..=-2.0 / 3.0 + SLACK).contains(&v)
        }
    }

    /// Independent check of a multilinear witness on every point.
    fn valid_multilinear(n: usize, p: &PtfRep) -> bool {
        (0..1usize << n).all(|x| {
            let s = n as i64 - 2 * x.count_ones() as i64;
            let v = p.eval(x);
            match forced(n, s) {
                Some(positive) => in_band(v, positive),
                None => in_band(v, true) || in_band(v, false),
            }
        })
    }

    #[test]
    fn exact_mode_small_cases() {
        for (n, want) in [(1, 1), (2, 1)] {
            match approx_majority_min_degree(n, ApproxMode::Exact).unwrap() {
                ApproxOutcome::Found {
                    degree,
                    witness: ApproxWitness::Multilinear(p),
                } => {
                    assert_eq!(degree, want, "n = {n}");
                    assert!(valid_multilinear(n, &p));
                }
                other => panic!("{other:?}"),
            }
        }
        assert!(approx_majority_at_degree(2, 0, ApproxMode::Exact).unwrap().is_none());
        // the hand witness (5/6) x1 at n = 2
        let p = PtfRep::new(2, [(1usize, 5.0 / 6.0)].into()).unwrap();
        assert!(valid_multilinear(2, &p));
        assert!(approx_majority_min_degree(4, ApproxMode::Exact).is_err());
    }

    #[test]
    fn exact_mode_three_bits() {
        match approx_majority_min_degree(3, ApproxMode::Exact).unwrap() {
            ApproxOutcome::Found {
                degree,
                witness: ApproxWitness::Multilinear(p),
            } => {
                assert!(valid_multilinear(3, &p));
                // Maj_3 itself has degree 3; degree 0 cannot separate the bands.
                assert!((1..=3).contains(&degree));
                assert!(approx_majority_at_degree(3, degree - 1, ApproxMode::Exact).unwrap().is_none());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn symmetric_mode_bounds_exact_mode() {
        for n in 1..=3 {
            let degree = |mode| match approx_majority_min_degree(n, mode).unwrap() {
                ApproxOutcome::Found { degree, .. } => degree,
                other => panic!("{other:?}"),
            };
            assert!(degree(ApproxMode::Symmetric) >= degree(ApproxMode::Exact));
        }
        // n = 2: a symmetric polynomial takes one value on the middle level
        // s = 0, so it must bend there and degree 1 is impossible.
        match approx_majority_min_degree(2, ApproxMode::Symmetric).unwrap() {
            ApproxOutcome::Found { degree, .. } => assert_eq!(degree, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn symmetric_witnesses_hold_on_levels() {
        for n in [1, 4, 7, 10] {
            let ApproxOutcome::Found {
                degree,
                witness: ApproxWitness::Chebyshev(c),
            } = approx_majority_min_degree(n, ApproxMode::Symmetric).unwrap()
            else {
                panic!("no symmetric witness for n = {n}");
            };
            assert_eq!(c.len(), degree + 1);
            for w in 0..=n {
                let s = n as i64 - 2 * w as i64;
                let v = eval_chebyshev(&c, n, s);
                let ok = match forced(n, s) {
                    Some(positive) => in_band(v, positive),
                    None => in_band(v, true) || in_band(v, false),
                };
                assert!(ok, "n={n} s={s} v={v}");
            }
        }
    }

    #[test]
    fn chebyshev_recurrence() {
        let t = Coeff::new(1, 3);
        let v = chebyshev(t, 3);
        assert_eq!(v[2], Coeff::new(-7, 9));
        assert_eq!(v[3], Coeff::new(4, 27) - Coeff::new(1, 1));
        assert!((eval_chebyshev(&[0.0, 0.0, 0.0, 1.0], 3, 1) - (4.0 / 27.0 - 1.0)).abs() < 1e-15);
        assert_eq!(mirror_pattern(0b001, 3), 0b011);
    }
}
