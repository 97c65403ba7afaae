//! Symmetric threshold functions whose polynomial alternates sign on the
//! central levels of `x_1 + ... + x_n`.

use std::collections::BTreeMap;

use cubelab_core::structure::binomial;
use cubelab_core::{BooleanFunction, Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::ptf::PtfRep;

/// Largest arity; the truth table has `2^n` entries.
pub const GL_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct AlternatingThreshold {
    /// Levels of `sum x_i` carrying the alternation, ascending.
    pub window: Vec<i64>,
    pub function: BooleanFunction,
    /// `p(sum x_i)` expanded in characters.
    pub witness: PtfRep,
}

/// The `k+1` levels closest to zero. When two levels are equally close the
/// positive one is taken first, so windows of even size lean positive.
pub fn central_window(n: usize, k: usize) -> Vec<i64> {
    let mut levels: Vec<i64> = (0..=n).map(|w| n as i64 - 2 * w as i64).collect();
    levels.sort_by_key(|&s| (s.abs(), s < 0));
    let mut window: Vec<i64> = levels.into_iter().take(k + 1).collect();
    window.sort_unstable();
    window
}

fn rational(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Lagrange interpolation through `(window[j], values[j])`, evaluated at `s`.
fn interpolate(window: &[i64], values: &[i64], s: i64) -> BigRational {
    let mut total = BigRational::zero();
    for (j, (&xj, &yj)) in window.iter().zip(values).enumerate() {
        let mut term = rational(yj);
        for (m, &xm) in window.iter().enumerate() {
            if m != j {
                term = term * rational(s - xm) / rational(xj - xm);
            }
        }
        total += term;
    }
    total
}

/// Sum over the points with `w` coordinates equal to -1 of `chi_S`, for any `|S| = j`.
fn krawtchouk(n: usize, j: usize, w: usize) -> BigInt {
    let mut total = BigInt::zero();
    for i in 0..=j.min(w) {
        if w - i > n - j {
            continue;
        }
        let term = BigInt::from(binomial(j, i)) * BigInt::from(binomial(n - j, w - i));
        if i % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}

fn build(n: usize, window: Vec<i64>) -> Result<AlternatingThreshold> {
    let k = window.len() - 1;
    // +1 at the top level, alternating downward
    let values: Vec<i64> = (0..=k).map(|j| if (k - j).is_multiple_of(2) { 1 } else { -1 }).collect();
    // p at each level, indexed by the number w of -1 coordinates
    let level_values: Vec<BigRational> = (0..=n)
        .map(|w| interpolate(&window, &values, n as i64 - 2 * w as i64))
        .collect();
    if level_values.iter().any(Zero::is_zero) {
        return Err(Error::Domain(format!("alternating polynomial vanishes on a level (n={n}, k={k})")));
    }
    let function = BooleanFunction::from_predicate(n, |x| {
        level_values[x.count_ones() as usize].is_negative()
    })?;
    // Coefficient of chi_S depends only on |S|.
    let scale = rational(1i64 << n);
    let mut monomials = BTreeMap::new();
    for j in 0..=k {
        let c: BigRational = (0..=n)
            .map(|w| &level_values[w] * BigRational::from_integer(krawtchouk(n, j, w)))
            .fold(BigRational::zero(), |a, b| a + b)
            / &scale;
        if c.is_zero() {
            continue;
        }
        let c = c.to_f64().expect("finite coefficient");
        for s in 0..1usize << n {
            if s.count_ones() as usize == j {
                monomials.insert(s, c);
            }
        }
    }
    Ok(AlternatingThreshold {
        window,
        function,
        witness: PtfRep::new(n, monomials)?,
    })
}

/// The degree-`k` symmetric threshold function alternating on the central
/// window, together with the function built on the mirrored window.
pub fn gl_extremal(n: usize, k: usize) -> Result<(AlternatingThreshold, AlternatingThreshold)> {
    cubelab_core::check_arity("alternating threshold", n, GL_LIMIT)?;
    if n == 0 || k > n {
        return Err(Error::Domain(format!("degree {k} for arity {n}")));
    }
    let window = central_window(n, k);
    let mirror: Vec<i64> = window.iter().rev().map(|s| -s).collect();
    Ok((build(n, window)?, build(n, mirror)?))
}
