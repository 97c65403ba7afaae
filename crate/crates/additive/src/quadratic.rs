//! Fewest quadratic phases `(-1)^{q(x)}` whose real span contains AND.

use cubelab_core::{check_arity, Error, Result};
use num_rational::Ratio;
use num_traits::Zero;

use crate::poly::F2Poly;

/// The dictionary has `2^{n + C(n,2)}` phases; subsets are searched directly.
pub const QUADRATIC_LIMIT: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticSpan {
    pub m: usize,
    /// `AND(x) = sum_i c_i (-1)^{q_i(x)}`.
    pub terms: Vec<(Ratio<i64>, F2Poly)>,
}

/// `AND` on `F_2^n` as a `+-1` vector: `-1` at the all-ones point.
fn and_vector(n: usize) -> Vec<i64> {
    let all = (1usize << n) - 1;
    (0..=all).map(|x| if x == all { -1 } else { 1 }).collect()
}

/// Quadratic polynomials without constant term, in order of their
/// monomial-selection mask over singletons then pairs.
fn dictionary(n: usize) -> Vec<F2Poly> {
    let mut monos: Vec<usize> = (0..n).map(|i| 1 << i).collect();
    for i in 0..n {
        for j in i + 1..n {
            monos.push(1 << i | 1 << j);
        }
    }
    (0u64..1 << monos.len())
        .map(|sel| {
            F2Poly::new(
                n,
                (0..monos.len()).filter(|&k| sel >> k & 1 == 1).map(|k| monos[k]),
            )
            .expect("monomials within arity")
        })
        .collect()
}

/// Rank of an integer matrix by fraction-free elimination.
fn rank(mut rows: Vec<Vec<i64>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev = 1i64;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            for j in (c + 1..cols).rev() {
                rows[i][j] = (rows[r][c] * rows[i][j] - rows[i][c] * rows[r][j]) / prev;
            }
            rows[i][c] = 0;
        }
        prev = rows[r][c];
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Solves `A c = t` exactly for a full-column-rank `A` whose span holds `t`.
fn solve(columns: &[Vec<i64>], target: &[i64]) -> Vec<Ratio<i64>> {
    let m = columns.len();
    let mut aug: Vec<Vec<Ratio<i64>>> = (0..target.len())
        .map(|x| {
            columns
                .iter()
                .map(|c| Ratio::from_integer(c[x]))
                .chain([Ratio::from_integer(target[x])])
                .collect()
        })
        .collect();
    let mut r = 0;
    for c in 0..m {
        let p = (r..aug.len()).find(|&i| !aug[i][c].is_zero()).expect("independent columns");
        aug.swap(r, p);
        let inv = aug[r][c].recip();
        for v in aug[r].iter_mut() {
            *v *= inv;
        }
        let pivot = aug[r].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c];
                for (v, pv) in row.iter_mut().zip(&pivot) {
                    *v -= factor * pv;
                }
            }
        }
        r += 1;
    }
    (0..m).map(|i| aug[i][m]).collect()
}

/// Least `m` such that AND is a real combination of `m` quadratic phases,
/// with the lexicographically first such set of phases. Phases differing
/// by a constant are the same up to sign, so the constant term is omitted.
pub fn quadratic_span_min_terms(n: usize) -> Result<QuadraticSpan> {
    check_arity("quadratic span", n, QUADRATIC_LIMIT)?;
    if n == 0 {
        return Err(Error::Domain("AND of zero variables".into()));
    }
    let target = and_vector(n);
    let polys = dictionary(n);
    let vectors: Vec<Vec<i64>> = polys
        .iter()
        .map(|q| (0..target.len()).map(|x| if q.eval(x) { -1 } else { 1 }).collect())
        .collect();
    for m in 1..=target.len() {
        let mut chosen: Vec<usize> = (0..m).collect();
        loop {
            let cols: Vec<Vec<i64>> = chosen.iter().map(|&i| vectors[i].clone()).collect();
            let as_rows = |extra: Option<&[i64]>| -> Vec<Vec<i64>> {
                (0..target.len())
                    .map(|x| {
                        cols.iter()
                            .map(|c| c[x])
                            .chain(extra.map(|t| t[x]))
                            .collect()
                    })
                    .collect()
            };
            if rank(as_rows(None)) == m && rank(as_rows(Some(&target))) == m {
                let coeffs = solve(&cols, &target);
                return Ok(QuadraticSpan {
                    m,
                    terms: coeffs
                        .into_iter()
                        .zip(chosen.iter().map(|&i| polys[i].clone()))
                        .collect(),
                });
            }
            // next m-subset in lexicographic order
            let Some(i) = (0..m).rev().find(|&i| chosen[i] < polys.len() - m + i) else {
                break;
            };
            chosen[i] += 1;
            for j in i + 1..m {
                chosen[j] = chosen[j - 1] + 1;
            }
        }
    }
    unreachable!("the characters span every vector")
}
