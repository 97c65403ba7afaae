//! Linear threshold functions `sgn(<w, x> - theta)`.

use std::collections::HashSet;

use cubelab_core::function::coord;
use cubelab_core::{check_arity, BooleanFunction, Error, Result};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lp::{feasibility, Feasibility, LinearProgram, Verdict};

/// Largest arity handled by `enumerate_ltfs`.
pub const ENUMERATION_LIMIT: usize = 5;
/// Largest weight used by the integer-weight enumeration.
pub const MAX_INTEGER_WEIGHT: i64 = 12;

/// Weights and threshold of `x -> sgn(<w, x> - theta)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct LtfSpec {
    pub n: usize,
    pub weights: Vec<f64>,
    pub theta: f64,
}

#[derive(Deserialize)]
struct RawSpec {
    n: usize,
    weights: Vec<f64>,
    theta: f64,
}

impl TryFrom<RawSpec> for LtfSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        Self::new(raw.weights, raw.theta).and_then(|s| {
            if s.n == raw.n {
                Ok(s)
            } else {
                Err(Error::ArityMismatch {
                    expected: raw.n,
                    found: s.n,
                })
            }
        })
    }
}

impl LtfSpec {
    pub fn new(weights: Vec<f64>, theta: f64) -> Result<Self> {
        check_arity("threshold function", weights.len(), cubelab_core::MAX_ARITY)?;
        if weights.is_empty() {
            return Err(Error::Domain("empty weight vector".into()));
        }
        if let Some(index) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::NotFinite { index });
        }
        if !theta.is_finite() {
            return Err(Error::Domain(format!("threshold {theta}")));
        }
        Ok(Self {
            n: weights.len(),
            weights,
            theta,
        })
    }

    /// `<w, x> - theta` at table index `x`.
    pub fn margin(&self, x: usize) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(i, w)| w * coord(x, i) as f64)
            .sum::<f64>()
            - self.theta
    }

    fn exact_margin(&self, x: usize) -> BigRational {
        let exact = |v: f64| BigRational::from_float(v).expect("finite");
        self.weights
            .iter()
            .enumerate()
            .map(|(i, &w)| exact(w * coord(x, i) as f64))
            .fold(BigRational::zero(), |a, b| a + b)
            - exact(self.theta)
    }
}

/// The function of a spec. A point with `<w, x> = theta` exactly is an error.
pub fn ltf(spec: &LtfSpec) -> Result<BooleanFunction> {
    let scale: f64 = spec.weights.iter().map(|w| w.abs()).sum::<f64>() + spec.theta.abs();
    let mut table = Vec::with_capacity(1 << spec.n);
    for x in 0..1usize << spec.n {
        let m = spec.margin(x);
        let negative = if m.abs() > 1e-9 * scale {
            m < 0.0
        } else {
            let e = spec.exact_margin(x);
            if e.is_zero() {
                return Err(Error::Domain(format!(
                    "threshold spec ties at point {x} (sign of zero is undefined)"
                )));
            }
            e < BigRational::zero()
        };
        table.push(if negative { -1 } else { 1 });
    }
    BooleanFunction::new(spec.n, table)
}

/// Margin-one system `f(x) (<w, x> - theta) >= 1` in the variables `(w, theta)`.
fn ltf_program(f: &BooleanFunction) -> LinearProgram {
    let n = f.n();
    LinearProgram::strict_cone(
        n + 1,
        (0..f.len()).map(|x| {
            let v = f.value(x) as i64;
            (0..n)
                .map(|i| v * coord(x, i) as i64)
                .chain(std::iter::once(-v))
                .collect()
        }),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct LtfCheck {
    pub spec: Option<LtfSpec>,
    pub feasibility: Feasibility,
}

/// LP decision of whether `f` is a threshold function, with a witness.
pub fn ltf_check(f: &BooleanFunction) -> Result<LtfCheck> {
    let feas = feasibility(&ltf_program(f));
    let spec = match &feas.verdict {
        Verdict::Feasible(x) => Some(LtfSpec::new(x[..f.n()].to_vec(), x[f.n()])?),
        Verdict::Infeasible => None,
    };
    Ok(LtfCheck {
        spec,
        feasibility: feas,
    })
}

pub fn is_ltf(f: &BooleanFunction) -> bool {
    feasibility(&ltf_program(f)).is_feasible()
}

/// All threshold functions of arity `n`, sorted by truth-table hex.
/// Arity up to 4 is an LP scan over every function; arity 5 uses
/// `enumerate_by_integer_weights` with weights up to `MAX_INTEGER_WEIGHT`.
pub fn enumerate_ltfs(n: usize) -> Result<Vec<BooleanFunction>> {
    check_arity("threshold enumeration", n, ENUMERATION_LIMIT)?;
    if n == 0 {
        return Err(Error::Domain("arity 0".into()));
    }
    if n <= 4 {
        lp_scan(n)
    } else {
        enumerate_by_integer_weights(n, MAX_INTEGER_WEIGHT)
    }
}

/// Decides every function of arity `n <= 4` by linear programming.
pub fn lp_scan(n: usize) -> Result<Vec<BooleanFunction>> {
    check_arity("threshold LP scan", n, 4)?;
    (0..1u64 << (1 << n))
        .into_par_iter()
        .map(|bits| BooleanFunction::from_bits(n, bits))
        .filter(|f| f.as_ref().map_or(true, is_ltf))
        .collect()
}

/// Threshold functions realizable with integer weights in `[-max_weight, max_weight]`.
/// Nonnegative sorted weight vectors are enumerated, every distinct threshold
/// cut is taken, and the result is closed under coordinate permutations and
/// sign flips.
pub fn enumerate_by_integer_weights(n: usize, max_weight: i64) -> Result<Vec<BooleanFunction>> {
    check_arity("integer-weight enumeration", n, 6)?;
    if n == 0 {
        return Err(Error::Domain("arity 0".into()));
    }
    let size = 1usize << n;
    let mut canonical: Vec<u64> = Vec::new();
    let mut weights = vec![0i64; n];
    loop {
        let mut sums: Vec<(i64, usize)> = (0..size)
            .map(|x| {
                let s = (0..n).map(|i| weights[i] * coord(x, i) as i64).sum();
                (s, x)
            })
            .collect();
        sums.sort_unstable();
        // Cut below the k-th smallest distinct sum: points strictly below are -1.
        let mut bits = 0u64;
        canonical.push(bits);
        for k in 0..size {
            bits |= 1 << sums[k].1;
            if k + 1 == size || sums[k + 1].0 != sums[k].0 {
                canonical.push(bits);
            }
        }
        // next nondecreasing weight vector
        let Some(i) = (0..n).rev().find(|&i| weights[i] < max_weight) else {
            break;
        };
        let v = weights[i] + 1;
        weights[i..].iter_mut().for_each(|w| *w = v);
    }
    canonical.sort_unstable();
    canonical.dedup();

    let perms = permutation_maps(n);
    let mut all: HashSet<u64> = HashSet::new();
    for &bits in &canonical {
        if all.contains(&bits) {
            continue;
        }
        for map in &perms {
            let permuted = remap(bits, map);
            for flip in 0..size {
                let flipped = (0..size).fold(0u64, |acc, x| acc | (((permuted >> (x ^ flip)) & 1) << x));
                all.insert(flipped);
            }
        }
    }
    let mut sorted: Vec<u64> = all.into_iter().collect();
    sorted.sort_unstable();
    sorted
        .into_iter()
        .map(|bits| BooleanFunction::from_bits(n, bits))
        .collect()
}

/// For every coordinate permutation, the induced map on table indices.
pub fn permutation_maps(n: usize) -> Vec<Vec<usize>> {
    let mut perms = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    heap_permutations(n, &mut p, &mut perms);
    perms
        .iter()
        .map(|p| {
            (0..1usize << n)
                .map(|x| (0..n).fold(0, |acc, i| acc | (((x >> i) & 1) << p[i])))
                .collect()
        })
        .collect()
}

fn heap_permutations(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k {
        heap_permutations(k - 1, p, out);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        p.swap(j, k - 1);
    }
}

fn remap(bits: u64, map: &[usize]) -> u64 {
    map.iter()
        .enumerate()
        .fold(0u64, |acc, (x, &y)| acc | (((bits >> y) & 1) << x))
}

/// Pointwise AND: the result is TRUE (`-1`) exactly where every part is.
pub fn intersect_halfspaces(specs: &[LtfSpec]) -> Result<BooleanFunction> {
    let first = specs
        .first()
        .ok_or_else(|| Error::Domain("empty list of halfspaces".into()))?;
    let mut parts = Vec::with_capacity(specs.len());
    for s in specs {
        if s.n != first.n {
            return Err(Error::ArityMismatch {
                expected: first.n,
                found: s.n,
            });
        }
        parts.push(ltf(s)?);
    }
    BooleanFunction::from_predicate(first.n, |x| parts.iter().all(|f| f.value(x) == -1))
}
