//! Polynomial threshold representations: sign-representing degree and sparsity.

use std::collections::BTreeMap;

use cubelab_core::function::character;
use cubelab_core::structure::Combinations;
use cubelab_core::{check_arity, wht, BooleanFunction, Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ltf::permutation_maps;
use crate::lp::{feasibility, Certificate, Feasibility, LinearProgram, Verdict};

pub const DEGREE_LIMIT: usize = 10;
pub const SPARSITY_LIMIT: usize = 6;

/// A multilinear polynomial `sum_S c_S chi_S(x)` with sparse coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRep", into = "RawRep")]
pub struct PtfRep {
    n: usize,
    monomials: BTreeMap<usize, f64>,
}

/// JSON form: monomial masks as lowercase hex keys.
#[derive(Serialize, Deserialize)]
struct RawRep {
    n: usize,
    monomials: BTreeMap<String, f64>,
}

impl TryFrom<RawRep> for PtfRep {
    type Error = Error;

    fn try_from(raw: RawRep) -> Result<Self> {
        let mut monomials = BTreeMap::new();
        for (key, c) in raw.monomials {
            let mask = usize::from_str_radix(&key, 16)
                .map_err(|e| Error::Parse(format!("monomial mask {key:?}: {e}")))?;
            if key != format!("{mask:x}") {
                return Err(Error::Parse(format!("monomial mask {key:?} is not canonical hex")));
            }
            monomials.insert(mask, c);
        }
        PtfRep::new(raw.n, monomials)
    }
}

impl From<PtfRep> for RawRep {
    fn from(rep: PtfRep) -> Self {
        RawRep {
            n: rep.n,
            monomials: rep
                .monomials
                .into_iter()
                .map(|(s, c)| (format!("{s:x}"), c))
                .collect(),
        }
    }
}

impl PtfRep {
    /// Zero coefficients are dropped.
    pub fn new(n: usize, monomials: BTreeMap<usize, f64>) -> Result<Self> {
        check_arity("polynomial threshold", n, cubelab_core::MAX_ARITY)?;
        if let Some((&s, _)) = monomials.iter().find(|(&s, _)| s >> n != 0) {
            return Err(Error::Domain(format!("monomial {s:x} for arity {n}")));
        }
        if let Some((&s, _)) = monomials.iter().find(|(_, c)| !c.is_finite()) {
            return Err(Error::NotFinite { index: s });
        }
        Ok(Self {
            n,
            monomials: monomials.into_iter().filter(|(_, c)| *c != 0.0).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn monomials(&self) -> &BTreeMap<usize, f64> {
        &self.monomials
    }

    pub fn sparsity(&self) -> usize {
        self.monomials.len()
    }

    pub fn degree(&self) -> usize {
        self.monomials
            .keys()
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: usize) -> f64 {
        self.monomials
            .iter()
            .map(|(&s, &c)| c * character(s, x) as f64)
            .sum()
    }

    /// `min_x f(x) p(x) > 0`.
    pub fn sign_represents(&self, f: &BooleanFunction) -> bool {
        self.n == f.n() && (0..f.len()).all(|x| f.value(x) as f64 * self.eval(x) > 0.0)
    }
}

/// `f(x) sum_{S in support} c_S chi_S(x) >= 1` for all `x`.
fn sign_program(f: &BooleanFunction, support: &[usize]) -> LinearProgram {
    LinearProgram::strict_cone(
        support.len(),
        (0..f.len()).map(|x| {
            support
                .iter()
                .map(|&s| (f.value(x) * character(s, x)) as i64)
                .collect()
        }),
    )
}

/// LP check of whether some polynomial on `support` sign-represents `f`.
pub fn sign_representation(
    f: &BooleanFunction,
    support: &[usize],
) -> Result<(Feasibility, Option<PtfRep>)> {
    let feas = feasibility(&sign_program(f, support));
    let rep = match &feas.verdict {
        Verdict::Feasible(c) => Some(PtfRep::new(
            f.n(),
            support.iter().copied().zip(c.iter().copied()).collect(),
        )?),
        Verdict::Infeasible => None,
    };
    Ok((feas, rep))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PtfDegree {
    pub degree: usize,
    pub witness: PtfRep,
    /// How each lower degree was certified infeasible, from degree 0 up.
    pub certificates: Vec<Certificate>,
    /// Largest phase-one residual among the infeasible lower degrees.
    pub residual: f64,
}

/// Least `k` such that a degree-`k` polynomial sign-represents `f`.
/// The Fourier degree is an upper bound (`f` represents itself), so only
/// lower degrees go through the LP.
pub fn ptf_degree(f: &BooleanFunction) -> Result<PtfDegree> {
    check_arity("threshold degree", f.n(), DEGREE_LIMIT)?;
    let spec = wht(f);
    let mut certificates = Vec::new();
    let mut residual: f64 = 0.0;
    for k in 0..spec.degree() {
        let support: Vec<usize> = (0..f.len())
            .filter(|s| s.count_ones() as usize <= k)
            .collect();
        let (feas, rep) = sign_representation(f, &support)?;
        if let Some(witness) = rep {
            return Ok(PtfDegree {
                degree: k,
                witness,
                certificates,
                residual,
            });
        }
        certificates.push(feas.certificate);
        residual = residual.max(feas.residual);
    }
    let witness = PtfRep::new(
        f.n(),
        (0..f.len())
            .filter(|&s| spec.scaled()[s] != 0)
            .map(|s| (s, spec.coeff(s)))
            .collect(),
    )?;
    Ok(PtfDegree {
        degree: spec.degree(),
        witness,
        certificates,
        residual,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Sparsity {
    Found { size: usize, witness: PtfRep },
    ExceedsLimit { limit: usize },
}

/// Coordinate permutations fixing `f`, as maps on monomial masks.
fn automorphisms(f: &BooleanFunction) -> Vec<Vec<usize>> {
    permutation_maps(f.n())
        .into_iter()
        .filter(|map| (0..f.len()).all(|x| f.value(map[x]) == f.value(x)))
        .collect()
}

/// Whether a sorted support is the least member of its orbit.
fn is_canonical(support: &[usize], group: &[Vec<usize>], scratch: &mut Vec<usize>) -> bool {
    group.iter().all(|map| {
        scratch.clear();
        scratch.extend(support.iter().map(|&s| map[s]));
        scratch.sort_unstable();
        scratch.as_slice() >= support
    })
}

/// Supports are checked in batches; within a batch the first feasible one
/// in lexicographic order wins, independent of thread scheduling.
const BATCH: usize = 4096;

/// Least number of monomials in a sign-representation of `f`, searching
/// supports of size up to `limit` in lexicographic order, one per orbit of
/// the coordinate permutations fixing `f`.
pub fn ptf_sparsity(f: &BooleanFunction, limit: usize) -> Result<Sparsity> {
    check_arity("threshold sparsity", f.n(), SPARSITY_LIMIT)?;
    if limit > f.len() {
        return Err(Error::Domain(format!(
            "sparsity limit {limit} above the {} available monomials",
            f.len()
        )));
    }
    let group = automorphisms(f);
    for size in 1..=limit {
        let mut combos = Combinations::new(f.len(), size);
        let mut scratch = Vec::new();
        loop {
            let batch: Vec<Vec<usize>> = combos
                .by_ref()
                .filter(|c| is_canonical(c, &group, &mut scratch))
                .take(BATCH)
                .collect();
            if batch.is_empty() {
                break;
            }
            let hit = batch
                .par_iter()
                .map(|support| sign_representation(f, support))
                .find_first(|r| !matches!(r, Ok((_, None))));
            if let Some(result) = hit {
                let (_, rep) = result?;
                return Ok(Sparsity::Found {
                    size,
                    witness: rep.expect("feasible support"),
                });
            }
        }
    }
    Ok(Sparsity::ExceedsLimit { limit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use cubelab_core::{full_parity, inner_product, majority};

    #[test]
    fn degrees() {
        assert_eq!(ptf_degree(&majority(3).unwrap()).unwrap().degree, 1);
        let c = ptf_degree(&BooleanFunction::constant(4, 1).unwrap()).unwrap();
        assert_eq!(c.degree, 0);
        assert!(c.witness.sign_represents(&BooleanFunction::constant(4, 1).unwrap()));
        for n in 1..=4 {
            let p = full_parity(n).unwrap();
            let d = ptf_degree(&p).unwrap();
            assert_eq!(d.degree, n);
            assert_eq!(d.certificates.len(), n);
            assert!(d.witness.sign_represents(&p));
        }
    }

    #[test]
    fn sparsities() {
        let ip = inner_product(1).unwrap();
        match ptf_sparsity(&ip, 4).unwrap() {
            Sparsity::Found { size, witness } => {
                assert_eq!(size, 3);
                assert!(witness.sign_represents(&ip));
            }
            other => panic!("{other:?}"),
        }
        let maj = majority(3).unwrap();
        match ptf_sparsity(&maj, 4).unwrap() {
            Sparsity::Found { size, witness } => {
                assert_eq!(size, 3);
                assert!(witness.sign_represents(&maj));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            ptf_sparsity(&full_parity(5).unwrap(), 1).unwrap(),
            Sparsity::Found { size: 1, .. }
        ));
        assert_eq!(
            ptf_sparsity(&maj, 2).unwrap(),
            Sparsity::ExceedsLimit { limit: 2 }
        );
    }

    #[test]
    fn symmetry_pruning_keeps_one_support_per_orbit() {
        let maj = majority(3).unwrap();
        let group = automorphisms(&maj);
        assert_eq!(group.len(), 6);
        let mut scratch = Vec::new();
        let singles: Vec<_> = Combinations::new(8, 1)
            .filter(|c| is_canonical(c, &group, &mut scratch))
            .collect();
        // masks by orbit: {0}, {1,2,4}, {3,5,6}, {7}
        assert_eq!(singles, vec![vec![0], vec![1], vec![3], vec![7]]);
    }

    #[test]
    fn json_round_trip() {
        let rep = PtfRep::new(3, [(1, 0.5), (2, 0.5), (4, 0.5), (7, -0.5)].into()).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        assert_eq!(text, r#"{"n":3,"monomials":{"1":0.5,"2":0.5,"4":0.5,"7":-0.5}}"#);
        assert_eq!(serde_json::from_str::<PtfRep>(&text).unwrap(), rep);
        assert!(rep.sign_represents(&majority(3).unwrap()));
        assert!(serde_json::from_str::<PtfRep>(r#"{"n":2,"monomials":{"8":1}}"#).is_err());
        assert!(serde_json::from_str::<PtfRep>(r#"{"n":2,"monomials":{"01":1}}"#).is_err());
    }
}
