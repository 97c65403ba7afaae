//! Polynomials over `F_2` and the best correlation of a function with
//! low-degree ones.

use std::collections::BTreeSet;

use cubelab_core::spectrum::wht;
use cubelab_core::structure::binomial;
use cubelab_core::{check_arity, BooleanFunction, Error, Result, MAX_ARITY};
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest number of polynomials enumerated for `d >= 2`.
pub const CORRELATION_BUDGET: u128 = 1 << 28;

/// `sum_{m in monomials} prod_{i in m} x_i` over `F_2`; the empty monomial
/// is the constant 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPoly", into = "RawPoly")]
pub struct F2Poly {
    n: usize,
    monomials: BTreeSet<usize>,
}

/// JSON form: monomial masks as lowercase hex strings.
#[derive(Serialize, Deserialize)]
struct RawPoly {
    n: usize,
    monomials: Vec<String>,
}

impl TryFrom<RawPoly> for F2Poly {
    type Error = Error;

    fn try_from(raw: RawPoly) -> Result<Self> {
        let mut masks = Vec::with_capacity(raw.monomials.len());
        for key in &raw.monomials {
            let mask = usize::from_str_radix(key, 16)
                .map_err(|e| Error::Parse(format!("monomial {key:?}: {e}")))?;
            if *key != format!("{mask:x}") {
                return Err(Error::Parse(format!("monomial {key:?} is not canonical hex")));
            }
            masks.push(mask);
        }
        let poly = F2Poly::new(raw.n, masks.iter().copied())?;
        if poly.monomials.len() != masks.len() {
            return Err(Error::Parse("repeated monomial".into()));
        }
        Ok(poly)
    }
}

impl From<F2Poly> for RawPoly {
    fn from(p: F2Poly) -> Self {
        RawPoly {
            n: p.n,
            monomials: p.monomials.iter().map(|m| format!("{m:x}")).collect(),
        }
    }
}

impl F2Poly {
    /// Monomials given twice cancel.
    pub fn new(n: usize, monomials: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_arity("F2 polynomial", n, MAX_ARITY)?;
        let mut set = BTreeSet::new();
        for m in monomials {
            if m >> n != 0 {
                return Err(Error::Domain(format!("monomial {m:x} for arity {n}")));
            }
            if !set.insert(m) {
                set.remove(&m);
            }
        }
        Ok(Self { n, monomials: set })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    /// The algebraic normal form of `f`, reading TRUE (`-1`) as 1.
    pub fn from_function(f: &BooleanFunction) -> Self {
        let mut a: Vec<u8> = f.table().iter().map(|&v| (v == -1) as u8).collect();
        // Moebius transform over the subset lattice
        let mut h = 1;
        while h < a.len() {
            for x in 0..a.len() {
                if x & h != 0 {
                    a[x] ^= a[x ^ h];
                }
            }
            h <<= 1;
        }
        Self {
            n: f.n(),
            monomials: (0..a.len()).filter(|&s| a[s] == 1).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn monomials(&self) -> &BTreeSet<usize> {
        &self.monomials
    }

    /// Largest monomial size; 0 for constants.
    pub fn degree(&self) -> usize {
        self.monomials
            .iter()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: usize) -> bool {
        self.monomials.iter().filter(|&&m| x & m == m).count() % 2 == 1
    }

    /// As a Boolean function with 1 mapped to `-1`.
    pub fn to_function(&self) -> Result<BooleanFunction> {
        BooleanFunction::from_predicate(self.n, |x| self.eval(x))
    }
}

/// Degree of `f` as a polynomial over `F_2`.
pub fn f2_degree(f: &BooleanFunction) -> usize {
    F2Poly::from_function(f).degree()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Correlation {
    /// `max_p |E[(-1)^{f(x) + p(x)}]|`, exact over `2^n`.
    pub value: Ratio<i64>,
    /// A maximizer with `E[(-1)^{f + p}] = value` (the sign is absorbed by
    /// the constant monomial).
    pub witness: F2Poly,
}

impl Correlation {
    pub fn to_f64(&self) -> f64 {
        *self.value.numer() as f64 / *self.value.denom() as f64
    }
}

/// Number of monomials of degree at most `d` in `n` variables.
pub fn monomial_count(n: usize, d: usize) -> u128 {
    (0..=d.min(n)).map(|i| binomial(n, i) as u128).sum()
}

/// Best correlation of `f` with a polynomial of degree at most `d`.
/// Affine polynomials come from the transform; higher degrees are
/// enumerated in Gray-code order, ties going to the least monomial selection.
pub fn max_correlation_low_degree(f: &BooleanFunction, d: usize) -> Result<Correlation> {
    let n = f.n();
    let scale = 1i64 << n;
    let anf = F2Poly::from_function(f);
    if d >= anf.degree() {
        return Ok(Correlation {
            value: Ratio::from_integer(1),
            witness: anf,
        });
    }
    if d <= 1 {
        let spec = wht(f);
        let (s, c) = (0..f.len())
            .filter(|s| s.count_ones() as usize <= d)
            .map(|s| (s, spec.scaled()[s]))
            .max_by(|a, b| a.1.abs().cmp(&b.1.abs()).then(b.0.cmp(&a.0)))
            .expect("the empty set qualifies");
        let mut monomials: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).map(|i| 1 << i).collect();
        if c < 0 {
            monomials.push(0);
        }
        return Ok(Correlation {
            value: Ratio::new(c.abs(), scale),
            witness: F2Poly::new(n, monomials)?,
        });
    }
    // Non-constant monomials; the constant only flips the sign.
    let monos: Vec<usize> = (1..f.len())
        .filter(|m| m.count_ones() as usize <= d)
        .collect();
    let total = monos.len();
    let needed = 1u128.checked_shl(total as u32).unwrap_or(u128::MAX);
    if needed > CORRELATION_BUDGET {
        return Err(Error::Budget {
            what: "low-degree correlation enumeration",
            needed,
            budget: CORRELATION_BUDGET,
        });
    }
    let top = total.min(8);
    let low = total - top;
    let table = f.table();
    let best = (0..1u64 << top)
        .into_par_iter()
        .map(|prefix| {
            // sign[x] = (-1)^{p(x)} for the current selection
            let mut sign = vec![1i8; f.len()];
            let mut selection = 0u64;
            let toggle = |sign: &mut [i8], m: usize| {
                let rest = !m & (f.len() - 1);
                let mut sub = rest;
                loop {
                    let x = m | sub;
                    sign[x] = -sign[x];
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
            };
            for j in 0..top {
                if prefix >> j & 1 == 1 {
                    toggle(&mut sign, monos[low + j]);
                    selection |= 1 << (low + j);
                }
            }
            let mut sum: i64 = table.iter().zip(&sign).map(|(&a, &b)| (a * b) as i64).sum();
            let mut best = (sum.abs(), selection, sum);
            for t in 1u64..1 << low {
                let j = t.trailing_zeros() as usize;
                let m = monos[j];
                // update the sum over the points where the monomial is 1
                let rest = !m & (f.len() - 1);
                let mut sub = rest;
                loop {
                    let x = m | sub;
                    sum -= 2 * (table[x] * sign[x]) as i64;
                    sign[x] = -sign[x];
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
                selection ^= 1 << j;
                if sum.abs() > best.0 || (sum.abs() == best.0 && selection < best.1) {
                    best = (sum.abs(), selection, sum);
                }
            }
            best
        })
        .reduce(
            || (-1, u64::MAX, 0),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let (value, selection, signed) = best;
    let mut monomials: Vec<usize> = (0..total)
        .filter(|&j| selection >> j & 1 == 1)
        .map(|j| monos[j])
        .collect();
    if signed < 0 {
        monomials.push(0);
    }
    Ok(Correlation {
        value: Ratio::new(value, scale),
        witness: F2Poly::new(n, monomials)?,
    })
}

/// Exact correlation `E[(-1)^{f + p}]` over `2^n`.
pub fn correlation(f: &BooleanFunction, p: &F2Poly) -> Result<Ratio<i64>> {
    if f.n() != p.n() {
        return Err(Error::ArityMismatch {
            expected: f.n(),
            found: p.n(),
        });
    }
    let sum: i64 = (0..f.len())
        .map(|x| f.value(x) as i64 * if p.eval(x) { -1 } else { 1 })
        .sum();
    Ok(Ratio::new(sum, 1 << f.n()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cubelab_core::{and_f, full_parity, majority, mod3};
    use num_traits::Signed;

    #[test]
    fn normal_forms() {
        let and2 = F2Poly::from_function(&and_f(2).unwrap());
        assert_eq!(and2.monomials().iter().copied().collect::<Vec<_>>(), vec![3]);
        assert_eq!(f2_degree(&full_parity(5).unwrap()), 1);
        // Maj3 = x1x2 + x1x3 + x2x3
        let maj = F2Poly::from_function(&majority(3).unwrap());
        assert_eq!(maj.monomials().iter().copied().collect::<Vec<_>>(), vec![3, 5, 6]);
        assert_eq!(maj.to_function().unwrap(), majority(3).unwrap());
        assert_eq!(F2Poly::new(2, [1, 1, 2]).unwrap().monomials().len(), 1);
    }

    #[test]
    fn and_against_affine() {
        let f = and_f(2).unwrap();
        let c = max_correlation_low_degree(&f, 1).unwrap();
        assert_eq!(c.value, Ratio::new(1, 2));
        assert_eq!(correlation(&f, &c.witness).unwrap(), c.value);
        assert_eq!(max_correlation_low_degree(&f, 2).unwrap().value, Ratio::from_integer(1));
    }

    /// All polynomials of degree <= d, by brute force.
    fn brute(f: &BooleanFunction, d: usize) -> Ratio<i64> {
        let monos: Vec<usize> = (0..f.len()).filter(|m| m.count_ones() as usize <= d).collect();
        (0u64..1 << monos.len())
            .map(|sel| {
                let p = F2Poly::new(
                    f.n(),
                    (0..monos.len()).filter(|&j| sel >> j & 1 == 1).map(|j| monos[j]),
                )
                .unwrap();
                correlation(f, &p).unwrap().abs()
            })
            .max()
            .unwrap()
    }

    #[test]
    fn matches_brute_force() {
        for f in [mod3(4).unwrap(), majority(3).unwrap(), and_f(4).unwrap()] {
            for d in 0..=2 {
                let c = max_correlation_low_degree(&f, d).unwrap();
                assert_eq!(c.value, brute(&f, d), "{f} d={d}");
                assert_eq!(correlation(&f, &c.witness).unwrap(), c.value);
                assert!(c.witness.degree() <= d);
            }
        }
    }

    #[test]
    fn budget_error() {
        let f = mod3(8).unwrap();
        assert!(matches!(
            max_correlation_low_degree(&f, 2),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let p = F2Poly::new(3, [0, 3, 4]).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"n":3,"monomials":["0","3","4"]}"#);
        assert_eq!(serde_json::from_str::<F2Poly>(&text).unwrap(), p);
        assert!(serde_json::from_str::<F2Poly>(r#"{"n":3,"monomials":["3","3"]}"#).is_err());
    }
}
