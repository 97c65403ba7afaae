//! Standard named functions. All follow the TRUE = `-1` convention.

use crate::error::{Error, Result};
use crate::function::BooleanFunction;

/// `sgn(x_1 + ... + x_n)` for odd `n`.
pub fn majority(n: usize) -> Result<BooleanFunction> {
    if n.is_multiple_of(2) {
        return Err(Error::Domain(format!("majority arity {n} (must be odd)")));
    }
    BooleanFunction::from_predicate(n, |x| x.count_ones() as usize > n / 2)
}

/// The dictator `x_i` (0-based coordinate).
pub fn dictator(n: usize, i: usize) -> Result<BooleanFunction> {
    if i >= n {
        return Err(Error::Domain(format!("dictator coordinate {i} for arity {n}")));
    }
    BooleanFunction::from_predicate(n, |x| (x >> i) & 1 == 1)
}

/// The character `chi_S` for the coordinate mask `s`.
pub fn parity(n: usize, s: usize) -> Result<BooleanFunction> {
    if n < usize::BITS as usize && s >> n != 0 {
        return Err(Error::Domain(format!("parity mask {s:#x} for arity {n}")));
    }
    BooleanFunction::from_predicate(n, |x| (x & s).count_ones() % 2 == 1)
}

/// Parity of all `n` coordinates.
pub fn full_parity(n: usize) -> Result<BooleanFunction> {
    parity(n, (1 << n) - 1)
}

pub fn and_f(n: usize) -> Result<BooleanFunction> {
    let all = (1usize << n) - 1;
    BooleanFunction::from_predicate(n, |x| x == all)
}

pub fn or_f(n: usize) -> Result<BooleanFunction> {
    BooleanFunction::from_predicate(n, |x| x != 0)
}

/// TRUE iff the number of TRUE inputs is congruent to 1 mod 3.
pub fn mod3(n: usize) -> Result<BooleanFunction> {
    BooleanFunction::from_predicate(n, |x| x.count_ones() % 3 == 1)
}

/// Inner product mod 2 on `2 * half` bits: coordinates `0..half` are `x`,
/// coordinates `half..2*half` are `y`.
pub fn inner_product(half: usize) -> Result<BooleanFunction> {
    let low = (1usize << half) - 1;
    BooleanFunction::from_predicate(2 * half, |z| {
        ((z & low) & (z >> half)).count_ones() % 2 == 1
    })
}

/// A DNF: an OR of AND-terms over literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dnf {
    n: usize,
    terms: Vec<Term>,
}

/// One conjunction. `pos` lists coordinates that must be TRUE, `neg`
/// coordinates that must be FALSE.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub pos: usize,
    pub neg: usize,
}

impl Dnf {
    pub fn new(n: usize, terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Domain("DNF with no terms".into()));
        }
        for t in &terms {
            if t.pos & t.neg != 0 {
                return Err(Error::Domain(format!(
                    "term with overlapping literals {:#x}/{:#x}",
                    t.pos, t.neg
                )));
            }
            if (t.pos | t.neg) >> n != 0 {
                return Err(Error::Domain(format!("term outside arity {n}")));
            }
        }
        Ok(Self { n, terms })
    }

    /// `count` disjoint monotone terms of `width` variables each.
    pub fn tribes(width: usize, count: usize) -> Result<Self> {
        let block = (1usize << width) - 1;
        let terms = (0..count)
            .map(|j| Term {
                pos: block << (j * width),
                neg: 0,
            })
            .collect();
        Self::new(width * count, terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn eval(&self, x: usize) -> bool {
        self.terms
            .iter()
            .any(|t| x & t.pos == t.pos && x & t.neg == 0)
    }

    pub fn to_function(&self) -> Result<BooleanFunction> {
        BooleanFunction::from_predicate(self.n, |x| self.eval(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majority_one_is_dictator() {
        assert_eq!(majority(1).unwrap(), dictator(1, 0).unwrap());
        assert!(majority(4).is_err());
    }

    #[test]
    fn ip2_table() {
        assert_eq!(inner_product(1).unwrap().table(), &[1, 1, 1, -1]);
    }

    #[test]
    fn mod3_all_ones() {
        let f = mod3(3).unwrap();
        assert_eq!(f.value(0b111), 1);
        assert_eq!(f.value(0b001), -1);
        assert_eq!(f.value(0b011), 1);
    }

    #[test]
    fn dnf_checks() {
        assert!(Dnf::new(3, vec![]).is_err());
        assert!(Dnf::new(3, vec![Term { pos: 1, neg: 1 }]).is_err());
        let t = Dnf::tribes(2, 2).unwrap();
        assert_eq!(t.n(), 4);
        let f = t.to_function().unwrap();
        assert_eq!(f.value(0b0011), -1);
        assert_eq!(f.value(0b0101), 1);
        assert_eq!(f.value(0b1100), -1);
    }
}
