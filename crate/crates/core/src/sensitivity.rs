//! Sensitivity and block sensitivity.

use std::collections::HashMap;

use num_rational::Ratio;

use crate::error::Result;
use crate::function::{check_arity, BooleanFunction};

/// Largest arity for which block sensitivity is computed.
pub const BLOCK_SENSITIVITY_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SensitivityStats {
    pub max_sensitivity: usize,
    /// Average number of sensitive coordinates; equals total influence.
    pub avg_sensitivity: Ratio<i64>,
    pub block_sensitivity: usize,
}

/// Number of coordinates whose flip changes `f` at `x`.
pub fn sensitivity_at(f: &BooleanFunction, x: usize) -> usize {
    let v = f.value(x);
    (0..f.n()).filter(|&i| f.value(x ^ (1 << i)) != v).count()
}

pub fn max_sensitivity(f: &BooleanFunction) -> usize {
    (0..f.len()).map(|x| sensitivity_at(f, x)).max().unwrap_or(0)
}

/// Average sensitivity as an exact rational (edge-boundary count).
pub fn avg_sensitivity(f: &BooleanFunction) -> Ratio<i64> {
    let total: usize = (0..f.len()).map(|x| sensitivity_at(f, x)).sum();
    Ratio::new(total as i64, f.len() as i64)
}

pub fn sensitivity_stats(f: &BooleanFunction) -> Result<SensitivityStats> {
    Ok(SensitivityStats {
        max_sensitivity: max_sensitivity(f),
        avg_sensitivity: avg_sensitivity(f),
        block_sensitivity: block_sensitivity(f)?,
    })
}

pub fn block_sensitivity(f: &BooleanFunction) -> Result<usize> {
    check_arity("block sensitivity", f.n(), BLOCK_SENSITIVITY_LIMIT)?;
    let mut best = 0;
    for x in 0..f.len() {
        // bs(f, x) <= n; stop early once the global bound is met.
        if best == f.n() {
            break;
        }
        best = best.max(block_sensitivity_at(f, x));
    }
    Ok(best)
}

/// Maximum number of disjoint sensitive blocks at `x`.
pub fn block_sensitivity_at(f: &BooleanFunction, x: usize) -> usize {
    let blocks = minimal_sensitive_blocks(f, x);
    if blocks.is_empty() {
        return 0;
    }
    let mut packer = Packer {
        blocks,
        memo: HashMap::new(),
    };
    packer.best((1usize << f.n()) - 1)
}

/// Sensitive blocks with no proper sensitive sub-block, ordered by size then mask.
fn minimal_sensitive_blocks(f: &BooleanFunction, x: usize) -> Vec<usize> {
    let size = f.len();
    let v = f.value(x);
    // covered[b]: some nonempty sub-block of b (possibly b itself) is sensitive.
    let mut covered = vec![false; size];
    let mut minimal = Vec::new();
    for b in 1..size {
        let sensitive = f.value(x ^ b) != v;
        let mut sub = false;
        let mut rest = b;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            if covered[b ^ bit] {
                sub = true;
                break;
            }
            rest ^= bit;
        }
        covered[b] = sub || sensitive;
        if sensitive && !sub {
            minimal.push(b);
        }
    }
    minimal.sort_by_key(|&b| (b.count_ones(), b));
    minimal
}

struct Packer {
    blocks: Vec<usize>,
    memo: HashMap<usize, usize>,
}

impl Packer {
    /// Max number of disjoint blocks inside `avail`. Branches on the lowest
    /// available coordinate: either it is left unused or some block through
    /// it is taken.
    fn best(&mut self, avail: usize) -> usize {
        if avail == 0 {
            return 0;
        }
        if let Some(&v) = self.memo.get(&avail) {
            return v;
        }
        let low = avail & avail.wrapping_neg();
        let mut result = self.best(avail ^ low);
        let bound = avail.count_ones() as usize;
        for idx in 0..self.blocks.len() {
            let b = self.blocks[idx];
            if b & low == 0 || b & !avail != 0 {
                continue;
            }
            // Remaining coordinates can hold at most one block each.
            if result > (bound - b.count_ones() as usize) {
                continue;
            }
            result = result.max(1 + self.best(avail & !b));
        }
        self.memo.insert(avail, result);
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::*;

    #[test]
    fn and_and_parity() {
        for n in 1..=6 {
            let s = sensitivity_stats(&and_f(n).unwrap()).unwrap();
            assert_eq!(s.max_sensitivity, n);
            assert_eq!(s.block_sensitivity, n);
            let p = sensitivity_stats(&full_parity(n).unwrap()).unwrap();
            assert_eq!(p.max_sensitivity, n);
            assert_eq!(p.block_sensitivity, n);
            assert_eq!(p.avg_sensitivity, Ratio::from_integer(n as i64));
        }
    }

    #[test]
    fn brute_force_block_sensitivity_agrees() {
        // Oracle: try every assignment of coordinates to up to n labelled
        // blocks (or unused) at every point.
        fn brute(f: &BooleanFunction) -> usize {
            let n = f.n();
            let mut best = 0;
            for x in 0..f.len() {
                let labels = (n + 1).pow(n as u32);
                for code in 0..labels {
                    let mut blocks = vec![0usize; n];
                    let mut c = code;
                    for i in 0..n {
                        let l = c % (n + 1);
                        c /= n + 1;
                        if l > 0 {
                            blocks[l - 1] |= 1 << i;
                        }
                    }
                    let count = blocks
                        .iter()
                        .filter(|&&b| b != 0 && f.value(x ^ b) != f.value(x))
                        .count();
                    if blocks.iter().all(|&b| b == 0 || f.value(x ^ b) != f.value(x)) {
                        best = best.max(count);
                    }
                }
            }
            best
        }
        for bits in [0x96u64, 0xe8, 0x17, 0x81, 0x6b, 0x3c, 0xfe] {
            let f = BooleanFunction::from_bits(3, bits).unwrap();
            assert_eq!(block_sensitivity(&f).unwrap(), brute(&f), "{f}");
        }
        // Rubinstein-style sort: sorted function on 4 bits.
        let f = BooleanFunction::from_bits(4, 0x1ee8).unwrap();
        assert_eq!(block_sensitivity(&f).unwrap(), brute(&f));
    }

    #[test]
    fn capacity() {
        let f = BooleanFunction::constant(17, 1).unwrap();
        assert!(block_sensitivity(&f).is_err());
        assert!(sensitivity_stats(&f).is_err());
    }
}
