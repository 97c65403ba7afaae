//! Truth-table representations of functions on `{-1,1}^n`.
//!
//! Index convention: bit `i` of a table index is coordinate `x_i`, with
//! bit value 0 meaning `x_i = +1` and bit value 1 meaning `x_i = -1`.
//! Logical TRUE is encoded as `-1` everywhere in the workspace.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported arity.
pub const MAX_ARITY: usize = 24;

/// Capacity error when `n` exceeds `limit`.
pub fn check_arity(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::Capacity { what, n, limit });
    }
    Ok(())
}

/// Value of coordinate `i` at table index `x`, as `+1` or `-1`.
#[inline]
pub fn coord(x: usize, i: usize) -> i8 {
    if (x >> i) & 1 == 1 {
        -1
    } else {
        1
    }
}

/// `chi_S(x)` as `+1` / `-1`.
#[inline]
pub fn character(s: usize, x: usize) -> i8 {
    if (s & x).count_ones() & 1 == 1 {
        -1
    } else {
        1
    }
}

/// A `±1`-valued function on `{-1,1}^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<i8>,
}

impl BooleanFunction {
    pub fn new(n: usize, table: Vec<i8>) -> Result<Self> {
        check_arity("boolean function", n, MAX_ARITY)?;
        if table.len() != 1 << n {
            return Err(Error::TableLength { n, len: table.len() });
        }
        if let Some((index, &v)) = table.iter().enumerate().find(|(_, &v)| v != 1 && v != -1) {
            return Err(Error::NotBoolean {
                index,
                value: v as f64,
            });
        }
        Ok(Self { n, table })
    }

    /// Builds a function from a predicate that returns `true` where the value is `-1`.
    pub fn from_predicate(n: usize, mut is_true: impl FnMut(usize) -> bool) -> Result<Self> {
        check_arity("boolean function", n, MAX_ARITY)?;
        let table = (0..1usize << n)
            .map(|x| if is_true(x) { -1 } else { 1 })
            .collect();
        Ok(Self { n, table })
    }

    /// Builds a function of arity `n <= 6` from a bit pattern (bit `x` set iff `f(x) = -1`).
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        check_arity("bit-packed function", n, 6)?;
        Self::from_predicate(n, |x| (bits >> x) & 1 == 1)
    }

    pub fn constant(n: usize, value: i8) -> Result<Self> {
        Self::new(n, vec![value; 1 << n])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    #[inline]
    pub fn table(&self) -> &[i8] {
        &self.table
    }

    #[inline]
    pub fn value(&self, x: usize) -> i8 {
        self.table[x]
    }

    /// Bit pattern for arity `n <= 6`; `None` above that.
    pub fn to_bits(&self) -> Option<u64> {
        if self.n > 6 {
            return None;
        }
        Some(
            self.table
                .iter()
                .enumerate()
                .filter(|(_, &v)| v == -1)
                .fold(0u64, |acc, (x, _)| acc | (1 << x)),
        )
    }

    pub fn negate(&self) -> Self {
        Self {
            n: self.n,
            table: self.table.iter().map(|v| -v).collect(),
        }
    }

    /// Pointwise product `f(x) g(x)`.
    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(Self {
            n: self.n,
            table: self
                .table
                .iter()
                .zip(&other.table)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn mean(&self) -> f64 {
        self.table.iter().map(|&v| v as i64).sum::<i64>() as f64 / self.len() as f64
    }

    pub fn is_odd(&self) -> bool {
        let mask = self.len() - 1;
        (0..self.len()).all(|x| self.table[x] == -self.table[x ^ mask])
    }

    /// Real-valued copy of the table.
    pub fn to_real(&self) -> RealFunction {
        RealFunction {
            n: self.n,
            table: self.table.iter().map(|&v| v as f64).collect(),
        }
    }

    /// Lowercase hex of the 0/1 table, most significant index first.
    pub fn to_hex(&self) -> String {
        bits_to_hex(self.table.iter().map(|&v| v == -1), self.len())
    }

    /// Parses `to_hex` output for a known arity.
    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        check_arity("boolean function", n, MAX_ARITY)?;
        let bits = hex_to_bits(hex, 1 << n)?;
        Self::from_predicate(n, |x| bits[x])
    }

    /// Parses `"<n>:<hex>"`, or bare hex whose length fixes `n >= 2`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some((n, hex)) = text.split_once(':') {
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad arity in {text:?}")))?;
            return Self::from_hex(n, hex.trim());
        }
        let len = text.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Parse(format!(
                "hex length {len} does not determine an arity; use <n>:<hex>"
            )));
        }
        let n = len.trailing_zeros() as usize + 2;
        Self::from_hex(n, text)
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction({}:{})", self.n, self.to_hex())
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.n, self.to_hex())
    }
}

impl FromStr for BooleanFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Hex rendering of a bit vector, most significant index first. Used by
/// both function tables and set bitsets.
pub fn bits_to_hex(bits: impl Iterator<Item = bool>, len: usize) -> String {
    let digits = len.div_ceil(4).max(1);
    let mut nibbles = vec![0u8; digits];
    for (i, b) in bits.enumerate() {
        if b {
            nibbles[i / 4] |= 1 << (i % 4);
        }
    }
    nibbles
        .iter()
        .rev()
        .map(|&d| char::from_digit(d as u32, 16).unwrap())
        .collect()
}

pub fn hex_to_bits(hex: &str, len: usize) -> Result<Vec<bool>> {
    let digits = len.div_ceil(4).max(1);
    if hex.len() != digits {
        return Err(Error::Parse(format!(
            "expected {digits} hex digits for {len} bits, found {}",
            hex.len()
        )));
    }
    let mut bits = vec![false; len];
    for (pos, ch) in hex.chars().rev().enumerate() {
        let d = ch
            .to_digit(16)
            .filter(|_| !ch.is_ascii_uppercase())
            .ok_or_else(|| Error::Parse(format!("invalid hex digit {ch:?}")))?;
        for b in 0..4 {
            if (d >> b) & 1 == 1 {
                let i = pos * 4 + b;
                if i >= len {
                    return Err(Error::Parse(format!("bit {i} set beyond length {len}")));
                }
                bits[i] = true;
            }
        }
    }
    Ok(bits)
}

/// A real-valued function on `{-1,1}^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealFunction {
    n: usize,
    table: Vec<f64>,
}

impl RealFunction {
    pub fn new(n: usize, table: Vec<f64>) -> Result<Self> {
        check_arity("real function", n, MAX_ARITY)?;
        if table.len() != 1 << n {
            return Err(Error::TableLength { n, len: table.len() });
        }
        if let Some(index) = table.iter().position(|v| !v.is_finite()) {
            return Err(Error::NotFinite { index });
        }
        Ok(Self { n, table })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> f64) -> Result<Self> {
        check_arity("real function", n, MAX_ARITY)?;
        Self::new(n, (0..1usize << n).map(f).collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn table(&self) -> &[f64] {
        &self.table
    }

    #[inline]
    pub fn value(&self, x: usize) -> f64 {
        self.table[x]
    }

    pub fn mean(&self) -> f64 {
        self.table.iter().sum::<f64>() / self.table.len() as f64
    }
}

impl From<&BooleanFunction> for RealFunction {
    fn from(f: &BooleanFunction) -> Self {
        f.to_real()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(
            BooleanFunction::new(2, vec![1, 1, 1]),
            Err(Error::TableLength { .. })
        ));
        assert!(matches!(
            BooleanFunction::new(1, vec![1, 0]),
            Err(Error::NotBoolean { index: 1, .. })
        ));
        assert!(matches!(
            BooleanFunction::constant(25, 1),
            Err(Error::Capacity { .. })
        ));
        assert!(RealFunction::new(1, vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn hex_layout() {
        // AND_2: -1 only at index 3.
        let f = BooleanFunction::from_predicate(2, |x| x == 3).unwrap();
        assert_eq!(f.to_hex(), "8");
        let g = BooleanFunction::from_predicate(3, |x| x == 0 || x == 7).unwrap();
        assert_eq!(g.to_hex(), "81");
        assert_eq!(BooleanFunction::parse("81").unwrap(), g);
        assert_eq!(BooleanFunction::parse("3:81").unwrap(), g);
        assert_eq!(BooleanFunction::parse("1:2").unwrap().table(), &[1, -1]);
    }

    #[test]
    fn malformed_hex() {
        assert!(BooleanFunction::parse("xyz").is_err());
        assert!(BooleanFunction::parse("abc").is_err());
        assert!(BooleanFunction::parse("1:4").is_err());
        assert!(BooleanFunction::parse("AB").is_err());
        assert!(BooleanFunction::parse("q:ab").is_err());
    }

    #[test]
    fn bits_round_trip() {
        let f = BooleanFunction::from_bits(3, 0b1110_1000).unwrap();
        assert_eq!(f.to_bits(), Some(0b1110_1000));
        assert_eq!(f.to_hex(), "e8");
    }
}
