//! Juntas, spectral concentration, monotonicity, and local minima.

use crate::error::{Error, Result};
use crate::function::{BooleanFunction, RealFunction};
use crate::spectrum::wht;

/// Default work budget for `junta_distance`, in evaluated table entries.
pub const DEFAULT_JUNTA_BUDGET: u128 = 1 << 34;

#[derive(Clone, Debug, PartialEq)]
pub struct JuntaFit {
    pub distance: f64,
    /// Mismatches out of `2^n`, exact.
    pub mismatches: u64,
    /// 0-based coordinates of the best subset (lexicographically least among ties).
    pub coordinates: Vec<usize>,
}

/// Distance from `f` to the nearest `k`-junta. For each `k`-subset `J` the
/// best junta on `J` is the plurality of `f` on each `J`-subcube, ties
/// resolved to `+1`.
pub fn junta_distance(f: &BooleanFunction, k: usize, budget: u128) -> Result<JuntaFit> {
    let n = f.n();
    if k > n {
        return Err(Error::Domain(format!("junta size {k} for arity {n}")));
    }
    let needed = binomial(n, k) * f.len() as u128;
    if needed > budget {
        return Err(Error::Budget {
            what: "junta distance",
            needed,
            budget,
        });
    }
    let mut best: Option<JuntaFit> = None;
    for subset in Combinations::new(n, k) {
        let mismatches = plurality_mismatches(f, &subset);
        if best.as_ref().is_none_or(|b| mismatches < b.mismatches) {
            best = Some(JuntaFit {
                distance: mismatches as f64 / f.len() as f64,
                mismatches,
                coordinates: subset,
            });
        }
    }
    Ok(best.expect("at least one subset"))
}

fn plurality_mismatches(f: &BooleanFunction, subset: &[usize]) -> u64 {
    let k = subset.len();
    // per J-assignment: (count of +1, count of -1)
    let mut counts = vec![(0u64, 0u64); 1 << k];
    for x in 0..f.len() {
        let key = subset
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &i)| acc | (((x >> i) & 1) << j));
        if f.value(x) == 1 {
            counts[key].0 += 1;
        } else {
            counts[key].1 += 1;
        }
    }
    counts
        .iter()
        .map(|&(plus, minus)| if plus >= minus { minus } else { plus })
        .sum()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// k-subsets of `0..n` in lexicographic order.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Concentration {
    /// Subset masks, heaviest first.
    pub family: Vec<usize>,
    pub mass: f64,
}

/// Smallest family of coefficients carrying Fourier mass at least `1 - eps`.
/// Taking the heaviest coefficients first is optimal; ties go to the lower mask.
pub fn spectral_concentration(f: &BooleanFunction, eps: f64) -> Result<Concentration> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Domain(format!("concentration eps = {eps}")));
    }
    let spec = wht(f);
    let mut order: Vec<(i64, usize)> = spec
        .scaled()
        .iter()
        .enumerate()
        .map(|(s, &c)| (c * c, s))
        .collect();
    order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let total = (spec.scale() as f64).powi(2);
    let target = (1.0 - eps) * total;
    let mut acc = 0i64;
    let mut family = Vec::new();
    for (w, s) in order {
        if acc as f64 >= target {
            break;
        }
        acc += w;
        family.push(s);
    }
    Ok(Concentration {
        family,
        mass: acc as f64 / total,
    })
}

/// Points where `g` is strictly below every neighbour.
pub fn count_strict_local_minima(g: &RealFunction) -> usize {
    let n = g.n();
    (0..g.table().len())
        .filter(|&x| (0..n).all(|i| g.value(x) < g.value(x ^ (1 << i))))
        .count()
}

/// `f(x) <= f(y)` whenever `x <= y` coordinatewise, with `-1 < +1`.
pub fn is_monotone(f: &BooleanFunction) -> bool {
    (0..f.len()).all(|x| {
        (0..f.n())
            .filter(|&i| (x >> i) & 1 == 0)
            // setting bit i moves coordinate i from +1 down to -1
            .all(|i| f.value(x | (1 << i)) <= f.value(x))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::*;

    #[test]
    fn junta_examples() {
        let fit = junta_distance(&dictator(4, 0).unwrap(), 1, DEFAULT_JUNTA_BUDGET).unwrap();
        assert_eq!(fit.distance, 0.0);
        assert_eq!(fit.coordinates, vec![0]);
        for n in 2..=5 {
            let fit = junta_distance(&full_parity(n).unwrap(), n - 1, DEFAULT_JUNTA_BUDGET).unwrap();
            assert_eq!(fit.distance, 0.5);
        }
        let fit = junta_distance(&majority(3).unwrap(), 1, DEFAULT_JUNTA_BUDGET).unwrap();
        assert_eq!(fit.distance, 0.25);
        assert_eq!(fit.coordinates, vec![0]);
        assert!(junta_distance(&majority(3).unwrap(), 4, DEFAULT_JUNTA_BUDGET).is_err());
        assert!(matches!(
            junta_distance(&majority(5).unwrap(), 2, 10),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn plurality_ties_go_to_plus_one() {
        // On parity with k = 0 every subcube (the whole cube) is balanced.
        let fit = junta_distance(&full_parity(3).unwrap(), 0, DEFAULT_JUNTA_BUDGET).unwrap();
        assert_eq!(fit.mismatches, 4);
        assert!(fit.coordinates.is_empty());
    }

    #[test]
    fn combinations_enumerate() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(binomial(10, 3), 120);
    }

    #[test]
    fn concentration_examples() {
        let c = spectral_concentration(&full_parity(5).unwrap(), 0.1).unwrap();
        assert_eq!(c.family.len(), 1);
        let maj = majority(3).unwrap();
        let c = spectral_concentration(&maj, 0.25).unwrap();
        assert_eq!(c.family, vec![1, 2, 4]);
        assert_eq!(c.mass, 0.75);
        assert_eq!(spectral_concentration(&maj, 0.5).unwrap().family.len(), 2);
        assert!(spectral_concentration(&maj, 0.0).is_err());
        assert!(spectral_concentration(&maj, 0.6).is_err());
    }

    #[test]
    fn local_minima_examples() {
        let linear = RealFunction::from_fn(4, |x| (0..4).map(|i| crate::function::coord(x, i) as f64).sum()).unwrap();
        assert_eq!(count_strict_local_minima(&linear), 1);
        let neg_prod = RealFunction::from_fn(2, |x| {
            -(crate::function::coord(x, 0) as f64 * crate::function::coord(x, 1) as f64)
        })
        .unwrap();
        assert_eq!(count_strict_local_minima(&neg_prod), 2);
        let zero = RealFunction::from_fn(3, |_| 0.0).unwrap();
        assert_eq!(count_strict_local_minima(&zero), 0);
    }

    #[test]
    fn monotone_examples() {
        assert!(is_monotone(&and_f(4).unwrap()));
        assert!(is_monotone(&majority(3).unwrap()));
        assert!(!is_monotone(&full_parity(2).unwrap()));
        assert!(is_monotone(&BooleanFunction::constant(3, 1).unwrap()));
        assert!(!is_monotone(&dictator(2, 0).unwrap().negate()));
    }
}
