//! Extremal search over a space, chunked across workers and merged in
//! chunk order.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::functional::Functional;
use crate::space::{Element, SearchSpace, CHUNK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Max,
    Min,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Max => "max",
            Self::Min => "min",
        })
    }
}

/// Values closer than this many binary places are a tie, so that floating
/// noise between symmetric copies of an extremizer does not decide the
/// witness; ties go to the element with the least truth-table hex.
const TIE_BITS: i32 = 36;

fn tie_class(v: f64) -> f64 {
    (v * 2f64.powi(TIE_BITS)).round()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extremum {
    pub value: f64,
    pub witness: Element,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub direction: Direction,
    /// `None` when the functional was undefined everywhere searched.
    pub best: Option<Extremum>,
    /// Elements in the extremal tie class.
    pub ties: u64,
    /// Elements the functional was evaluated on.
    pub evaluated: u64,
    /// Elements where it was defined.
    pub defined: u64,
    /// Indices in the full space.
    pub size: u128,
    /// Whether the node budget cut the search short.
    pub budgeted: bool,
}

#[derive(Default)]
struct Partial {
    best: Option<Extremum>,
    ties: u64,
    evaluated: u64,
    defined: u64,
}

impl Partial {
    fn offer(&mut self, direction: Direction, value: f64, witness: &Element, count: u64) {
        let better = match &self.best {
            None => true,
            Some(b) => {
                let (new, old) = (tie_class(value), tie_class(b.value));
                if new == old {
                    self.ties += count;
                    if witness.precedes(&b.witness) {
                        self.best = Some(Extremum {
                            value,
                            witness: witness.clone(),
                        });
                    }
                    return;
                }
                match direction {
                    Direction::Max => new > old,
                    Direction::Min => new < old,
                }
            }
        };
        if better {
            self.best = Some(Extremum {
                value,
                witness: witness.clone(),
            });
            self.ties = count;
        }
    }

    fn merge(mut self, other: Partial, direction: Direction) -> Partial {
        self.evaluated += other.evaluated;
        self.defined += other.defined;
        if let Some(b) = other.best {
            self.offer(direction, b.value, &b.witness, other.ties);
        }
        self
    }
}

/// Extremum of `value` over the first `budget` indices of `space`.
pub fn scan(
    space: &SearchSpace,
    direction: Direction,
    budget: u64,
    value: impl Fn(&Element) -> Result<Option<f64>> + Sync,
) -> Result<SearchOutcome> {
    let e = space.enumerate()?;
    let size = e.size();
    let budgeted = size > budget as u128;
    let total = size.min(budget as u128) as u64;
    let parts: Vec<Result<Partial>> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut p = Partial::default();
            for x in e.chunk(c * CHUNK, ((c + 1) * CHUNK).min(total))? {
                p.evaluated += 1;
                if let Some(v) = value(&x)? {
                    if v.is_nan() {
                        continue;
                    }
                    p.defined += 1;
                    p.offer(direction, v, &x, 1);
                }
            }
            Ok(p)
        })
        .collect();
    let mut acc = Partial::default();
    for p in parts {
        acc = acc.merge(p?, direction);
    }
    Ok(SearchOutcome {
        direction,
        best: acc.best,
        ties: acc.ties,
        evaluated: acc.evaluated,
        defined: acc.defined,
        size,
        budgeted,
    })
}

/// Extremum of a registered functional.
pub fn extremal_search(
    space: &SearchSpace,
    functional: &Functional,
    direction: Direction,
    budget: u64,
) -> Result<SearchOutcome> {
    if functional.kind() != space.element_kind() {
        return Err(crate::error::param_error(
            &functional.to_string(),
            format!("defined on {}s, space {space} holds {}s", functional.kind(), space.element_kind()),
        ));
    }
    scan(space, direction, budget, |x| functional.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cubelab_core::{majority, BooleanFunction};

    fn run(space: &str, functional: &str, direction: Direction) -> SearchOutcome {
        extremal_search(&space.parse().unwrap(), &functional.parse().unwrap(), direction, u64::MAX).unwrap()
    }

    #[test]
    fn least_stable_threshold_function_is_majority() {
        let out = run("ltf-n3", "stab@0.5", Direction::Min);
        assert_eq!(out.evaluated, 104);
        let best = out.best.unwrap();
        assert_eq!(best.value, 0.40625);
        // stability ignores input signs: the 8 signed majorities tie and the least hex wins
        let maj = majority(3).unwrap();
        let hex = (0..8usize)
            .map(|flip| BooleanFunction::from_predicate(3, |x| maj.value(x ^ flip) < 0).unwrap().to_hex())
            .min()
            .unwrap();
        assert_eq!(best.witness.function().unwrap().to_hex(), hex);
        assert_eq!(out.ties, 8);
    }

    #[test]
    fn ties_prefer_least_hex() {
        let out = run("all-n2", "tinf", Direction::Max);
        // the two parities x1 x2 and -x1 x2
        assert_eq!(out.best.as_ref().unwrap().value, 2.0);
        assert_eq!(out.best.unwrap().witness.to_object(), "2:6");
        assert_eq!(out.ties, 2);
    }

    #[test]
    fn budget_truncates_and_flags() {
        let space: SearchSpace = "all-n4".parse().unwrap();
        let f: Functional = "tinf".parse().unwrap();
        let out = extremal_search(&space, &f, Direction::Max, 5000).unwrap();
        assert!(out.budgeted);
        assert_eq!(out.evaluated, 5000);
        assert!(!run("all-n3", "tinf", Direction::Max).budgeted);
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let space: SearchSpace = "f2sets-n2".parse().unwrap();
        assert!(extremal_search(&space, &"tinf".parse().unwrap(), Direction::Max, 10).is_err());
    }
}
