//! Registered functionals: named real quantities of functions, sets and
//! vectors, optionally parameterized as `id@a,b`.

use std::fmt;
use std::str::FromStr;

use cubelab_additive::{
    doubling, sumset, triangle_density, triangle_removal_distance, Degeneracy, RemovalMode,
};
use cubelab_core::structure::DEFAULT_JUNTA_BUDGET;
use cubelab_core::{
    count_strict_local_minima, dictator, erasure_norm, fourier_stats, junta_distance, majority,
    nicd_agreement, noise::noise_sensitivity, sensitivity_stats, stability, BooleanFunction,
    RealFunction,
};
use cubelab_threshold::{ptf_degree, ptf_sparsity, threshold_tail, Sparsity};
use num_rational::Ratio;

use crate::error::{param_error, HarnessError, Result};
use crate::search::Direction;
use crate::space::{Element, ElementKind, SearchSpace};

struct Spec {
    id: &'static str,
    kind: ElementKind,
    args: &'static [&'static str],
    doc: &'static str,
}

const fn spec(id: &'static str, kind: ElementKind, args: &'static [&'static str], doc: &'static str) -> Spec {
    Spec { id, kind, args, doc }
}

use ElementKind::{Function as F, Set as S, Vector as V};

const SPECS: &[Spec] = &[
    spec("tinf", F, &[], "total influence"),
    spec("entropy", F, &[], "spectral entropy H = sum -f(S)^2 log2 f(S)^2"),
    spec("fei-ratio", F, &[], "H / Tinf, undefined for constants"),
    spec("min-entropy-ratio", F, &[], "-log2 max f(S)^2 / Tinf, undefined for constants"),
    spec("degree", F, &[], "Fourier degree"),
    spec("w1", F, &[], "level-1 weight sum f(i)^2"),
    spec("linear-sum", F, &[], "sum of the degree-1 coefficients"),
    spec("linear-minus-sqrt-deg", F, &[], "sum f(i) - sqrt(deg f); conjectured <= 0"),
    spec("variance", F, &[], "Var[f]"),
    spec("max-influence", F, &[], "largest single-coordinate influence"),
    spec("aa-ratio", F, &[], "max influence * deg / Var, undefined for constants"),
    spec("sens", F, &[], "maximum sensitivity"),
    spec("bs", F, &[], "block sensitivity"),
    spec("bs-minus-sens", F, &[], "bs - sens"),
    spec("deg-over-sens", F, &[], "deg / sens, undefined for constants"),
    spec("tinf-over-sens", F, &[], "Tinf / sens, undefined for constants"),
    spec("stab", F, &["rho"], "noise stability Stab_rho"),
    spec("ns", F, &["delta"], "noise sensitivity NS_delta"),
    spec("mls-gap", F, &["rho"], "Stab_rho[f] - Stab_rho[Maj_n], odd n only; conjectured >= 0 on threshold functions"),
    spec("nicd", F, &["r", "eps"], "probability that r eps-noisy copies agree"),
    spec("erasure", F, &["p"], "E|f(z)| under erasures kept with probability p"),
    spec("erasure-gap", F, &["p"], "erasure value minus the dictator's; <= 0 on odd functions for p >= 1/2"),
    spec("ptf-degree", F, &[], "least sign-representing degree"),
    spec("ptf-sparsity", F, &["limit"], "least sign-representing monomial count, undefined above limit"),
    spec("junta-distance", F, &["k"], "distance to the nearest k-junta"),
    spec("size", S, &[], "|A|"),
    spec("density", S, &[], "|A| / 2^n"),
    spec("doubling", S, &[], "|A + A| / |A|"),
    spec("sumset-size", S, &[], "|A + A|"),
    spec("triangle-density", S, &[], "Pr[x, y, x + y in A]"),
    spec("removal-fraction", S, &[], "fewest deletions making A triangle-free, over 2^n"),
    spec("removal-exponent", S, &[], "ln triangle density / ln removal fraction, undefined when either is 0"),
    spec("tomaszewski-tail", V, &[], "Pr[|<a, x>| <= |a|_2] for uniform signs x"),
    spec("quadratic-minima", V, &[], "strict local minima of the degree-2 polynomial with these coefficients"),
];

/// One registered functional with its arguments bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional {
    id: &'static str,
    args: Vec<f64>,
}

/// The extremal value a conjecture predicts for a search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bound {
    /// `Max`: the maximum stays at most `limit`; `Min`: the minimum stays at least `limit`.
    pub direction: Direction,
    pub limit: f64,
}

impl Bound {
    pub fn violated_by(&self, value: f64) -> bool {
        match self.direction {
            Direction::Max => value > self.limit,
            Direction::Min => value < self.limit,
        }
    }
}

/// Slack on conjectured bounds, absorbing floating error in the functional.
pub const BOUND_SLACK: f64 = 1e-12;

/// `(id, element kind, argument names, description)` for every functional.
pub fn catalog() -> impl Iterator<Item = (&'static str, ElementKind, &'static [&'static str], &'static str)> {
    SPECS.iter().map(|s| (s.id, s.kind, s.args, s.doc))
}

fn check_args(id: &str, args: &[f64]) -> Result<()> {
    let bad = |what: &str| Err(param_error(id, what.to_string()));
    let integer = |v: f64| v.fract() == 0.0 && v >= 0.0;
    match id {
        "stab" | "mls-gap" if !(-1.0..=1.0).contains(&args[0]) => bad("rho must lie in [-1, 1]"),
        "ns" if !(0.0..=1.0).contains(&args[0]) => bad("delta must lie in [0, 1]"),
        "nicd" if !(integer(args[0]) && args[0] >= 2.0) => bad("r must be an integer >= 2"),
        "nicd" if !(args[1] > 0.0 && args[1] < 0.5) => bad("eps must lie in (0, 1/2)"),
        "erasure" | "erasure-gap" if !(args[0] > 0.0 && args[0] <= 1.0) => bad("p must lie in (0, 1]"),
        "ptf-sparsity" if !(integer(args[0]) && args[0] >= 1.0) => bad("limit must be a positive integer"),
        "junta-distance" if !integer(args[0]) => bad("k must be a nonnegative integer"),
        _ => Ok(()),
    }
}

impl FromStr for Functional {
    type Err = HarnessError;

    fn from_str(text: &str) -> Result<Self> {
        let (id, args) = match text.trim().split_once('@') {
            Some((id, a)) => (id, a.split(',').map(str::trim).collect::<Vec<_>>()),
            None => (text.trim(), Vec::new()),
        };
        let spec = SPECS
            .iter()
            .find(|s| s.id == id)
            .ok_or_else(|| HarnessError::UnknownFunctional(text.to_string()))?;
        if args.len() != spec.args.len() {
            return Err(param_error(
                id,
                format!("takes {} argument(s) ({})", spec.args.len(), spec.args.join(", ")),
            ));
        }
        let args = args
            .iter()
            .map(|a| {
                a.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| param_error(id, format!("bad argument {a:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        check_args(spec.id, &args)?;
        Ok(Self { id: spec.id, args })
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id)?;
        if !self.args.is_empty() {
            let args: Vec<String> = self.args.iter().map(f64::to_string).collect();
            write!(f, "@{}", args.join(","))?;
        }
        Ok(())
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den != 0.0).then(|| num / den)
}

fn to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `g(x) = sum_S c_S chi_S(x)` over masks of at most two coordinates in
/// increasing order: the constant, then `x_i`, then `x_i x_j` for `i < j`.
pub fn quadratic_from_coefficients(c: &[f64]) -> Result<RealFunction> {
    let n = (0..=24usize)
        .find(|&n| 1 + n + n * n.saturating_sub(1) / 2 == c.len())
        .ok_or_else(|| param_error("quadratic-minima", format!("{} coefficients fit no arity", c.len())))?;
    let mut masks: Vec<usize> = (0..1usize << n).filter(|s| s.count_ones() <= 2).collect();
    masks.sort_by_key(|&s| (s.count_ones(), s.trailing_zeros(), s));
    Ok(RealFunction::from_fn(n, |x| {
        masks
            .iter()
            .zip(c)
            .map(|(&s, &v)| if (s & x).count_ones() % 2 == 1 { -v } else { v })
            .sum()
    })?)
}

impl Functional {
    pub fn id(&self) -> &'static str {
        self.id
    }

    pub fn args(&self) -> &[f64] {
        &self.args
    }

    pub fn kind(&self) -> ElementKind {
        SPECS.iter().find(|s| s.id == self.id).expect("registered").kind
    }

    /// The conjectured extremal bound when searching `space`, if any.
    pub fn bound(&self, space: &SearchSpace) -> Option<Bound> {
        let inner = match space {
            SearchSpace::RandomSample { space, .. } => space.as_ref(),
            s => s,
        };
        let max = Bound {
            direction: Direction::Max,
            limit: BOUND_SLACK,
        };
        match (self.id, inner) {
            ("linear-minus-sqrt-deg", _) => Some(max),
            ("mls-gap", SearchSpace::Ltfs(n)) if n % 2 == 1 && self.args[0] >= 0.0 => Some(Bound {
                direction: Direction::Min,
                limit: -BOUND_SLACK,
            }),
            ("erasure-gap", SearchSpace::OddFunctions(_)) if self.args[0] >= 0.5 => Some(max),
            ("tomaszewski-tail", _) => Some(Bound {
                direction: Direction::Min,
                limit: 0.5 - BOUND_SLACK,
            }),
            _ => None,
        }
    }

    /// The value at `e`, or `None` where the functional is undefined.
    pub fn eval(&self, e: &Element) -> Result<Option<f64>> {
        if e.kind() != self.kind() {
            return Err(param_error(
                self.id,
                format!("defined on {}s, given a {}", self.kind(), e.kind()),
            ));
        }
        match e {
            Element::Function(f) => self.eval_function(f),
            Element::Set(a) => {
                let v = match self.id {
                    "size" => a.len() as f64,
                    "density" => to_f64(a.density()),
                    "doubling" if a.is_empty() => return Ok(None),
                    "doubling" => to_f64(doubling(a)?),
                    "sumset-size" => sumset(a, a)?.len() as f64,
                    "triangle-density" => to_f64(triangle_density(a)?),
                    "removal-fraction" => {
                        let r = triangle_removal_distance(a, RemovalMode::Exact, Degeneracy::Inclusive)?;
                        r.distance() as f64 / a.universe() as f64
                    }
                    "removal-exponent" => {
                        let r = triangle_removal_distance(a, RemovalMode::Exact, Degeneracy::Inclusive)?;
                        let eps = r.distance() as f64 / a.universe() as f64;
                        let delta = to_f64(triangle_density(a)?);
                        if eps == 0.0 || delta == 0.0 {
                            return Ok(None);
                        }
                        delta.ln() / eps.ln()
                    }
                    _ => unreachable!("kind checked"),
                };
                Ok(Some(v))
            }
            Element::Vector(a) => match self.id {
                "tomaszewski-tail" => {
                    let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if norm == 0.0 {
                        return Ok(None);
                    }
                    let unit: Vec<f64> = a.iter().map(|v| v / norm).collect();
                    let p = threshold_tail(&unit, 1.0, false)?;
                    Ok(Some(*p.numer() as f64 / *p.denom() as f64))
                }
                "quadratic-minima" => {
                    Ok(Some(count_strict_local_minima(&quadratic_from_coefficients(a)?) as f64))
                }
                _ => unreachable!("kind checked"),
            },
        }
    }

    fn eval_function(&self, f: &BooleanFunction) -> Result<Option<f64>> {
        let n = f.n();
        let a = &self.args;
        let stats = || fourier_stats(f);
        let sens = || -> Result<usize> { Ok(cubelab_core::sensitivity::max_sensitivity(f)) };
        let v = match self.id {
            "tinf" => stats().total_influence,
            "entropy" => stats().spectral_entropy,
            "fei-ratio" => {
                let s = stats();
                return Ok(ratio(s.spectral_entropy, s.total_influence));
            }
            "min-entropy-ratio" => {
                let s = stats();
                return Ok(ratio(-s.max_coeff_sq.log2(), s.total_influence));
            }
            "degree" => stats().degree as f64,
            "w1" => stats().w1,
            "linear-sum" => stats().linear_sum,
            "linear-minus-sqrt-deg" => {
                let s = stats();
                s.linear_sum - (s.degree as f64).sqrt()
            }
            "variance" => stats().variance,
            "max-influence" => stats().influences.iter().copied().fold(0.0, f64::max),
            "aa-ratio" => {
                let s = stats();
                let max = s.influences.iter().copied().fold(0.0, f64::max);
                return Ok(ratio(max * s.degree as f64, s.variance));
            }
            "sens" => sens()? as f64,
            "bs" => sensitivity_stats(f)?.block_sensitivity as f64,
            "bs-minus-sens" => {
                let s = sensitivity_stats(f)?;
                s.block_sensitivity as f64 - s.max_sensitivity as f64
            }
            "deg-over-sens" => return Ok(ratio(stats().degree as f64, sens()? as f64)),
            "tinf-over-sens" => return Ok(ratio(stats().total_influence, sens()? as f64)),
            "stab" => stability(f, a[0])?,
            "ns" => noise_sensitivity(f, a[0])?,
            "mls-gap" => {
                if n.is_multiple_of(2) {
                    return Ok(None);
                }
                stability(f, a[0])? - stability(&majority(n)?, a[0])?
            }
            "nicd" => nicd_agreement(f, a[0] as u32, a[1])?,
            "erasure" => erasure_norm(f, a[0])?,
            "erasure-gap" => erasure_norm(f, a[0])? - erasure_norm(&dictator(n, 0)?, a[0])?,
            "ptf-degree" => ptf_degree(f)?.degree as f64,
            "ptf-sparsity" => match ptf_sparsity(f, (a[0] as usize).min(f.len()))? {
                Sparsity::Found { size, .. } => size as f64,
                Sparsity::ExceedsLimit { .. } => return Ok(None),
            },
            "junta-distance" => {
                if a[0] as usize > n {
                    return Ok(None);
                }
                junta_distance(f, a[0] as usize, DEFAULT_JUNTA_BUDGET)?.distance
            }
            _ => unreachable!("kind checked"),
        };
        Ok(Some(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(functional: &str, f: &BooleanFunction) -> Option<f64> {
        functional
            .parse::<Functional>()
            .unwrap()
            .eval(&Element::Function(f.clone()))
            .unwrap()
    }

    #[test]
    fn majority_three() {
        let maj = majority(3).unwrap();
        assert_eq!(at("tinf", &maj), Some(1.5));
        assert_eq!(at("entropy", &maj), Some(2.0));
        assert_eq!(at("degree", &maj), Some(3.0));
        assert_eq!(at("stab@0.5", &maj), Some(0.40625));
        assert_eq!(at("mls-gap@0.5", &maj), Some(0.0));
        assert_eq!(at("fei-ratio", &BooleanFunction::constant(3, 1).unwrap()), None);
        assert_eq!(at("bs-minus-sens", &maj), Some(0.0));
    }

    #[test]
    fn parse_and_print() {
        let f: Functional = "nicd@10,0.26".parse().unwrap();
        assert_eq!(f.to_string(), "nicd@10,0.26");
        assert_eq!(f.args(), &[10.0, 0.26]);
        for bad in ["nope", "stab", "stab@2", "nicd@1.5,0.2", "tinf@1", "erasure@0"] {
            assert!(bad.parse::<Functional>().is_err(), "{bad}");
        }
        let tinf: Functional = "tinf".parse().unwrap();
        let set = Element::Set(cubelab_additive::F2Set::full(2).unwrap());
        assert!(tinf.eval(&set).is_err());
    }

    #[test]
    fn vector_functionals() {
        let t: Functional = "tomaszewski-tail".parse().unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(t.eval(&Element::Vector(vec![s, s])).unwrap(), Some(0.5));
        assert_eq!(t.eval(&Element::Vector(vec![1.0, 1.0])).unwrap(), Some(0.5));
        assert_eq!(t.eval(&Element::Vector(vec![0.0])).unwrap(), None);
        // g = x1 x2 has two strict minima on the square
        let q: Functional = "quadratic-minima".parse().unwrap();
        assert_eq!(q.eval(&Element::Vector(vec![0.0, 0.0, 0.0, 1.0])).unwrap(), Some(2.0));
        assert!(q.eval(&Element::Vector(vec![0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn quadratic_layout() {
        // n = 3: constant, x0, x1, x2, x0x1, x0x2, x1x2
        let g = quadratic_from_coefficients(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.value(0b010), -1.0);
        assert_eq!(g.value(0b110), 1.0);
    }

    #[test]
    fn bounds_depend_on_the_space() {
        let gap: Functional = "mls-gap@0.5".parse().unwrap();
        assert!(gap.bound(&SearchSpace::Ltfs(3)).is_some());
        assert!(gap.bound(&SearchSpace::AllFunctions(3)).is_none());
        let e: Functional = "erasure-gap@0.3".parse().unwrap();
        assert!(e.bound(&SearchSpace::OddFunctions(3)).is_none());
    }
}
