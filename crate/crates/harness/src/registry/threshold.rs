//! Recipes for linear and polynomial threshold functions.

use cubelab_core::noise::noise_sensitivity;
use cubelab_core::{fourier_stats, inner_product, majority, stability_exact, wht, BooleanFunction};
use cubelab_gaussian::Normals;
use cubelab_threshold::{
    approx_majority_min_degree, enumerate_ltfs, gl_extremal, intersect_halfspaces, ptf_degree,
    ptf_sparsity, threshold_tail, threshold_tail_exact, ApproxMode, ApproxOutcome, LtfSpec,
    Sparsity,
};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use rayon::prelude::*;

use super::{functional, searched, witness, Metrics, Outcome};
use crate::config::Config;
use crate::error::{param_error, HarnessError, Result};
use crate::functional::BOUND_SLACK;
use crate::params::Params;
use crate::report::Witness;
use crate::search::{scan, Direction};
use crate::space::{Element, SearchSpace};

fn expect_exact(what: &str, got: Ratio<i64>, want: Ratio<i64>) -> Result<()> {
    if got != want {
        return Err(HarnessError::Verification(format!("{what}: got {got}, expected {want}")));
    }
    Ok(())
}

pub fn tomaszewski(p: &mut Params, c: &Config) -> Result<Outcome> {
    let max_n = p.usize("max_n", 10)?;
    let vectors = p.u64("vectors", 2000)?;
    let dim = p.usize("dim", 8)?;
    let half = std::f64::consts::FRAC_1_SQRT_2;
    expect_exact("two equal weights", threshold_tail(&[half, half], 1.0, false)?, Ratio::new(1, 2))?;
    let quarter = [Ratio::new(1, 2); 4];
    expect_exact(
        "four equal weights, strict",
        threshold_tail_exact(&quarter, Ratio::from_integer(1), true)?,
        Ratio::new(3, 8),
    )?;
    let mut candidates: Vec<Vec<f64>> = (1..=max_n).map(|n| vec![1.0; n]).collect();
    candidates.extend((0..vectors).map(|k| {
        let mut src = Normals::stream(c.seed, k);
        (0..dim).map(|_| src.normal()).collect()
    }));
    let f = functional("tomaszewski-tail")?;
    let values: Vec<Option<f64>> = candidates
        .par_iter()
        .map(|a| f.eval(&Element::Vector(a.clone())))
        .collect::<Result<_>>()?;
    let mut best: Option<(f64, usize)> = None;
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = *v {
            if best.is_none_or(|(b, _)| v < b) {
                best = Some((v, i));
            }
        }
    }
    let (value, at) = best.expect("equal-weight vectors are nonzero");
    let mut m = Metrics::default();
    m.put("two_equal_weights", "1/2");
    m.put("four_equal_weights_strict", "3/8");
    m.put("vectors", candidates.len());
    m.put("min_tail", value);
    let w = Witness::new(&Element::Vector(candidates[at].clone()), &f, value);
    Ok(Outcome::check(value >= 0.5 - BOUND_SLACK, m).with_witness(Some(w)))
}

pub fn gotsman_linial(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 3)?;
    let k = p.usize("k", 2)?;
    let (extremal, mirrored) = gl_extremal(n, k)?;
    let target = fourier_stats(&extremal.function).total_influence;
    let space = SearchSpace::AllFunctions(n);
    let out = scan(&space, Direction::Max, c.node_budget, |e| {
        let f = e.function().expect("function space");
        Ok((ptf_degree(f)?.degree <= k).then(|| fourier_stats(f).total_influence))
    })?;
    let mut m = Metrics::default();
    m.search("", &out);
    m.put("alternating_window", &extremal.window);
    m.put("alternating_function", extremal.function.to_string());
    m.put("mirrored_function", mirrored.function.to_string());
    m.put("alternating_tinf", target);
    let best = out.best.as_ref().expect("constants have degree 0");
    let holds = best.value <= target + BOUND_SLACK;
    let f = functional("tinf")?;
    Ok(Outcome::check(holds, m)
        .with_witness(witness(&out, &f))
        .budgeted(out.budgeted))
}

fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| param_error("rho", "not finite"))
}

pub fn majority_least_stable(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 3)?;
    let rhos = p.list("rho", &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])?;
    if n % 2 == 0 {
        return Err(param_error("n", "must be odd"));
    }
    if rhos.iter().any(|r| !(0.0..=1.0).contains(r)) {
        return Err(param_error("rho", "the conjecture concerns rho in [0, 1]"));
    }
    let spec = wht(&majority(n)?);
    let mut m = Metrics::default();
    let mut holds = true;
    let mut counter = None;
    let mut budgeted = false;
    for &rho in &rhos {
        let key = format!("rho={rho}/");
        let r = rational(rho)?;
        let exact = stability_exact(&spec, &r)?;
        m.put(format!("{key}majority_stab_exact"), exact.to_string());
        if n == 3 {
            // Stab_rho[Maj_3] = 3/4 rho + 1/4 rho^3
            let closed = BigRational::new(BigInt::from(3), BigInt::from(4)) * &r
                + BigRational::new(BigInt::from(1), BigInt::from(4)) * &r * &r * &r;
            if closed != exact {
                return Err(HarnessError::Verification(format!(
                    "majority stability at rho = {rho}: {exact} against closed form {closed}"
                )));
            }
        }
        let f = functional(&format!("mls-gap@{rho}"))?;
        let out = searched(&mut m, &key, &SearchSpace::Ltfs(n), &f, Direction::Min, c)?;
        budgeted |= out.budgeted;
        if let Some(best) = &out.best {
            if best.value < -BOUND_SLACK {
                let g = best.witness.function().expect("function space");
                let class = if fourier_stats(g).mean == 0.0 { "unbiased" } else { "biased" };
                m.put(format!("{key}violation_class"), class);
                holds = false;
                counter.get_or_insert_with(|| Witness::new(&best.witness, &f, best.value));
            }
        }
    }
    m.put("threshold_functions", enumerate_ltfs(n)?.len());
    Ok(Outcome::check(holds, m).with_witness(counter).budgeted(budgeted))
}

pub fn w1_ltf(p: &mut Params, c: &Config) -> Result<Outcome> {
    let ns = p.list("n", &[3usize, 5])?;
    let f = functional("w1")?;
    let mut m = Metrics::default();
    let mut holds = true;
    let mut worst: Option<Witness> = None;
    let mut budgeted = false;
    for &n in &ns {
        let key = format!("n={n}/");
        let out = scan(&SearchSpace::Ltfs(n), Direction::Min, c.node_budget, |e| {
            let s = fourier_stats(e.function().expect("function space"));
            Ok((s.mean == 0.0).then_some(s.w1))
        })?;
        m.search(&key, &out);
        budgeted |= out.budgeted;
        if let Some(best) = &out.best {
            m.put(format!("{key}gap_to_2_over_pi"), best.value - std::f64::consts::FRAC_2_PI);
            holds &= best.value >= 0.5 - BOUND_SLACK;
            if worst.as_ref().is_none_or(|w| best.value < w.value) {
                worst = Some(Witness::new(&best.witness, &f, best.value));
            }
        }
    }
    Ok(Outcome::check(holds, m).with_witness(worst).budgeted(budgeted))
}

pub fn peres(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 4)?;
    let deltas: Vec<f64> = p.list("delta", &[0.01, 0.05, 0.1])?;
    let mut m = Metrics::default();
    let mut first = None;
    let mut budgeted = false;
    let target = (2.0 / std::f64::consts::PI).sqrt();
    m.put("sqrt_2_over_pi", target);
    for &delta in &deltas {
        let key = format!("delta={delta}/");
        let f = functional(&format!("ns@{delta}"))?;
        let out = searched(&mut m, &key, &SearchSpace::Ltfs(n), &f, Direction::Max, c)?;
        budgeted |= out.budgeted;
        if let Some(best) = &out.best {
            m.put(format!("{key}ns_over_sqrt_delta"), best.value / delta.sqrt());
        }
        if first.is_none() {
            first = witness(&out, &f);
        }
    }
    Ok(Outcome::report_only(m).with_witness(first).budgeted(budgeted))
}

fn random_halfspace(n: usize, seed: u64, stream: u64) -> Result<LtfSpec> {
    let mut src = Normals::stream(seed, stream);
    let w: Vec<f64> = (0..n).map(|_| src.normal()).collect();
    let theta = 0.5 * src.normal();
    Ok(LtfSpec::new(w, theta)?)
}

pub fn intersections_ns(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 8)?;
    let ks = p.list("k", &[1usize, 2, 4, 8])?;
    let delta = p.f64("delta", 0.05)?;
    let trials = p.u64("trials", 20)?;
    let mut m = Metrics::default();
    for &k in &ks {
        let key = format!("k={k}/");
        let results: Vec<(f64, f64)> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let specs = (0..k as u64)
                    .map(|j| random_halfspace(n, c.seed, t * k as u64 + j))
                    .collect::<Result<Vec<_>>>()?;
                let f = intersect_halfspaces(&specs)?;
                let ns = noise_sensitivity(&f, delta)?;
                let parts = specs
                    .iter()
                    .map(|s| Ok(noise_sensitivity(&cubelab_threshold::ltf(s)?, delta)?))
                    .sum::<Result<f64>>()?;
                Ok((ns, parts))
            })
            .collect::<Result<_>>()?;
        if results.iter().any(|&(ns, parts)| ns > parts + BOUND_SLACK) {
            return Err(HarnessError::Verification(format!(
                "noise sensitivity of an intersection of {k} halfspaces exceeds the union bound"
            )));
        }
        let max = results.iter().map(|r| r.0).fold(0.0, f64::max);
        m.put(format!("{key}max_ns"), max);
        m.put(format!("{key}ns_over_sqrt_delta"), max / delta.sqrt());
        if k >= 2 {
            let scale = delta.sqrt() * (k as f64).ln().sqrt();
            m.put(format!("{key}ns_over_sqrt_delta_log_k"), max / scale);
        }
    }
    Ok(Outcome::report_only(m))
}

pub fn ptf_sparsity_ip(p: &mut Params, _c: &Config) -> Result<Outcome> {
    let halves = p.list("half", &[1usize, 2])?;
    let limit = p.usize("limit", 9)?;
    let mut m = Metrics::default();
    let mut verdict = Some(true);
    let mut w = None;
    for &half in &halves {
        let f = inner_product(half)?;
        let bound = 3usize.pow(half as u32);
        let key = format!("half={half}/");
        m.put(format!("{key}three_to_the_n"), bound);
        match ptf_sparsity(&f, limit.min(f.len()))? {
            Sparsity::Found { size, witness } => {
                m.put(format!("{key}sparsity"), size);
                m.put(format!("{key}witness_monomials"), witness.monomials().keys().collect::<Vec<_>>());
                if size < bound {
                    verdict = Some(false);
                    w.get_or_insert_with(|| sparsity_witness(&f, size as f64));
                }
            }
            Sparsity::ExceedsLimit { limit } => {
                m.put(format!("{key}sparsity_exceeds"), limit);
                // only conclusive when the limit reaches 3^n - 1
                if limit + 1 < bound && verdict == Some(true) {
                    verdict = None;
                }
            }
        }
    }
    let outcome = match verdict {
        Some(holds) => Outcome::check(holds, m),
        None => Outcome::report_only(m),
    };
    Ok(outcome.with_witness(w))
}

fn sparsity_witness(f: &BooleanFunction, size: f64) -> Witness {
    let g = functional(&format!("ptf-sparsity@{}", f.len())).expect("registered");
    Witness::new(&Element::Function(f.clone()), &g, size)
}

pub fn approx_majority(p: &mut Params, _c: &Config) -> Result<Outcome> {
    let max_n = p.usize("max_n", 8)?;
    let exact_n = p.usize("exact_max_n", 3)?;
    let mut m = Metrics::default();
    for n in 1..=max_n {
        let mut put = |mode: &str, out: ApproxOutcome| match out {
            ApproxOutcome::Found { degree, .. } => m.put(format!("n={n}/{mode}_degree"), degree),
            ApproxOutcome::InfeasibleAtLimit { limit } => {
                m.put(format!("n={n}/{mode}_infeasible_at"), limit)
            }
        };
        put("symmetric", approx_majority_min_degree(n, ApproxMode::Symmetric)?);
        if n <= exact_n {
            put("exact", approx_majority_min_degree(n, ApproxMode::Exact)?);
        }
    }
    Ok(Outcome::report_only(m))
}
