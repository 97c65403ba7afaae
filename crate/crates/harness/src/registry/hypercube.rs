//! Recipes for problems about functions on the hypercube.

use cubelab_core::structure::{binomial, DEFAULT_JUNTA_BUDGET};
use cubelab_core::{
    and_f, convolution_tail, dictator, erasure_norm, fourier_stats, junta_distance, majority,
    nicd_agreement, or_f, spectral_concentration, BooleanFunction, Dnf, RealFunction,
};
use cubelab_gaussian::Normals;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{functional, searched, witness, Metrics, Outcome};
use crate::config::Config;
use crate::error::Result;
use crate::functional::BOUND_SLACK;
use crate::params::Params;
use crate::report::Witness;
use crate::search::Direction;
use crate::space::{Element, SearchSpace};

fn tribes(width: usize, count: usize) -> Result<(Dnf, BooleanFunction)> {
    let dnf = Dnf::tribes(width, count)?;
    let f = dnf.to_function()?;
    Ok((dnf, f))
}

/// `1_A / mu(A)` for a nonempty `A`.
fn normalized_indicator(n: usize, member: impl Fn(usize) -> bool) -> Result<Option<RealFunction>> {
    let size = (0..1usize << n).filter(|&x| member(x)).count();
    if size == 0 {
        return Ok(None);
    }
    let height = (1u64 << n) as f64 / size as f64;
    Ok(Some(RealFunction::from_fn(n, |x| if member(x) { height } else { 0.0 })?))
}

pub fn talagrand(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 10)?;
    let rho = p.f64("rho", 0.5)?;
    let ts = p.list("t", &[2.0, 4.0, 8.0, 16.0])?;
    let random_sets = p.usize("random_sets", 8)?;
    cubelab_core::check_arity("convolution tail search", n, 16)?;
    // subcubes, Hamming balls around the all-(-1) point, and random sets
    let mut candidates: Vec<(String, RealFunction)> = Vec::new();
    for k in 1..=n {
        let cube = (1usize << k) - 1;
        if let Some(f) = normalized_indicator(n, |x| x & cube == cube)? {
            candidates.push((format!("subcube-codim-{k}"), f));
        }
        let r = n - k;
        if let Some(f) = normalized_indicator(n, |x| x.count_ones() as usize >= n - r)? {
            candidates.push((format!("ball-radius-{r}"), f));
        }
    }
    for j in 0..random_sets {
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        rng.set_stream(j as u64);
        let level = 1 + j % n;
        let bits: Vec<bool> = (0..1usize << n).map(|_| rng.random_range(0..1u64 << level) == 0).collect();
        if let Some(f) = normalized_indicator(n, |x| bits[x])? {
            candidates.push((format!("random-density-2^-{level}-#{j}"), f));
        }
    }
    let mut m = Metrics::default();
    m.put("candidates", candidates.len());
    for &t in &ts {
        let tails: Vec<f64> = candidates
            .par_iter()
            .map(|(_, f)| convolution_tail(f, rho, t))
            .collect::<cubelab_core::Result<_>>()?;
        // first candidate among ties
        let (best, tail) = tails
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let key = format!("t={t}");
        m.put(format!("{key}/max_tail"), tail);
        m.put(format!("{key}/t_times_tail"), t * tail);
        m.put(format!("{key}/t_sqrt_log_t_times_tail"), t * t.ln().sqrt() * tail);
        m.put(format!("{key}/candidate"), &candidates[best].0);
    }
    Ok(Outcome::report_only(m))
}

pub fn sensitivity_gap(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 4)?;
    let space = SearchSpace::AllFunctions(n);
    let mut m = Metrics::default();
    let gap = functional("bs-minus-sens")?;
    let out = searched(&mut m, "bs_minus_sens/", &space, &gap, Direction::Max, c)?;
    let deg = searched(&mut m, "deg_over_sens/", &space, &functional("deg-over-sens")?, Direction::Max, c)?;
    Ok(Outcome::report_only(m)
        .with_witness(witness(&out, &gap))
        .budgeted(out.budgeted || deg.budgeted))
}

/// Coefficients of `(x_1 + ... + x_n)^2 = n + 2 sum_{i<j} x_i x_j`, in the
/// layout of the `quadratic-minima` functional.
fn square_of_sum(n: usize) -> Vec<f64> {
    let mut c = vec![n as f64];
    c.extend(std::iter::repeat_n(0.0, n));
    c.extend(std::iter::repeat_n(2.0, n * (n - 1) / 2));
    c
}

pub fn holzman(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 4)?;
    let samples = p.u64("samples", 2000)?;
    if n % 2 == 1 || n == 0 {
        return Err(crate::error::param_error("n", "must be even and positive"));
    }
    let bound = binomial(n, n / 2) as f64;
    let f = functional("quadratic-minima")?;
    let len = 1 + n + n * (n - 1) / 2;
    let values: Vec<(f64, Element)> = (0..=samples)
        .into_par_iter()
        .map(|k| {
            // candidate 0 is the square of the sum, which meets the bound
            let coeffs = if k == 0 {
                square_of_sum(n)
            } else {
                let mut src = Normals::stream(c.seed, k);
                (0..len).map(|_| src.normal()).collect()
            };
            let e = Element::Vector(coeffs);
            Ok((f.eval(&e)?.expect("always defined"), e))
        })
        .collect::<Result<_>>()?;
    let (value, best) = values
        .iter()
        .fold(None::<&(f64, Element)>, |acc, x| match acc {
            Some(a) if a.0 >= x.0 => Some(a),
            _ => Some(x),
        })
        .expect("nonempty");
    let mut m = Metrics::default();
    m.put("bound_central_binomial", bound);
    m.put("max_strict_minima", value);
    m.put("square_of_sum_minima", values[0].0);
    m.put("polynomials", samples + 1);
    Ok(Outcome::check(*value <= bound, m).with_witness(Some(Witness::new(best, &f, *value))))
}

pub fn mansour(p: &mut Params, _c: &Config) -> Result<Outcome> {
    let shapes = p.list("tribes", &["2x2".to_string(), "2x3".into(), "3x2".into(), "3x3".into(), "2x5".into(), "4x3".into()])?;
    let epsilons = p.list("eps", &[0.1, 0.25])?;
    let mut m = Metrics::default();
    let mut worst = f64::NEG_INFINITY;
    for shape in &shapes {
        let (w, k) = shape
            .split_once('x')
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
            .ok_or_else(|| crate::error::param_error("tribes", format!("{shape:?} is not <width>x<count>")))?;
        let (dnf, f) = tribes(w, k)?;
        let s = dnf.size() as f64;
        for &eps in &epsilons {
            let conc = spectral_concentration(&f, eps)?;
            let exponent = (conc.family.len() as f64).ln() / (s.ln() * (1.0 / eps).ln());
            worst = worst.max(exponent);
            let key = format!("tribes-{shape}/eps={eps}");
            m.put(format!("{key}/family"), conc.family.len());
            m.put(format!("{key}/mass"), conc.mass);
            m.put(format!("{key}/exponent"), exponent);
        }
    }
    m.put("max_exponent", worst);
    Ok(Outcome::report_only(m))
}

fn ratio_search(p: &mut Params, c: &Config, id: &str, default_n: usize, direction: Direction) -> Result<Outcome> {
    let n = p.usize("n", default_n)?;
    let f = functional(id)?;
    let mut m = Metrics::default();
    let out = searched(&mut m, "", &SearchSpace::AllFunctions(n), &f, direction, c)?;
    if n % 2 == 1 {
        let maj = fourier_stats(&majority(n)?);
        m.put("majority_entropy", maj.spectral_entropy);
        m.put("majority_tinf", maj.total_influence);
    }
    Ok(Outcome::report_only(m)
        .with_witness(witness(&out, &f))
        .budgeted(out.budgeted))
}

pub fn fei(p: &mut Params, c: &Config) -> Result<Outcome> {
    ratio_search(p, c, "fei-ratio", 3, Direction::Max)
}

pub fn min_entropy(p: &mut Params, c: &Config) -> Result<Outcome> {
    ratio_search(p, c, "min-entropy-ratio", 3, Direction::Max)
}

pub fn aaronson_ambainis(p: &mut Params, c: &Config) -> Result<Outcome> {
    let mut out = ratio_search(p, c, "aa-ratio", 4, Direction::Min)?;
    // the exponent is unspecified, so the raw triple at the extremum is reported
    if let Some(w) = &out.witness {
        let f = BooleanFunction::parse(&w.object)?;
        let s = fourier_stats(&f);
        out.metrics.put("witness_max_influence", s.influences.iter().copied().fold(0.0, f64::max));
        out.metrics.put("witness_variance", s.variance);
        out.metrics.put("witness_degree", s.degree);
    }
    Ok(out)
}

pub fn monotone_sensitivity(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 5)?;
    let f = functional("tinf-over-sens")?;
    let mut m = Metrics::default();
    let out = searched(&mut m, "", &SearchSpace::MonotoneFunctions(n), &f, Direction::Max, c)?;
    Ok(Outcome::report_only(m)
        .with_witness(witness(&out, &f))
        .budgeted(out.budgeted))
}

pub fn linear_coefficients(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 4)?;
    let space = SearchSpace::AllFunctions(n);
    let f = functional("linear-minus-sqrt-deg")?;
    let mut m = Metrics::default();
    let out = searched(&mut m, "", &space, &f, Direction::Max, c)?;
    let sum = searched(&mut m, "linear_sum/", &space, &functional("linear-sum")?, Direction::Max, c)?;
    // the majority on k bits attains k C(k-1, (k-1)/2) 2^{1-k}
    for k in (1..=n).step_by(2) {
        let value = k as f64 * binomial(k - 1, (k - 1) / 2) as f64 * 2f64.powi(1 - k as i32);
        m.put(format!("majority_{k}_linear_sum"), value);
    }
    let holds = out.best.as_ref().is_none_or(|b| b.value <= BOUND_SLACK);
    Ok(Outcome::check(holds, m)
        .with_witness(witness(&out, &f))
        .budgeted(out.budgeted || sum.budgeted))
}

/// Whether `f` is a majority of an odd subset of coordinates, up to input
/// and output signs; returns the subset size.
fn majority_arity(f: &BooleanFunction) -> Option<usize> {
    let n = f.n();
    for subset in 1usize..1 << n {
        let k = subset.count_ones() as usize;
        if k.is_multiple_of(2) {
            continue;
        }
        for flips in 0..1usize << n {
            if flips & !subset != 0 {
                continue;
            }
            let g = BooleanFunction::from_predicate(n, |x| {
                2 * ((x ^ flips) & subset).count_ones() as usize > k
            })
            .ok()?;
            if &g == f || g.negate() == *f {
                return Some(k);
            }
        }
    }
    None
}

pub fn nicd_multi(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 5)?;
    let r = p.u64("r", 10)?;
    let eps = p.f64("eps", 0.26)?;
    let f = functional(&format!("nicd@{r},{eps}"))?;
    let mut m = Metrics::default();
    let out = searched(&mut m, "", &SearchSpace::OddFunctions(n), &f, Direction::Max, c)?;
    let dict = nicd_agreement(&dictator(n, 0)?, r as u32, eps)?;
    m.put("dictator_value", dict);
    if n % 2 == 1 {
        m.put("majority_value", nicd_agreement(&majority(n)?, r as u32, eps)?);
    }
    if let Some(best) = &out.best {
        let arg = best.witness.function().expect("function space");
        let k = majority_arity(arg);
        m.put("argmax_majority_arity", k);
        m.put("argmax_is_dictator", k == Some(1));
        m.put("argmax_is_full_majority", k == Some(n));
        m.put("neither_dictator_nor_full_majority", k != Some(1) && k != Some(n));
        m.put("argmax_influences", fourier_stats(arg).influences);
    }
    Ok(Outcome::report_only(m)
        .with_witness(witness(&out, &f))
        .budgeted(out.budgeted))
}

pub fn erasure_dictator(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 3)?;
    let ps = p.list("p", &[0.3, 0.5, 0.75, 0.9])?;
    let space = SearchSpace::OddFunctions(n);
    let mut m = Metrics::default();
    let mut holds = true;
    let mut counter = None;
    let mut first = None;
    let mut budgeted = false;
    for &q in &ps {
        let key = format!("p={q}/");
        let f = functional(&format!("erasure@{q}"))?;
        let out = searched(&mut m, &key, &space, &f, Direction::Max, c)?;
        budgeted |= out.budgeted;
        let dict = erasure_norm(&dictator(n, 0)?, q)?;
        m.put(format!("{key}dictator_value"), dict);
        if n % 2 == 1 {
            m.put(format!("{key}majority_value"), erasure_norm(&majority(n)?, q)?);
        }
        let Some(best) = &out.best else { continue };
        let arity = majority_arity(best.witness.function().expect("function space"));
        m.put(format!("{key}argmax_majority_arity"), arity);
        let attains = (best.value - dict).abs() <= BOUND_SLACK;
        m.put(format!("{key}dictator_attains_max"), attains);
        if q >= 0.5 && best.value > dict + BOUND_SLACK {
            holds = false;
            if counter.is_none() {
                let gap = functional(&format!("erasure-gap@{q}"))?;
                let value = gap.eval(&best.witness)?.expect("defined");
                counter = Some(Witness::new(&best.witness, &gap, value));
            }
        }
        if first.is_none() {
            first = witness(&out, &f);
        }
    }
    Ok(Outcome::check(holds, m)
        .with_witness(counter.or(first))
        .budgeted(budgeted))
}

pub fn servedio_tan_verbin(p: &mut Params, _c: &Config) -> Result<Outcome> {
    let eps = p.f64("eps", 0.1)?;
    let mut family: Vec<(String, BooleanFunction)> = Vec::new();
    for n in [3, 5, 7, 9] {
        family.push((format!("maj{n}"), majority(n)?));
    }
    for (w, k) in [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3)] {
        family.push((format!("tribes-{w}x{k}"), tribes(w, k)?.1));
    }
    family.push(("and4".into(), and_f(4)?));
    family.push(("or4".into(), or_f(4)?));
    let mut m = Metrics::default();
    let mut worst = 0.0f64;
    for (name, f) in &family {
        let deg = fourier_stats(f).degree;
        let mut k = 0;
        let fit = loop {
            let fit = junta_distance(f, k, DEFAULT_JUNTA_BUDGET)?;
            if fit.distance <= eps || k == f.n() {
                break fit;
            }
            k += 1;
        };
        worst = worst.max(k as f64 / deg.max(1) as f64);
        m.put(format!("{name}/degree"), deg);
        m.put(format!("{name}/junta_size"), k);
        m.put(format!("{name}/distance"), fit.distance);
    }
    m.put("max_junta_over_degree", worst);
    Ok(Outcome::report_only(m))
}
