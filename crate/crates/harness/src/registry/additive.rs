//! Recipes for additive combinatorics over `F_2^n`.

use cubelab_additive::subspace::SEARCH_BUDGET;
use cubelab_additive::{
    density_bias, doubling, fooling_error_dnf, freeness_check, freeness_tester_estimate,
    greedy_cover, iterated_sumset, largest_subspace, max_correlation_low_degree,
    quadratic_span_min_terms, sumset, AffineSubspace, Density, F2Set, Freeness, PatternSystem,
};
use cubelab_core::{mod3, Dnf, Error as CoreError};
use num_rational::Ratio;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{functional, searched, witness, Metrics, Outcome};
use crate::config::Config;
use crate::error::{HarnessError, Result};
use crate::params::Params;
use crate::search::Direction;
use crate::space::SearchSpace;

fn ratio(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// A random subset of `F_2^n` of the given size, from its own stream.
fn random_set(n: usize, size: usize, seed: u64, stream: u64) -> Result<F2Set> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let points = sample(&mut rng, 1 << n, size).into_vec();
    Ok(F2Set::from_elements(n, points)?)
}

/// Largest subspace inside `s`, or `Ok(None)` with `budgeted` set when the
/// search runs out of nodes.
fn subspace_or_budget(s: &F2Set, budgeted: &mut bool) -> Result<Option<AffineSubspace>> {
    match largest_subspace(s, SEARCH_BUDGET) {
        Ok(v) => Ok(v),
        Err(CoreError::Budget { .. }) => {
            *budgeted = true;
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn correlation_mod3(p: &mut Params, _c: &Config) -> Result<Outcome> {
    let ns = p.list("n", &[4usize, 5, 6])?;
    let d = p.usize("d", 2)?;
    let mut m = Metrics::default();
    for &n in &ns {
        let corr = max_correlation_low_degree(&mod3(n)?, d)?;
        let key = format!("n={n}/");
        m.put(format!("{key}correlation"), corr.to_f64());
        m.put(format!("{key}correlation_exact"), corr.value.to_string());
        m.put(format!("{key}witness_monomials"), corr.witness.monomials());
        m.put(format!("{key}witness_degree"), corr.witness.degree());
    }
    Ok(Outcome::report_only(m))
}

pub fn pfr(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 6)?;
    let dim = p.usize("dim", 3)?;
    let extra = p.usize("extra", 4)?;
    if dim > n {
        return Err(crate::error::param_error("dim", "exceeds n"));
    }
    // a subspace plus a few random points: small doubling, few pieces
    let mut a = AffineSubspace::linear(n, &(0..dim).map(|i| 1usize << i).collect::<Vec<_>>())?.to_set();
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    for _ in 0..extra {
        a.insert(rng.random_range(0..1usize << n));
    }
    let mut m = Metrics::default();
    let mut budgeted = false;
    m.put("set", a.to_hex());
    m.put("size", a.len());
    let k = ratio(doubling(&a)?);
    m.put("doubling", k);
    match greedy_cover(&a, SEARCH_BUDGET) {
        Ok(cover) => {
            m.put("greedy_cover_pieces", cover.len());
            m.put("greedy_cover_dimensions", cover.iter().map(|s| s.dimension()).collect::<Vec<_>>());
        }
        Err(CoreError::Budget { .. }) => budgeted = true,
        Err(e) => return Err(e.into()),
    }
    let inner = subspace_or_budget(&a, &mut budgeted)?;
    m.put("largest_subspace_in_a", inner.as_ref().map(|s| s.dimension()));
    let triple = iterated_sumset(&a, 3)?;
    let bog = subspace_or_budget(&triple, &mut budgeted)?;
    m.put("size_3a", triple.len());
    m.put("largest_subspace_in_3a", bog.as_ref().map(|s| s.dimension()));
    m.put("log2_doubling", k.log2());
    Ok(Outcome::report_only(m).budgeted(budgeted))
}

pub fn triangle_removal(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 5)?;
    let count = p.u64("count", 400)?;
    let space = SearchSpace::RandomSample {
        space: Box::new(SearchSpace::F2Sets {
            n,
            min: 1,
            max: 1 << n,
        }),
        count,
        seed: c.seed,
    };
    space.validate()?;
    let f = functional("removal-exponent")?;
    let mut m = Metrics::default();
    let out = searched(&mut m, "", &space, &f, Direction::Max, c)?;
    Ok(Outcome::report_only(m)
        .with_witness(witness(&out, &f))
        .budgeted(out.budgeted))
}

pub fn subspaces_in_sumsets(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 8)?;
    let radius = p.usize("radius", 2)?;
    let density = p.f64("density", 0.25)?;
    let trials = p.usize("trials", 3)?;
    if !(density > 0.0 && density <= 1.0) {
        return Err(crate::error::param_error("density", "must lie in (0, 1]"));
    }
    let mut m = Metrics::default();
    let mut budgeted = false;
    let mut record = |name: &str, a: &F2Set, m: &mut Metrics| -> Result<()> {
        let s = sumset(a, a)?;
        let alpha = ratio(a.density());
        let sub = subspace_or_budget(&s, &mut budgeted)?;
        m.put(format!("{name}/density"), alpha);
        m.put(format!("{name}/sumset_size"), s.len());
        if let Some(v) = sub {
            let codim = n - v.dimension();
            m.put(format!("{name}/subspace_dimension"), v.dimension());
            m.put(format!("{name}/codimension"), codim);
            // codimension against log(1/alpha)^4
            let l = (1.0 / alpha).log2().max(1.0);
            m.put(format!("{name}/codim_over_log4"), codim as f64 / l.powi(4));
        }
        Ok(())
    };
    record(&format!("ball-r{radius}"), &F2Set::hamming_ball(n, radius)?, &mut m)?;
    let size = ((density * (1u64 << n) as f64).round() as usize).max(1);
    for t in 0..trials {
        record(&format!("random-{t}"), &random_set(n, size, c.seed, t as u64)?, &mut m)?;
    }
    Ok(Outcome::report_only(m).budgeted(budgeted))
}

pub fn bgs_freeness(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 6)?;
    let trials = p.usize("trials", 4)?;
    let size = p.usize("size", 8)?;
    let samples = p.u64("samples", 100_000)?;
    let triangle = PatternSystem::triangle();
    let mut sets = vec![("odd-weight".to_string(), F2Set::from_predicate(n, |x| x.count_ones() % 2 == 1)?)];
    for t in 0..trials {
        sets.push((format!("random-{t}"), random_set(n, size.min(1 << n), c.seed, t as u64)?));
    }
    let mut m = Metrics::default();
    m.put("convention", "inclusive: stacks with repeated points count");
    for (i, (name, a)) in sets.iter().enumerate() {
        let est = freeness_tester_estimate(a, &triangle, samples, c.seed.wrapping_add(i as u64))?;
        let free = matches!(freeness_check(a, &triangle)?, Freeness::Free);
        if free && est.hits != 0 {
            return Err(HarnessError::Verification(format!(
                "tester found a triangle in the triangle-free set {name}"
            )));
        }
        m.put(format!("{name}/set"), a.to_hex());
        m.put(format!("{name}/free"), free);
        m.put(format!("{name}/rate"), est.rate);
        m.put(format!("{name}/rate_interval"), [est.lower, est.upper]);
    }
    Ok(Outcome::report_only(m))
}

pub fn eps_biased_dnf(p: &mut Params, c: &Config) -> Result<Outcome> {
    let width = p.usize("width", 2)?;
    let count = p.usize("count", 4)?;
    let sizes = p.list("sizes", &[8usize, 32, 128, 512])?;
    let dnf = Dnf::tribes(width, count)?;
    let n = dnf.n();
    let mut m = Metrics::default();
    m.put("n", n);
    for (i, &size) in sizes.iter().enumerate() {
        let phi = Density::random_multiset(n, size, c.seed.wrapping_add(i as u64))?;
        let bias = density_bias(&phi);
        let err = fooling_error_dnf(&dnf, &phi)?;
        let key = format!("size={size}/");
        m.put(format!("{key}bias"), bias);
        m.put(format!("{key}fooling_error"), err);
        m.put(format!("{key}error_over_bias"), if bias > 0.0 { Some(err / bias) } else { None });
    }
    Ok(Outcome::report_only(m))
}

pub fn quadratic_uncertainty(p: &mut Params, _c: &Config) -> Result<Outcome> {
    let max_n = p.usize("max_n", 3)?;
    let mut m = Metrics::default();
    for n in 1..=max_n {
        let span = quadratic_span_min_terms(n)?;
        m.put(format!("n={n}/min_terms"), span.m);
        // the m >= n claim fails at n = 2 (AND_2 is a quadratic phase), so it is only checked from n = 3
        if n >= 3 {
            m.put(format!("n={n}/at_least_n"), span.m >= n);
        }
    }
    Ok(Outcome::report_only(m))
}
