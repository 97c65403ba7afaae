//! Recipes for Gaussian-space problems, all by seeded Monte Carlo.

use cubelab_gaussian::{
    inverse_normal_cdf, joint_prob, partition_stability, widths, GaussianRegion, McEstimate,
    Normals,
};

use super::{Metrics, Outcome};
use crate::config::Config;
use crate::error::{param_error, Result};
use crate::params::Params;

fn estimate(m: &mut Metrics, key: &str, e: &McEstimate) {
    m.put(format!("{key}/value"), e.value);
    m.put(format!("{key}/std_error"), e.std_error);
}

pub fn bernoulli(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 6)?;
    let size = p.usize("size", 8)?;
    let samples = p.u64("samples", c.samples)?;
    let mut src = Normals::stream(c.seed, 0);
    let mut families: Vec<(&str, Vec<Vec<f64>>)> = Vec::new();
    families.push((
        "random-gaussian",
        (0..size).map(|_| (0..n).map(|_| src.normal()).collect()).collect(),
    ));
    let mut axes = Vec::new();
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            axes.push(e);
        }
    }
    families.push(("signed-axes", axes));
    families.push((
        "random-signs",
        (0..size)
            .map(|_| (0..n).map(|_| if src.uniform() < 0.5 { 1.0 } else { -1.0 }).collect())
            .collect(),
    ));
    let mut m = Metrics::default();
    for (name, t) in &families {
        let w = widths(t, samples, c.seed)?;
        m.put(format!("{name}/b"), w.b.value());
        estimate(&mut m, &format!("{name}/g"), &w.g);
        m.put(format!("{name}/b_over_g"), w.b.value() / w.g.value);
    }
    Ok(Outcome::report_only(m))
}

fn check_measure(name: &str, mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(param_error(name, "must lie in (0, 1)"));
    }
    Ok(())
}

/// Slab `|<e_1, x>| <= w` of measure `mu`.
fn slab_of_measure(n: usize, mu: f64) -> Result<GaussianRegion> {
    let mut e = vec![0.0; n];
    e[0] = 1.0;
    Ok(GaussianRegion::slab(e, inverse_normal_cdf((1.0 + mu) / 2.0))?)
}

pub fn symmetric_gaussian(p: &mut Params, c: &Config) -> Result<Outcome> {
    let n = p.usize("n", 2)?;
    let mu = p.f64("mu", 0.5)?;
    let nu = p.f64("nu", 0.5)?;
    let rho = p.f64("rho", 0.5)?;
    let samples = p.u64("samples", c.samples)?;
    check_measure("mu", mu)?;
    check_measure("nu", nu)?;
    if n == 0 {
        return Err(param_error("n", "must be positive"));
    }
    let complement = GaussianRegion::complement;
    let a_family = [
        ("ball", GaussianRegion::ball_of_measure(n, mu)?),
        ("ball-complement", complement(GaussianRegion::ball_of_measure(n, 1.0 - mu)?)),
        ("slab", slab_of_measure(n, mu)?),
    ];
    let b_family = [
        ("ball", GaussianRegion::ball_of_measure(n, nu)?),
        ("ball-complement", complement(GaussianRegion::ball_of_measure(n, 1.0 - nu)?)),
        ("halfspace", GaussianRegion::halfspace_of_measure(
            std::iter::once(1.0).chain(std::iter::repeat(0.0)).take(n).collect(),
            nu,
        )?),
        ("slab", slab_of_measure(n, nu)?),
        ("slab-complement", complement(slab_of_measure(n, 1.0 - nu)?)),
    ];
    let mut m = Metrics::default();
    let mut best: Option<(f64, String)> = None;
    for (an, a) in &a_family {
        debug_assert!(a.is_symmetric());
        for (bn, b) in &b_family {
            // common random numbers across pairs
            let e = joint_prob(a, b, rho, samples, c.seed)?;
            let key = format!("{an}/{bn}");
            estimate(&mut m, &key, &e);
            if best.as_ref().is_none_or(|(v, _)| e.value < *v) {
                best = Some((e.value, key));
            }
        }
    }
    let (value, pair) = best.expect("nonempty families");
    m.put("min_value", value);
    m.put("min_pair", pair);
    m.put("independent_value", mu * nu);
    m.put("candidate_families", "A: ball, ball complement, slab; B: ball, ball complement, halfspace, slab, slab complement");
    Ok(Outcome::report_only(m))
}

fn rotate(angle: f64) -> (Vec<f64>, Vec<f64>) {
    let (s, c) = angle.sin_cos();
    (vec![c, s], vec![-s, c])
}

/// A halfplane of measure 1/3 and its complement cut by a perpendicular line.
fn halfplane_sectors(angle: f64) -> Result<Vec<GaussianRegion>> {
    let (v, u) = rotate(angle);
    let top = GaussianRegion::halfspace_of_measure(v, 1.0 / 3.0)?;
    let side = GaussianRegion::halfspace(u, 0.0)?;
    let rest = GaussianRegion::complement(top.clone());
    Ok(vec![
        top,
        GaussianRegion::intersection(vec![rest.clone(), side.clone()])?,
        GaussianRegion::intersection(vec![rest, GaussianRegion::complement(side)])?,
    ])
}

/// Three parallel strips of measure 1/3.
fn strips(angle: f64) -> Result<Vec<GaussianRegion>> {
    let (v, _) = rotate(angle);
    let top = GaussianRegion::halfspace_of_measure(v.clone(), 1.0 / 3.0)?;
    let lower = GaussianRegion::halfspace_of_measure(v, 2.0 / 3.0)?;
    Ok(vec![
        top.clone(),
        GaussianRegion::intersection(vec![GaussianRegion::complement(top), lower.clone()])?,
        GaussianRegion::complement(lower),
    ])
}

pub fn simplex_stability(p: &mut Params, c: &Config) -> Result<Outcome> {
    let rhos = p.list("rho", &[0.5, -0.25])?;
    let rotations = p.usize("rotations", 4)?;
    let samples = p.u64("samples", c.samples)?;
    let simplex = GaussianRegion::standard_simplex(3, 2)?;
    let mut others: Vec<(String, Vec<GaussianRegion>)> = Vec::new();
    for k in 0..rotations {
        let angle = std::f64::consts::PI * k as f64 / rotations as f64;
        others.push((format!("sectors-{k}"), halfplane_sectors(angle)?));
        others.push((format!("strips-{k}"), strips(angle)?));
    }
    let mut m = Metrics::default();
    m.put("q", 3);
    m.put("dimension", 2);
    for &rho in &rhos {
        let key = format!("rho={rho}");
        let reference = partition_stability(&simplex, rho, samples, c.seed)?;
        estimate(&mut m, &format!("{key}/simplex"), &reference);
        let mut best_other = f64::NEG_INFINITY;
        let mut beaten = false;
        for (name, cells) in &others {
            let e = partition_stability(cells, rho, samples, c.seed)?;
            estimate(&mut m, &format!("{key}/{name}"), &e);
            best_other = best_other.max(e.value);
            let se = (reference.std_error.powi(2) + e.std_error.powi(2)).sqrt();
            beaten |= e.value > reference.value + 3.0 * se;
        }
        m.put(format!("{key}/best_other"), best_other);
        m.put(format!("{key}/simplex_beaten_beyond_3se"), beaten);
    }
    Ok(Outcome::report_only(m))
}
