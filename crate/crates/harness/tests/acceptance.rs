//! Acceptance run: one PASS/FAIL line per criterion, each timed against its
//! runtime limit. Exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cubelab_additive::triangle::triangle_count_brute;
use cubelab_additive::{triangle_count, Degeneracy, F2Set};
use cubelab_core::{fourier_stats, inverse_wht, majority, parity, wht, BooleanFunction};
use cubelab_gaussian::{joint_prob, GaussianRegion};
use cubelab_harness::report::Report;
use cubelab_harness::{run, run_search, Config, Direction, Params, SearchSpace, Verdict};
use cubelab_threshold::lp::Certificate;
use cubelab_threshold::{ptf_degree, threshold_tail, threshold_tail_exact};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

/// Name, runtime limit in seconds, and the check.
type Criterion = (&'static str, u64, fn() -> Check);

fn config(workers: Option<usize>) -> Config {
    Config {
        workers,
        run_dir: None,
        ..Config::default()
    }
}

fn verify(id: &str, params: &[&str]) -> Result<Report, String> {
    let p = Params::parse(params).map_err(|e| e.to_string())?;
    run(id, p, &config(None)).map_err(|e| format!("{id}: {e}"))
}

fn metric(r: &Report, key: &str) -> Result<serde_json::Value, String> {
    r.metrics
        .get(key)
        .cloned()
        .ok_or_else(|| format!("{} has no metric {key}", r.conjecture_id))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn wht_exactness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=10 {
        for _ in 0..1000 {
            let f = BooleanFunction::from_predicate(n, |_| rng.random()).map_err(|e| e.to_string())?;
            let spec = wht(&f);
            ensure(spec.parseval_holds(), || format!("Parseval fails for {f}"))?;
            let back = inverse_wht(&spec).map_err(|e| e.to_string())?;
            ensure(back == f, || format!("inverse transform of {f} gives {back}"))?;
        }
    }
    Ok("10000 functions, n = 1..10".into())
}

fn tomaszewski_sharp() -> Check {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let two = threshold_tail(&[h, h], 1.0, false).map_err(|e| e.to_string())?;
    let four = threshold_tail_exact(&[Ratio::new(1, 2); 4], Ratio::from_integer(1), true)
        .map_err(|e| e.to_string())?;
    ensure(two == Ratio::new(1, 2), || format!("two weights give {two}"))?;
    ensure(four == Ratio::new(3, 8), || format!("four weights give {four}"))?;
    Ok(format!("{two} and {four}"))
}

fn majority_least_stable() -> Check {
    let r = verify("majority-least-stable", &["n=3"])?;
    ensure(r.verdict == Verdict::HoldsAtScale, || format!("verdict {}", r.verdict.as_str()))?;
    let mut worst = f64::INFINITY;
    for k in 1..=9 {
        let key = format!("rho={}/", k as f64 / 10.0);
        let evaluated = metric(&r, &format!("{key}evaluated"))?;
        ensure(evaluated == 104, || format!("{key} evaluated {evaluated} functions"))?;
        let gap = metric(&r, &format!("{key}extremum"))?.as_f64().unwrap_or(f64::NAN);
        worst = worst.min(gap);
    }
    ensure(worst >= -1e-12, || format!("min gap {worst}"))?;
    Ok(format!("104 LTFs x 9 correlations, min gap {worst:e}, closed form matched"))
}

fn nicd_anomaly() -> Check {
    let r = verify("nicd-multi", &["n=5", "r=10", "eps=0.26"])?;
    let evaluated = metric(&r, "evaluated")?;
    ensure(evaluated == 65536, || format!("evaluated {evaluated} odd functions"))?;
    let neither = metric(&r, "neither_dictator_nor_full_majority")?;
    ensure(neither == true, || "maximizer is a dictator or Maj_5".into())?;
    Ok(format!(
        "argmax {} (majority of {} bits), P = {}",
        metric(&r, "witness")?,
        metric(&r, "argmax_majority_arity")?,
        metric(&r, "extremum")?
    ))
}

fn w1_bound() -> Check {
    let r = verify("w1-ltf", &["n=3,5"])?;
    ensure(r.verdict == Verdict::HoldsAtScale, || format!("verdict {}", r.verdict.as_str()))?;
    let mut parts = Vec::new();
    for n in [3, 5] {
        parts.push(format!(
            "n={n}: min {} (gap to 2/pi {})",
            metric(&r, &format!("n={n}/extremum"))?,
            metric(&r, &format!("n={n}/gap_to_2_over_pi"))?
        ));
    }
    Ok(parts.join("; "))
}

fn linear_coefficients() -> Check {
    let r = verify("linear-coefficients", &["n=4"])?;
    let evaluated = metric(&r, "evaluated")?;
    ensure(evaluated == 65536, || format!("evaluated {evaluated}"))?;
    match r.verdict {
        Verdict::HoldsAtScale => Ok(format!("holds, max {}", metric(&r, "extremum")?)),
        Verdict::Counterexample => {
            let w = r.witness.as_ref().ok_or("counterexample without a witness")?;
            w.reverify().map_err(|e| e.to_string())?;
            Ok(format!("counterexample {} recorded", w.object))
        }
        Verdict::ReportOnly => Err("no verdict".into()),
    }
}

fn triangle_dual_path() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 4..=8 {
        for _ in 0..100 {
            let density: f64 = rng.random();
            let a = F2Set::from_predicate(n, |_| rng.random::<f64>() < density).map_err(|e| e.to_string())?;
            for mode in [Degeneracy::Inclusive, Degeneracy::Nondegenerate] {
                let fast = triangle_count(&a, mode).map_err(|e| e.to_string())?;
                let slow = triangle_count_brute(&a, mode).map_err(|e| e.to_string())?;
                ensure(fast == slow, || format!("{} {mode:?}: {fast} vs {slow}", a.to_hex()))?;
            }
        }
    }
    Ok("500 sets, n = 4..8".into())
}

fn exactly_certified(d: &cubelab_threshold::PtfDegree) -> bool {
    d.certificates
        .iter()
        .all(|c| matches!(c, Certificate::Farkas | Certificate::ExactSolve))
}

fn ptf_degrees() -> Check {
    for n in 1..=5 {
        let p = ptf_degree(&parity(n, (1 << n) - 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(p.degree == n, || format!("parity_{n} has degree {}", p.degree))?;
        ensure(exactly_certified(&p), || format!("parity_{n}: {:?}", p.certificates))?;
    }
    for n in [1, 3, 5] {
        let f = majority(n).map_err(|e| e.to_string())?;
        let d = ptf_degree(&f).map_err(|e| e.to_string())?;
        ensure(d.degree == 1, || format!("Maj_{n} has degree {}", d.degree))?;
        ensure(exactly_certified(&d), || format!("Maj_{n}: {:?}", d.certificates))?;
        ensure(d.witness.sign_represents(&f), || format!("Maj_{n} witness fails"))?;
    }
    Ok("parity_n = n for n <= 5, Maj_n = 1 for n = 1, 3, 5".into())
}

/// `Pr[X >= 0, s Y >= 0]` for a standard pair with correlation `rho`, by
/// composite Simpson quadrature of the density over `[0, 9]^2`.
fn quadrant_oracle(rho: f64, s: f64) -> f64 {
    let steps = 1200;
    let h = 9.0 / steps as f64;
    let det = 1.0 - rho * rho;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * det.sqrt());
    let w = |i: usize| match i {
        0 => 1.0,
        i if i == steps => 1.0,
        i if i % 2 == 1 => 4.0,
        _ => 2.0,
    };
    let mut total = 0.0;
    for i in 0..=steps {
        let x = i as f64 * h;
        for j in 0..=steps {
            let y = s * j as f64 * h;
            let q = (x * x - 2.0 * rho * x * y + y * y) / det;
            total += w(i) * w(j) * norm * (-q / 2.0).exp();
        }
    }
    total * h * h / 9.0
}

fn gaussian_closed_forms() -> Check {
    let rho = 0.5;
    let a = GaussianRegion::coordinate_halfspace(2, 0, 0.0).map_err(|e| e.to_string())?;
    let opposite = GaussianRegion::complement(a.clone());
    let same = joint_prob(&a, &a, rho, 1_000_000, 1).map_err(|e| e.to_string())?;
    let apart = joint_prob(&a, &opposite, rho, 1_000_000, 1).map_err(|e| e.to_string())?;
    let (t_same, t_apart) = (quadrant_oracle(rho, 1.0), quadrant_oracle(rho, -1.0));
    ensure(same.within(t_same, 3.0), || format!("same: {} +- {} vs {t_same}", same.value, same.std_error))?;
    ensure(apart.within(t_apart, 3.0), || format!("opposite: {} +- {} vs {t_apart}", apart.value, apart.std_error))?;
    Ok(format!(
        "{:.6} vs {t_same:.6}, {:.6} vs {t_apart:.6}",
        same.value, apart.value
    ))
}

fn erasure_dictators() -> Check {
    let r = verify("erasure-dictator", &["n=3", "p=0.3,0.5,0.75,0.9"])?;
    ensure(r.verdict == Verdict::HoldsAtScale, || format!("verdict {}", r.verdict.as_str()))?;
    for p in ["0.5", "0.75", "0.9"] {
        let attains = metric(&r, &format!("p={p}/dictator_attains_max"))?;
        ensure(attains == true, || format!("dictator below the max at p = {p}"))?;
    }
    Ok(format!(
        "dictators maximize at p >= 1/2; p = 0.3 maximizer {} (majority of {} bits)",
        metric(&r, "p=0.3/witness")?,
        metric(&r, "p=0.3/argmax_majority_arity")?
    ))
}

fn fei_small() -> Check {
    let r = verify("fei-exhaustive", &["n=3"])?;
    let maj = majority(3).map_err(|e| e.to_string())?;
    let s = fourier_stats(&maj);
    // exact: sum |S| (8 f(S))^2 = 1.5 * 64, and four equal weights 1/4
    let spec = wht(&maj);
    let tinf_scaled: i64 = spec.scaled().iter().enumerate().map(|(s, c)| s.count_ones() as i64 * c * c).sum();
    ensure(tinf_scaled * 2 == 3 * 64, || format!("Tinf scaled {tinf_scaled}"))?;
    let weights: Vec<i64> = spec.scaled().iter().filter(|&&c| c != 0).map(|c| c * c).collect();
    ensure(weights == vec![16; 4], || format!("weights {weights:?}"))?;
    ensure(s.spectral_entropy == 2.0 && s.total_influence == 1.5, || "float statistics differ".into())?;
    Ok(format!("max H/Tinf {} at {}, H(Maj3) = 2, Tinf(Maj3) = 1.5", metric(&r, "extremum")?, metric(&r, "witness")?))
}

fn determinism() -> Check {
    let runs: [(&str, &[&str]); 3] = [
        ("nicd-multi", &["n=5"]),
        ("talagrand", &[]),
        ("symmetric-gaussian", &["samples=200000"]),
    ];
    for (id, params) in runs {
        let once = |workers| -> Result<String, String> {
            let p = Params::parse(params).map_err(|e| e.to_string())?;
            let r = run(id, p, &config(workers)).map_err(|e| e.to_string())?;
            r.canonical_json().map_err(|e| e.to_string())
        };
        let serial = once(Some(1))?;
        ensure(serial == once(Some(8))?, || format!("{id}: 8 workers differ from serial"))?;
        ensure(serial == once(Some(8))?, || format!("{id}: repeat differs"))?;
    }
    let spaces = ["ltf-n3", "all-n3", "random:5000:9:odd-n6"];
    let f = "stab@0.5".parse().map_err(|e: cubelab_harness::HarnessError| e.to_string())?;
    for s in spaces {
        let space: SearchSpace = s.parse().map_err(|e: cubelab_harness::HarnessError| e.to_string())?;
        let once = |workers| -> Result<String, String> {
            let r = run_search(&space, &f, Direction::Min, &config(workers)).map_err(|e| e.to_string())?;
            r.canonical_json().map_err(|e| e.to_string())
        };
        let serial = once(Some(1))?;
        ensure(serial == once(Some(8))?, || format!("search {s}: 8 workers differ"))?;
        ensure(serial == once(Some(8))?, || format!("search {s}: repeat differs"))?;
    }
    Ok("3 recipes and 3 searches, serial = 8 workers = repeat".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("WHT exactness and Parseval", 10, wht_exactness),
        ("Tomaszewski sharp cases", 1, tomaszewski_sharp),
        ("majority least stable, n = 3", 5, majority_least_stable),
        ("NICD anomaly, odd n = 5", 120, nicd_anomaly),
        ("W1 of unbiased LTFs, n = 3, 5", 600, w1_bound),
        ("linear coefficients sweep, n = 4", 60, linear_coefficients),
        ("triangle density dual path", 30, triangle_dual_path),
        ("PTF degree of parity and majority", 60, ptf_degrees),
        ("Gaussian halfspace closed forms", 10, gaussian_closed_forms),
        ("erasure dictatorship", 10, erasure_dictators),
        ("FEI small scale", 5, fei_small),
        ("determinism", 600, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let result = check();
        let took = started.elapsed();
        let within = took <= Duration::from_secs(limit);
        let (status, detail) = match (&result, within) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over the {limit} s limit; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "{status} {:>2} {name}: {detail} [{:.2} s, limit {limit} s]",
            i + 1,
            took.as_secs_f64()
        );
    }
    println!("{} of 12 criteria pass", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
