use std::f64::consts::PI;

use cubelab_gaussian::*;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

fn phi(t: f64) -> f64 {
    Normal::new(0.0, 1.0).unwrap().cdf(t)
}

fn density(t: f64) -> f64 {
    (-t * t / 2.0).exp() / (2.0 * PI).sqrt()
}

/// Composite Simpson rule with `2 * half` panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, half: usize) -> f64 {
    let h = (b - a) / (2 * half) as f64;
    let inner: f64 = (1..2 * half)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    h / 3.0 * (f(a) + inner + f(b))
}

/// `Pr[x_1 >= 0, y_1 >= 0]` by integrating over `x_1`.
fn orthant(rho: f64) -> f64 {
    let s = (1.0 - rho * rho).sqrt();
    simpson(|x| density(x) * phi(rho * x / s), 0.0, 12.0, 4000)
}

fn e1(n: usize) -> GaussianRegion {
    GaussianRegion::coordinate_halfspace(n, 0, 0.0).unwrap()
}

#[test]
fn independent_coordinates_are_uncorrelated() {
    let samples = 1_000_000u64;
    let (mut sxy, mut sx2, mut sy2) = (0.0, 0.0, 0.0);
    for (x, y) in correlated_pairs(1, 0.0, samples, 11).unwrap() {
        sxy += x[0] * y[0];
        sx2 += x[0] * x[0];
        sy2 += y[0] * y[0];
    }
    let corr = sxy / (sx2 * sy2).sqrt();
    assert!(corr.abs() <= 3.0 / (samples as f64).sqrt(), "corr {corr}");
}

#[test]
fn correlation_half_reproduces_its_covariance() {
    let products: Vec<f64> = correlated_pairs(1, 0.5, 1_000_000, 12)
        .unwrap()
        .map(|(x, y)| x[0] * y[0])
        .collect();
    let m = products.len() as f64;
    let mean = products.iter().sum::<f64>() / m;
    let var = products.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / (m - 1.0);
    assert!((mean - 0.5).abs() <= 3.0 * (var / m).sqrt(), "E[xy] = {mean}");
}

#[test]
fn marginals_are_standard_normal() {
    let samples = 200_000;
    let mut below = [0u64; 3];
    let cuts = [-1.0, 0.0, 1.5];
    for (_, y) in correlated_pairs(2, 0.7, samples, 13).unwrap() {
        for (b, c) in below.iter_mut().zip(cuts) {
            *b += (y[1] < c) as u64;
        }
    }
    for (b, c) in below.iter().zip(cuts) {
        let p = phi(c);
        let rate = *b as f64 / samples as f64;
        assert!((rate - p).abs() <= 4.0 * (p * (1.0 - p) / samples as f64).sqrt());
    }
}

#[test]
fn halfspace_orthant_probabilities() {
    let rho: f64 = 0.5;
    let same = 0.25 + rho.asin() / (2.0 * PI);
    assert!((orthant(rho) - same).abs() < 1e-9);
    assert!((0.5 - orthant(rho) - (0.25 - rho.asin() / (2.0 * PI))).abs() < 1e-9);
    let a = e1(1);
    let e = joint_prob(&a, &a, rho, 1_000_000, 1).unwrap();
    assert!(e.within(orthant(rho), 3.0), "{e:?}");
    let opposite = joint_prob(&a, &GaussianRegion::complement(a.clone()), rho, 1_000_000, 1).unwrap();
    assert!(opposite.within(0.5 - orthant(rho), 3.0), "{opposite:?}");
}

#[test]
fn independence_factorizes() {
    let a = GaussianRegion::ball_of_measure(3, 0.3).unwrap();
    let b = GaussianRegion::halfspace_along(&[1.0, -2.0, 0.5], 0.4).unwrap();
    let e = joint_prob(&a, &b, 0.0, 400_000, 2).unwrap();
    let product = 0.3 * (1.0 - phi(0.4));
    assert!(e.within(product, 3.0), "{e:?} vs {product}");
}

#[test]
fn exchange_and_negation() {
    let a = GaussianRegion::ball_of_measure(2, 0.5).unwrap();
    let b = GaussianRegion::halfspace_along(&[1.0, 1.0], 0.2).unwrap();
    let ab = joint_prob_symmetrized(&a, &b, 0.4, 100_000, 3).unwrap();
    let ba = joint_prob_symmetrized(&b, &a, 0.4, 100_000, 3).unwrap();
    assert_eq!(ab, ba);
    let plain_ab = joint_prob(&a, &b, 0.4, 200_000, 3).unwrap();
    let plain_ba = joint_prob(&b, &a, 0.4, 200_000, 4).unwrap();
    let se = plain_ab.std_error.hypot(plain_ba.std_error);
    assert!((plain_ab.value - plain_ba.value).abs() <= 3.0 * se);
    // the antithetic evaluation makes (A, B) and (-A, -B) identical
    let neg = joint_prob(&a.negated(), &b.negated(), 0.4, 200_000, 3).unwrap();
    assert_eq!(neg, plain_ab);
}

#[test]
fn partition_stability_extremes() {
    let cells = GaussianRegion::standard_simplex(3, 2).unwrap();
    let e = partition_stability(&cells, 0.0, 300_000, 5).unwrap();
    assert!(e.within(1.0 / 3.0, 3.0), "{e:?}");
    let h = GaussianRegion::coordinate_halfspace(2, 1, 0.5).unwrap();
    let mu = 1.0 - phi(0.5);
    let split = vec![h.clone(), GaussianRegion::complement(h)];
    let e = partition_stability(&split, 0.0, 300_000, 5).unwrap();
    assert!(e.within(mu * mu + (1.0 - mu) * (1.0 - mu), 3.0), "{e:?}");
    assert_eq!(partition_stability(&split, 1.0, 1000, 5).unwrap().value, 1.0);
}

fn rotate(angle: f64) -> (Vec<f64>, Vec<f64>) {
    let (s, c) = angle.sin_cos();
    (vec![c, s], vec![-s, c])
}

/// Three cells of measure 1/3: a halfplane, and its complement cut in two
/// by a perpendicular line through the origin.
fn halfplane_sectors(angle: f64) -> Vec<GaussianRegion> {
    let (v, u) = rotate(angle);
    let top = GaussianRegion::halfspace_of_measure(v, 1.0 / 3.0).unwrap();
    let side = GaussianRegion::halfspace(u, 0.0).unwrap();
    let rest = GaussianRegion::complement(top.clone());
    vec![
        top,
        GaussianRegion::intersection(vec![rest.clone(), side.clone()]).unwrap(),
        GaussianRegion::intersection(vec![rest, GaussianRegion::complement(side)]).unwrap(),
    ]
}

/// Three parallel strips of measure 1/3.
fn strips(angle: f64) -> Vec<GaussianRegion> {
    let (v, _) = rotate(angle);
    let top = GaussianRegion::halfspace_of_measure(v.clone(), 1.0 / 3.0).unwrap();
    let lower = GaussianRegion::halfspace_of_measure(v, 2.0 / 3.0).unwrap();
    vec![
        top.clone(),
        GaussianRegion::intersection(vec![GaussianRegion::complement(top), lower.clone()]).unwrap(),
        GaussianRegion::complement(lower),
    ]
}

fn agreement(cells: &[GaussianRegion], x: &[f64], y: &[f64]) -> f64 {
    cells.iter().filter(|c| c.contains(x) && c.contains(y)).count() as f64
}

#[test]
fn simplex_is_not_beaten_by_other_equal_partitions() {
    let simplex = GaussianRegion::standard_simplex(3, 2).unwrap();
    let rho = 0.5;
    let reference = partition_stability(&simplex, rho, 1_000_000, 6).unwrap();
    println!("simplex stability at 0.5: {} +- {}", reference.value, reference.std_error);
    let mut src = Normals::stream(77, 0);
    let samples = 100_000;
    for k in 0..20 {
        let angle = src.uniform() * 2.0 * PI;
        let other = if k % 2 == 0 { halfplane_sectors(angle) } else { strips(angle) };
        check_partition(&other, k).unwrap();
        // paired differences on common pairs
        let diffs: Vec<f64> = correlated_pairs(2, rho, samples, 1000 + k)
            .unwrap()
            .map(|(x, y)| agreement(&simplex, &x, &y) - agreement(&other, &x, &y))
            .collect();
        let m = samples as f64;
        let mean = diffs.iter().sum::<f64>() / m;
        let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (m - 1.0);
        assert!(mean >= -3.0 * (var / m).sqrt(), "partition {k} beats the simplex by {mean}");
    }
}

#[test]
fn width_oracles() {
    let t: Vec<Vec<f64>> = (0..2).map(|i| (0..2).map(|j| (i == j) as u8 as f64).collect()).collect();
    // E max(Z_1, Z_2) = integral of 2 t phi(t) Phi(t)
    let oracle = simpson(|s| 2.0 * s * density(s) * phi(s), -12.0, 12.0, 4000);
    assert!((oracle - 1.0 / PI.sqrt()).abs() < 1e-9);
    let w = widths(&t, 1_000_000, 8).unwrap();
    assert!(w.g.within(oracle, 3.0), "{:?}", w.g);
    assert_eq!(w.b, Width::Exact { value: 0.5 });
}

#[test]
fn exact_and_sampled_bernoulli_widths_agree() {
    let mut src = Normals::stream(21, 0);
    for n in 1..=10 {
        let t: Vec<Vec<f64>> = (0..1 + n % 4).map(|_| (0..n).map(|_| src.normal()).collect()).collect();
        let exact = bernoulli_width_exact(&t).unwrap();
        let mc = bernoulli_width_mc(&t, 200_000, n as u64).unwrap();
        assert!(mc.within(exact, 3.0) || mc.std_error == 0.0 && mc.value == exact, "n = {n}");
    }
}

#[test]
fn ball_radius_against_chi_squared() {
    for n in [1usize, 2, 3, 7, 20] {
        let chi2 = ChiSquared::new(n as f64).unwrap();
        for mu in [1e-6, 0.1, 0.5, 0.9, 0.999] {
            let r = ball_radius(n, mu).unwrap();
            assert!((chi2.cdf(r * r) - mu).abs() < 1e-10, "n = {n}, mu = {mu}");
        }
    }
    let r = ball_radius(1, 0.682_689).unwrap();
    assert!((r - 1.0).abs() < 1e-5);
    let radii: Vec<f64> = (1..=50).map(|k| ball_radius(4, k as f64 / 1000.0).unwrap()).collect();
    assert!(radii.windows(2).all(|w| w[0] < w[1]));
    assert!(radii[0] < 0.5);
}

#[test]
fn estimates_repeat_bit_for_bit() {
    let a = GaussianRegion::standard_simplex(3, 2).unwrap();
    let run = || partition_stability(&a, 0.3, 50_000, 9).unwrap();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
    let many = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap().install(run);
    assert_eq!(single, many);
    assert_eq!(single.to_csv_row(), run().to_csv_row());
    assert_ne!(partition_stability(&a, 0.3, 50_000, 10).unwrap(), single);
}
