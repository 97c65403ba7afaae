use cubelab_core::noise::stability_exact;
use cubelab_core::sensitivity::avg_sensitivity;
use cubelab_core::stats::{influences_exact, total_influence_exact};
use cubelab_core::structure::DEFAULT_JUNTA_BUDGET;
use cubelab_core::*;
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use proptest::prelude::*;

fn boolean_function(max_n: usize) -> impl Strategy<Value = BooleanFunction> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), 1 << n).prop_map(move |bits| {
            BooleanFunction::from_predicate(n, |x| bits[x]).unwrap()
        })
    })
}

/// `E[f(x) f(y)]` over all pairs, with `Pr[y | x] = ((1+ρ)/2)^{n-d} ((1-ρ)/2)^d`.
fn stability_by_pairs(f: &BooleanFunction, rho: &BigRational) -> BigRational {
    let one = BigRational::from_integer(BigInt::from(1));
    let two = BigRational::from_integer(BigInt::from(2));
    let agree = (&one + rho) / &two;
    let flip = (&one - rho) / &two;
    let n = f.n();
    let mut total = BigRational::from_integer(BigInt::from(0));
    for x in 0..f.len() {
        for y in 0..f.len() {
            let d = (x ^ y).count_ones() as usize;
            let p = num_traits::pow(agree.clone(), n - d) * num_traits::pow(flip.clone(), d);
            total += p * BigInt::from(f.value(x) as i64 * f.value(y) as i64);
        }
    }
    total / BigRational::from_integer(BigInt::from(f.len() as i64))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn transform_round_trip_and_parseval(f in boolean_function(10)) {
        let spec = wht(&f);
        prop_assert!(spec.parseval_holds());
        prop_assert_eq!(inverse_wht(&spec).unwrap(), f);
    }

    #[test]
    fn spectral_total_influence_is_edge_count(f in boolean_function(10)) {
        prop_assert_eq!(total_influence_exact(&wht(&f)), avg_sensitivity(&f));
    }

    #[test]
    fn variance_and_bounds(f in boolean_function(8)) {
        let s = fourier_stats(&f);
        prop_assert!((0.0..=1.0).contains(&s.variance));
        prop_assert!((s.variance - (1.0 - s.mean * s.mean)).abs() < 1e-15);
        let sum: f64 = s.influences.iter().sum();
        prop_assert!((sum - s.total_influence).abs() < 1e-12);
    }

    #[test]
    fn block_sensitivity_dominates(f in boolean_function(5)) {
        let s = sensitivity_stats(&f).unwrap();
        prop_assert!(s.block_sensitivity >= s.max_sensitivity);
        prop_assert!(s.avg_sensitivity <= Ratio::from_integer(s.max_sensitivity as i64));
    }

    #[test]
    fn nicd_two_players_is_stability(f in boolean_function(8), eps in 0.001f64..0.499) {
        let p = nicd_agreement(&f, 2, eps).unwrap();
        let rho = (1.0 - 2.0 * eps).powi(2);
        let stab = stability(&f, rho).unwrap();
        prop_assert!((p - (0.5 + 0.5 * stab)).abs() < 1e-12);
    }

    #[test]
    fn erasure_without_erasures_is_one(f in boolean_function(8)) {
        prop_assert!((erasure_norm(&f, 1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_junta_is_exact(f in boolean_function(7)) {
        let fit = junta_distance(&f, f.n(), DEFAULT_JUNTA_BUDGET).unwrap();
        prop_assert_eq!(fit.mismatches, 0);
    }

    #[test]
    fn concentration_family_is_minimal(f in boolean_function(7), eps in 0.01f64..=0.5) {
        let spec = wht(&f);
        let c = spectral_concentration(&f, eps).unwrap();
        let mass: f64 = c.family.iter().map(|&s| spec.weight(s)).sum();
        prop_assert!(mass >= 1.0 - eps - 1e-12);
        let without_last: f64 = c.family[..c.family.len() - 1].iter().map(|&s| spec.weight(s)).sum();
        prop_assert!(without_last < 1.0 - eps);
    }

    #[test]
    fn hex_round_trip(f in boolean_function(9)) {
        prop_assert_eq!(BooleanFunction::from_hex(f.n(), &f.to_hex()).unwrap(), f.clone());
        prop_assert_eq!(f.to_string().parse::<BooleanFunction>().unwrap(), f);
    }

    #[test]
    fn multilinear_matches_table_on_cube(f in boolean_function(6), x in 0usize..64) {
        let x = x % f.len();
        let point: Vec<f64> = (0..f.n()).map(|i| if (x >> i) & 1 == 1 { -1.0 } else { 1.0 }).collect();
        prop_assert_eq!(multilinear_eval(&f, &point).unwrap(), f.value(x) as f64);
    }
}

#[test]
fn stability_matches_pair_enumeration_exactly() {
    let mut rng_state = 0x9e3779b97f4a7c15u64;
    let mut next = || {
        rng_state ^= rng_state << 13;
        rng_state ^= rng_state >> 7;
        rng_state ^= rng_state << 17;
        rng_state
    };
    for n in 1..=6 {
        for _ in 0..4 {
            let bits = next();
            let f = BooleanFunction::from_predicate(n, |x| (bits >> (x % 64)) & 1 == 1).unwrap();
            let spec = wht(&f);
            for (p, q) in [(1i64, 3i64), (-2, 5), (7, 8), (0, 1), (1, 1)] {
                let rho = BigRational::new(BigInt::from(p), BigInt::from(q));
                assert_eq!(stability_exact(&spec, &rho).unwrap(), stability_by_pairs(&f, &rho));
            }
        }
    }
}

#[test]
fn monotone_degree_one_coefficients_are_influences() {
    // Exhaustive over all monotone functions with n <= 4 (up-sets of the cube).
    for n in 1..=4usize {
        let size = 1usize << (1 << n);
        let mut count = 0;
        for bits in 0..size as u64 {
            let f = BooleanFunction::from_bits(n, bits).unwrap();
            if !is_monotone(&f) {
                continue;
            }
            count += 1;
            let spec = wht(&f);
            let infl = influences_exact(&spec);
            for (i, inf) in infl.iter().enumerate() {
                assert_eq!(Ratio::new(spec.scaled()[1 << i], spec.scale()), *inf);
            }
        }
        // Dedekind numbers 3, 6, 20, 168.
        assert_eq!(count, [0, 3, 6, 20, 168][n]);
    }
}
