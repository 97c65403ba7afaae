//! Normal quantiles, normal and chi distribution functions, and the radius
//! of a centered ball of prescribed Gaussian measure.

use cubelab_core::{Error, Result};

/// Bisection steps allowed before `ball_radius` gives up.
pub const BISECTION_STEPS: usize = 200;

/// Accuracy promised by `ball_radius` on the achieved measure.
pub const RADIUS_TOLERANCE: f64 = 1e-10;

/// Absolute tolerance of the adaptive quadrature behind `chi_cdf`.
const QUADRATURE_TOLERANCE: f64 = 1e-14;

/// Fixed panels the integration range is split into before adapting, so
/// that a narrow peak is never skipped by the first coarse rule.
const PANELS: usize = 64;

const A: [f64; 8] = [
    3.387_132_872_796_366_5,
    1.331_416_678_917_843_8e2,
    1.971_590_950_306_551_3e3,
    1.373_169_376_550_946e4,
    4.592_195_393_154_987e4,
    6.726_577_092_700_87e4,
    3.343_057_558_358_813e4,
    2.509_080_928_730_122_7e3,
];
const B: [f64; 8] = [
    1.0,
    4.231_333_070_160_091e1,
    6.871_870_074_920_579e2,
    5.394_196_021_424_751e3,
    2.121_379_430_158_659_7e4,
    3.930_789_580_009_271e4,
    2.872_908_573_572_194_3e4,
    5.226_495_278_852_854e3,
];
const C: [f64; 8] = [
    1.423_437_110_749_683_5,
    4.630_337_846_156_546,
    5.769_497_221_460_691,
    3.647_848_324_763_204_5,
    1.270_458_252_452_368_4,
    2.417_807_251_774_506e-1,
    2.272_384_498_926_918_4e-2,
    7.745_450_142_783_414e-4,
];
const D: [f64; 8] = [
    1.0,
    2.053_191_626_637_759,
    1.676_384_830_183_803_8,
    6.897_673_349_851e-1,
    1.481_039_764_274_800_8e-1,
    1.519_866_656_361_645_7e-2,
    5.475_938_084_995_345e-4,
    1.050_750_071_644_416_9e-9,
];
const E: [f64; 8] = [
    6.657_904_643_501_103,
    5.463_784_911_164_114,
    1.784_826_539_917_291_3,
    2.965_605_718_285_048_7e-1,
    2.653_218_952_657_612_4e-2,
    1.242_660_947_388_078_4e-3,
    2.711_555_568_743_487_6e-5,
    2.010_334_399_292_288_1e-7,
];
const F: [f64; 8] = [
    1.0,
    5.998_322_065_558_88e-1,
    1.369_298_809_227_358e-1,
    1.487_536_129_085_061_5e-2,
    7.868_691_311_456_133e-4,
    1.846_318_317_510_054_8e-5,
    1.421_511_758_316_446e-7,
    2.044_263_103_389_939_7e-15,
];

fn horner(c: &[f64; 8], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

/// Standard normal quantile by Wichura's algorithm AS 241 (PPND16), whose
/// relative error is below `1e-16` on `(0, 1)`. Returns `-inf`/`inf` at
/// the endpoints and NaN outside.
pub fn inverse_normal_cdf(p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * horner(&A, r) / horner(&B, r);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    if tail == 0.0 {
        return if q < 0.0 { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    let r = (-tail.ln()).sqrt();
    let value = if r <= 5.0 {
        let r = r - 1.6;
        horner(&C, r) / horner(&D, r)
    } else {
        let r = r - 5.0;
        horner(&E, r) / horner(&F, r)
    };
    if q < 0.0 {
        -value
    } else {
        value
    }
}

/// `ln Gamma(k / 2)` for a positive integer `k`, by the recursion from
/// `Gamma(1/2) = sqrt(pi)` and `Gamma(1) = 1`.
fn ln_gamma_half(k: usize) -> f64 {
    let mut x = if k.is_multiple_of(2) { 1.0 } else { 0.5 };
    let mut acc = if k.is_multiple_of(2) { 0.0 } else { 0.5 * std::f64::consts::PI.ln() };
    while 2.0 * x < k as f64 {
        acc += x.ln();
        x += 1.0;
    }
    acc
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // below a few ulps of the panel value the error estimate is noise
    let floor = 64.0 * f64::EPSILON * whole.abs();
    if depth == 0 || delta.abs() <= 15.0 * tol.max(floor) {
        return left + right + delta / 15.0;
    }
    adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub(crate) fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let h = (b - a) / PANELS as f64;
    (0..PANELS)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = simpson(lo, hi, fa, fm, fb);
            adapt(&f, lo, hi, fa, fm, fb, whole, QUADRATURE_TOLERANCE / PANELS as f64, 30)
        })
        .sum()
}

/// `Pr[|Z| <= r]` for `Z` standard normal in `R^n`, integrating the chi
/// density `s^{n-1} e^{-s^2/2} / (2^{n/2-1} Gamma(n/2))`.
pub fn chi_cdf(n: usize, r: f64) -> f64 {
    if n == 0 || r.is_nan() {
        return f64::NAN;
    }
    if r <= 0.0 {
        return 0.0;
    }
    let log_norm = (1.0 - n as f64 / 2.0) * std::f64::consts::LN_2 - ln_gamma_half(n);
    let density = |s: f64| {
        if s <= 0.0 {
            return if n == 1 { log_norm.exp() } else { 0.0 };
        }
        ((n - 1) as f64 * s.ln() - 0.5 * s * s + log_norm).exp()
    };
    // beyond this the remaining mass is below 1e-300
    let upper = (n as f64).sqrt() + 40.0;
    integrate(density, 0.0, r.min(upper)).min(1.0)
}

/// Standard normal distribution function.
pub fn normal_cdf(t: f64) -> f64 {
    if t >= 0.0 {
        0.5 + 0.5 * chi_cdf(1, t)
    } else {
        0.5 - 0.5 * chi_cdf(1, -t)
    }
}

/// Radius `r` with `Pr[|Z| <= r] = mu` for `Z` standard normal in `R^n`.
pub fn ball_radius(n: usize, mu: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("ball in R^0".into()));
    }
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::Domain(format!("ball measure {mu}")));
    }
    let mut lo = 0.0;
    let mut hi = (n as f64).sqrt() + 1.0;
    while chi_cdf(n, hi) < mu {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Numeric(format!("no radius reaches measure {mu}")));
        }
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            let achieved = chi_cdf(n, mid);
            if (achieved - mu).abs() <= RADIUS_TOLERANCE {
                return Ok(mid);
            }
            return Err(Error::Numeric(format!(
                "radius {mid} reaches measure {achieved}, wanted {mu}"
            )));
        }
        if chi_cdf(n, mid) < mu {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Numeric(format!(
        "bisection for measure {mu} did not converge in {BISECTION_STEPS} steps"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_round_trips() {
        for i in 1..1000 {
            let p = i as f64 / 1000.0;
            assert!((normal_cdf(inverse_normal_cdf(p)) - p).abs() < 1e-13, "p = {p}");
        }
        assert_eq!(inverse_normal_cdf(0.5), 0.0);
        assert!((inverse_normal_cdf(0.975) - 1.959963984540054).abs() < 1e-14);
        assert!((inverse_normal_cdf(1e-300) + 37.047096).abs() < 1e-5);
        assert_eq!(inverse_normal_cdf(1.0), f64::INFINITY);
        assert!(inverse_normal_cdf(1.5).is_nan());
    }

    #[test]
    fn quantile_is_odd() {
        // dyadic p so that 1 - p is exact
        for p in [2f64.powi(-40), 2f64.powi(-20), 2f64.powi(-7), 0.25, 0.375] {
            assert_eq!(inverse_normal_cdf(p), -inverse_normal_cdf(1.0 - p));
        }
    }

    #[test]
    fn chi_cdf_closed_forms() {
        // two dimensions: 1 - exp(-r^2/2)
        for r in [0.1, 0.5, 1.0, 2.0, 4.0] {
            assert!((chi_cdf(2, r) - (1.0 - (-r * r / 2.0).exp())).abs() < 1e-14);
        }
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-14);
        // the normalizing constant carries about 1e-14 relative error here
        assert!((chi_cdf(100, 1e3) - 1.0).abs() < 1e-13);
        assert_eq!(chi_cdf(3, 0.0), 0.0);
    }

    #[test]
    fn ball_radius_examples() {
        let r = ball_radius(2, 0.5).unwrap();
        assert!((r - (2.0 * std::f64::consts::LN_2).sqrt()).abs() < 1e-9);
        assert!((ball_radius(1, 0.682_689_492_137_085_9).unwrap() - 1.0).abs() < 1e-9);
        for n in [1, 3, 10, 50] {
            let r = ball_radius(n, 0.3).unwrap();
            assert!((chi_cdf(n, r) - 0.3).abs() <= RADIUS_TOLERANCE);
        }
        assert!(ball_radius(2, 0.0).is_err());
        assert!(ball_radius(2, 1.0).is_err());
        assert!(ball_radius(0, 0.5).is_err());
    }
}
