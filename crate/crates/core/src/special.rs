//! Complex log-gamma and digamma, the archimedean density Ω, the
//! Riemann–Siegel theta function and the smooth zero-counting function.
//!
//! Log-gamma and digamma shift the argument upward with the functional
//! equation until `Re(s) >= 10` and then apply the Stirling series. The
//! shift accumulates principal logarithms, so `log_gamma` returns the branch
//! that is analytic off the negative real axis (the one continuous along
//! vertical lines), not the principal logarithm of Γ.

use num_complex::Complex;
use num_traits::Zero;

use crate::{Error, Real, Result};

/// Real part below which the upward shift is applied.
const SHIFT_THRESHOLD: f64 = 10.0;
/// Arguments further left than this are rejected instead of shifted.
const SHIFT_LIMIT: f64 = -1.0e6;

/// B_{2k} / (2k (2k-1)), k = 1..8.
const STIRLING_LOG_GAMMA: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// B_{2k} / (2k), k = 1..8.
const STIRLING_DIGAMMA: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

/// Theta becomes monotone above this height; Gram points with n >= -1 lie above it.
pub const THETA_MINIMUM: f64 = 6.289_835_988_902_39;

/// Height from which `rs_theta` uses its asymptotic series.
pub const THETA_SERIES_FROM: f64 = 50.0;

fn check_argument<F: Real>(s: Complex<F>) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain {
            what: "gamma-type function (non-finite argument)",
            value: s.re.to_f64_lossy(),
        });
    }
    if s.im.is_zero() && s.re <= F::zero() && s.re == s.re.round() {
        return Err(Error::Pole(s.re.to_f64_lossy()));
    }
    if s.re < F::lit(SHIFT_LIMIT) {
        return Err(Error::Domain {
            what: "gamma-type function (real part too negative)",
            value: s.re.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Evaluates Σ c_k w^k for w = z^{-2}, Horner form.
fn horner<F: Real>(coeffs: &[f64], w: Complex<F>) -> Complex<F> {
    coeffs
        .iter()
        .rev()
        .fold(Complex::zero(), |acc, &c| acc * w + Complex::new(F::lit(c), F::zero()))
}

/// log Γ(s) for complex `s`.
pub fn log_gamma<F: Real>(s: Complex<F>) -> Result<Complex<F>> {
    check_argument(s)?;
    let threshold = F::lit(SHIFT_THRESHOLD);
    let mut z = s;
    let mut shift = Complex::zero();
    while z.re < threshold {
        shift = shift + z.ln();
        z = z + F::one();
    }
    let half = F::lit(0.5);
    let inv = z.inv();
    let series = horner(&STIRLING_LOG_GAMMA, inv * inv) * inv;
    let half_log_two_pi = F::lit(0.918_938_533_204_672_7);
    let value = (z - half) * z.ln() - z + half_log_two_pi + series;
    Ok(value - shift)
}

/// Ψ(s) = Γ'(s)/Γ(s) for complex `s`.
pub fn digamma<F: Real>(s: Complex<F>) -> Result<Complex<F>> {
    check_argument(s)?;
    let threshold = F::lit(SHIFT_THRESHOLD);
    let mut z = s;
    let mut shift = Complex::zero();
    while z.re < threshold {
        shift = shift + z.inv();
        z = z + F::one();
    }
    let inv = z.inv();
    let w = inv * inv;
    let series = horner(&STIRLING_DIGAMMA, w) * w;
    Ok(z.ln() - inv * F::lit(0.5) - series - shift)
}

/// Ω(r) = ½Ψ(¼ + ir/2) + ½Ψ(¼ − ir/2) − log π.
///
/// The two digamma values are complex conjugates, so this is Re Ψ(¼ + ir/2) − log π.
pub fn omega<F: Real>(r: F) -> F {
    let s = Complex::new(F::lit(0.25), r / F::lit(2.0));
    let psi = digamma(s).expect("1/4 + ir/2 is never a pole");
    psi.re - F::PI().ln()
}

/// Riemann–Siegel theta, θ(t) = Im log Γ(¼ + it/2) − (t/2) log π.
///
/// Uses the asymptotic series for `t >= 50` and the log-gamma route below.
pub fn rs_theta<F: Real>(t: F) -> Result<F> {
    if !(t > F::zero()) || !t.is_finite() {
        return Err(Error::Domain { what: "rs_theta", value: t.to_f64_lossy() });
    }
    if t >= F::lit(THETA_SERIES_FROM) {
        Ok(theta_series(t))
    } else {
        rs_theta_log_gamma(t)
    }
}

/// θ(t) through `log_gamma`; valid for every t > 0.
pub fn rs_theta_log_gamma<F: Real>(t: F) -> Result<F> {
    if !(t > F::zero()) {
        return Err(Error::Domain { what: "rs_theta", value: t.to_f64_lossy() });
    }
    let lg = log_gamma(Complex::new(F::lit(0.25), t / F::lit(2.0)))?;
    Ok(lg.im - t / F::lit(2.0) * F::PI().ln())
}

/// θ(t) through its asymptotic expansion in 1/t.
pub fn rs_theta_asymptotic<F: Real>(t: F) -> Result<F> {
    if !(t > F::zero()) {
        return Err(Error::Domain { what: "rs_theta", value: t.to_f64_lossy() });
    }
    Ok(theta_series(t))
}

fn theta_series<F: Real>(t: F) -> F {
    let two_pi = F::TAU();
    let half = F::lit(0.5);
    let inv = t.recip();
    let inv2 = inv * inv;
    let tail = inv
        * (F::lit(1.0 / 48.0)
            + inv2
                * (F::lit(7.0 / 5760.0)
                    + inv2 * (F::lit(31.0 / 80_640.0) + inv2 * F::lit(381.0 / 1_433_600.0))));
    half * t * (t / two_pi).ln() - half * t - F::PI() / F::lit(8.0) + tail
}

/// θ'(t) from the differentiated asymptotic series (adequate for t >= 6.3).
pub fn rs_theta_derivative<F: Real>(t: F) -> F {
    let inv2 = (t * t).recip();
    F::lit(0.5) * (t / F::TAU()).ln()
        - inv2 * (F::lit(1.0 / 48.0) + inv2 * (F::lit(7.0 / 1920.0) + inv2 * F::lit(31.0 / 16_128.0)))
}

/// Smooth zero count N̄(T) = 1 + θ(T)/π.
pub fn mean_count<F: Real>(t: F) -> Result<F> {
    if !(t > F::zero()) {
        return Err(Error::Domain { what: "mean_count", value: t.to_f64_lossy() });
    }
    Ok(F::one() + rs_theta(t)? / F::PI())
}

/// Asymptotic form (T/2π) log(T/2πe) + 7/8.
pub fn mean_count_asymptotic<F: Real>(t: F) -> Result<F> {
    if !(t > F::zero()) {
        return Err(Error::Domain { what: "mean_count", value: t.to_f64_lossy() });
    }
    let x = t / F::TAU();
    Ok(x * (x.ln() - F::one()) + F::lit(0.875))
}

/// Gram point g_n, the solution of θ(g_n) = nπ above the minimum of θ.
///
/// Each point is computed from its own starting value, so the result does
/// not depend on which other Gram points were requested.
pub fn gram_point<F: Real>(n: i64) -> Result<F> {
    if n < -1 {
        return Err(Error::Domain { what: "gram_point (index)", value: n as f64 });
    }
    let target = F::from_i64(n).unwrap() * F::PI();
    let lo = F::lit(THETA_MINIMUM);
    let mut t = if n >= 1 {
        let x = (n as f64 + 0.125) / std::f64::consts::E;
        F::lit(std::f64::consts::TAU * (n as f64 + 0.125) / lambert_w(x))
    } else {
        F::lit(if n == 0 { 17.8 } else { 9.7 })
    };
    for _ in 0..100 {
        let step = (rs_theta(t)? - target) / rs_theta_derivative(t);
        let mut next = t - step;
        if next <= lo {
            next = (t + lo) / F::lit(2.0);
        }
        let done = (next - t).abs() <= F::epsilon() * F::lit(4.0) * t;
        t = next;
        if done {
            break;
        }
    }
    Ok(t)
}

/// Principal branch of Lambert W for x > 0.
fn lambert_w(x: f64) -> f64 {
    let mut w = (1.0 + x).ln();
    for _ in 0..60 {
        let e = w.exp();
        let f = w * e - x;
        let step = f / (e * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if step.abs() <= 1e-15 * w.abs().max(1.0) {
            break;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    fn close(a: Complex64, b: Complex64, rel: f64) {
        let err = (a - b).norm();
        assert!(err <= rel * b.norm().max(1.0), "{a} vs {b}: err {err:e}");
    }

    #[test]
    fn log_gamma_classical_values() {
        close(log_gamma(Complex64::new(1.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0), 1e-14);
        let half = log_gamma(Complex64::new(0.5, 0.0)).unwrap();
        close(half, Complex64::new(0.5 * std::f64::consts::PI.ln(), 0.0), 1e-14);
    }

    #[test]
    fn log_gamma_against_multiprecision_oracle() {
        // mpmath loggamma at 30 digits
        let cases = [
            ((0.25, 10.0), (-15.364_592_760_295_240_14, 12.634_193_666_938_485_79)),
            ((3.7, -2.2), (0.726_446_751_624_426_474_3, -2.718_064_292_441_145_666)),
            ((0.25, 1.0e4), (-15_709.346_914_508_677_44, 82_103.011_021_721_795_3)),
            ((0.5, 0.001), (0.572_362_475_527_658_516_2, -0.001_963_507_221_228_411_748)),
            ((25.0, 0.0), (54.784_729_398_112_319_19, 0.0)),
        ];
        for ((re, im), (vre, vim)) in cases {
            close(log_gamma(Complex64::new(re, im)).unwrap(), Complex64::new(vre, vim), 1e-13);
        }
    }

    #[test]
    fn poles_are_rejected() {
        for s in [0.0, -1.0, -7.0] {
            assert!(matches!(log_gamma(Complex64::new(s, 0.0)), Err(Error::Pole(_))));
            assert!(matches!(digamma(Complex64::new(s, 0.0)), Err(Error::Pole(_))));
        }
        assert!(log_gamma(Complex64::new(-7.0, 1e-3)).is_ok());
    }

    #[test]
    fn digamma_classical_values() {
        close(digamma(Complex64::new(1.0, 0.0)).unwrap(), Complex64::new(-EULER_GAMMA, 0.0), 1e-14);
        let expect = -EULER_GAMMA - 2.0 * 2f64.ln();
        close(digamma(Complex64::new(0.5, 0.0)).unwrap(), Complex64::new(expect, 0.0), 1e-14);
    }

    #[test]
    fn digamma_against_multiprecision_oracle() {
        let cases = [
            ((0.25, 50.0), (3.912_018_838_688_558_881, 1.575_796_451_810_526_388)),
            ((0.25, 0.5), (-0.880_416_307_254_067_026_2, 2.148_028_401_414_828_622)),
            ((2.5, 0.0), (0.703_156_640_645_243_187_2, 0.0)),
            ((0.25, 5.0e6), (15.424_948_470_398_374_06, 1.570_796_376_794_896_619)),
        ];
        for ((re, im), (vre, vim)) in cases {
            close(digamma(Complex64::new(re, im)).unwrap(), Complex64::new(vre, vim), 1e-13);
        }
    }

    #[test]
    fn omega_values() {
        let pi = std::f64::consts::PI;
        let at_zero = -EULER_GAMMA - 3.0 * 2f64.ln() - pi / 2.0 - pi.ln();
        assert_relative_eq!(omega(0.0), at_zero, epsilon = 1e-13);
        assert_relative_eq!(omega(7.3), omega(-7.3), epsilon = 1e-15);
        assert_relative_eq!(omega(7.3), 0.149_212_802_537_831_862_1, epsilon = 1e-13);
        assert_relative_eq!(omega(100.0), 2.767_288_952_839_158_706, epsilon = 1e-13);
        let big = 1.0e5;
        assert_relative_eq!(omega(big), 9.675_048_398_556_716_27, epsilon = 1e-12);
        assert!((omega(big) - (big / (2.0 * pi)).ln()).abs() < 1.0);
    }

    #[test]
    fn omega_tracks_log_growth() {
        let mut r = 0.0f64;
        while r <= 1.0e8 {
            let gap = omega(r) - (1.0 + r.abs()).ln();
            assert!(gap <= 3.0, "r = {r}");
            // the lower side reaches -5.37 at r = 0
            assert!(gap.abs() <= 6.0, "r = {r}");
            r = if r == 0.0 { 1e-3 } else { r * 1.7 };
        }
    }

    #[test]
    fn theta_against_multiprecision_oracle() {
        let cases = [
            (10.0, -3.067_074_396_289_895_292),
            (20.0, 1.186_894_808_444_484_045),
            (49.9, 26.357_709_641_639_094_71),
            (100.0, 87.972_165_231_787_219_63),
            (1000.0, 2034.546_428_038_031_609),
            (1.0e5, 433_752.027_229_170_781_4),
        ];
        for (t, v) in cases {
            let got: f64 = rs_theta(t).unwrap();
            assert!((got - v).abs() <= 1e-10 * v.abs().max(1.0), "t={t}: {got} vs {v}");
        }
    }

    #[test]
    fn theta_routes_agree_at_100() {
        let a: f64 = rs_theta_log_gamma(100.0).unwrap();
        let b: f64 = rs_theta_asymptotic(100.0).unwrap();
        assert!((a - b).abs() < 1e-9);
        assert!(rs_theta(200.0f64).unwrap() > rs_theta(100.0f64).unwrap());
    }

    #[test]
    fn theta_routes_agree_on_grid() {
        let mut t = 50.0f64;
        while t <= 1.0e6 {
            let a = rs_theta_log_gamma(t).unwrap();
            let b = rs_theta_asymptotic(t).unwrap();
            assert!((a - b).abs() < 1e-8, "t={t}: {a} vs {b}");
            t *= 1.13;
        }
    }

    #[test]
    fn theta_domain() {
        assert!(rs_theta(0.0f64).is_err());
        assert!(rs_theta(-3.0f64).is_err());
        assert!(mean_count(0.0f64).is_err());
    }

    #[test]
    fn first_gram_point_by_bisection() {
        // independent bisection on rs_theta
        let (mut lo, mut hi) = (15.0f64, 20.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if rs_theta(mid).unwrap() < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 17.845_599_540_410_86).abs() < 1e-9);
        let g0: f64 = gram_point(0).unwrap();
        assert!((g0 - lo).abs() < 1e-10);
    }

    #[test]
    fn gram_points_against_oracle() {
        assert!((gram_point::<f64>(-1).unwrap() - 9.666_908_056_130_192).abs() < 1e-9);
        assert!((gram_point::<f64>(100).unwrap() - 238.582_590_514_502_92).abs() < 1e-9);
        assert!(gram_point::<f64>(-2).is_err());
        for n in [5i64, 1000, 123_456] {
            let g: f64 = gram_point(n).unwrap();
            let th = rs_theta(g).unwrap();
            assert!((th - n as f64 * std::f64::consts::PI).abs() < 1e-8 * (n as f64).max(1.0));
        }
    }

    #[test]
    fn mean_count_forms_agree() {
        let d100 = mean_count(100.0f64).unwrap() - mean_count_asymptotic(100.0f64).unwrap();
        let d1e4 = mean_count(1.0e4f64).unwrap() - mean_count_asymptotic(1.0e4f64).unwrap();
        assert!(d100.abs() < 1e-2);
        assert!(d1e4.abs() < 1e-4);
        assert_eq!(mean_count(100.0f64).unwrap().round(), 29.0);
    }

    #[test]
    fn mean_count_increasing() {
        let mut prev = mean_count(50.0f64).unwrap();
        let mut t = 50.0f64;
        while t < 1.0e5 {
            t *= 1.01;
            let next = mean_count(t).unwrap();
            assert!(next > prev);
            prev = next;
        }
    }

    #[test]
    fn single_precision_digamma() {
        let v = digamma(Complex::new(1.0f32, 0.0)).unwrap();
        assert!((v.re + EULER_GAMMA as f32).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn digamma_recurrence(re in 0.1f64..5.0, im in -20.0f64..20.0) {
            let s = Complex64::new(re, im);
            let lhs = digamma(s + 1.0).unwrap();
            let rhs = digamma(s).unwrap() + s.inv();
            prop_assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
        }

        #[test]
        fn log_gamma_recurrence(re in 0.1f64..5.0, im in -20.0f64..20.0) {
            let s = Complex64::new(re, im);
            let lhs = log_gamma(s + 1.0).unwrap();
            let rhs = log_gamma(s).unwrap() + s.ln();
            prop_assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
        }
    }
}
