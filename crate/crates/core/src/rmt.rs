//! The CUE model: Haar unitary eigenangles, the periodized statistic
//! F_N(θ) = Σ_j f((N/2π)(θ + 2πj)) and Z_f(U) = Σ_j F_N(θ_j).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::reduce::pairwise_sum;
use crate::stats::{gaussian_moment, support_check, Histogram, MomentEntry, MomentReport, MAX_ORDER};
use crate::testfunc::TestFunction;
use crate::{Error, Real, Result};

/// Largest accepted ||λ| − 1| of a sampled eigenvalue.
pub const MODULUS_TOL: f64 = 1e-8;
/// Envelope level at which the shift sum of [`periodize`] is cut.
pub const PERIODIZE_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CueConfig {
    /// Matrix dimension N.
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
}

impl CueConfig {
    pub fn new(n: usize, samples: usize, seed: u64) -> Result<Self> {
        let cfg = Self { n, samples, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("matrix dimension N must be >= 1".into()));
        }
        if self.samples == 0 {
            return Err(Error::InvalidParameter("sample count must be >= 1".into()));
        }
        Ok(())
    }
}

/// Eigenangles of one sample, each in (−π, π].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenangleSet {
    angles: Vec<f64>,
    /// max_j ||λ_j| − 1| before taking arguments.
    max_modulus_error: f64,
}

impl EigenangleSet {
    /// Angles are reduced to (−π, π].
    pub fn new(angles: Vec<f64>) -> Self {
        Self { angles: angles.into_iter().map(principal).collect(), max_modulus_error: 0.0 }
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn max_modulus_error(&self) -> f64 {
        self.max_modulus_error
    }

    /// Σ_j e^{i n θ_j}.
    pub fn power_sum(&self, n: i64) -> Complex64 {
        let mut sorted = self.angles.clone();
        sorted.sort_by(f64::total_cmp);
        let re: Vec<f64> = sorted.iter().map(|&t| (n as f64 * t).cos()).collect();
        let im: Vec<f64> = sorted.iter().map(|&t| (n as f64 * t).sin()).collect();
        Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
    }
}

/// θ reduced to (−π, π].
pub fn principal(theta: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let r = theta.rem_euclid(std::f64::consts::TAU);
    if r > pi { r - std::f64::consts::TAU } else { r }
}

fn gaussian_matrix(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// Q·diag(r_jj/|r_jj|) from the QR factorization of `m`.
fn haar_from(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (mut q, r) = m.qr().unpack();
    for j in 0..q.ncols() {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 { d / norm } else { Complex64::new(1.0, 0.0) };
        for v in q.column_mut(j).iter_mut() {
            *v *= phase;
        }
    }
    q
}

fn eigen(u: &DMatrix<Complex64>) -> Result<(Vec<Complex64>, f64)> {
    let ev = u.eigenvalues().ok_or_else(|| Error::Numerical("eigenvalue iteration failed".into()))?;
    let worst = ev.iter().map(|l| (l.norm() - 1.0).abs()).fold(0.0, f64::max);
    Ok((ev.iter().copied().collect(), worst))
}

/// Eigenangles of the `index`-th Haar unitary of the run.
///
/// The generator is ChaCha8 keyed by `seed` on stream `index`, so each
/// sample can be drawn on its own and in any order.
pub fn sample_cue(cfg: &CueConfig, index: usize) -> Result<EigenangleSet> {
    cfg.validate()?;
    if index >= cfg.samples {
        return Err(Error::InvalidParameter(format!("sample index {index} out of range 0..{}", cfg.samples)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let u = haar_from(gaussian_matrix(cfg.n, &mut rng));
    let (mut ev, mut worst) = eigen(&u)?;
    if worst > MODULUS_TOL {
        let u = haar_from(u);
        (ev, worst) = eigen(&u)?;
        if worst > MODULUS_TOL {
            return Err(Error::Numerical(format!("eigenvalue modulus off by {worst:e} in sample {index}")));
        }
    }
    let angles = ev.iter().map(|l| principal(l.arg())).collect();
    Ok(EigenangleSet { angles, max_modulus_error: worst })
}

/// F_N(θ) = Σ_j f((N/2π)(θ + 2πj)), cut where the decay envelope falls
/// below [`PERIODIZE_EPS`].
pub fn periodize<F: Real>(f: &TestFunction<F>, n: usize, theta: F) -> F {
    let radius = f.envelope().radius(PERIODIZE_EPS);
    periodize_with_shifts(f, n, theta, (radius / n as f64).ceil() as i64 + 1)
}

/// F_N(θ) summed over shifts |j| <= `shifts` with θ first reduced to (−π, π].
pub fn periodize_with_shifts<F: Real>(f: &TestFunction<F>, n: usize, theta: F, shifts: i64) -> F {
    let theta = F::lit(principal(theta.to_f64_lossy()));
    let scale = F::from_usize(n).unwrap() / F::TAU();
    let terms: Vec<F> = (-shifts..=shifts)
        .map(|j| f.value_real(scale * (theta + F::TAU() * F::from_i64(j).unwrap())))
        .collect();
    pairwise_sum(&terms)
}

/// The Poisson dual F_N(θ) = (1/N) Σ_{|k| < αN} f̂(k/N) e^{ikθ}.
pub fn periodize_spectral<F: Real>(f: &TestFunction<F>, n: usize, theta: F) -> F {
    let nf = F::from_usize(n).unwrap();
    let kmax = (f.alpha() * nf).ceil().to_i64().unwrap();
    let mut terms = vec![f.ft_value(F::zero())];
    for k in 1..=kmax {
        let kf = F::from_i64(k).unwrap();
        terms.push(F::lit(2.0) * f.ft_value(kf / nf) * (kf * theta).cos());
    }
    pairwise_sum(&terms) / nf
}

/// Z_f(U) = Σ_j F_N(θ_j), through power sums:
/// (1/N)[N f̂(0) + 2 Σ_{1 <= k <= αN} f̂(k/N) Re Tr U^k].
pub fn zf<F: Real>(f: &TestFunction<F>, angles: &EigenangleSet) -> F {
    let alpha = f.alpha().to_f64_lossy();
    F::lit(zf_from_transform(|u| f.ft_value(F::lit(u)).to_f64_lossy(), alpha, angles))
}

/// Z_f for any even f̂ supported in [−alpha, alpha].
pub fn zf_from_transform(ft: impl Fn(f64) -> f64, alpha: f64, angles: &EigenangleSet) -> f64 {
    let n = angles.len();
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let kmax = (alpha * nf).ceil() as i64;
    let mut terms = vec![nf * ft(0.0)];
    for k in 1..=kmax {
        let w = ft(k as f64 / nf);
        if w != 0.0 {
            terms.push(2.0 * w * angles.power_sum(k).re);
        }
    }
    pairwise_sum(&terms) / nf
}

/// Every sample of a run, drawn once and shared between test functions.
#[derive(Clone, Debug)]
pub struct CueSamples {
    config: CueConfig,
    sets: Vec<EigenangleSet>,
}

impl CueSamples {
    /// Draws all samples in parallel; the result does not depend on the
    /// thread count.
    pub fn generate(cfg: &CueConfig) -> Result<Self> {
        cfg.validate()?;
        let sets: Vec<Result<EigenangleSet>> = (0..cfg.samples).into_par_iter().map(|i| sample_cue(cfg, i)).collect();
        let sets = sets.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(Self { config: *cfg, sets })
    }

    pub fn config(&self) -> &CueConfig {
        &self.config
    }

    pub fn sets(&self) -> &[EigenangleSet] {
        &self.sets
    }

    pub fn max_modulus_error(&self) -> f64 {
        self.sets.iter().map(|s| s.max_modulus_error).fold(0.0, f64::max)
    }

    /// Z_f for every sample, in sample order.
    pub fn zf_values<F: Real>(&self, f: &TestFunction<F>) -> Vec<f64> {
        self.sets.par_iter().map(|s| zf(f, s).to_f64_lossy()).collect()
    }
}

/// Run-level details of a CUE [`MomentReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CueDetails {
    pub config: CueConfig,
    /// Sample variance of Z_f.
    pub variance: f64,
    pub variance_error: f64,
    pub max_modulus_error: f64,
}

/// Central moments μ_0..=μ_top of `xs` about their mean, pairwise summed.
fn central_moments(xs: &[f64], mean: f64, top: usize) -> Vec<f64> {
    let n = xs.len() as f64;
    let mut cols: Vec<Vec<f64>> = vec![Vec::with_capacity(xs.len()); top + 1];
    for &x in xs {
        let d = x - mean;
        let mut p = 1.0;
        for c in cols.iter_mut() {
            c.push(p);
            p *= d;
        }
    }
    cols.iter().map(|c| pairwise_sum(c) / n).collect()
}

/// Sample mean and centered moments of `values` with delta-method standard
/// errors, against Gaussian predictions with σ² = sigma_sq(f).
pub fn moments_from_values<F: Real>(
    f: &TestFunction<F>,
    values: &[f64],
    m_max: usize,
    histogram_bins: Option<usize>,
) -> Result<MomentReport> {
    if !(2..=MAX_ORDER).contains(&m_max) {
        return Err(Error::InvalidParameter(format!("m_max must lie in 2..=40, got {m_max}")));
    }
    if values.len() < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let n = values.len() as f64;
    let mean = pairwise_sum(values) / n;
    let mu = central_moments(values, mean, 2 * m_max);
    let sigma_sq = f.sigma_sq().to_f64_lossy();
    let sigma = sigma_sq.sqrt();

    // Var(m_r) ≈ (μ_2r − μ_r² − 2r μ_{r−1} μ_{r+1} + r² μ_{r−1}² μ_2) / n
    let se = |r: usize| {
        let rf = r as f64;
        let v = mu[2 * r] - mu[r] * mu[r] - 2.0 * rf * mu[r - 1] * mu[r + 1] + rf * rf * mu[r - 1] * mu[r - 1] * mu[2];
        (v.max(0.0) / n).sqrt()
    };
    let entries: Vec<MomentEntry> = (2..=m_max)
        .map(|m| MomentEntry {
            m: m as u32,
            value: mu[m],
            gaussian_prediction: gaussian_moment(m as u32, sigma),
            support_ok: support_check(f, m as u32, 1.0),
            error: se(m),
        })
        .collect();
    let mean_error = (mu[2] / n).sqrt();
    let histogram = match histogram_bins {
        Some(bins) => {
            let lim = 6.0 * sigma.max(f64::MIN_POSITIVE);
            let centered: Vec<f64> = values.iter().map(|v| v - mean).collect();
            let weights = vec![1.0; values.len()];
            Some(Histogram::build(&centered, &weights, -lim, lim, bins, sigma.max(f64::MIN_POSITIVE))?)
        }
        None => None,
    };
    Ok(MomentReport {
        mean,
        mean_predicted: f.integral().to_f64_lossy(),
        mean_error,
        estimated_numerical_error: entries.iter().map(|e| e.error).fold(mean_error, f64::max),
        centered_moments: entries,
        sigma_sq_predicted: sigma_sq,
        zeta: None,
        cue: None,
        histogram,
    })
}

/// Monte-Carlo moments of Z_f over a shared sample set.
pub fn cue_moments_from(f: &TestFunction<impl Real>, samples: &CueSamples, m_max: usize, histogram_bins: Option<usize>) -> Result<MomentReport> {
    let values = samples.zf_values(f);
    let mut report = moments_from_values(f, &values, m_max, histogram_bins)?;
    let var = report.centered_moments[0].clone();
    report.cue = Some(CueDetails {
        config: samples.config,
        variance: var.value,
        variance_error: var.error,
        max_modulus_error: samples.max_modulus_error(),
    });
    Ok(report)
}

/// Draws `cfg.samples` Haar unitaries and reports the moments of Z_f.
pub fn cue_moments<F: Real>(f: &TestFunction<F>, cfg: &CueConfig, m_max: usize) -> Result<MomentReport> {
    cue_moments_from(f, &CueSamples::generate(cfg)?, m_max, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn samples(n: usize, count: usize, seed: u64) -> CueSamples {
        CueSamples::generate(&CueConfig::new(n, count, seed).unwrap()).unwrap()
    }

    /// Kolmogorov–Smirnov distance of `xs` from the uniform law on (−π, π].
    fn ks_uniform(mut xs: Vec<f64>) -> f64 {
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                let c = (x + PI) / (2.0 * PI);
                f64::max((c - i as f64 / n).abs(), ((i + 1) as f64 / n - c).abs())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn config_validation() {
        assert!(CueConfig::new(0, 10, 1).is_err());
        assert!(CueConfig::new(4, 0, 1).is_err());
        let cfg = CueConfig::new(4, 3, 1).unwrap();
        assert!(sample_cue(&cfg, 3).is_err());
    }

    #[test]
    fn principal_range() {
        assert_relative_eq!(principal(PI), PI);
        assert_relative_eq!(principal(-PI), PI);
        assert_relative_eq!(principal(3.0 * PI / 2.0), -PI / 2.0);
        assert_relative_eq!(principal(0.25 + 10.0 * PI), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn one_by_one_is_uniform() {
        let s = samples(1, 10_000, 11);
        let angles: Vec<f64> = s.sets().iter().map(|a| a.angles()[0]).collect();
        // 1.63/√n is the 1% critical value
        assert!(ks_uniform(angles) < 1.63 / 100.0);
    }

    #[test]
    fn pooled_angles_are_uniform() {
        let s = samples(8, 2_000, 12);
        let angles: Vec<f64> = s.sets().iter().flat_map(|a| a.angles().iter().copied()).collect();
        // eigenangles repel, so the pooled sample is no less even than iid
        assert!(ks_uniform(angles) < 1.63 / (16_000f64).sqrt());
    }

    fn trace_moments(n: usize, seed: u64) {
        let count = 10_000;
        let s = samples(n, count, seed);
        let tr: Vec<Complex64> = s.sets().iter().map(|a| a.power_sum(1)).collect();
        let c = count as f64;
        let mean = tr.iter().sum::<Complex64>() / c;
        let sq: Vec<f64> = tr.iter().map(|z| z.norm_sqr()).collect();
        let m2 = sq.iter().sum::<f64>() / c;
        let var2 = sq.iter().map(|v| (v - m2).powi(2)).sum::<f64>() / (c - 1.0);
        // Var Re Tr U = Var Im Tr U = 1/2
        let se_mean = (0.5 / c).sqrt();
        assert!(mean.re.abs() < 4.0 * se_mean && mean.im.abs() < 4.0 * se_mean, "{mean}");
        assert!((m2 - 1.0).abs() < 4.0 * (var2 / c).sqrt(), "E|Tr U|² = {m2}");
    }

    #[test]
    fn trace_moments_two() {
        trace_moments(2, 21);
    }

    #[test]
    fn trace_moments_eight() {
        trace_moments(8, 22);
    }

    #[test]
    fn higher_power_sums() {
        // E|Tr U^k|² = min(k, N)
        let s = samples(4, 10_000, 23);
        for k in [2i64, 3, 6] {
            let m: f64 = s.sets().iter().map(|a| a.power_sum(k).norm_sqr()).sum::<f64>() / 10_000.0;
            let want = (k as f64).min(4.0);
            assert!((m - want).abs() < 0.08 * want, "k = {k}: {m}");
        }
    }

    #[test]
    fn eigenvalues_on_circle() {
        let s = samples(32, 20, 3);
        assert!(s.max_modulus_error() < 1e-12);
        for a in s.sets() {
            assert_eq!(a.len(), 32);
            assert!(a.angles().iter().all(|&t| t > -PI && t <= PI));
        }
    }

    #[test]
    fn seed_determinism() {
        let a = samples(6, 8, 99);
        let b = samples(6, 8, 99);
        let c = samples(6, 8, 100);
        assert_eq!(a.sets(), b.sets());
        assert_ne!(a.sets(), c.sets());
        let cfg = CueConfig::new(6, 8, 99).unwrap();
        assert_eq!(&sample_cue(&cfg, 5).unwrap(), &a.sets()[5]);
    }

    #[test]
    fn thread_count_independence() {
        let cfg = CueConfig::new(5, 40, 7).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let f = TestFunction::polynomial(0.7, 2).unwrap();
        let a = one.install(|| CueSamples::generate(&cfg).unwrap().zf_values(&f));
        let b = four.install(|| CueSamples::generate(&cfg).unwrap().zf_values(&f));
        assert_eq!(a, b);
    }

    #[test]
    fn periodize_is_periodic() {
        let f = TestFunction::polynomial(0.8, 2).unwrap();
        for theta in [0.0, 0.4, -2.9, PI] {
            let a = periodize(&f, 12, theta);
            let b = periodize(&f, 12, theta + 2.0 * PI);
            let c = periodize(&f, 12, theta - 6.0 * PI);
            assert_relative_eq!(a, b, epsilon = 1e-13);
            assert_relative_eq!(a, c, epsilon = 1e-13);
        }
    }

    #[test]
    fn periodize_large_n_at_zero() {
        let f = TestFunction::<f64>::polynomial(0.8, 2).unwrap();
        let v = periodize(&f, 4096, 0.0);
        assert!((v - f.value_real(0.0)).abs() < 1e-9, "{v}");
    }

    #[test]
    fn periodize_against_brute_force() {
        let f = TestFunction::polynomial(0.9, 2).unwrap();
        let (n, theta) = (16usize, 1.0f64);
        let s = n as f64 / (2.0 * PI);
        let terms: Vec<f64> = (-10_000i64..=10_000).map(|j| f.value_real(s * (theta + 2.0 * PI * j as f64))).collect();
        let brute = pairwise_sum(&terms);
        assert!((periodize(&f, n, theta) - brute).abs() < 1e-10);
        assert!((periodize_spectral(&f, n, theta) - brute).abs() < 1e-10);
    }

    #[test]
    fn spectral_equals_spatial() {
        for f in [TestFunction::<f64>::polynomial(0.5, 3).unwrap(), TestFunction::bump(1.0).unwrap()] {
            for n in [3usize, 10, 33] {
                for theta in [-3.0, -0.7, 0.0, 0.2, 2.5] {
                    let a = periodize(&f, n, theta);
                    let b = periodize_spectral(&f, n, theta);
                    assert!((a - b).abs() < 1e-10, "n = {n}, θ = {theta}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn zf_sums_periodized_values() {
        let f = TestFunction::polynomial(0.8, 2).unwrap();
        let s = samples(10, 5, 4);
        for a in s.sets() {
            let direct: f64 = a.angles().iter().map(|&t| periodize(&f, 10, t)).sum();
            assert!((zf(&f, a) - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn zf_permutation_invariant() {
        let f = TestFunction::bump(0.9).unwrap();
        let angles = vec![0.3, -1.2, 2.9, 0.01, -3.0, 1.7];
        let mut rev = angles.clone();
        rev.reverse();
        let mut rot = angles.clone();
        rot.rotate_left(2);
        let a = zf(&f, &EigenangleSet::new(angles));
        assert_eq!(a, zf(&f, &EigenangleSet::new(rev)));
        assert_eq!(a, zf(&f, &EigenangleSet::new(rot)));
    }

    #[test]
    fn zf_nonnegative_for_squared_transform() {
        // f̂ = g ∗ g with g the indicator of [−β/2, β/2], so f = ĝ² >= 0
        let beta = 0.8;
        let ft = |u: f64| (beta - u.abs()).max(0.0);
        let s = samples(12, 200, 5);
        for a in s.sets() {
            assert!(zf_from_transform(ft, beta, a) >= -1e-12);
        }
    }

    #[test]
    fn mean_matches_integral() {
        // E Z_f = f̂(0) exactly, since E Tr U^k = 0
        let f = TestFunction::polynomial(0.6, 2).unwrap();
        let r = cue_moments(&f, &CueConfig::new(16, 4_000, 8).unwrap(), 4).unwrap();
        assert!((r.mean - r.mean_predicted).abs() < 4.0 * r.mean_error);
        let details = r.cue.as_ref().unwrap();
        assert_eq!(details.config.n, 16);
        let v = r.moment(2).unwrap();
        assert!((v.value - v.gaussian_prediction).abs() < 4.0 * v.error, "{v:?}");
        assert!(v.support_ok);
        assert!(r.moment(3).unwrap().support_ok);
        assert!(!r.moment(4).unwrap().support_ok);
    }

    #[test]
    fn small_n_moments_near_gaussian() {
        let f = TestFunction::polynomial(0.4, 2).unwrap();
        let r = cue_moments(&f, &CueConfig::new(16, 4_000, 9).unwrap(), 4).unwrap();
        let s2 = r.sigma_sq_predicted;
        let m3 = r.moment(3).unwrap();
        let m4 = r.moment(4).unwrap();
        assert!(m3.value.abs() < 4.0 * m3.error + 0.05 * s2.powf(1.5), "{m3:?}");
        assert!((m4.value - 3.0 * s2 * s2).abs() < 4.0 * m4.error + 0.1 * s2 * s2, "{m4:?}");
    }

    #[test]
    fn variance_agrees_with_zeta_prediction() {
        let f = TestFunction::polynomial(0.7, 3).unwrap();
        let r = cue_moments(&f, &CueConfig::new(8, 200, 1).unwrap(), 2).unwrap();
        assert_eq!(r.sigma_sq_predicted, f.sigma_sq());
    }

    #[test]
    fn moment_order_limits() {
        let f = TestFunction::polynomial(0.5, 2).unwrap();
        assert!(moments_from_values(&f, &[1.0, 2.0], 1, None).is_err());
        assert!(moments_from_values(&f, &[1.0, 2.0], MAX_ORDER + 1, None).is_err());
        assert!(moments_from_values(&f, &[1.0], 2, None).is_err());
        let r = moments_from_values(&f, &[1.0, 2.0, 3.0], 2, Some(10)).unwrap();
        assert_relative_eq!(r.mean, 2.0);
        assert_relative_eq!(r.moment(2).unwrap().value, 2.0 / 3.0);
        assert_eq!(r.histogram.unwrap().density.len(), 10);
    }

    #[test]
    fn f32_zf_tracks_f64() {
        let f = TestFunction::polynomial(0.8, 2).unwrap();
        let g = TestFunction::<f32>::polynomial(0.8, 2).unwrap();
        let s = samples(10, 3, 2);
        for a in s.sets() {
            assert!((zf(&f, a) - f64::from(zf(&g, a))).abs() < 1e-4);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn rotation_preserves_power_sum_modulus(phi in -PI..PI, seed in 0u64..1000) {
            let s = samples(6, 1, seed);
            let a = &s.sets()[0];
            let rot = EigenangleSet::new(a.angles().iter().map(|t| t + phi).collect());
            for k in 1..8 {
                prop_assert!((a.power_sum(k).norm() - rot.power_sum(k).norm()).abs() < 1e-10);
            }
        }

        #[test]
        fn zf_linear_in_scale(s in -3.0f64..3.0, seed in 0u64..1000) {
            let f = TestFunction::polynomial(0.7, 2).unwrap();
            let g = f.with_scale(s).unwrap();
            let s7 = samples(7, 1, seed);
            let a = &s7.sets()[0];
            prop_assert!((zf(&g, a) - s * zf(&f, a)).abs() < 1e-10 * (1.0 + s.abs()));
        }
    }
}
