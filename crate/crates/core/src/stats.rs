//! The averaging operator ⟨W⟩ = ∫ W(τ) w((τ − T)/H) dτ / H and moments of
//! the oscillatory part Nos against their Gaussian predictions.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::explicit::OscillatorySum;
use crate::primes::PrimePowerTable;
use crate::quad::GaussLegendre;
use crate::reduce::{pairwise_sum, pairwise_sum_columns, par_blocks};
use crate::special::omega;
use crate::testfunc::TestFunction;
use crate::{Error, Real, Result};

/// Default truncation |τ − T| <= K·H.
pub const DEFAULT_K: f64 = 50.0;
/// Smallest truncation accepted.
pub const MIN_K: f64 = 30.0;
/// Largest moment order handled.
pub const MAX_ORDER: usize = 40;

/// Nonnegative weight of unit mass with compactly supported ŵ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightWindow {
    /// w(x) = (sin πx / πx)², ŵ(u) = max(0, 1 − |u|).
    #[default]
    Fejer,
}

impl WeightWindow {
    pub fn w<F: Real>(&self, x: F) -> F {
        match self {
            WeightWindow::Fejer => {
                let px = F::PI() * x;
                if px.abs() < F::lit(1e-4) {
                    // sinc² = 1 − (πx)²/3 + O(x⁴)
                    F::one() - px * px / F::lit(3.0)
                } else {
                    let s = px.sin() / px;
                    s * s
                }
            }
        }
    }

    pub fn w_hat<F: Real>(&self, u: F) -> F {
        match self {
            WeightWindow::Fejer => (F::one() - u.abs()).max(F::zero()),
        }
    }

    /// ŵ(u) = 0 for |u| >= this.
    pub fn ft_support_radius(&self) -> f64 {
        1.0
    }

    /// Bound on ∫_{|x| > k} w.
    pub fn tail_mass(&self, k: f64) -> f64 {
        match self {
            WeightWindow::Fejer => 2.0 / (std::f64::consts::PI.powi(2) * k),
        }
    }
}

/// Parameters of ⟨·⟩_{T,H} and of its discretization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AverageConfig {
    pub t: f64,
    pub a: f64,
    /// H = T^a.
    pub h: f64,
    /// Window |τ − T| <= K·H.
    pub truncation_k: f64,
    /// Requested τ spacing; the grid uses the largest step <= this that
    /// lands exactly on both window ends.
    pub grid_step: f64,
    pub weight: WeightWindow,
}

impl AverageConfig {
    /// K = 50 and the largest allowed step π/(4 log T).
    pub fn new(t: f64, a: f64) -> Result<Self> {
        if !(t > std::f64::consts::E) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("T must exceed e, got {t}")));
        }
        let cfg = Self {
            t,
            a,
            h: t.powf(a),
            truncation_k: DEFAULT_K,
            grid_step: Self::max_step(t),
            weight: WeightWindow::Fejer,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Upper limit π/(4 log T) on the grid step.
    pub fn max_step(t: f64) -> f64 {
        std::f64::consts::PI / (4.0 * t.ln())
    }

    /// Step for averaging Nos^m up to `m_max`: the grid then samples every
    /// frequency of Nos^m · w at more than twice its rate.
    pub fn auto_step(t: f64, alpha: f64, m_max: usize) -> f64 {
        std::f64::consts::PI / (t.ln() * f64::max(4.0, 2.0 * m_max as f64 * alpha))
    }

    pub fn with_truncation(mut self, k: f64) -> Result<Self> {
        self.truncation_k = k;
        self.validate()?;
        Ok(self)
    }

    pub fn with_grid_step(mut self, step: f64) -> Result<Self> {
        self.grid_step = step;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a <= 1.0) {
            return Err(Error::InvalidParameter(format!("a must lie in (0, 1], got {}", self.a)));
        }
        if !(self.truncation_k >= MIN_K) || !self.truncation_k.is_finite() {
            return Err(Error::InvalidParameter(format!("truncation K must be >= 30, got {}", self.truncation_k)));
        }
        let max = Self::max_step(self.t) * (1.0 + 1e-12);
        if !(self.grid_step > 0.0 && self.grid_step <= max) {
            return Err(Error::InvalidParameter(format!(
                "grid step must lie in (0, π/(4 log T)] = (0, {max}], got {}",
                self.grid_step
            )));
        }
        Ok(())
    }

    /// Number of grid intervals and the actual step.
    pub fn grid(&self) -> (usize, f64) {
        let width = 2.0 * self.truncation_k * self.h;
        let n = (width / self.grid_step).ceil().max(1.0) as usize;
        (n, width / n as f64)
    }

    pub fn tau_start(&self) -> f64 {
        self.t - self.truncation_k * self.h
    }

    /// Trapezoid weight of grid point j (of n + 1) times w((τ_j − T)/H)/H.
    fn node_weight<F: Real>(&self, j: usize, n: usize, step: f64) -> F {
        let x = (self.tau_start() + step * j as f64 - self.t) / self.h;
        let end = if j == 0 || j == n { 0.5 } else { 1.0 };
        F::lit(end * step / self.h) * self.weight.w(F::lit(x))
    }
}

/// ⟨W⟩ with the mass of w cut off by the truncation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Average<F> {
    pub value: F,
    /// The quadrature of ⟨1⟩; 1 minus the truncated mass.
    pub weight_mass: F,
    /// 2/(π²K) for the Fejér weight.
    pub truncation_bound: f64,
}

/// Trapezoidal ⟨W⟩ on the grid of `cfg`.
pub fn average<F: Real, W>(samples: W, cfg: &AverageConfig) -> Result<Average<F>>
where
    W: Fn(F) -> F + Sync,
{
    cfg.validate()?;
    let (n, step) = cfg.grid();
    let start = cfg.tau_start();
    let parts = par_blocks(n + 1, |r| {
        let mut terms = Vec::with_capacity(r.len());
        let mut mass = Vec::with_capacity(r.len());
        for j in r {
            let wt: F = cfg.node_weight(j, n, step);
            terms.push(wt * samples(F::lit(start + step * j as f64)));
            mass.push(wt);
        }
        vec![pairwise_sum(&terms), pairwise_sum(&mass)]
    });
    let sums = pairwise_sum_columns(&parts);
    Ok(Average { value: sums[0], weight_mass: sums[1], truncation_bound: cfg.weight.tail_mass(cfg.truncation_k) })
}

/// (2k)!/(2^k k!) = (2k − 1)!! for m = 2k, 0 for odd m; `None` past u128.
pub fn gaussian_moment_coefficient(m: u32) -> Option<u128> {
    if m % 2 == 1 {
        return Some(0);
    }
    (1..m).step_by(2).try_fold(1u128, |acc, j| acc.checked_mul(u128::from(j)))
}

/// m-th moment of N(0, σ²).
pub fn gaussian_moment<F: Real>(m: u32, sigma: F) -> F {
    match gaussian_moment_coefficient(m) {
        Some(0) => F::zero(),
        Some(c) => F::from_u128(c).unwrap() * sigma.powi(m as i32),
        None => (1..m).step_by(2).fold(F::one(), |acc, j| acc * F::from_u32(j).unwrap()) * sigma.powi(m as i32),
    }
}

/// supp f̂ ⊆ (−2a/m, 2a/m), i.e. α < 2a/m.
pub fn support_check<F: Real>(f: &TestFunction<F>, m: u32, a: f64) -> bool {
    m > 0 && f.alpha().to_f64_lossy() < 2.0 * a / f64::from(m)
}

/// One moment order in a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEntry {
    pub m: u32,
    /// Estimated moment (for Nos: ⟨Nos^m⟩; for CUE: centered sample moment).
    pub value: f64,
    pub gaussian_prediction: f64,
    pub support_ok: bool,
    /// Numerical error estimate (zeta side) or standard error (CUE side).
    pub error: f64,
}

/// Weighted histogram of a statistic, with the N(0, σ²) density at the bin centers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
    pub gaussian_density: Vec<f64>,
}

impl Histogram {
    /// `bins` equal bins on [lo, hi]; values outside are dropped.
    pub fn build(values: &[f64], weights: &[f64], lo: f64, hi: f64, bins: usize, sigma: f64) -> Result<Self> {
        if bins == 0 || !(hi > lo) {
            return Err(Error::InvalidParameter(format!("histogram needs bins > 0 and lo < hi, got {bins} on [{lo}, {hi}]")));
        }
        let width = (hi - lo) / bins as f64;
        let mut mass = vec![0.0; bins];
        for (&v, &w) in values.iter().zip(weights) {
            if v >= lo && v <= hi {
                let i = (((v - lo) / width) as usize).min(bins - 1);
                mass[i] += w;
            }
        }
        let total: f64 = weights.iter().sum();
        let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
        let density = mass.iter().map(|m| m / (total * width)).collect();
        let gaussian_density = (0..bins)
            .map(|i| {
                let x = lo + width * (i as f64 + 0.5);
                (-(x * x) / (2.0 * sigma * sigma)).exp() / (sigma * std::f64::consts::TAU.sqrt())
            })
            .collect();
        Ok(Self { edges, density, gaussian_density })
    }
}

/// Moments of the statistic with their Gaussian predictions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    /// Mean estimate: ⟨N̄_f⟩ + ⟨Nos⟩ (zeta side) or the sample mean (CUE).
    pub mean: f64,
    /// ∫ f = f̂(0), the predicted mean.
    pub mean_predicted: f64,
    /// Error of `mean` (numerical budget or standard error).
    pub mean_error: f64,
    /// Orders 2..=m_max.
    pub centered_moments: Vec<MomentEntry>,
    pub sigma_sq_predicted: f64,
    pub estimated_numerical_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<ZetaDetails>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cue: Option<crate::rmt::CueDetails>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<Histogram>,
}

impl MomentReport {
    pub fn moment(&self, m: u32) -> Option<&MomentEntry> {
        self.centered_moments.iter().find(|e| e.m == m)
    }
}

/// Zeta-side pieces of a [`MomentReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaDetails {
    pub config: AverageConfig,
    pub grid_points: usize,
    pub step_used: f64,
    /// ⟨1⟩ on the grid.
    pub weight_mass: f64,
    pub truncation_bound: f64,
    /// ⟨Nos⟩.
    pub osc_mean: f64,
    /// ⟨N̄_f⟩ from the leading form ⟨Ω⟩ f̂(0) / log T.
    pub mean_term: f64,
    /// Standard deviation of Ω(τ) f̂(0) / log T over the window.
    pub mean_term_fluctuation: f64,
    /// |f(c(±i/2 − τ))| at the window end nearest the origin, summed.
    pub polar_estimate: f64,
    /// Prime powers inside supp f̂(log n / log T).
    pub prime_terms: usize,
}

/// Options for [`moments_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentOptions {
    pub m_max: usize,
    pub histogram_bins: Option<usize>,
}

/// ⟨Nos^m⟩ for m = 2..=m_max with Gaussian predictions and support flags.
pub fn moments<F: Real>(f: &TestFunction<F>, cfg: &AverageConfig, m_max: usize, table: &PrimePowerTable<F>) -> Result<MomentReport> {
    moments_with(f, cfg, MomentOptions { m_max, histogram_bins: None }, table)
}

/// [`moments`], optionally with a histogram of Nos(τ).
pub fn moments_with<F: Real>(
    f: &TestFunction<F>,
    cfg: &AverageConfig,
    opts: MomentOptions,
    table: &PrimePowerTable<F>,
) -> Result<MomentReport> {
    cfg.validate()?;
    let m_max = opts.m_max;
    if !(2..=MAX_ORDER).contains(&m_max) {
        return Err(Error::InvalidParameter(format!("m_max must lie in 2..=40, got {m_max}")));
    }
    let osc = OscillatorySum::new(f, F::lit(cfg.t), table)?;
    let (n, step) = cfg.grid();
    let start = cfg.tau_start();
    let values = osc.eval_grid(F::lit(start), F::lit(step), n + 1);

    // columns: weight mass, Σ ω Nos^m for m = 1..=m_max, then Σ ω |Nos|^m
    let cols = 1 + 2 * m_max;
    let parts = par_blocks(n + 1, |r| {
        let mut acc: Vec<Vec<F>> = vec![Vec::with_capacity(r.len()); cols];
        for j in r {
            let wt: F = cfg.node_weight(j, n, step);
            let v = values[j];
            acc[0].push(wt);
            let (mut p, mut q) = (wt, wt);
            for m in 1..=m_max {
                p = p * v;
                q = q * v.abs();
                acc[m].push(p);
                acc[m_max + m].push(q);
            }
        }
        acc.iter().map(|c| pairwise_sum(c)).collect::<Vec<F>>()
    });
    let sums: Vec<f64> = pairwise_sum_columns(&parts).into_iter().map(|x| x.to_f64_lossy()).collect();
    let mass = sums[0];
    let truncation = cfg.weight.tail_mass(cfg.truncation_k);

    let sigma_sq = f.sigma_sq().to_f64_lossy();
    let sigma = sigma_sq.sqrt();
    let rounding = f64::EPSILON * (n as f64).sqrt() * 16.0;
    let mut entries = Vec::with_capacity(m_max - 1);
    let mut worst = 0.0f64;
    for m in 2..=m_max {
        let abs_m = sums[m_max + m];
        let error = truncation * abs_m + rounding * abs_m;
        worst = worst.max(error);
        entries.push(MomentEntry {
            m: m as u32,
            value: sums[m],
            gaussian_prediction: gaussian_moment(m as u32, sigma),
            support_ok: support_check(f, m as u32, cfg.a),
            error,
        });
    }

    let log_t = cfg.t.ln();
    let f0 = f.integral().to_f64_lossy();
    let (omega_mean, omega_sd) = omega_moments(cfg);
    let mean_term = omega_mean * f0 / log_t;
    let osc_mean = sums[1];
    let polar_estimate = polar_size(f, start.abs().min(cfg.t), log_t);
    let mean_error = truncation * (sums[m_max + 1] + (omega_mean * f0 / log_t).abs()) + polar_estimate;

    let histogram = match opts.histogram_bins {
        Some(bins) => {
            let lim = 6.0 * sigma.max(f64::MIN_POSITIVE);
            let vals: Vec<f64> = values.iter().map(|v| v.to_f64_lossy()).collect();
            let wts: Vec<f64> = (0..=n).map(|j| cfg.node_weight::<f64>(j, n, step)).collect();
            Some(Histogram::build(&vals, &wts, -lim, lim, bins, sigma.max(f64::MIN_POSITIVE))?)
        }
        None => None,
    };

    Ok(MomentReport {
        mean: mean_term + osc_mean,
        mean_predicted: f0,
        mean_error,
        centered_moments: entries,
        sigma_sq_predicted: sigma_sq,
        estimated_numerical_error: worst.max(mean_error),
        zeta: Some(ZetaDetails {
            config: *cfg,
            grid_points: n + 1,
            step_used: step,
            weight_mass: mass,
            truncation_bound: truncation,
            osc_mean,
            mean_term,
            mean_term_fluctuation: omega_sd * f0.abs() / log_t,
            polar_estimate,
            prime_terms: osc.len(),
        }),
        cue: None,
        histogram,
    })
}

/// ⟨Ω⟩ and the standard deviation of Ω(τ) under the window, by
/// Gauss–Legendre on quarter-unit panels in x = (τ − T)/H.
fn omega_moments(cfg: &AverageConfig) -> (f64, f64) {
    let k = cfg.truncation_k;
    let panels = (8.0 * k).ceil() as usize;
    let rule = GaussLegendre::<f64>::new(16);
    let mut m0 = Vec::new();
    let mut m1 = Vec::new();
    let mut m2 = Vec::new();
    for (x, wq) in rule.panel_points(-k, k, panels) {
        let w = wq * cfg.weight.w(x);
        let o = omega(cfg.t + cfg.h * x);
        m0.push(w);
        m1.push(w * o);
        m2.push(w * o * o);
    }
    let (s0, s1, s2) = (pairwise_sum(&m0), pairwise_sum(&m1), pairwise_sum(&m2));
    let mean = s1 / s0;
    (mean, (s2 / s0 - mean * mean).max(0.0).sqrt())
}

fn polar_size<F: Real>(f: &TestFunction<F>, tau: f64, log_t: f64) -> f64 {
    let c = log_t / std::f64::consts::TAU;
    let z = Complex::new(F::lit(-c * tau), F::lit(0.5 * c));
    match f.value(z) {
        Ok(v) => 2.0 * v.norm().to_f64_lossy(),
        Err(_) => f64::INFINITY,
    }
}
