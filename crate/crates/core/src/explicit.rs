//! N_f(τ) three ways: the direct zero sum, the mean term N̄_f and the
//! oscillatory prime sum Nos, tied together by the explicit formula
//! N_f = N̄_f + Nos.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::primes::PrimePowerTable;
use crate::quad::GaussLegendre;
use crate::reduce::{pairwise_sum, BLOCK};
use crate::special::omega;
use crate::testfunc::{DecayEnvelope, TestFunction};
use crate::zeros::{ZeroSet, FIRST_ZERO_LOWER};
use crate::{Error, Real, Result};

/// Target for the neglected tail of the direct zero sum.
pub const DIRECT_TAIL_TOL: f64 = 1e-4;
/// Target for the neglected tail of the Ω-integral.
pub const MEAN_TAIL_TOL: f64 = 1e-8;
/// Allowed |Im| of the summed polar terms, relative to their size.
pub const POLAR_IMAG_TOL: f64 = 1e-10;

const MEAN_NODES: usize = 16;
const RESYNC: usize = 256;

fn check_height<F: Real>(t: F) -> Result<f64> {
    let t = t.to_f64_lossy();
    if !(t > std::f64::consts::E) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("T must exceed e, got {t}")));
    }
    Ok(t)
}

/// The decay envelope of f at unit |scale|, so truncation radii (and hence
/// linearity in the scale) do not depend on the scale.
fn unit_envelope<F: Real>(f: &TestFunction<F>) -> DecayEnvelope {
    let s = f.scale().to_f64_lossy().abs();
    let env = *f.envelope();
    if s == 0.0 {
        env
    } else {
        DecayEnvelope { coeff: env.coeff / s, power: env.power, peak: env.peak / s }
    }
}

/// Zeros per unit x = (log T / 2π)(t − τ) near height t.
fn zero_density(height: f64, log_t: f64) -> f64 {
    (height.abs() / std::f64::consts::TAU).ln().max(1.0) / log_t
}

/// Truncated direct sum with its truncation data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DirectSum<F> {
    pub value: F,
    /// Radius in rescaled units x; zeros with |x| > radius are dropped.
    pub radius: f64,
    /// Bound on the dropped terms.
    pub tail_bound: f64,
    pub terms: usize,
}

/// Radius in x making the neglected tail of the zero sum at most `tol`.
pub fn direct_radius(env: &DecayEnvelope, tau: f64, log_t: f64, tol: f64) -> f64 {
    let c = log_t / std::f64::consts::TAU;
    let mut r = env.radius_for_tail(tol, zero_density(tau.abs() + 1.0, log_t));
    for _ in 0..3 {
        r = env.radius_for_tail(tol, zero_density(tau.abs() + r / c, log_t));
    }
    r
}

/// N_f(τ) = Σ_{j = ±1, ±2, …} f((log T/2π)(γ_j − τ)) with γ_{−j} = −γ_j,
/// truncated so the dropped terms are below [`DIRECT_TAIL_TOL`].
pub fn nf_direct<F: Real>(f: &TestFunction<F>, tau: F, t: F, zs: &ZeroSet) -> Result<F> {
    nf_direct_detail(f, tau, t, zs, DIRECT_TAIL_TOL).map(|d| d.value)
}

/// [`nf_direct`] with an explicit tail tolerance (relative to |scale|).
pub fn nf_direct_detail<F: Real>(f: &TestFunction<F>, tau: F, t: F, zs: &ZeroSet, tol: f64) -> Result<DirectSum<F>> {
    let t = check_height(t)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tail tolerance must be positive, got {tol}")));
    }
    let log_t = t.ln();
    let tau64 = tau.to_f64_lossy();
    let radius = direct_radius(&unit_envelope(f), tau64, log_t, tol);
    let mut sum = nf_direct_within(f, tau, F::lit(t), zs, radius)?;
    let density = zero_density(tau64.abs() + radius * std::f64::consts::TAU / log_t, log_t);
    sum.tail_bound = 2.0 * f.envelope().tail_sum(radius, density);
    Ok(sum)
}

/// Ordinate window [lo, hi] a zero set must cover for [`nf_direct_detail`]
/// at τ, with lo raised to 10 where no zeros exist below.
pub fn direct_window<F: Real>(f: &TestFunction<F>, tau: F, t: F, tol: f64) -> Result<(f64, f64)> {
    let t = check_height(t)?;
    let log_t = t.ln();
    let tau = tau.to_f64_lossy();
    let half = direct_radius(&unit_envelope(f), tau, log_t, tol) * std::f64::consts::TAU / log_t;
    let lo = if tau.abs() - half < FIRST_ZERO_LOWER { 10.0 } else { tau.abs() - half };
    Ok((lo, (tau.abs() + half).max(lo + 1.0)))
}

/// Direct sum over the zeros with |(log T/2π)(±γ − τ)| <= `radius`.
pub fn nf_direct_within<F: Real>(f: &TestFunction<F>, tau: F, t: F, zs: &ZeroSet, radius: f64) -> Result<DirectSum<F>> {
    let t = check_height(t)?;
    let log_t = t.ln();
    let c = log_t / std::f64::consts::TAU;
    let tau64 = tau.to_f64_lossy();
    let half = radius / c;

    let covers = |lo: f64, hi: f64| hi < FIRST_ZERO_LOWER || (zs.t_min() <= lo.max(FIRST_ZERO_LOWER) && zs.t_max() >= hi);
    // γ_j near τ, and mirrored −γ_j near τ, i.e. γ_j near −τ
    for (lo, hi) in [(tau64 - half, tau64 + half), (-tau64 - half, -tau64 + half)] {
        if !covers(lo, hi) {
            return Err(Error::Coverage {
                need_lo: lo.max(0.0),
                need_hi: hi,
                have_lo: zs.t_min(),
                have_hi: zs.t_max(),
            });
        }
    }

    let mut terms: Vec<F> = Vec::new();
    for &g in zs.in_range(tau64 - half, tau64 + half) {
        terms.push(f.value_real(F::lit(c * (g - tau64))));
    }
    for &g in zs.in_range(-tau64 - half, -tau64 + half) {
        terms.push(f.value_real(F::lit(c * (-g - tau64))));
    }
    Ok(DirectSum { value: pairwise_sum(&terms), radius, tail_bound: 0.0, terms: terms.len() })
}

/// Pieces of N̄_f(τ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanTerm<F> {
    /// (1/log T) ∫ f(x) Ω(τ + 2πx/log T) dx over |x| <= radius.
    pub integral: F,
    /// f(c(i/2 − τ)) + f(c(−i/2 − τ)), c = log T/2π.
    pub polar: F,
    pub radius: f64,
    pub tail_bound: f64,
}

impl<F: Real> MeanTerm<F> {
    pub fn total(&self) -> F {
        self.integral + self.polar
    }
}

/// Bound on (1/L)∫_{|x|>R} |f(x) Ω(τ + 2πx/L)| dx from |f| <= A|x|^{-p}
/// and |Ω(r)| <= log(1 + |r|) + 6.
fn mean_tail(env: &DecayEnvelope, tau: f64, log_t: f64, r: f64) -> f64 {
    if env.coeff == 0.0 {
        return 0.0;
    }
    let p = f64::from(env.power);
    let edge = (1.0 + tau.abs() + std::f64::consts::TAU * r / log_t).ln() + 6.0;
    let rp = r.powf(1.0 - p);
    2.0 * env.coeff / log_t * (rp * edge / (p - 1.0) + rp / ((p - 1.0) * (p - 1.0)))
}

fn mean_radius(env: &DecayEnvelope, tau: f64, log_t: f64, tol: f64) -> f64 {
    if env.coeff == 0.0 {
        return 0.0;
    }
    let mut hi = 1.0;
    while mean_tail(env, tau, log_t, hi) > tol {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mean_tail(env, tau, log_t, mid) > tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// N̄_f(τ) = (1/2π)∫ f((log T/2π)(r − τ)) Ω(r) dr + f(c(i/2 − τ)) + f(c(−i/2 − τ)).
pub fn nf_mean<F: Real>(f: &TestFunction<F>, tau: F, t: F) -> Result<F> {
    nf_mean_detail(f, tau, t, MEAN_TAIL_TOL).map(|m| m.total())
}

/// [`nf_mean`] with its parts and the truncation bound of the Ω-integral;
/// `tol` is relative to |scale|.
pub fn nf_mean_detail<F: Real>(f: &TestFunction<F>, tau: F, t: F, tol: f64) -> Result<MeanTerm<F>> {
    let t = check_height(t)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tail tolerance must be positive, got {tol}")));
    }
    let log_t = t.ln();
    let tau64 = tau.to_f64_lossy();
    let radius = mean_radius(&unit_envelope(f), tau64, log_t, tol);

    let integral = if radius > 0.0 {
        // panels of half a period of f's oscillation
        let width = 0.5 / f.alpha().to_f64_lossy();
        let panels = ((2.0 * radius / width).ceil() as usize).max(1);
        let rule = GaussLegendre::<F>::new(MEAN_NODES);
        let h = 2.0 * radius / panels as f64;
        let l = F::lit(log_t);
        let step = F::TAU() / l;
        let per_panel: Vec<F> = (0..panels)
            .map(|i| {
                let a = F::lit(-radius + h * i as f64);
                let b = F::lit(-radius + h * (i + 1) as f64);
                rule.integrate(a, b, 1, |x| f.value_real(x) * omega(tau + step * x))
            })
            .collect();
        pairwise_sum(&per_panel) / l
    } else {
        F::zero()
    };

    let polar = polar_terms(f, tau, F::lit(log_t))?;
    Ok(MeanTerm { integral, polar, radius, tail_bound: mean_tail(f.envelope(), tau64, log_t, radius) })
}

/// f(c(i/2 − τ)) + f(c(−i/2 − τ)) as a real number, after checking that
/// the imaginary parts cancel.
fn polar_terms<F: Real>(f: &TestFunction<F>, tau: F, log_t: F) -> Result<F> {
    let c = log_t / F::TAU();
    let half = F::lit(0.5);
    let up = f.value(Complex::new(-c * tau, c * half))?;
    let down = f.value(Complex::new(-c * tau, -c * half))?;
    let sum = up + down;
    let size = up.norm().max(down.norm()).max(F::one());
    if sum.im.abs() > F::lit(POLAR_IMAG_TOL) * size {
        return Err(Error::Numerical(format!(
            "polar terms are not conjugate: imaginary part {} at tau = {tau}",
            sum.im
        )));
    }
    Ok(sum.re)
}

/// Nos(τ) = −(2/log T) Σ_n Λ(n) n^{-1/2} f̂(log n/log T) cos(τ log n), with
/// the coefficients precomputed.
#[derive(Clone, Debug)]
pub struct OscillatorySum<F> {
    log_n: Vec<F>,
    weight: Vec<F>,
}

impl<F: Real> OscillatorySum<F> {
    /// Errors if the table does not reach ⌊T^α⌋.
    pub fn new(f: &TestFunction<F>, t: F, table: &PrimePowerTable<F>) -> Result<Self> {
        let t = check_height(t)?;
        let required = table.ensure_covers(f, F::lit(t))?;
        let log_t = F::lit(t.ln());
        let factor = -F::lit(2.0) / log_t;
        let mut log_n = Vec::new();
        let mut weight = Vec::new();
        for e in table.up_to(required) {
            let w = f.ft_value(e.log_n / log_t);
            if w != F::zero() {
                log_n.push(e.log_n);
                weight.push(factor * e.lambda / F::from_u64(e.n).unwrap().sqrt() * w);
            }
        }
        Ok(Self { log_n, weight })
    }

    /// Number of prime powers with f̂(log n/log T) ≠ 0.
    pub fn len(&self) -> usize {
        self.log_n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_n.is_empty()
    }

    /// Σ_n |coefficient|, a bound on |Nos|.
    pub fn abs_bound(&self) -> F {
        self.weight.iter().map(|w| w.abs()).sum()
    }

    pub fn eval(&self, tau: F) -> F {
        let terms: Vec<F> = self.log_n.iter().zip(&self.weight).map(|(&l, &w)| w * (tau * l).cos()).collect();
        pairwise_sum(&terms)
    }

    /// Nos at τ₀ + jh for j in 0..count.
    ///
    /// Each term is advanced by a rotation e^{ih log n}, restarted from an
    /// exact phase every few hundred steps. Blocks run in parallel and
    /// are independent, so the output does not depend on the thread count.
    pub fn eval_grid(&self, tau0: F, h: F, count: usize) -> Vec<F> {
        let blocks = count.div_ceil(BLOCK);
        let parts: Vec<Vec<F>> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let start = b * BLOCK;
                let len = BLOCK.min(count - start);
                self.grid_block(tau0, h, start, len)
            })
            .collect();
        parts.into_iter().flatten().collect()
    }

    fn grid_block(&self, tau0: F, h: F, start: usize, len: usize) -> Vec<F> {
        let mut out = vec![F::zero(); len];
        for chunk in (0..len).step_by(RESYNC) {
            let end = (chunk + RESYNC).min(len);
            let acc = &mut out[chunk..end];
            for (&l, &w) in self.log_n.iter().zip(&self.weight) {
                let tau = tau0 + h * F::from_usize(start + chunk).unwrap();
                let (mut s, mut c) = (tau * l).sin_cos();
                let (rs, rc) = (h * l).sin_cos();
                for a in acc.iter_mut() {
                    *a = *a + w * c;
                    let nc = c * rc - s * rs;
                    s = s * rc + c * rs;
                    c = nc;
                }
            }
        }
        out
    }
}

/// Nos(τ) for one τ.
pub fn nf_osc<F: Real>(f: &TestFunction<F>, tau: F, t: F, table: &PrimePowerTable<F>) -> Result<F> {
    Ok(OscillatorySum::new(f, t, table)?.eval(tau))
}

/// One evaluation of the statistic and its explicit-formula parts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinStatSample<F> {
    pub tau: F,
    pub direct: Option<F>,
    pub mean_part: F,
    pub osc_part: F,
    /// direct − mean_part − osc_part.
    pub residual: Option<F>,
    /// Bound on the truncated part of the zero sum.
    pub direct_tail: Option<f64>,
    /// Bound on the truncated part of the Ω-integral.
    pub mean_tail: f64,
}

/// N̄_f and Nos at τ, plus N_f and the residual when zeros are supplied.
pub fn linstat_sample<F: Real>(
    f: &TestFunction<F>,
    tau: F,
    t: F,
    zs: Option<&ZeroSet>,
    table: &PrimePowerTable<F>,
) -> Result<LinStatSample<F>> {
    let mean = nf_mean_detail(f, tau, t, MEAN_TAIL_TOL)?;
    let osc = nf_osc(f, tau, t, table)?;
    let direct = zs.map(|zs| nf_direct_detail(f, tau, t, zs, DIRECT_TAIL_TOL)).transpose()?;
    let mean_part = mean.total();
    Ok(LinStatSample {
        tau,
        direct: direct.map(|d| d.value),
        mean_part,
        osc_part: osc,
        residual: direct.map(|d| d.value - mean_part - osc),
        direct_tail: direct.map(|d| d.tail_bound),
        mean_tail: mean.tail_bound,
    })
}

/// Fills every field of the sample; the residual should be of the size of
/// the truncation bounds.
pub fn check_explicit_identity<F: Real>(
    f: &TestFunction<F>,
    tau: F,
    t: F,
    zs: &ZeroSet,
    table: &PrimePowerTable<F>,
) -> Result<LinStatSample<F>> {
    linstat_sample(f, tau, t, Some(zs), table)
}
