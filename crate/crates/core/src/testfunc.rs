//! Test functions with smooth, even, compactly supported Fourier transform.
//!
//! Fourier convention: f̂(u) = ∫ f(x) e^{-2πixu} dx, so
//! f(x) = ∫ f̂(u) e^{2πixu} du = 2∫₀^α f̂(u) cos(2πxu) du.
//!
//! Both families are a scaled profile g on [-1, 1]: f̂(u) = c·g(u/α).

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::quad::GaussLegendre;
use crate::{Error, Real, Result};

/// Nodes per quadrature panel.
const PANEL_NODES: usize = 16;
/// Largest admissible 2πα|Im x| before cosh overflows in practice.
const OVERFLOW_EXPONENT: f64 = 700.0;
/// Samples used to measure the total variation of a profile derivative.
const TV_SAMPLES: usize = 20_001;

/// Shape of the Fourier transform profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// g(v) = (1 - v²)^k, C^{k-1} at the support boundary.
    PolynomialSmooth { k: u32 },
    /// g(v) = exp(1 - 1/(1 - v²)), C^∞.
    InfinitelySmoothBump,
}

impl Family {
    fn profile(self, v: f64) -> f64 {
        if v.abs() >= 1.0 {
            return 0.0;
        }
        match self {
            Family::PolynomialSmooth { k } => (1.0 - v * v).powi(k as i32),
            Family::InfinitelySmoothBump => (1.0 - 1.0 / (1.0 - v * v)).exp(),
        }
    }

    fn profile_generic<F: Real>(self, v: F) -> F {
        if v.abs() >= F::one() {
            return F::zero();
        }
        let one_minus = F::one() - v * v;
        match self {
            Family::PolynomialSmooth { k } => one_minus.powi(k as i32),
            Family::InfinitelySmoothBump => (F::one() - one_minus.recip()).exp(),
        }
    }

    /// Order p of the envelope |f(x)| <= A |x|^{-p} and the derivative whose
    /// variation bounds it.
    fn decay_order(self) -> u32 {
        match self {
            Family::PolynomialSmooth { k } => k + 1,
            Family::InfinitelySmoothBump => 4,
        }
    }

    /// Derivative of order `decay_order() - 1` of the profile.
    fn envelope_derivative(self, v: f64) -> f64 {
        if v.abs() >= 1.0 {
            return 0.0;
        }
        match self {
            Family::PolynomialSmooth { k } => poly_profile_derivative(k, k, v),
            Family::InfinitelySmoothBump => {
                let q = 1.0 - v * v;
                let g = (1.0 - 1.0 / q).exp();
                if g == 0.0 {
                    return 0.0;
                }
                let d1 = -2.0 * v / (q * q);
                let d2 = -(2.0 + 6.0 * v * v) / (q * q * q);
                let d3 = -24.0 * v * (1.0 + v * v) / (q * q * q * q);
                (d3 + 3.0 * d1 * d2 + d1 * d1 * d1) * g
            }
        }
    }
}

/// `order`-th derivative of (1 - v²)^k.
fn poly_profile_derivative(k: u32, order: u32, v: f64) -> f64 {
    // (1 - v²)^k = Σ_j C(k, j) (-1)^j v^{2j}
    let mut total = 0.0;
    let mut binom = 1.0f64;
    for j in 0..=k {
        if j > 0 {
            binom = binom * f64::from(k - j + 1) / f64::from(j);
        }
        let power = 2 * j;
        if power < order {
            continue;
        }
        let falling: f64 = (0..order).map(|i| f64::from(power - i)).product();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * binom * falling * v.powi((power - order) as i32);
    }
    total
}

/// Power-law bound |f(x)| <= min(peak, coeff·|x|^{-power}) on the real line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayEnvelope {
    pub coeff: f64,
    pub power: u32,
    pub peak: f64,
}

impl DecayEnvelope {
    pub fn bound(&self, x: f64) -> f64 {
        let x = x.abs();
        if x == 0.0 {
            return self.peak;
        }
        self.peak.min(self.coeff * x.powi(-(self.power as i32)))
    }

    /// Smallest |x| beyond which the bound stays below `eps`.
    pub fn radius(&self, eps: f64) -> f64 {
        if self.coeff == 0.0 || self.peak <= eps {
            return 0.0;
        }
        (self.coeff / eps).powf(1.0 / f64::from(self.power))
    }

    /// Bound on Σ |f(x_i)| over points x_i >= r on one side, for a point set
    /// of density at most `density` per unit x (a factor 2 of slack on the
    /// density is included).
    pub fn tail_sum(&self, r: f64, density: f64) -> f64 {
        if self.coeff == 0.0 {
            return 0.0;
        }
        let r = r.max(f64::MIN_POSITIVE);
        let p = f64::from(self.power);
        2.0 * self.bound(r) + 2.0 * density * self.coeff * r.powf(1.0 - p) / (p - 1.0)
    }

    /// Smallest radius with `tail_sum(r, density) <= tol` (both sides counted).
    pub fn radius_for_tail(&self, tol: f64, density: f64) -> f64 {
        if self.coeff == 0.0 {
            return 0.0;
        }
        let total = |r: f64| 2.0 * self.tail_sum(r, density);
        let (mut lo, mut hi) = (1e-6f64, 1.0f64);
        while total(hi) > tol {
            hi *= 2.0;
            if hi > 1e15 {
                return hi;
            }
        }
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if total(mid) > tol {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi / lo < 1.0 + 1e-9 {
                break;
            }
        }
        hi
    }
}

/// A pair (f, f̂) with f̂(u) = scale·g(u/α) supported in [-α, α].
#[derive(Clone, Debug)]
pub struct TestFunction<F: Real> {
    alpha: F,
    family: Family,
    scale: F,
    rule: GaussLegendre<F>,
    min_panels: usize,
    /// (u, weight·f̂(u)) at the base panel nodes on [0, α].
    base: Vec<(F, F)>,
    envelope: DecayEnvelope,
}

impl<F: Real> TestFunction<F> {
    pub fn new(alpha: F, family: Family, scale: F) -> Result<Self> {
        if !(alpha > F::zero()) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        if !scale.is_finite() {
            return Err(Error::InvalidParameter(format!("scale must be finite, got {scale}")));
        }
        if let Family::PolynomialSmooth { k } = family {
            if k < 2 {
                return Err(Error::InvalidParameter(format!("polynomial_smooth needs k >= 2, got {k}")));
            }
            if k > 40 {
                return Err(Error::InvalidParameter(format!("polynomial_smooth supports k <= 40, got {k}")));
            }
        }
        let rule = GaussLegendre::new(PANEL_NODES);
        // The bump's flat approach to ±α needs finer panels than a polynomial.
        let min_panels = match family {
            Family::PolynomialSmooth { .. } => 4,
            Family::InfinitelySmoothBump => 16,
        };
        let base = rule
            .panel_points(F::zero(), alpha, min_panels)
            .map(|(u, w)| (u, w * scale * family.profile_generic(u / alpha)))
            .collect();
        let envelope = Self::build_envelope(alpha.to_f64_lossy(), family, scale.to_f64_lossy());
        Ok(Self { alpha, family, scale, rule, min_panels, base, envelope })
    }

    /// Shorthand for the polynomial family.
    pub fn polynomial(alpha: F, k: u32) -> Result<Self> {
        Self::new(alpha, Family::PolynomialSmooth { k }, F::one())
    }

    /// Shorthand for the C^∞ bump.
    pub fn bump(alpha: F) -> Result<Self> {
        Self::new(alpha, Family::InfinitelySmoothBump, F::one())
    }

    fn build_envelope(alpha: f64, family: Family, scale: f64) -> DecayEnvelope {
        // Integrating by parts p-1 times (all lower derivatives vanish at ±1) and
        // once more in Stieltjes form gives
        // |∫ g(v) e^{iωv} dv| <= V(g^{(p-1)}) / |ω|^p,
        // V counting the end jumps as well as the interior variation.
        let p = family.decay_order();
        let n = TV_SAMPLES;
        let mut variation = 0.0;
        let mut prev = family.envelope_derivative(-1.0 + 1e-15);
        variation += prev.abs();
        for i in 1..n {
            let v = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
            let v = v.clamp(-1.0 + 1e-15, 1.0 - 1e-15);
            let cur = family.envelope_derivative(v);
            variation += (cur - prev).abs();
            prev = cur;
        }
        variation += prev.abs();
        variation *= 1.02;
        let omega_per_x = std::f64::consts::TAU * alpha;
        let coeff = scale.abs() * alpha * variation / omega_per_x.powi(p as i32);
        // |f(x)| <= ∫|f̂| = |scale|·α·∫g
        let rule = GaussLegendre::<f64>::new(PANEL_NODES);
        let mass = rule.integrate(-1.0, 1.0, 32, |v| family.profile(v));
        DecayEnvelope { coeff, power: p, peak: scale.abs() * alpha * mass }
    }

    pub fn alpha(&self) -> F {
        self.alpha
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn scale(&self) -> F {
        self.scale
    }

    pub fn envelope(&self) -> &DecayEnvelope {
        &self.envelope
    }

    /// Same profile with a new scale.
    pub fn with_scale(&self, scale: F) -> Result<Self> {
        Self::new(self.alpha, self.family, scale)
    }

    /// f̂(u); exactly zero for |u| >= α.
    pub fn ft_value(&self, u: F) -> F {
        self.scale * self.family.profile_generic(u / self.alpha)
    }

    /// ∫ f(x) dx = f̂(0).
    pub fn integral(&self) -> F {
        self.ft_value(F::zero())
    }

    fn panels_for(&self, modulus: F) -> usize {
        // max(64, 8⌈α|x|⌉) nodes, in panels of PANEL_NODES
        let osc = (self.alpha * modulus).ceil().to_usize().unwrap_or(usize::MAX / 16);
        let nodes = (8 * osc).max(PANEL_NODES * self.min_panels);
        nodes.div_ceil(PANEL_NODES).max(self.min_panels)
    }

    /// |ω| from which the closed form replaces quadrature (polynomial family).
    fn closed_form_threshold(&self) -> Option<F> {
        match self.family {
            Family::PolynomialSmooth { k } => Some(F::lit(f64::max(24.0, 4.0 * f64::from(k)))),
            Family::InfinitelySmoothBump => None,
        }
    }

    /// f(x) at a complex argument.
    pub fn value(&self, x: Complex<F>) -> Result<Complex<F>> {
        self.overflow_guard(x)?;
        let omega = x * (F::TAU() * self.alpha);
        if let (Some(thr), Family::PolynomialSmooth { k }) = (self.closed_form_threshold(), self.family) {
            if omega.norm() >= thr {
                return Ok(self.closed_form_complex(k, omega));
            }
        }
        Ok(self.value_by_quadrature(x))
    }

    /// f(x) at a complex argument, always by quadrature.
    pub fn value_quadrature(&self, x: Complex<F>) -> Result<Complex<F>> {
        self.overflow_guard(x)?;
        Ok(self.value_by_quadrature(x))
    }

    fn overflow_guard(&self, x: Complex<F>) -> Result<()> {
        let exponent = x.im.abs() * F::TAU() * self.alpha;
        if !(exponent <= F::lit(OVERFLOW_EXPONENT)) {
            return Err(Error::Overflow(exponent.to_f64_lossy()));
        }
        Ok(())
    }

    fn value_by_quadrature(&self, x: Complex<F>) -> Complex<F> {
        let two_pi_x = x * F::TAU();
        let two = F::lit(2.0);
        let panels = self.panels_for(x.norm());
        let mut acc = Complex::new(F::zero(), F::zero());
        if panels == self.min_panels {
            for &(u, wf) in &self.base {
                acc = acc + (two_pi_x * u).cos() * wf;
            }
        } else {
            for (u, w) in self.rule.panel_points(F::zero(), self.alpha, panels) {
                acc = acc + (two_pi_x * u).cos() * (w * self.ft_value(u));
            }
        }
        acc * two
    }

    /// f(x) for real x; the fast path used by every sum over zeros or shifts.
    pub fn value_real(&self, x: F) -> F {
        let omega = F::TAU() * self.alpha * x;
        if let (Some(thr), Family::PolynomialSmooth { k }) = (self.closed_form_threshold(), self.family) {
            if omega.abs() >= thr {
                return self.closed_form_real(k, omega);
            }
        }
        let two_pi_x = F::TAU() * x;
        let panels = self.panels_for(x.abs());
        let sum = if panels == self.min_panels {
            self.base.iter().fold(F::zero(), |acc, &(u, wf)| acc + wf * (two_pi_x * u).cos())
        } else {
            self.rule
                .panel_points(F::zero(), self.alpha, panels)
                .fold(F::zero(), |acc, (u, w)| acc + w * self.ft_value(u) * (two_pi_x * u).cos())
        };
        sum * F::lit(2.0)
    }

    /// f(x) by quadrature for real x with an explicit panel count (oracle use).
    pub fn value_real_with_panels(&self, x: F, panels: usize) -> F {
        let two_pi_x = F::TAU() * x;
        self.rule
            .panel_points(F::zero(), self.alpha, panels)
            .fold(F::zero(), |acc, (u, w)| acc + w * self.ft_value(u) * (two_pi_x * u).cos())
            * F::lit(2.0)
    }

    /// ∫_{-1}^{1} (1 - v²)^k e^{iωv} dv = k! 2^{k+1} j_k(ω) / ω^k.
    fn closed_form_real(&self, k: u32, omega: F) -> F {
        let (s, c) = omega.sin_cos();
        let inv = omega.recip();
        let mut j_prev = s * inv;
        let mut j = s * inv * inv - c * inv;
        for n in 1..k {
            let next = F::from_u32(2 * n + 1).unwrap() * inv * j - j_prev;
            j_prev = j;
            j = next;
        }
        let prefactor = poly_prefactor::<F>(k);
        self.scale * self.alpha * prefactor * j * inv.powi(k as i32)
    }

    fn closed_form_complex(&self, k: u32, omega: Complex<F>) -> Complex<F> {
        let s = omega.sin();
        let c = omega.cos();
        let inv = omega.inv();
        let mut j_prev = s * inv;
        let mut j = s * inv * inv - c * inv;
        for n in 1..k {
            let next = inv * j * F::from_u32(2 * n + 1).unwrap() - j_prev;
            j_prev = j;
            j = next;
        }
        j * inv.powi(k as i32) * (poly_prefactor::<F>(k) * self.alpha * self.scale)
    }

    /// σ_f² = ∫ min(|u|, 1) f̂(u)² du.
    pub fn sigma_sq(&self) -> F {
        let panels = 64;
        let one = F::one();
        let inner_hi = self.alpha.min(one);
        let inner = self.rule.integrate(F::zero(), inner_hi, panels, |u| {
            let v = self.ft_value(u);
            u * v * v
        });
        let outer = if self.alpha > one {
            self.rule.integrate(one, self.alpha, panels, |u| {
                let v = self.ft_value(u);
                v * v
            })
        } else {
            F::zero()
        };
        F::lit(2.0) * (inner + outer)
    }
}

/// k! 2^{k+1}
fn poly_prefactor<F: Real>(k: u32) -> F {
    let fact: f64 = (1..=k).map(f64::from).product();
    F::lit(fact * 2f64.powi(k as i32 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn poly(alpha: f64, k: u32) -> TestFunction<f64> {
        TestFunction::polynomial(alpha, k).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(TestFunction::<f64>::polynomial(0.0, 2).is_err());
        assert!(TestFunction::<f64>::polynomial(-1.0, 2).is_err());
        assert!(TestFunction::<f64>::polynomial(1.0, 1).is_err());
        assert!(TestFunction::<f64>::new(1.0, Family::InfinitelySmoothBump, f64::NAN).is_err());
    }

    #[test]
    fn ft_values() {
        let f = poly(1.0, 2);
        assert_eq!(f.ft_value(0.0), 1.0);
        assert_relative_eq!(f.ft_value(0.5), 0.5625, epsilon = 1e-15);
        assert_eq!(f.ft_value(1.0), 0.0);
        assert_eq!(f.ft_value(0.3), f.ft_value(-0.3));
        let b = TestFunction::<f64>::bump(0.5).unwrap();
        assert_eq!(b.ft_value(0.5), 0.0);
        assert!(b.ft_value(0.499) > 0.0);
        assert_eq!(b.ft_value(0.0), 1.0);
    }

    #[test]
    fn value_at_origin_is_integral_of_ft() {
        let f = poly(1.0, 2);
        let v = f.value(Complex64::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(v.re, 16.0 / 15.0, epsilon = 1e-14);
        assert_relative_eq!(f.value_real(0.0), 16.0 / 15.0, epsilon = 1e-14);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for k in [2, 3, 4, 7] {
            let f = poly(0.7, k);
            for x in [6.0, 9.5, 13.0, 57.3, 400.1, 1234.5] {
                let fast = f.value_real(x);
                let slow = f.value_real_with_panels(x, 4 * f.panels_for(x));
                assert!((fast - slow).abs() < 1e-12, "k={k} x={x}: {fast} vs {slow}");
                let z = Complex64::new(x, 0.9);
                let a = f.value(z).unwrap();
                let b = f.value_quadrature(z).unwrap();
                assert!((a - b).norm() < 1e-12, "k={k} z={z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn real_arguments_give_real_values() {
        let f = poly(0.8, 3);
        for x in [0.0, 0.4, 3.0, 50.0, 700.0] {
            let v = f.value(Complex64::new(x, 0.0)).unwrap();
            assert!(v.im.abs() < 1e-12);
            assert!((f.value_real(x) - f.value_real(-x)).abs() < 1e-12);
        }
    }

    #[test]
    fn imaginary_arguments_give_real_values() {
        let f = poly(0.5, 2);
        for y in [0.3, 1.7, 10.0] {
            let v = f.value(Complex64::new(0.0, y)).unwrap();
            assert!(v.im.abs() < 1e-12 * v.re.abs());
            assert!(v.re > 0.0);
        }
    }

    #[test]
    fn overflow_guard() {
        let f = poly(1.0, 2);
        let y = 701.0 / std::f64::consts::TAU;
        assert!(matches!(f.value(Complex64::new(0.0, y)), Err(Error::Overflow(_))));
        assert!(f.value(Complex64::new(0.0, 699.0 / std::f64::consts::TAU)).is_ok());
    }

    #[test]
    fn decay_at_fifty() {
        // oracle: 8192-panel quadrature
        let f = poly(1.0, 2);
        let oracle = f.value_real_with_panels(50.0, 8192);
        assert!(oracle.abs() <= 1e-4);
        assert!((f.value_real(50.0) - oracle).abs() < 1e-13);
    }

    #[test]
    fn quadrature_accuracy_up_to_a_thousand() {
        for f in [poly(1.0, 2), TestFunction::bump(0.5).unwrap(), TestFunction::bump(2.0).unwrap()] {
            let mut x = 0.0;
            while x <= 1000.0 {
                let got = f.value_real(x);
                let oracle = f.value_real_with_panels(x, 8 * f.panels_for(x) + 64);
                assert!((got - oracle).abs() < 1e-10, "{:?} x={x}: {got} vs {oracle}", f.family());
                x += 37.3;
            }
        }
    }

    #[test]
    fn envelope_bounds_values() {
        for f in [poly(0.5, 2), poly(0.4, 4), TestFunction::bump(0.5).unwrap()] {
            let env = *f.envelope();
            let mut x = 0.01;
            while x < 5000.0 {
                assert!(f.value_real(x).abs() <= env.bound(x) * (1.0 + 1e-9) + 1e-15, "x={x}");
                x *= 1.05;
            }
        }
    }

    #[test]
    fn decay_cubic_weighted_bound_for_k4() {
        let f = poly(0.6, 4);
        let mut worst: f64 = 0.0;
        let mut x = 0.0;
        while x <= 1000.0 {
            worst = worst.max(f.value_real(x).abs() * (1.0 + x).powi(3));
            x += 0.37;
        }
        assert!(worst < 10.0, "worst {worst}");
    }

    #[test]
    fn sigma_sq_closed_forms() {
        let f = poly(1.0, 2);
        assert_relative_eq!(f.sigma_sq(), 0.2, epsilon = 1e-14);
        let g = f.with_scale(2.0).unwrap();
        assert_relative_eq!(g.sigma_sq(), 0.8, epsilon = 1e-14);
        // α > 1: 2∫_0^1 u ĝ² + 2∫_1^2 ĝ² with ĝ = (1 - u²/4)²; exact rational value
        let wide = poly(2.0, 2);
        // inner part: w = u²/4 gives 2∫_0^{1/4} (1 - w)^4 dw
        let inner = 2.0 * (1.0 - 0.75f64.powi(5)) / 5.0;
        let exact = 2.0 * inner + 2.0 * outer_exact();
        assert_relative_eq!(wide.sigma_sq(), exact, max_relative = 1e-12);
    }

    /// ∫_1^2 (1 - u²/4)^4 du by expanding the polynomial.
    fn outer_exact() -> f64 {
        // (1 - u²/4)^4 = Σ C(4,j)(-1/4)^j u^{2j}
        let mut total = 0.0;
        for j in 0..=4u32 {
            let binom = [1.0, 4.0, 6.0, 4.0, 1.0][j as usize];
            let c = binom * (-0.25f64).powi(j as i32);
            let p = 2 * j + 1;
            total += c * (2f64.powi(p as i32) - 1.0) / f64::from(p);
        }
        total
    }

    #[test]
    fn sigma_sq_bump_against_midpoint_oracle() {
        let f = TestFunction::<f64>::bump(0.5).unwrap();
        let n = 1_000_000;
        let h = 0.5 / n as f64;
        let riemann: f64 = (0..n)
            .map(|i| {
                let u = (i as f64 + 0.5) * h;
                let v = f.ft_value(u);
                u * v * v * h
            })
            .sum::<f64>()
            * 2.0;
        assert!(f.sigma_sq() > 0.0);
        assert!((f.sigma_sq() - riemann).abs() < 1e-8);
    }

    #[test]
    fn sigma_sq_support_scaling() {
        // Shrinking the support by λ with λα <= 1 scales σ² by λ².
        let lambda = 0.5;
        let wide = poly(0.9, 3);
        let narrow = poly(0.9 * lambda, 3);
        let direct = 2.0
            * GaussLegendre::<f64>::new(16).integrate(0.0, 0.9 * lambda, 200, |u| {
                let v = wide.ft_value(u / lambda);
                u * v * v
            });
        assert_relative_eq!(narrow.sigma_sq(), direct, max_relative = 1e-12);
        assert_relative_eq!(narrow.sigma_sq(), lambda * lambda * wide.sigma_sq(), max_relative = 1e-12);
    }

    #[test]
    fn fourier_round_trip() {
        // Re-transform f on a fine grid and recover f̂.
        let f = poly(1.0, 2);
        let h = 0.01;
        let span = 400.0;
        let n = (span / h) as usize;
        let samples: Vec<(f64, f64)> =
            (0..=n).map(|i| i as f64 * h).map(|x| (x, f.value_real(x))).collect();
        for i in 0..20 {
            let u = -0.95 + 0.1 * i as f64;
            // f̂(u) = 2∫_0^∞ f(x) cos(2πxu) dx, trapezoid
            let mut acc = 0.0;
            for (j, &(x, fx)) in samples.iter().enumerate() {
                let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                acc += w * fx * (std::f64::consts::TAU * x * u).cos();
            }
            let recovered = 2.0 * h * acc;
            assert!((recovered - f.ft_value(u)).abs() < 1e-6, "u={u}: {recovered} vs {}", f.ft_value(u));
        }
    }

    #[test]
    fn envelope_radius_and_tail() {
        let f = poly(0.5, 2);
        let env = f.envelope();
        let r = env.radius(1e-12);
        assert!(env.bound(r) <= 1e-12 * (1.0 + 1e-9));
        let rt = env.radius_for_tail(1e-6, 1.0);
        assert!(2.0 * env.tail_sum(rt, 1.0) <= 1e-6 * (1.0 + 1e-6));
        let zero = f.with_scale(0.0).unwrap();
        assert_eq!(zero.envelope().radius(1e-12), 0.0);
    }

    #[test]
    fn single_precision_path() {
        let f = TestFunction::<f32>::polynomial(1.0, 2).unwrap();
        assert!((f.value_real(0.0) - 16.0 / 15.0).abs() < 1e-5);
        assert!((f.sigma_sq() - 0.2).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn even_in_x(x in -1000.0f64..1000.0, alpha in 0.1f64..2.0) {
            let f = TestFunction::<f64>::bump(alpha).unwrap();
            prop_assert!((f.value_real(x) - f.value_real(-x)).abs() < 1e-12);
            let g = poly(alpha, 2);
            prop_assert!((g.value_real(x) - g.value_real(-x)).abs() < 1e-12);
        }

        #[test]
        fn linear_in_scale(x in -300.0f64..300.0, c in -5.0f64..5.0) {
            let f = poly(0.5, 2);
            let g = f.with_scale(c).unwrap();
            prop_assert!((g.value_real(x) - c * f.value_real(x)).abs() < 1e-12);
        }
    }
}
