//! Gauss–Legendre quadrature, single-panel and composite.

use crate::Real;

/// Gauss–Legendre rule on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre<F> {
    nodes: Vec<F>,
    weights: Vec<F>,
}

impl<F: Real> GaussLegendre<F> {
    /// Builds the `n`-point rule. Nodes are found by Newton iteration on the
    /// three-term Legendre recurrence in f64 and then converted.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, p_prev) = legendre_pair(n, x);
                let dp = nf * (x * p - p_prev) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (p, p_prev) = legendre_pair(n, x);
            let dp = nf * (x * p - p_prev) / (x * x - 1.0);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self {
            nodes: nodes.into_iter().map(F::lit).collect(),
            weights: weights.into_iter().map(F::lit).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Abscissae and weights for `panels` equal panels covering `[a, b]`.
    pub fn panel_points(&self, a: F, b: F, panels: usize) -> impl Iterator<Item = (F, F)> + '_ {
        let panels = panels.max(1);
        let width = (b - a) / F::from_usize(panels).unwrap();
        let half = width / F::lit(2.0);
        (0..panels).flat_map(move |p| {
            let mid = a + half + width * F::from_usize(p).unwrap();
            self.nodes
                .iter()
                .zip(&self.weights)
                .map(move |(&x, &w)| (mid + half * x, half * w))
        })
    }

    /// Composite integral of `g` over `[a, b]` with `panels` equal panels.
    pub fn integrate<G: FnMut(F) -> F>(&self, a: F, b: F, panels: usize, mut g: G) -> F {
        self.panel_points(a, b, panels).fold(F::zero(), |acc, (x, w)| acc + w * g(x))
    }
}

/// Returns (P_n(x), P_{n-1}(x)).
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 33, 100] {
            let rule = GaussLegendre::<f64>::new(n);
            let total: f64 = rule.weights.iter().sum();
            assert_relative_eq!(total, 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let rule = GaussLegendre::<f64>::new(8);
        for deg in 0..16 {
            let got = rule.integrate(0.0, 1.0, 1, |x| x.powi(deg));
            assert_relative_eq!(got, 1.0 / (deg as f64 + 1.0), epsilon = 1e-14);
        }
    }

    #[test]
    fn composite_resolves_oscillation() {
        let rule = GaussLegendre::<f64>::new(16);
        let w = 200.0;
        let got = rule.integrate(0.0, 1.0, 64, |x| (w * x).cos());
        assert_relative_eq!(got, w.sin() / w, epsilon = 1e-14);
    }

    #[test]
    fn single_precision_rule() {
        let rule = GaussLegendre::<f32>::new(16);
        let got = rule.integrate(0.0, std::f32::consts::PI, 1, |x| x.sin());
        assert!((got - 2.0).abs() < 1e-5);
    }
}
