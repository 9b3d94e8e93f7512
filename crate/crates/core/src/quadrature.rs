//! Tensor-product Gauss-Legendre rules on the wedge cross-section.
//!
//! Integrals are taken over `[0, d] × [-θ0/2, θ0/2]` with the polar Jacobian
//! `ρ` applied by [`QuadratureRule::integrate`]. The `z` direction never needs
//! quadrature: every integrand factorizes there.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::units::Wedge;

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const START_NODES: usize = 32;
pub const MAX_NODES: usize = 512;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess for the i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// How Gauss-Legendre nodes on `[0, 1]` are mapped onto `ρ ∈ [0, d]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialMap {
    /// Affine map; exact for polynomials in `ρ` up to degree `2n - 1`.
    Linear,
    /// `ρ = d·t³`, clustering nodes at the tip where Bessel factors of
    /// fractional order behave like `ρ^ν` and are not smooth.
    Cubic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    map: RadialMap,
    rho: Vec<f64>,
    rho_weights: Vec<f64>,
    theta: Vec<f64>,
    theta_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(wedge: &Wedge, n_rho: usize, n_theta: usize) -> Self {
        Self::with_map(wedge, n_rho, n_theta, RadialMap::Linear)
    }

    pub fn with_map(wedge: &Wedge, n_rho: usize, n_theta: usize, map: RadialMap) -> Self {
        let d = wedge.radius();
        let half = 0.5 * wedge.aperture();

        let (t, wt) = gauss_legendre(n_rho);
        let (rho, rho_weights) = t
            .iter()
            .zip(&wt)
            .map(|(&s, &w)| {
                let u = 0.5 * (s + 1.0);
                match map {
                    RadialMap::Linear => (d * u, 0.5 * d * w),
                    RadialMap::Cubic => (d * u * u * u, 1.5 * d * u * u * w),
                }
            })
            .unzip();

        let (s, ws) = gauss_legendre(n_theta);
        let theta = s.iter().map(|&s| half * s).collect();
        let theta_weights = ws.iter().map(|&w| half * w).collect();

        Self { map, rho, rho_weights, theta, theta_weights }
    }

    pub fn map(&self) -> RadialMap {
        self.map
    }

    pub fn n_rho(&self) -> usize {
        self.rho.len()
    }

    pub fn n_theta(&self) -> usize {
        self.theta.len()
    }

    pub fn rho_nodes(&self) -> &[f64] {
        &self.rho
    }

    pub fn rho_weights(&self) -> &[f64] {
        &self.rho_weights
    }

    pub fn theta_nodes(&self) -> &[f64] {
        &self.theta
    }

    pub fn theta_weights(&self) -> &[f64] {
        &self.theta_weights
    }

    /// `Σ w_i w_j f(ρ_i, θ_j) ρ_i`, i.e. `∫∫ f ρ dρ dθ` over the cross-section.
    pub fn integrate(&self, mut integrand: impl FnMut(f64, f64) -> f64) -> Result<f64> {
        let mut total = Sum::default();
        for (&rho, &w_rho) in self.rho.iter().zip(&self.rho_weights) {
            let mut row = Sum::default();
            for (&theta, &w_theta) in self.theta.iter().zip(&self.theta_weights) {
                let value = integrand(rho, theta);
                if !value.is_finite() {
                    return Err(Error::NonFinite { rho, theta, value });
                }
                row.add(w_theta * value);
            }
            total.add(w_rho * rho * row.value());
        }
        Ok(total.value())
    }
}

/// Doubles the node count per axis, starting at 32×32, until two successive
/// estimates agree within `rel_tol`. Gives up after 512×512.
pub fn adapt(
    wedge: &Wedge,
    map: RadialMap,
    rel_tol: f64,
    mut integrand: impl FnMut(f64, f64) -> f64,
) -> Result<(f64, QuadratureRule)> {
    if !(rel_tol > 0.0 && rel_tol.is_finite()) {
        return Err(Error::Domain(format!("relative tolerance must be positive, got {rel_tol}")));
    }
    let mut n = START_NODES;
    let mut previous = QuadratureRule::with_map(wedge, n, n, map).integrate(&mut integrand)?;
    loop {
        n *= 2;
        let rule = QuadratureRule::with_map(wedge, n, n, map);
        let value = rule.integrate(&mut integrand)?;
        if (value - previous).abs() <= rel_tol * value.abs() {
            return Ok((value, rule));
        }
        if n >= MAX_NODES {
            return Err(Error::QuadratureNotConverged { nodes: n, previous, last: value });
        }
        previous = value;
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Sum {
    sum: f64,
    compensation: f64,
}

impl Sum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
// reference values are quoted at the precision they were computed
#[allow(clippy::excessive_precision, clippy::approx_constant)]
mod tests {
    use super::*;
    use crate::specfun::{bessel_j, first_zero};

    fn wedge(d: f64, theta0: f64) -> Wedge {
        Wedge::new(d, theta0, 1.0).unwrap()
    }

    #[test]
    fn legendre_rule_basics() {
        for n in [1, 2, 5, 32, 33, 512] {
            let (x, w) = gauss_legendre(n);
            assert!(w.iter().all(|&w| w > 0.0));
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
        // degree 2n - 1 exactness
        let (x, w) = gauss_legendre(6);
        let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((q - 2.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn weights_cover_the_rectangle() {
        let w = wedge(3.0, 1.2);
        for map in [RadialMap::Linear, RadialMap::Cubic] {
            let rule = QuadratureRule::with_map(&w, 17, 9, map);
            let total: f64 = rule.rho_weights().iter().sum::<f64>() * rule.theta_weights().iter().sum::<f64>();
            assert!((total - 3.0 * 1.2).abs() < 1e-12);
            assert!(rule.rho_weights().iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn polynomial_exactness_in_rho() {
        let w = wedge(2.0, PI / 3.0);
        let rule = QuadratureRule::new(&w, 4, 4);
        // ∫ρ^6 · ρ dρ over [0, 2] is exact for a 4-point rule (degree 7)
        let got = rule.integrate(|rho, _| rho.powi(6)).unwrap();
        let exact = 2f64.powi(8) / 8.0 * (PI / 3.0);
        assert!((got - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn unit_integrand_gives_area() {
        let w = wedge(2.0, PI);
        let area = QuadratureRule::new(&w, 8, 8).integrate(|_, _| 1.0).unwrap();
        assert!((area - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn separable_angular_integrand() {
        let theta0 = PI / 2.0;
        let w = wedge(1.0, theta0);
        let got = QuadratureRule::new(&w, 16, 32).integrate(|_, t| (PI * t / theta0).cos().powi(2)).unwrap();
        assert!((got - PI / 8.0).abs() < 1e-12);
    }

    #[test]
    fn bessel_normalization_integral() {
        // (d²/2) J_{ν+1}(α)² · θ0/2 evaluated to 30 digits
        let cases = [(1.0, PI, 0.12740346582655570689), (2.0, 1.5 * PI, 0.88187443654554925879)];
        for (d, theta0, expected) in cases {
            let w = wedge(d, theta0);
            let nu = PI / theta0;
            let k = first_zero(nu).unwrap().value / d;
            let f = |rho: f64, t: f64| bessel_j(nu, k * rho).unwrap().powi(2) * (nu * t).cos().powi(2);
            let (value, _) = adapt(&w, RadialMap::Cubic, 1e-12, f).unwrap();
            assert!((value - expected).abs() < 1e-9 * expected, "{value} vs {expected}");
            let high = QuadratureRule::with_map(&w, 400, 64, RadialMap::Cubic).integrate(f).unwrap();
            assert!((value - high).abs() < 1e-9 * expected);
        }
    }

    #[test]
    fn smooth_bump_converges_early() {
        let w = wedge(1.0, PI / 2.0);
        let bump = |rho: f64, t: f64| {
            let (x, y) = (rho * t.cos(), rho * t.sin());
            (-((x - 0.5).powi(2) + y * y) / 0.05).exp()
        };
        let (value, rule) = adapt(&w, RadialMap::Linear, 1e-10, bump).unwrap();
        assert!(rule.n_rho() <= 64);
        assert!((value - 0.152944774872577921).abs() < 1e-10);
    }

    #[test]
    fn steep_exponential_still_converges() {
        let w = wedge(10.0, PI / 2.0);
        let beta = 5.0;
        let mut history = Vec::new();
        for n in [32, 64, 128] {
            history.push(QuadratureRule::new(&w, n, n).integrate(|rho, _| (2.0 * beta * rho).exp()).unwrap());
        }
        let (value, _) = adapt(&w, RadialMap::Linear, 1e-10, |rho, _| (2.0 * beta * rho).exp()).unwrap();
        let exact = 4.1802596870355899404e43;
        assert!(((value - exact) / exact).abs() < 1e-10);
        assert!(history.iter().all(|v| ((v - exact) / exact).abs() < 1e-6));
    }

    #[test]
    fn rejects_bad_tolerance_and_non_finite_values() {
        let w = wedge(1.0, 1.0);
        assert!(matches!(adapt(&w, RadialMap::Linear, 0.0, |_, _| 1.0), Err(Error::Domain(_))));
        let err = QuadratureRule::new(&w, 4, 4).integrate(|rho, _| 1.0 / (rho - rho)).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn reports_non_convergence() {
        let w = wedge(1.0, 1.0);
        // rapidly oscillating in θ; no rule up to 512 resolves it
        let err = adapt(&w, RadialMap::Linear, 1e-14, |_, t| (4000.0 * t).cos()).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { nodes: 512, .. }));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

        #[test]
        fn deterministic_and_refinement_consistent(
            d in 0.5f64..10.0,
            theta0 in 0.1f64..6.0,
            a in -1.0f64..1.0,
        ) {
            let w = wedge(d, theta0);
            let f = |rho: f64, t: f64| (a * rho * t.cos()).exp() * (1.0 + rho * t.sin().powi(2));
            let (v1, _) = adapt(&w, RadialMap::Linear, 1e-8, f).unwrap();
            let (v1_again, _) = adapt(&w, RadialMap::Linear, 1e-8, f).unwrap();
            proptest::prop_assert_eq!(v1.to_bits(), v1_again.to_bits());
            let (v2, _) = adapt(&w, RadialMap::Linear, 1e-9, f).unwrap();
            proptest::prop_assert!((v1 - v2).abs() <= 10.0 * 1e-8 * v1.abs());
        }
    }
}
