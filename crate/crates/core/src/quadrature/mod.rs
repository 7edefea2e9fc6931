//! Quadrature rules on spheres in ℂⁿ, radial half-lines and all of ℂⁿ.
//!
//! Sphere rules carry the normalized surface measure (weights sum to one).
//! Every constructor is a pure function of its arguments, so identical inputs
//! give bit-identical node and weight arrays.

mod finite_difference;
mod gauss_legendre;

pub use finite_difference::{central_weights, fornberg_weights};
pub use gauss_legendre::{gauss_legendre, gauss_legendre_interval};

use crate::constants::unit_sphere_area;
use crate::error::{invalid, Result, TsmError};
use crate::grid::UniformGrid;
use crate::summation::ComplexSum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Node counts of the product rule on S³: Gauss–Legendre in `θ`, uniform in
/// the two phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sphere3Orders {
    pub theta: usize,
    pub phi1: usize,
    pub phi2: usize,
}

impl Default for Sphere3Orders {
    fn default() -> Self {
        Self { theta: 16, phi1: 32, phi2: 32 }
    }
}

/// Angular resolution for sphere rules in ℂ¹ and ℂ².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereOrders {
    pub circle: usize,
    pub sphere3: Sphere3Orders,
}

impl Default for SphereOrders {
    fn default() -> Self {
        Self { circle: 256, sphere3: Sphere3Orders::default() }
    }
}

/// Nodes and normalized weights on the sphere `|w| = r` in ℂⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    n: usize,
    radius: f64,
    nodes: Vec<Complex64>,
    weights: Vec<f64>,
}

impl SphereRule {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    #[inline]
    pub fn node(&self, i: usize) -> &[Complex64] {
        &self.nodes[i * self.n..(i + 1) * self.n]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Unit-sphere rule for dimension `n` at the given resolution.
    pub fn unit(n: usize, orders: &SphereOrders) -> Result<Self> {
        match n {
            1 => circle_rule(1.0, orders.circle),
            2 => sphere3_rule(1.0, orders.sphere3),
            _ => Err(TsmError::UnsupportedDimension(n)),
        }
    }

    /// Same rule on the sphere of radius `r`.
    pub fn scaled(&self, r: f64) -> Result<Self> {
        check_radius(r)?;
        let factor = r / self.radius;
        Ok(Self {
            n: self.n,
            radius: r,
            nodes: self.nodes.iter().map(|w| w * factor).collect(),
            weights: self.weights.clone(),
        })
    }

    /// `∫ f dμ_r` with compensated summation in node order.
    pub fn integrate<F: FnMut(&[Complex64]) -> Complex64>(&self, mut f: F) -> Complex64 {
        let mut acc = ComplexSum::new();
        for i in 0..self.len() {
            acc.add(f(self.node(i)) * self.weights[i]);
        }
        acc.value()
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r.is_finite() && r > 0.0) {
        return Err(invalid(format!("sphere radius must be positive and finite, got {r}")));
    }
    Ok(())
}

/// `m` equispaced nodes on `|w| = r` in ℂ with weights `1/m`.
pub fn circle_rule(r: f64, m: usize) -> Result<SphereRule> {
    circle_rule_with_phase(r, m, 0.0)
}

/// Circle rule whose first node sits at angle `phase`.
///
/// Node `j` and node `m-j` are mirror images across the ray at `phase`.
pub fn circle_rule_with_phase(r: f64, m: usize, phase: f64) -> Result<SphereRule> {
    check_radius(r)?;
    if m < 4 {
        return Err(invalid(format!("circle rule needs at least 4 nodes, got {m}")));
    }
    let step = 2.0 * PI / m as f64;
    let nodes = (0..m)
        .map(|j| {
            // symmetric angle offsets so that node m-j is the exact mirror of node j
            let k = if 2 * j <= m { j as f64 } else { j as f64 - m as f64 };
            Complex64::from_polar(r, phase + k * step)
        })
        .collect();
    Ok(SphereRule { n: 1, radius: r, nodes, weights: vec![1.0 / m as f64; m] })
}

/// Product rule on `S³_r = {(r cosθ e^{iφ₁}, r sinθ e^{iφ₂})}`.
///
/// The normalized measure is `2 sinθ cosθ dθ dφ₁/2π dφ₂/2π`; with
/// `u = cos²θ` it is uniform in `u ∈ [0,1]`, which is where the
/// Gauss–Legendre nodes are placed (exact for polynomials in `|w₁|²` of
/// degree `< 2·theta`).
pub fn sphere3_rule(r: f64, orders: Sphere3Orders) -> Result<SphereRule> {
    check_radius(r)?;
    if orders.theta == 0 || orders.phi1 < 2 || orders.phi2 < 2 {
        return Err(invalid("S^3 rule needs theta >= 1 and phi orders >= 2"));
    }
    let (u, wu) = gauss_legendre_interval(orders.theta, 0.0, 1.0);
    let total = orders.theta * orders.phi1 * orders.phi2;
    let mut nodes = Vec::with_capacity(2 * total);
    let mut weights = Vec::with_capacity(total);
    let s1 = 2.0 * PI / orders.phi1 as f64;
    let s2 = 2.0 * PI / orders.phi2 as f64;
    let wphi = 1.0 / (orders.phi1 * orders.phi2) as f64;
    for (ui, wi) in u.iter().zip(&wu) {
        let a = r * ui.sqrt();
        let b = r * (1.0 - ui).sqrt();
        for j1 in 0..orders.phi1 {
            let e1 = Complex64::from_polar(a, j1 as f64 * s1);
            for j2 in 0..orders.phi2 {
                nodes.push(e1);
                nodes.push(Complex64::from_polar(b, j2 as f64 * s2));
                weights.push(wi * wphi);
            }
        }
    }
    Ok(SphereRule { n: 2, radius: r, nodes, weights })
}

/// Gauss–Legendre rule on `[0, r_max]` for radial integrals against
/// `r^{2n-1} dr`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialRule {
    n: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Plain Gauss–Legendre weights (no Jacobian).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn jacobian_power(&self) -> usize {
        2 * self.n - 1
    }

    /// Weights multiplied by `r^{2n-1}`.
    pub fn measure_weights(&self) -> Vec<f64> {
        let p = self.jacobian_power() as i32;
        self.nodes.iter().zip(&self.weights).map(|(r, w)| w * r.powi(p)).collect()
    }
}

pub fn radial_rule(n: usize, r_max: f64, count: usize) -> Result<RadialRule> {
    if n == 0 {
        return Err(invalid("dimension must be positive"));
    }
    if !(r_max.is_finite() && r_max > 0.0) || count == 0 {
        return Err(invalid("radial rule needs r_max > 0 and at least one node"));
    }
    let (nodes, weights) = gauss_legendre_interval(count, 0.0, r_max);
    Ok(RadialRule { n, nodes, weights })
}

/// Resolution of a polar rule over ℂⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneOrders {
    pub radial: usize,
    /// Circle nodes for `n = 1`.
    pub angular: usize,
    /// Sphere orders for `n = 2`.
    pub sphere3: Sphere3Orders,
}

impl Default for PlaneOrders {
    fn default() -> Self {
        Self { radial: 64, angular: 128, sphere3: Sphere3Orders::default() }
    }
}

/// Quadrature over (a truncation of) ℂⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneRule {
    n: usize,
    nodes: Vec<Complex64>,
    weights: Vec<f64>,
    /// Relative error of the rule on `∫ e^{-|z|²/2} dz = (2π)ⁿ`.
    moment_error: f64,
    source_grid: Option<UniformGrid>,
}

impl PlaneRule {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    #[inline]
    pub fn node(&self, i: usize) -> &[Complex64] {
        &self.nodes[i * self.n..(i + 1) * self.n]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn moment_error(&self) -> f64 {
        self.moment_error
    }

    /// The uniform grid this rule was built from, if any.
    pub fn source_grid(&self) -> Option<&UniformGrid> {
        self.source_grid.as_ref()
    }

    /// Trapezoidal rule on a uniform grid (cell-volume weights). Spectrally
    /// accurate for smooth integrands that decay inside the grid.
    pub fn from_grid(grid: &UniformGrid) -> Self {
        let len = grid.len();
        let mut nodes = vec![Complex64::default(); len * grid.n];
        for i in 0..len {
            grid.write_point(i, &mut nodes[i * grid.n..(i + 1) * grid.n]);
        }
        let weights = vec![grid.cell_volume(); len];
        let mut rule = Self { n: grid.n, nodes, weights, moment_error: 0.0, source_grid: Some(grid.clone()) };
        rule.moment_error = rule.gaussian_moment_error();
        rule
    }

    pub fn integrate<F: FnMut(&[Complex64]) -> Complex64>(&self, mut f: F) -> Complex64 {
        let mut acc = ComplexSum::new();
        for i in 0..self.len() {
            acc.add(f(self.node(i)) * self.weights[i]);
        }
        acc.value()
    }

    fn gaussian_moment_error(&self) -> f64 {
        let v = self.integrate(|z| {
            let s: f64 = z.iter().map(|c| c.norm_sqr()).sum();
            Complex64::new((-0.5 * s).exp(), 0.0)
        });
        let exact = (2.0 * PI).powi(self.n as i32);
        (v - exact).norm() / exact
    }
}

/// Polar rule over the ball `|z| ≤ r_max` in ℂⁿ, `n ∈ {1, 2}`.
///
/// Fails if the Gaussian moment `∫ e^{-|z|²/2}` misses `(2π)ⁿ` by more than
/// `tolerance` (relative).
pub fn plane_rule(n: usize, r_max: f64, orders: &PlaneOrders, tolerance: f64) -> Result<PlaneRule> {
    if !(1..=2).contains(&n) {
        return Err(TsmError::UnsupportedDimension(n));
    }
    // a single Laguerre factor decays like e^{-r²/4}
    if (-r_max * r_max / 4.0).exp() >= tolerance {
        log::warn!("plane rule: truncation radius {r_max} is short for tolerance {tolerance:e}");
    }
    let radial = radial_rule(n, r_max, orders.radial)?;
    let sphere = match n {
        1 => circle_rule(1.0, orders.angular)?,
        _ => sphere3_rule(1.0, orders.sphere3)?,
    };
    let area = unit_sphere_area(n);
    let mw = radial.measure_weights();
    let len = radial.nodes().len() * sphere.len();
    let mut nodes = Vec::with_capacity(len * n);
    let mut weights = Vec::with_capacity(len);
    for (r, w) in radial.nodes().iter().zip(&mw) {
        for j in 0..sphere.len() {
            nodes.extend(sphere.node(j).iter().map(|c| c * *r));
            weights.push(w * area * sphere.weights()[j]);
        }
    }
    let mut rule = PlaneRule { n, nodes, weights, moment_error: 0.0, source_grid: None };
    rule.moment_error = rule.gaussian_moment_error();
    if rule.moment_error > tolerance {
        return Err(TsmError::Quadrature(format!(
            "Gaussian moment error {:.3e} exceeds tolerance {:.3e} (n={n}, r_max={r_max}, radial={})",
            rule.moment_error, tolerance, orders.radial
        )));
    }
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_rule_basics() {
        let rule = circle_rule(2.5, 64).unwrap();
        assert!((rule.weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        for i in 0..rule.len() {
            assert!((rule.node(i)[0].norm() - 2.5).abs() <= 1e-12 * 2.5);
        }
        let mean_w = rule.integrate(|w| w[0]);
        assert!(mean_w.norm() < 1e-15);
        assert!(circle_rule(0.0, 16).is_err());
        assert!(circle_rule(1.0, 3).is_err());
    }

    #[test]
    fn phase_rule_mirror_symmetry() {
        let phase = 0.7;
        let rule = circle_rule_with_phase(1.3, 30, phase).unwrap();
        let axis = Complex64::from_polar(1.0, phase);
        for j in 1..30 {
            let a = rule.node(j)[0] / axis;
            let b = rule.node(30 - j)[0] / axis;
            assert!((a - b.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn sphere3_symmetry_and_second_moment() {
        let rule = sphere3_rule(1.0, Sphere3Orders::default()).unwrap();
        assert!((crate::summation::sum_f64(rule.weights().iter().copied()) - 1.0).abs() < 1e-14);
        for j in 1..4 {
            assert!(rule.integrate(|w| w[0].powu(j)).norm() < 1e-14);
        }
        let m2 = rule.integrate(|w| Complex64::new(w[0].norm_sqr(), 0.0));
        assert!((m2.re - 0.5).abs() < 1e-14);
        for i in (0..rule.len()).step_by(97) {
            let n: f64 = rule.node(i).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn plane_rule_gaussian_moments() {
        let r1 = plane_rule(1, 12.0, &PlaneOrders::default(), 1e-10).unwrap();
        assert!(r1.moment_error() < 1e-12);
        let r2 = plane_rule(2, 12.0, &PlaneOrders::default(), 1e-8).unwrap();
        assert!(r2.moment_error() < 1e-12);
        let tiny = PlaneOrders { radial: 4, ..PlaneOrders::default() };
        let err = plane_rule(1, 12.0, &tiny, 1e-10).unwrap_err();
        assert!(matches!(err, TsmError::Quadrature(_)));
    }

    #[test]
    fn radial_rule_gaussian_moments() {
        let rule = radial_rule(1, 12.0, 64).unwrap();
        for j in 0..=20 {
            let approx: f64 =
                rule.nodes().iter().zip(rule.weights()).map(|(r, w)| w * r.powi(j) * (-r * r / 2.0).exp()).sum();
            // ∫_0^∞ r^j e^{-r²/2} dr = 2^{(j-1)/2} Γ((j+1)/2)
            let exact = 2f64.powf((j as f64 - 1.0) / 2.0) * gamma_half_integer(j as usize + 1);
            assert!((approx - exact).abs() <= 1e-12 * exact, "j={j}");
        }
    }

    /// Γ(m/2) for positive integer m.
    fn gamma_half_integer(m: usize) -> f64 {
        if m == 1 {
            PI.sqrt()
        } else if m == 2 {
            1.0
        } else {
            (m as f64 / 2.0 - 1.0) * gamma_half_integer(m - 2)
        }
    }

    #[test]
    fn rules_are_deterministic() {
        let a = sphere3_rule(1.7, Sphere3Orders::default()).unwrap();
        let b = sphere3_rule(1.7, Sphere3Orders::default()).unwrap();
        assert_eq!(a, b);
    }
}
