//! Vanishing sets of twisted spherical means of type functions
//! `e^{-a|z|²} P(z)`, `P` a bigraded solid harmonic.

use crate::error::{invalid, Result};
use crate::exec::Exec;
use crate::grid::Grid;
use crate::quadrature::{SphereOrders, SphereRule};
use crate::special_functions::SolidHarmonic;
use crate::twisted::{twisted_spherical_mean, Field, SampledField, TypeField};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct TypeFunctionSpec {
    /// Radial profile `ã(ρ) = e^{-aρ²}`.
    pub a: f64,
    pub harmonic: SolidHarmonic,
}

impl TypeFunctionSpec {
    pub fn field(&self) -> Result<TypeField> {
        if self.harmonic.is_zero() {
            return Err(invalid("the solid harmonic is identically zero"));
        }
        TypeField::new(self.a, &self.harmonic)
    }

    /// `max |f|`: the maximum of `|P|` on the unit sphere (sampled on a
    /// sphere rule) times `max_ρ ρ^d e^{-aρ²}`.
    pub fn max_abs(&self, orders: &SphereOrders) -> Result<f64> {
        let (p, q) = self.harmonic.bidegree();
        let d = (p + q) as f64;
        let rule = SphereRule::unit(self.harmonic.dimension(), orders)?;
        let sphere_max = (0..rule.len()).map(|i| self.harmonic.evaluate(rule.node(i)).norm()).fold(0.0, f64::max);
        let radial = if d == 0.0 { 1.0 } else { (d / (2.0 * self.a)).powf(0.5 * d) * (-0.5 * d).exp() };
        Ok(sphere_max * radial)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub center: [[f64; 2]; 3],
    /// `max_i |f×μ_{r_i}(z)|`.
    pub max_mean_abs: f64,
    /// `|P(z)| ≤ 1e-12 · (1 + |z|)^d`.
    pub on_zero_set: bool,
    /// `max_mean_abs ≤ tolerance · max|f|`.
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingSetReport {
    pub schema_version: u32,
    pub n: usize,
    pub harmonic: String,
    pub a: f64,
    pub radii: Vec<f64>,
    pub max_abs_f: f64,
    pub tolerance: f64,
    pub points: Vec<ScanPoint>,
    /// Radii `|z|` of scanned vanishing points off `P⁻¹(0)`, which can only
    /// lie on the exceptional spheres.
    pub candidate_sphere_radii: Vec<f64>,
    /// Every scanned point of `P⁻¹(0)` vanishes.
    pub contract_holds: bool,
}

impl VanishingSetReport {
    /// Largest `max_mean_abs / max|f|` over points on `P⁻¹(0)`.
    pub fn worst_on_zero_set(&self) -> f64 {
        self.points.iter().filter(|p| p.on_zero_set).map(|p| p.max_mean_abs / self.max_abs_f).fold(0.0, f64::max)
    }

    /// Smallest `max_mean_abs / max|f|` over points off `P⁻¹(0)`.
    pub fn floor_off_zero_set(&self) -> f64 {
        self.points
            .iter()
            .filter(|p| !p.on_zero_set)
            .map(|p| p.max_mean_abs / self.max_abs_f)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Builds `f = ã(|z|) P(z)`, scans `max_r |f×μ_r|` over `centers` and
/// reports the detected vanishing locus.
///
/// Returns `f` sampled at the scanned centers alongside the report.
pub fn hecke_bochner_counterexample(
    spec: &TypeFunctionSpec,
    centers: &[Vec<Complex64>],
    radii: &[f64],
    orders: &SphereOrders,
    tolerance: f64,
    exec: Exec,
) -> Result<(SampledField, VanishingSetReport)> {
    let f = spec.field()?;
    let n = f.dim();
    if centers.iter().any(|c| c.len() != n) {
        return Err(invalid(format!("scan centers must lie in C^{n}")));
    }
    if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(invalid("scan radii must be positive"));
    }
    let rule = SphereRule::unit(n, orders)?;
    let max_abs_f = spec.max_abs(orders)?;
    let (p, q) = spec.harmonic.bidegree();
    let d = (p + q) as i32;
    let maxima = exec.try_map(centers.len(), |j| {
        let mut m = 0.0f64;
        for &r in radii {
            m = m.max(twisted_spherical_mean(&f, &centers[j], r, &rule)?.norm());
        }
        Ok::<_, crate::error::TsmError>(m)
    })?;
    let mut points = Vec::with_capacity(centers.len());
    let mut candidate_sphere_radii = Vec::new();
    for (c, &m) in centers.iter().zip(&maxima) {
        let size = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let on_zero_set = spec.harmonic.evaluate(c).norm() <= 1e-12 * (1.0 + size).powi(d);
        let vanishes = m <= tolerance * max_abs_f;
        if vanishes && !on_zero_set {
            candidate_sphere_radii.push(size);
        }
        let mut center = [[0.0; 2]; 3];
        for (slot, x) in center.iter_mut().zip(c) {
            *slot = [x.re, x.im];
        }
        points.push(ScanPoint { center, max_mean_abs: m, on_zero_set, vanishes });
    }
    candidate_sphere_radii.sort_by(f64::total_cmp);
    candidate_sphere_radii.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
    let contract_holds = points.iter().filter(|p| p.on_zero_set).all(|p| p.vanishes);
    let grid = Grid::points(n, centers.iter().flatten().copied().collect())?;
    let sampled = SampledField::sample(&f, grid, exec)?;
    let report = VanishingSetReport {
        schema_version: 1,
        n,
        harmonic: spec.harmonic.describe(),
        a: spec.a,
        radii: radii.to_vec(),
        max_abs_f,
        tolerance,
        points,
        candidate_sphere_radii,
        contract_holds,
    };
    Ok((sampled, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::TsmError;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn holomorphic_linear_vanishes_at_origin() {
        let spec = TypeFunctionSpec { a: 0.25, harmonic: SolidHarmonic::monomial(vec![1], vec![0]).unwrap() };
        let radii = [0.3, 1.0, 2.5];
        let (_, report) = hecke_bochner_counterexample(
            &spec,
            &[vec![c(0.0, 0.0)], vec![c(0.8, -0.3)]],
            &radii,
            &SphereOrders::default(),
            1e-10,
            Exec::Serial,
        )
        .unwrap();
        assert!(report.points[0].on_zero_set && report.points[0].vanishes);
        assert!(!report.points[1].on_zero_set && !report.points[1].vanishes);
        assert!(report.contract_holds);
    }

    #[test]
    fn max_abs_of_linear_profile() {
        // ρ e^{-ρ²/4} peaks at ρ = √2
        let spec = TypeFunctionSpec { a: 0.25, harmonic: SolidHarmonic::monomial(vec![1], vec![0]).unwrap() };
        let expect = 2f64.sqrt() * (-0.5f64).exp();
        assert!((spec.max_abs(&SphereOrders::default()).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn non_decaying_profile_rejected() {
        let spec = TypeFunctionSpec { a: 0.0, harmonic: SolidHarmonic::monomial(vec![1], vec![0]).unwrap() };
        let err = hecke_bochner_counterexample(&spec, &[], &[1.0], &SphereOrders::default(), 1e-8, Exec::Serial);
        assert!(matches!(err, Err(TsmError::Decay(_))));
    }
}
