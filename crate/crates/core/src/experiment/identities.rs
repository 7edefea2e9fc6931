//! The identity suite behind `verify-identities`.

use super::checks::CheckResult;
use super::config::{ExperimentConfig, IdentitiesConfig};
use crate::constants::sphere_product_constant;
use crate::error::Result;
use crate::exec::Exec;
use crate::grid::{Grid, UniformGrid};
use crate::injectivity::{assemble_operator, degree_block_structure, make_set, BasisSpec, Engine, OperatorConfig, SetKind};
use crate::quadrature::{circle_rule, plane_rule, radial_rule, PlaneOrders, SphereRule};
use crate::special_functions::{radial_eigen_residual, RadialStencil, SolidHarmonic};
use crate::twisted::{
    eigen_residual, mean_profile_on_rule, polar_bridge, relative_distance, spectral_projections, sum_pieces,
    tensor_decompose_projection, twisted_spherical_mean, Field, GaussianField, LaguerreField, LinearCombination,
    RuleSamples, SampledField, SpectrumTruncation, TypeField,
};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Five probe centers in ℂⁿ, `n ≤ 2`, starting with the origin.
pub fn probe_centers(n: usize) -> Vec<Vec<Complex64>> {
    let one = [c(0.0, 0.0), c(0.5, 0.0), c(-0.4, 1.1), c(1.5, -1.5), c(0.0, 2.8)];
    let two = [
        [c(0.0, 0.0), c(0.0, 0.0)],
        [c(0.5, 0.2), c(-0.3, 0.1)],
        [c(1.0, -0.5), c(0.0, 1.2)],
        [c(-1.5, 0.0), c(0.8, 0.8)],
        [c(0.1, 2.0), c(-1.0, -0.4)],
    ];
    match n {
        1 => one.iter().map(|z| vec![*z]).collect(),
        _ => two.iter().map(|z| z.to_vec()).collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenRecord {
    pub n: usize,
    pub k: usize,
    pub grid: &'static str,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WorstRecord {
    pub n: usize,
    pub worst: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroProfileRecord {
    pub example: &'static str,
    pub profile_max: f64,
    pub projection_max: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct IdentityReport {
    pub schema_version: u32,
    pub eigen: Vec<EigenRecord>,
    pub product_relation: Vec<WorstRecord>,
    pub expansion_partial_errors: Vec<f64>,
    pub orthogonality_worst: f64,
    pub polar_bridge_worst: f64,
    pub zero_profile: Vec<ZeroProfileRecord>,
    pub tensor_errors: Vec<f64>,
    pub degree_block_off_mass: f64,
}

/// Eigenfunction residuals on a Cartesian grid (ℂ) and on a radial grid
/// (every requested `n`).
pub fn eigen_suite(cfg: &IdentitiesConfig, exec: Exec, report: &mut IdentityReport) -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    if cfg.dimensions.contains(&1) {
        let grid = Grid::Uniform(UniformGrid::square(1, cfg.eigen_extent, cfg.eigen_points)?);
        for k in 0..=cfg.eigen_k_max {
            let f = SampledField::sample(&LaguerreField::new(1, k)?, grid.clone(), exec)?;
            let residual = eigen_residual(&f, (2 * k + 1) as f64, cfg.eigen_half_width)?;
            worst = worst.max(residual);
            report.eigen.push(EigenRecord { n: 1, k, grid: "cartesian", residual });
        }
    }
    for &n in &cfg.dimensions {
        for k in 0..=cfg.eigen_k_max {
            let residual = radial_eigen_residual(k, n, RadialStencil::default())?;
            worst = worst.max(residual);
            report.eigen.push(EigenRecord { n, k, grid: "radial", residual });
        }
    }
    Ok(CheckResult::at_most("identities.eigen", worst, cfg.eigen_tolerance, "worst relative residual"))
}

pub fn product_relation(cfg: &ExperimentConfig, report: &mut IdentityReport) -> Result<CheckResult> {
    let ic = &cfg.identities;
    let mut worst_all: f64 = 0.0;
    for &n in &ic.dimensions {
        let rule = SphereRule::unit(n, &cfg.quadrature.sphere_orders())?;
        let mut worst: f64 = 0.0;
        for k in 0..=ic.product_k_max {
            let f = LaguerreField::new(n, k)?;
            for &r in &ic.product_radii {
                for z in probe_centers(n) {
                    let v = twisted_spherical_mean(&f, &z, r, &rule)?;
                    let rho = z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                    let expect = sphere_product_constant(n, k) * f.radial(r) * f.radial(rho);
                    worst = worst.max((v - expect).norm() / (1.0 + expect.abs()));
                }
            }
        }
        report.product_relation.push(WorstRecord { n, worst });
        worst_all = worst_all.max(worst);
    }
    Ok(CheckResult::at_most(
        "identities.product_relation",
        worst_all,
        ic.product_tolerance,
        "worst |φ×μ_r - Bφφ| / (1 + |Bφφ|)",
    ))
}

pub fn expansion(cfg: &IdentitiesConfig, exec: Exec, report: &mut IdentityReport) -> Result<CheckResult> {
    let grid = Grid::Uniform(UniformGrid::square(1, cfg.expansion_extent, cfg.expansion_points)?);
    let f = SampledField::sample(&GaussianField::new(1, cfg.expansion_a)?, grid.clone(), exec)?;
    let samples = RuleSamples::from_sampled(&f)?;
    let qs = spectral_projections(&samples, cfg.expansion_k_max, &grid, exec)?;
    let errors = SpectrumTruncation::from_projections(1, qs)?.partial_errors(&f, exec)?;
    let last = *errors.last().expect("at least one partial sum");
    report.expansion_partial_errors = errors;
    Ok(CheckResult::at_most("identities.expansion", last, cfg.expansion_tolerance, "relative grid-ℓ² error of the partial sum"))
}

pub fn orthogonality(cfg: &ExperimentConfig, exec: Exec, report: &mut IdentityReport) -> Result<CheckResult> {
    let ic = &cfg.identities;
    let q = &cfg.quadrature;
    let rule = plane_rule(1, q.plane_r_max, &q.plane_orders(), q.moment_tolerance)?;
    let probes = [c(0.0, 0.0), c(0.7, -0.3), c(-1.4, 2.0)];
    let mut worst: f64 = 0.0;
    for k in 0..=ic.orthogonality_k_max {
        let fk = LaguerreField::new(1, k)?;
        let s = RuleSamples::from_field(&fk, rule.clone(), exec)?;
        for m in 0..=ic.orthogonality_k_max {
            let fm = LaguerreField::new(1, m)?;
            for z in probes {
                let v = s.convolve_at(&fm, &[z])?;
                let expect = if k == m { 2.0 * PI * fk.radial(z.norm()) } else { 0.0 };
                worst = worst.max((v - expect).norm());
            }
        }
    }
    report.orthogonality_worst = worst;
    Ok(CheckResult::at_most("identities.orthogonality", worst, ic.orthogonality_tolerance, "worst |φ_k×φ_m - 2π δ φ_k|"))
}

pub fn polar_bridge_suite(cfg: &ExperimentConfig, exec: Exec, report: &mut IdentityReport) -> Result<[CheckResult; 2]> {
    let ic = &cfg.identities;
    let q = &cfg.quadrature;
    let sphere = circle_rule(1.0, q.circle_nodes)?;
    let radial = radial_rule(1, q.plane_r_max, ic.polar_radial_nodes)?;
    let plane = plane_rule(1, q.plane_r_max, &q.plane_orders(), q.moment_tolerance)?;
    let f = GaussianField::new(1, 1.0 / 3.0)?;
    let samples = RuleSamples::from_field(&f, plane.clone(), exec)?;
    let mut worst: f64 = 0.0;
    for z in [c(0.0, 0.0), c(0.5, 0.5), c(-1.0, 0.3), c(1.5, -1.2), c(0.0, -2.0)] {
        let profile = mean_profile_on_rule(&f, &[z], &radial, &sphere, exec)?;
        let proj = samples.projections_at(ic.polar_k_max, &[z]);
        for (k, p) in proj.iter().enumerate() {
            worst = worst.max((polar_bridge(&profile, k, 1)? - p).norm());
        }
    }
    report.polar_bridge_worst = worst;
    let bridge = CheckResult::at_most("identities.polar_bridge", worst, ic.polar_tolerance, "worst |bridge - Q_k(z)|");

    // e^{-|z|²/3} z has a vanishing profile at the origin; the Gaussian does not
    let odd = TypeField::new(1.0 / 3.0, &SolidHarmonic::monomial(vec![1], vec![0])?)?;
    let mut consistent = true;
    let origin = [c(0.0, 0.0)];
    for (example, field) in [("odd_at_origin", &odd as &dyn Field), ("gaussian_at_origin", &f as &dyn Field)] {
        let profile = mean_profile_on_rule(field, &origin, &radial, &sphere, exec)?;
        let s = RuleSamples::from_field(field, plane.clone(), exec)?;
        let projection_max = s.projections_at(ic.polar_k_max, &origin).iter().map(|v| v.norm()).fold(0.0, f64::max);
        let profile_max = profile.max_abs();
        let zero_profile = profile_max <= 1e-12;
        let zero_projection = projection_max <= ic.polar_tolerance;
        let ok = zero_profile == zero_projection && (example == "odd_at_origin") == zero_profile;
        consistent &= ok;
        report.zero_profile.push(ZeroProfileRecord { example, profile_max, projection_max, consistent: ok });
    }
    let zero = CheckResult::at_least(
        "identities.zero_profile",
        if consistent { 1.0 } else { 0.0 },
        1.0,
        "vanishing and non-vanishing examples agree with their projections",
    );
    Ok([bridge, zero])
}

/// A field on ℂ² that is not a product of functions of `z₁` and `z₂`.
pub fn tensor_test_field() -> Result<LinearCombination> {
    let g: Box<dyn Field> = Box::new(GaussianField::new(2, 0.3)?);
    let t: Box<dyn Field> = Box::new(TypeField::new(0.3, &SolidHarmonic::monomial(vec![1, 0], vec![0, 1])?)?);
    LinearCombination::new(vec![(c(1.0, 0.0), g), (c(0.5, 0.2), t)])
}

pub fn tensor_diagonal(cfg: &ExperimentConfig, exec: Exec, report: &mut IdentityReport) -> Result<CheckResult> {
    let ic = &cfg.identities;
    let q = &cfg.quadrature;
    let f = tensor_test_field()?;
    let z1 = [c(0.0, 0.0), c(0.5, -0.3), c(-1.0, 0.8)];
    let z2 = [c(0.2, 0.0), c(-0.6, 0.4), c(1.1, 1.0)];
    let full = RuleSamples::from_field(&f, plane_rule(2, q.plane_r_max, &q.plane_orders(), q.moment_tolerance)?, exec)?;
    let slot_orders = PlaneOrders { radial: ic.tensor_radial, angular: ic.tensor_angular, ..q.plane_orders() };
    let rule1 = plane_rule(1, ic.tensor_r_max, &slot_orders, q.moment_tolerance)?;
    let mut worst: f64 = 0.0;
    for k in 0..=ic.tensor_k_max {
        let pieces = tensor_decompose_projection(&f, k, &rule1, &z1, &z2, exec)?;
        let total = sum_pieces(&pieces)?;
        let reference: Vec<Complex64> =
            z1.iter().flat_map(|&a| z2.iter().map(move |&b| (a, b))).map(|(a, b)| full.projections_at(k, &[a, b])[k]).collect();
        let e = relative_distance(total.values(), &reference);
        report.tensor_errors.push(e);
        worst = worst.max(e);
    }
    Ok(CheckResult::at_most("identities.tensor_diagonal", worst, ic.tensor_tolerance, "worst relative ℓ² error of Σ pieces vs Q_k"))
}

pub fn degree_blocks(cfg: &ExperimentConfig, exec: Exec, report: &mut IdentityReport) -> Result<CheckResult> {
    let ic = &cfg.identities;
    if !ic.dimensions.contains(&2) {
        return Ok(CheckResult::skipped("identities.degree_blocks", "needs dimension 2"));
    }
    let rr = radial_rule(2, ic.block_r_max, ic.block_radial_nodes)?;
    let set = make_set(
        SetKind::PlaneCrossCoxeter { n: 2, half_lines: 1, extent: 2.0, per_ray: 2, plane_extent: 1.0, plane_points: 2 },
        rr.nodes().to_vec(),
    )?;
    let basis = BasisSpec::HermiteProduct { cap: ic.block_cap, scale: 1.0 };
    let op_cfg = OperatorConfig { sphere: cfg.quadrature.sphere_orders(), ..Default::default() };
    let op = assemble_operator(&set, &basis, Engine::Twisted, &op_cfg, exec)?;
    let blocks = degree_block_structure(&op, rr.weights())?;
    let off = blocks.relative_off_block();
    report.degree_block_off_mass = off;
    Ok(CheckResult::at_most("identities.degree_blocks", off, ic.block_tolerance, "off-block share of the squared mass"))
}

