use num_complex::Complex64;
use std::f64::consts::PI;
use tsmlab::constants::sphere_product_constant;
use tsmlab::grid::{Grid, UniformGrid};
use tsmlab::quadrature::{circle_rule, plane_rule, radial_rule, PlaneOrders, SphereOrders, SphereRule};
use tsmlab::twisted::*;
use tsmlab::Exec;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn product_relation_on_c() {
    let rule = SphereRule::unit(1, &SphereOrders::default()).unwrap();
    for k in 0..=8 {
        let f = LaguerreField::new(1, k).unwrap();
        for &r in &[0.3, 1.0, 1.7, 2.5, 3.4] {
            for z in [c(0.0, 0.0), c(0.5, 0.0), c(-0.4, 1.1), c(1.5, -1.5), c(0.0, 2.8)] {
                let v = twisted_spherical_mean(&f, &[z], r, &rule).unwrap();
                let expect = sphere_product_constant(1, k) * f.radial(r) * f.radial(z.norm());
                assert!((v - expect).norm() <= 1e-8 * (1.0 + expect.abs()), "k={k} r={r} z={z}: {v} vs {expect}");
            }
        }
    }
}

#[test]
fn product_relation_on_c2() {
    let rule = SphereRule::unit(2, &SphereOrders::default()).unwrap();
    let mut worst: f64 = 0.0;
    for k in 0..=8 {
        let f = LaguerreField::new(2, k).unwrap();
        for &r in &[0.3, 1.0, 1.7, 2.5, 3.4] {
            for z in [[c(0.0, 0.0), c(0.0, 0.0)], [c(0.5, 0.2), c(-0.3, 0.1)], [c(1.0, -0.5), c(0.0, 1.2)], [c(-1.5, 0.0), c(0.8, 0.8)], [c(0.1, 2.0), c(-1.0, -0.4)]] {
                let v = twisted_spherical_mean(&f, &z, r, &rule).unwrap();
                let rho = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
                let expect = sphere_product_constant(2, k) * f.radial(r) * f.radial(rho);
                let e = (v - expect).norm() / (1.0 + expect.abs());
                worst = worst.max(e);
            }
        }
    }
    assert!(worst <= 1e-8, "worst {worst:e}");
}

#[test]
fn orthogonality_of_projections() {
    let rule = plane_rule(1, 12.0, &PlaneOrders::default(), 1e-10).unwrap();
    let probes = [c(0.0, 0.0), c(0.7, -0.3), c(-1.4, 2.0)];
    for k in 0..=4 {
        let fk = LaguerreField::new(1, k).unwrap();
        let s = RuleSamples::from_field(&fk, rule.clone(), Exec::Serial).unwrap();
        for m in 0..=4 {
            let fm = LaguerreField::new(1, m).unwrap();
            for z in probes {
                let v = s.convolve_at(&fm, &[z]).unwrap();
                let expect = if k == m { 2.0 * PI * fk.radial(z.norm()) } else { 0.0 };
                assert!((v - expect).norm() < 1e-8, "k={k} m={m} z={z}: {v}");
            }
        }
    }
}

#[test]
fn gaussian_expansion_reconstructs() {
    let grid = Grid::Uniform(UniformGrid::square(1, 8.0, 65).unwrap());
    let f = SampledField::sample(&GaussianField::new(1, 1.0 / 3.0).unwrap(), grid.clone(), Exec::default()).unwrap();
    let samples = RuleSamples::from_sampled(&f).unwrap();
    let qs = spectral_projections(&samples, 40, &grid, Exec::default()).unwrap();
    let trunc = SpectrumTruncation::from_projections(1, qs).unwrap();
    let errors = trunc.partial_errors(&f, Exec::default()).unwrap();
    assert!(errors[40] < 1e-6, "{:e}", errors[40]);
    for w in errors[..12].windows(2) {
        assert!(w[1] < w[0]);
    }
}

#[test]
fn polar_bridge_matches_projection() {
    let f = GaussianField::new(1, 1.0 / 3.0).unwrap();
    let sphere = circle_rule(1.0, 256).unwrap();
    let radial = radial_rule(1, 12.0, 64).unwrap();
    let plane = RuleSamples::from_field(&f, plane_rule(1, 12.0, &PlaneOrders::default(), 1e-10).unwrap(), Exec::Serial).unwrap();
    for z in [c(0.0, 0.0), c(0.5, 0.5), c(-1.0, 0.3), c(1.5, -1.2), c(0.0, -2.0)] {
        let profile = mean_profile_on_rule(&f, &[z], &radial, &sphere, Exec::default()).unwrap();
        let q = plane.projections_at(6, &[z]);
        for (k, &qk) in q.iter().enumerate().take(7) {
            let b = polar_bridge(&profile, k, 1).unwrap();
            assert!((b - qk).norm() < 1e-6, "z={z} k={k}: {b} vs {qk}");
        }
    }
}
