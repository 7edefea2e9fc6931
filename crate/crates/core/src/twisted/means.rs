//! Twisted spherical means `f×μ_r(z) = ∫_{|w|=r} f(z-w) e^{(i/2) Im(z·w̄)} dμ_r(w)`
//! and twisted translation of sampled fields.

use super::field::{twist, Field};
use super::sampled::{fmt_f64, SampledField};
use crate::error::{invalid, Result, TsmError};
use crate::exec::Exec;
use crate::grid::{Grid, MAX_DIM};
use crate::quadrature::{RadialRule, SphereRule};
use crate::summation::{ComplexSum, NeumaierSum};
use num_complex::Complex64;
use std::io::Write;

/// Twisted spherical mean of `f` at center `z` and radius `r`, using the
/// unit-sphere rule `rule` scaled to radius `r`. `r = 0` returns `f(z)`.
pub fn twisted_spherical_mean<F: Field + ?Sized>(f: &F, z: &[Complex64], r: f64, rule: &SphereRule) -> Result<Complex64> {
    let n = f.dim();
    if z.len() != n || rule.dimension() != n {
        return Err(invalid(format!(
            "center in C^{}, field on C^{n}, sphere rule in C^{}",
            z.len(),
            rule.dimension()
        )));
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(invalid(format!("radius must be finite and nonnegative, got {r}")));
    }
    if r == 0.0 {
        return f.eval(z);
    }
    let scale = r / rule.radius();
    let mut acc = ComplexSum::new();
    let mut w = [Complex64::default(); MAX_DIM];
    let mut arg = [Complex64::default(); MAX_DIM];
    for i in 0..rule.len() {
        for (j, node) in rule.node(i).iter().enumerate() {
            w[j] = node * scale;
            arg[j] = z[j] - w[j];
        }
        let v = f.eval(&arg[..n])?;
        acc.add(v * twist(z, &w[..n]) * rule.weights()[i]);
    }
    Ok(acc.value())
}

/// `f×μ_{r_i}(z)` over a radius grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanProfile {
    pub center: Vec<Complex64>,
    pub radii: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Quadrature weights for `∫ · dr` when the radii are the nodes of a
    /// [`RadialRule`].
    pub radial_weights: Option<Vec<f64>>,
}

impl MeanProfile {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// CSV with columns `r, re, im`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["r", "re", "im"])?;
        for (r, v) in self.radii.iter().zip(&self.values) {
            w.write_record([fmt_f64(*r), fmt_f64(v.re), fmt_f64(v.im)])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(invalid("radii must be finite and nonnegative"));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("radii must be strictly increasing"));
    }
    Ok(())
}

/// Batches [`twisted_spherical_mean`] over `radii`.
pub fn mean_profile<F: Field + ?Sized>(f: &F, z: &[Complex64], radii: &[f64], rule: &SphereRule, exec: Exec) -> Result<MeanProfile> {
    check_radii(radii)?;
    let values = exec.try_map(radii.len(), |i| twisted_spherical_mean(f, z, radii[i], rule))?;
    Ok(MeanProfile { center: z.to_vec(), radii: radii.to_vec(), values, radial_weights: None })
}

/// Profile sampled at the nodes of `radial`, ready for [`super::polar_bridge`].
pub fn mean_profile_on_rule<F: Field + ?Sized>(
    f: &F,
    z: &[Complex64],
    radial: &RadialRule,
    rule: &SphereRule,
    exec: Exec,
) -> Result<MeanProfile> {
    let mut p = mean_profile(f, z, radial.nodes(), rule, exec)?;
    p.radial_weights = Some(radial.weights().to_vec());
    Ok(p)
}

/// Result of [`twisted_translate`].
#[derive(Debug, Clone)]
pub struct Translated {
    pub field: SampledField,
    /// Fraction of `‖f‖²` whose translate falls outside the grid.
    pub off_grid_mass: f64,
}

/// `τ_η f(ξ) = f(ξ-η) e^{(i/2) Im(η·ξ̄)}` on the grid of `f`, with `f(ξ-η)`
/// interpolated and set to zero where `ξ-η` leaves the grid. Logs a warning
/// if the relative mass pushed off the grid exceeds `tolerance`.
pub fn twisted_translate(f: &SampledField, eta: &[Complex64], tolerance: f64, exec: Exec) -> Result<Translated> {
    let n = f.dim();
    if eta.len() != n {
        return Err(invalid("translation vector dimension does not match the field"));
    }
    let grid = match f.grid() {
        Grid::Uniform(g) => g.clone(),
        Grid::Points { .. } => return Err(TsmError::GridMismatch("twisted translation needs a uniform grid".into())),
    };
    let values = exec.try_map(f.len(), |i| {
        let mut xi = [Complex64::default(); MAX_DIM];
        grid.write_point(i, &mut xi);
        let mut src = [Complex64::default(); MAX_DIM];
        for j in 0..n {
            src[j] = xi[j] - eta[j];
        }
        Ok::<_, TsmError>(f.interpolate_or_zero(&src[..n])? * twist(eta, &xi[..n]))
    })?;
    // mass of samples whose image ξ = x + η leaves the grid box
    let mut lost = NeumaierSum::new();
    let mut total = NeumaierSum::new();
    let mut x = [Complex64::default(); MAX_DIM];
    for (i, v) in f.values().iter().enumerate() {
        grid.write_point(i, &mut x);
        let m = v.norm_sqr();
        total.add(m);
        let inside = (0..n).all(|j| {
            let p = x[j] + eta[j];
            let tol = 1e-9 * grid.spacing;
            p.re >= grid.lo[2 * j] - tol
                && p.re <= grid.upper(2 * j) + tol
                && p.im >= grid.lo[2 * j + 1] - tol
                && p.im <= grid.upper(2 * j + 1) + tol
        });
        if !inside {
            lost.add(m);
        }
    }
    let off_grid_mass = if total.value() > 0.0 { lost.value() / total.value() } else { 0.0 };
    if off_grid_mass > tolerance {
        log::warn!("twisted translate moves {off_grid_mass:.3e} of the mass off the grid");
    }
    Ok(Translated { field: f.with_values(values)?, off_grid_mass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::UniformGrid;
    use crate::quadrature::{circle_rule, SphereOrders};
    use crate::twisted::field::{FnField, GaussianField, LaguerreField};

    #[test]
    fn ground_state_mean_at_origin() {
        let rule = circle_rule(1.0, 64).unwrap();
        let f = LaguerreField::new(1, 0).unwrap();
        for &r in &[0.0, 0.5, 2.0] {
            let v = twisted_spherical_mean(&f, &[Complex64::default()], r, &rule).unwrap();
            assert!((v.re - (-r * r / 4.0).exp()).abs() < 1e-15 && v.im.abs() < 1e-16);
        }
        let s3 = SphereRule::unit(2, &SphereOrders::default()).unwrap();
        let f2 = LaguerreField::new(2, 0).unwrap();
        let v = twisted_spherical_mean(&f2, &[Complex64::default(); 2], 1.5, &s3).unwrap();
        assert!((v.re - (-1.5f64 * 1.5 / 4.0).exp()).abs() < 1e-14);
    }

    #[test]
    fn odd_field_vanishes_at_origin() {
        let rule = circle_rule(1.0, 256).unwrap();
        let f = FnField::new(1, |z: &[Complex64]| z[0] * (-z[0].norm_sqr()).exp());
        for &r in &[0.3, 1.0, 2.7] {
            assert!(twisted_spherical_mean(&f, &[Complex64::default()], r, &rule).unwrap().norm() < 1e-13);
        }
    }

    #[test]
    fn profile_validation() {
        let rule = circle_rule(1.0, 16).unwrap();
        let f = GaussianField::new(1, 1.0).unwrap();
        assert!(mean_profile(&f, &[Complex64::default()], &[1.0, 0.5], &rule, Exec::Serial).is_err());
        assert!(twisted_spherical_mean(&f, &[Complex64::default()], -1.0, &rule).is_err());
    }

    #[test]
    fn sampled_translate_identity_and_magnitude() {
        let grid = Grid::Uniform(UniformGrid::square(1, 6.0, 61).unwrap());
        let g = GaussianField::new(1, 0.5).unwrap();
        let f = SampledField::sample(&g, grid, Exec::Serial).unwrap();
        let same = twisted_translate(&f, &[Complex64::default()], 1e-12, Exec::Serial).unwrap();
        assert_eq!(same.field.values(), f.values());
        assert_eq!(same.off_grid_mass, 0.0);
        let eta = [Complex64::new(0.6, -0.4)];
        let t = twisted_translate(&f, &eta, 1e-12, Exec::Serial).unwrap();
        for i in (0..f.len()).step_by(37) {
            let x = f.grid().point(i);
            let expect = g.eval(&[x[0] - eta[0]]).unwrap().norm();
            assert!((t.field.values()[i].norm() - expect).abs() < 1e-6);
        }
        let far = twisted_translate(&f, &[Complex64::new(5.0, 0.0)], 1e-12, Exec::Serial).unwrap();
        assert!(far.off_grid_mass > 0.01);
    }
}
