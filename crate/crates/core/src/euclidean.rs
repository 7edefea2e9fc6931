//! Euclidean circular means on ℝ² ≅ ℂ and the odd-function counterexamples
//! on Coxeter line systems.
//!
//! A Coxeter system `Σ_N` is the union of the `N` lines `{t e^{iπl/N}}`. The
//! function `g(|x|) Im((x₁+ix₂)^N)` is odd with respect to every one of those
//! lines, so all of its circular means centered on `Σ_N` vanish.

use crate::error::{invalid, Result, TsmError};
use crate::exec::Exec;
use crate::grid::Grid;
use crate::quadrature::circle_rule_with_phase;
use crate::summation::NeumaierSum;
use crate::twisted::{fmt_f64, DecayClass, SampledField};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

/// Radial factor `g(ρ)` of a Euclidean test function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialProfile {
    /// `exp(-(ρ/scale)²)`.
    Gaussian { scale: f64 },
    /// `exp(-1/(1-(ρ/radius)²))` for `ρ < radius`, zero outside.
    Bump { radius: f64 },
    /// `g ≡ 1`.
    Constant,
}

impl Default for RadialProfile {
    fn default() -> Self {
        RadialProfile::Bump { radius: 1.0 }
    }
}

impl RadialProfile {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RadialProfile::Gaussian { scale: s } | RadialProfile::Bump { radius: s } if !(s.is_finite() && s > 0.0) => {
                Err(invalid(format!("radial profile parameter must be positive, got {s}")))
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, rho: f64) -> f64 {
        match *self {
            RadialProfile::Gaussian { scale } => (-(rho / scale).powi(2)).exp(),
            RadialProfile::Bump { radius } => {
                let t = rho / radius;
                if t < 1.0 {
                    (-1.0 / (1.0 - t * t)).exp()
                } else {
                    0.0
                }
            }
            RadialProfile::Constant => 1.0,
        }
    }

    /// Radius beyond which `g` is zero (or below `1e-17`).
    pub fn support_radius(&self) -> f64 {
        match *self {
            RadialProfile::Gaussian { scale } => 6.3 * scale,
            RadialProfile::Bump { radius } => radius,
            RadialProfile::Constant => f64::INFINITY,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            RadialProfile::Gaussian { scale } => format!("gaussian({scale})"),
            RadialProfile::Bump { radius } => format!("bump({radius})"),
            RadialProfile::Constant => "constant".into(),
        }
    }
}

/// `cos(mθ)` or `sin(mθ)` angular factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Cos,
    Sin,
}

/// `coeff · g(|x|) · Re or Im((x₁+ix₂)^m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclideanTerm {
    pub profile: RadialProfile,
    pub order: u32,
    pub parity: Parity,
    pub coeff: f64,
}

impl EuclideanTerm {
    pub fn eval(&self, x: Complex64) -> f64 {
        let g = self.profile.eval(x.norm());
        if g == 0.0 {
            return 0.0;
        }
        let p = x.powu(self.order);
        let a = match self.parity {
            Parity::Cos => p.re,
            Parity::Sin => p.im,
        };
        self.coeff * g * a
    }
}

/// A real function on ℝ², analytic or sampled.
#[derive(Debug, Clone, PartialEq)]
pub enum EuclideanField {
    Analytic(Vec<EuclideanTerm>),
    /// Real parts of samples on a uniform grid in ℂ, interpolated.
    Sampled { samples: SampledField, support_radius: f64 },
}

impl EuclideanField {
    pub fn analytic(terms: Vec<EuclideanTerm>) -> Result<Self> {
        for t in &terms {
            t.profile.validate()?;
        }
        Ok(EuclideanField::Analytic(terms))
    }

    pub fn eval(&self, x: Complex64) -> Result<f64> {
        match self {
            EuclideanField::Analytic(terms) => Ok(terms.iter().map(|t| t.eval(x)).sum()),
            EuclideanField::Sampled { samples, .. } => Ok(samples.interpolate(&[x])?.re),
        }
    }

    pub fn support_radius(&self) -> f64 {
        match self {
            EuclideanField::Analytic(terms) => terms.iter().map(|t| t.profile.support_radius()).fold(0.0, f64::max),
            EuclideanField::Sampled { support_radius, .. } => *support_radius,
        }
    }

    /// Samples an analytic field on a uniform grid.
    pub fn sample(&self, grid: Grid) -> Result<Self> {
        if grid.dim() != 1 || !matches!(grid, Grid::Uniform(_)) {
            return Err(TsmError::GridMismatch("Euclidean fields are sampled on a uniform grid in C".into()));
        }
        let values = (0..grid.len()).map(|i| self.eval(grid.point(i)[0]).map(|v| Complex64::new(v, 0.0))).collect::<Result<Vec<_>>>()?;
        Ok(EuclideanField::Sampled {
            samples: SampledField::new(grid, values, DecayClass::SchwartzLike)?,
            support_radius: self.support_radius(),
        })
    }

    /// `max |f|` on a polar grid covering the support (exact for sampled fields).
    pub fn max_abs(&self) -> Result<f64> {
        match self {
            EuclideanField::Sampled { samples, .. } => Ok(samples.max_abs()),
            EuclideanField::Analytic(_) => {
                let r_max = self.support_radius().min(50.0);
                let mut best = 0.0f64;
                for i in 0..=400 {
                    let rho = r_max * i as f64 / 400.0;
                    for j in 0..720 {
                        let x = Complex64::from_polar(rho, 2.0 * PI * j as f64 / 720.0);
                        best = best.max(self.eval(x)?.abs());
                    }
                }
                Ok(best)
            }
        }
    }
}

/// Default circle nodes for Euclidean means.
pub const DEFAULT_CIRCLE_NODES: usize = 256;

/// `(1/2π) ∫ f(x + r e^{iθ}) dθ` with `m` equispaced nodes.
///
/// The nodes start on the ray from the origin through `x`, so for centers on
/// a line through the origin the node set is symmetric under reflection in
/// that line.
pub fn circular_mean(f: &EuclideanField, x: Complex64, r: f64, m: usize) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(invalid(format!("circle radius must be positive, got {r}")));
    }
    let phase = if x == Complex64::default() { 0.0 } else { x.arg() };
    let rule = circle_rule_with_phase(r, m, phase)?;
    let mut acc = NeumaierSum::new();
    for i in 0..rule.len() {
        acc.add(f.eval(x + rule.node(i)[0])? * rule.weights()[i]);
    }
    Ok(acc.value())
}

/// One row of a mean table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEntry {
    pub center: Complex64,
    pub radius: f64,
    pub value: f64,
}

/// Circular means for every `(center, radius)` pair, centers outer.
pub fn circular_mean_table(f: &EuclideanField, centers: &[Complex64], radii: &[f64], m: usize, exec: Exec) -> Result<Vec<MeanEntry>> {
    let nr = radii.len();
    exec.try_map(centers.len() * nr, |idx| {
        let (c, r) = (centers[idx / nr], radii[idx % nr]);
        Ok(MeanEntry { center: c, radius: r, value: circular_mean(f, c, r, m)? })
    })
}

/// CSV with columns `center_re, center_im, r, value`.
pub fn write_mean_table<W: Write>(entries: &[MeanEntry], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["center_re", "center_im", "r", "value"])?;
    for e in entries {
        w.write_record([fmt_f64(e.center.re), fmt_f64(e.center.im), fmt_f64(e.radius), fmt_f64(e.value)])?;
    }
    w.flush()?;
    Ok(())
}

/// `g(|x|) Im((x₁+ix₂)^N)`, odd with respect to every line of `Σ_N`.
pub fn coxeter_odd_counterexample(lines: u32, profile: RadialProfile) -> Result<EuclideanField> {
    if lines == 0 {
        return Err(invalid("a Coxeter system needs at least one line"));
    }
    EuclideanField::analytic(vec![EuclideanTerm { profile, order: lines, parity: Parity::Sin, coeff: 1.0 }])
}

/// Distance from `x` to the nearest line of `Σ_N`.
pub fn distance_to_coxeter(lines: u32, x: Complex64) -> f64 {
    (0..lines)
        .map(|l| {
            let dir = Complex64::from_polar(1.0, PI * l as f64 / lines as f64);
            (x * dir.conj()).im.abs()
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::UniformGrid;

    #[test]
    fn constant_field_mean_is_one() {
        let f = EuclideanField::analytic(vec![EuclideanTerm {
            profile: RadialProfile::Constant,
            order: 0,
            parity: Parity::Cos,
            coeff: 1.0,
        }])
        .unwrap();
        let v = circular_mean(&f, Complex64::new(0.2, 0.1), 0.05, 64).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn counterexample_is_odd_across_each_line() {
        for n in 1..=4 {
            let f = coxeter_odd_counterexample(n, RadialProfile::default()).unwrap();
            for l in 0..n {
                let dir = Complex64::from_polar(1.0, PI * l as f64 / n as f64);
                let x = Complex64::new(0.31, 0.42);
                let mirrored = dir * dir * x.conj();
                assert!((f.eval(x).unwrap() + f.eval(mirrored).unwrap()).abs() < 1e-15);
            }
            assert!(f.max_abs().unwrap() > 0.0);
        }
        assert!(coxeter_odd_counterexample(0, RadialProfile::default()).is_err());
    }

    #[test]
    fn first_counterexample_is_profile_times_x2() {
        let f = coxeter_odd_counterexample(1, RadialProfile::Gaussian { scale: 1.0 }).unwrap();
        let x = Complex64::new(0.4, -0.7);
        assert!((f.eval(x).unwrap() - (-x.norm_sqr()).exp() * x.im).abs() < 1e-16);
    }

    #[test]
    fn sampled_field_interpolates_and_reports_domain() {
        let f = coxeter_odd_counterexample(2, RadialProfile::Gaussian { scale: 1.0 }).unwrap();
        let s = f.sample(Grid::Uniform(UniformGrid::square(1, 3.0, 121).unwrap())).unwrap();
        let x = Complex64::new(0.33, 0.21);
        assert!((s.eval(x).unwrap() - f.eval(x).unwrap()).abs() < 1e-7);
        assert!(circular_mean(&s, Complex64::new(2.5, 0.0), 1.0, 64).is_err());
    }

    #[test]
    fn distance_to_lines() {
        assert!(distance_to_coxeter(2, Complex64::new(0.0, 3.0)) < 1e-15);
        assert!((distance_to_coxeter(1, Complex64::new(1.0, 2.0)) - 2.0).abs() < 1e-15);
    }
}
