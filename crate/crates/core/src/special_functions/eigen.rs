//! Finite-difference check that `φ_k^{n-1}` is an eigenfunction of
//! `A = -Δ + |z|²/4` with eigenvalue `2k + n`.
//!
//! For a radial function `Δf = f'' + (2n-1) f'/ρ`, and `Δf(0) = 2n f''(0)`.
//! Samples on `ρ_j = j h` are extended evenly across the origin so centered
//! stencils apply down to `ρ = 0`.

use super::laguerre::{laguerre_function_unchecked, LaguerreSpec};
use crate::error::{invalid, Result};
use crate::quadrature::central_weights;
use crate::summation::NeumaierSum;

/// Radial grid and stencil for [`radial_eigen_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialStencil {
    pub spacing: f64,
    pub rho_max: f64,
    pub half_width: usize,
}

impl Default for RadialStencil {
    fn default() -> Self {
        Self { spacing: 0.02, rho_max: 24.0, half_width: 5 }
    }
}

/// `‖Aφ_k - (2k+n)φ_k‖ / ‖φ_k‖` on the interior of the radial grid, in the
/// `ℓ²` norm weighted by `ρ^{2n-1}`.
pub fn radial_eigen_residual(k: usize, n: usize, stencil: RadialStencil) -> Result<f64> {
    if n == 0 {
        return Err(invalid("dimension must be positive"));
    }
    let h = stencil.spacing;
    let hw = stencil.half_width;
    if !(h > 0.0) || hw == 0 {
        return Err(invalid("stencil needs positive spacing and half width"));
    }
    let count = (stencil.rho_max / h).round() as usize + 1;
    if count <= 2 * hw {
        return Err(invalid("radial grid too short for the stencil"));
    }
    let spec = LaguerreSpec::new(k, n - 1);
    let values: Vec<f64> = (0..count).map(|j| laguerre_function_unchecked(spec, j as f64 * h)).collect();
    let at = |j: isize| values[j.unsigned_abs()];
    let (first, second) = central_weights(hw);
    let lambda = (2 * k + n) as f64;
    let p = (2 * n - 1) as i32;
    let mut num = NeumaierSum::new();
    let mut den = NeumaierSum::new();
    for j in 0..count - hw {
        let rho = j as f64 * h;
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for s in 0..=2 * hw {
            let v = at(j as isize + s as isize - hw as isize);
            d1 += first[s] * v;
            d2 += second[s] * v;
        }
        d1 /= h;
        d2 /= h * h;
        let lap = if j == 0 { 2.0 * n as f64 * d2 } else { d2 + (2 * n - 1) as f64 * d1 / rho };
        let residual = -lap + 0.25 * rho * rho * values[j] - lambda * values[j];
        let w = if j == 0 { 0.0 } else { rho.powi(p) };
        num.add(w * residual * residual);
        den.add(w * values[j] * values[j]);
    }
    Ok((num.value() / den.value()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degrees_are_eigenfunctions() {
        for n in 1..=2 {
            for k in [0, 1, 5] {
                let r = radial_eigen_residual(k, n, RadialStencil::default()).unwrap();
                assert!(r < 1e-8, "n={n} k={k}: {r}");
            }
        }
    }

    #[test]
    fn invalid_stencils_rejected() {
        assert!(radial_eigen_residual(1, 0, RadialStencil::default()).is_err());
        let short = RadialStencil { spacing: 1.0, rho_max: 3.0, half_width: 5 };
        assert!(radial_eigen_residual(1, 1, short).is_err());
    }
}
