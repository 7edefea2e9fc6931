//! Least-squares fit of a spectral projection on ℂ to
//! `Q_k(z) = Σ_p C_{k-p}^{p0} z^p φ_{k-p}^p(z) + Σ_q C_k^{0q} z̄^q φ_k^q(z)`.

use crate::error::{invalid, Result, TsmError};
use crate::special_functions::fill_laguerre_functions;
use crate::twisted::SampledField;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitOptions {
    /// Largest accepted condition number of the column-normalized design.
    pub condition_limit: f64,
    /// Every `holdout_every`-th sample is held out of the fit.
    pub holdout_every: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { condition_limit: 1e10, holdout_every: 4 }
    }
}

/// One term of the expansion. `Holomorphic(0)` and `AntiHolomorphic(0)` are
/// the same function, so only the former is fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "degree", rename_all = "snake_case")]
pub enum Sector {
    /// `z^p φ_{k-p}^p`.
    Holomorphic(usize),
    /// `z̄^q φ_k^q`.
    AntiHolomorphic(usize),
}

impl Sector {
    fn eval(self, k: usize, z: Complex64, lag: &mut [f64]) -> Complex64 {
        let rho = z.norm();
        match self {
            Sector::Holomorphic(p) => {
                fill_laguerre_functions(p, rho, &mut lag[..=k - p]);
                z.powu(p as u32) * lag[k - p]
            }
            Sector::AntiHolomorphic(q) => {
                fill_laguerre_functions(q, rho, &mut lag[..=k]);
                z.conj().powu(q as u32) * lag[k]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionExpansion {
    pub k: usize,
    /// `C_{k-p}^{p0}` for `p = 0..=k`; entry 0 is `C_k^{00}`.
    pub p_coefficients: Vec<[f64; 2]>,
    /// `C_k^{0q}` for `q = 1..=q_max`.
    pub q_coefficients: Vec<[f64; 2]>,
    /// Relative ℓ² residual on the fitted samples.
    pub residual: f64,
    /// Relative ℓ² prediction error on the held-out samples.
    pub holdout_error: f64,
    pub condition: f64,
}

impl ProjectionExpansion {
    fn sectors(&self) -> Vec<(Sector, Complex64)> {
        let c = |v: &[f64; 2]| Complex64::new(v[0], v[1]);
        let p = self.p_coefficients.iter().enumerate().map(|(p, v)| (Sector::Holomorphic(p), c(v)));
        let q = self.q_coefficients.iter().enumerate().map(|(q, v)| (Sector::AntiHolomorphic(q + 1), c(v)));
        p.chain(q).collect()
    }

    /// Evaluates the fitted expansion.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut lag = vec![0.0; self.k + 1];
        self.sectors().iter().map(|(s, c)| c * s.eval(self.k, z, &mut lag)).sum()
    }

    /// Sector carrying the largest share of `Σ|C|² ‖term‖²` on the fit grid,
    /// and that share. `None` when every coefficient vanishes.
    pub fn dominant_sector(&self, weights: &[f64]) -> Option<(Sector, f64)> {
        let energy: Vec<(Sector, f64)> =
            self.sectors().iter().zip(weights).map(|((s, c), w)| (*s, c.norm_sqr() * w * w)).collect();
        let total: f64 = energy.iter().map(|e| e.1).sum();
        if total == 0.0 {
            return None;
        }
        let best = energy.iter().copied().fold(energy[0], |a, b| if b.1 > a.1 { b } else { a });
        Some((best.0, best.1 / total))
    }
}

/// Result of [`fit_projection_expansion`] together with the column norms of
/// the design, needed by [`ProjectionExpansion::dominant_sector`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionFit {
    pub expansion: ProjectionExpansion,
    pub column_norms: Vec<f64>,
}

impl ExpansionFit {
    pub fn dominant_sector(&self) -> Option<(Sector, f64)> {
        self.expansion.dominant_sector(&self.column_norms)
    }
}

/// Fits the coefficients of `Q_k` from its grid samples.
///
/// Refuses to return coefficients when the column-normalized design has a
/// condition number above `options.condition_limit`.
pub fn fit_projection_expansion(qk: &SampledField, k: usize, q_max: usize, options: &FitOptions) -> Result<ExpansionFit> {
    if qk.grid().dim() != 1 {
        return Err(invalid("the expansion fit is defined on C"));
    }
    if options.holdout_every < 2 {
        return Err(invalid("holdout_every must be at least 2"));
    }
    let sectors: Vec<Sector> =
        (0..=k).map(Sector::Holomorphic).chain((1..=q_max).map(Sector::AntiHolomorphic)).collect();
    let grid = qk.grid();
    let mut fit_rows = Vec::new();
    let mut hold_rows = Vec::new();
    for i in 0..qk.len() {
        if i % options.holdout_every == options.holdout_every - 1 {
            hold_rows.push(i);
        } else {
            fit_rows.push(i);
        }
    }
    let mut lag = vec![0.0; k + 1];
    let mut z = [Complex64::default()];
    let mut design = |rows: &[usize]| {
        DMatrix::from_fn(rows.len(), sectors.len(), |r, c| {
            grid.write_point(rows[r], &mut z);
            sectors[c].eval(k, z[0], &mut lag)
        })
    };
    let a = design(&fit_rows);
    let h = design(&hold_rows);
    let b = DVector::from_iterator(fit_rows.len(), fit_rows.iter().map(|&i| qk.values()[i]));
    let bh = DVector::from_iterator(hold_rows.len(), hold_rows.iter().map(|&i| qk.values()[i]));
    let column_norms: Vec<f64> = (0..a.ncols()).map(|c| a.column(c).norm()).collect();
    if column_norms.contains(&0.0) {
        return Err(invalid("the fit grid does not resolve every sector"));
    }
    let mut an = a.clone();
    for (c, &n) in column_norms.iter().enumerate() {
        an.column_mut(c).unscale_mut(n);
    }
    let svd = an.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= options.condition_limit) {
        return Err(TsmError::IllConditioned { condition });
    }
    let bnorm = b.norm();
    let coeffs: Vec<Complex64> = if bnorm == 0.0 {
        vec![Complex64::default(); sectors.len()]
    } else {
        let y = svd.solve(&b, 0.0).map_err(|e| invalid(e.to_string()))?;
        y.iter().zip(&column_norms).map(|(v, n)| v / n).collect()
    };
    let x = DVector::from_column_slice(&coeffs);
    let rel = |m: &DMatrix<Complex64>, rhs: &DVector<Complex64>| {
        let e = (m * &x - rhs).norm();
        let r = rhs.norm();
        if r == 0.0 {
            e
        } else {
            e / r
        }
    };
    let residual = rel(&a, &b);
    let holdout_error = rel(&h, &bh);
    let to_pair = |c: &Complex64| [c.re, c.im];
    Ok(ExpansionFit {
        expansion: ProjectionExpansion {
            k,
            p_coefficients: coeffs[..=k].iter().map(to_pair).collect(),
            q_coefficients: coeffs[k + 1..].iter().map(to_pair).collect(),
            residual,
            holdout_error,
            condition,
        },
        column_norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid, UniformGrid};
    use crate::twisted::DecayClass;

    fn grid() -> Grid {
        Grid::Uniform(UniformGrid::square(1, 6.0, 41).unwrap())
    }

    #[test]
    fn zero_projection_gives_zero_coefficients() {
        let f = SampledField::zeros(grid());
        let fit = fit_projection_expansion(&f, 3, 2, &FitOptions::default()).unwrap();
        assert!(fit.expansion.p_coefficients.iter().chain(&fit.expansion.q_coefficients).all(|c| c == &[0.0, 0.0]));
        assert_eq!(fit.dominant_sector(), None);
    }

    #[test]
    fn synthetic_expansion_recovered() {
        let g = grid();
        let truth = ProjectionExpansion {
            k: 3,
            p_coefficients: vec![[0.0, 0.0], [0.0, 0.0], [1.5, -0.5], [0.0, 0.0]],
            q_coefficients: vec![[0.0, 0.0], [0.25, 0.0]],
            residual: 0.0,
            holdout_error: 0.0,
            condition: 1.0,
        };
        let values = (0..g.len()).map(|i| truth.eval(g.point(i)[0])).collect();
        let f = SampledField::new(g, values, DecayClass::SchwartzLike).unwrap();
        let fit = fit_projection_expansion(&f, 3, 2, &FitOptions::default()).unwrap();
        assert!(fit.expansion.holdout_error < 1e-12);
        let p2 = fit.expansion.p_coefficients[2];
        assert!((p2[0] - 1.5).abs() < 1e-12 && (p2[1] + 0.5).abs() < 1e-12);
        assert_eq!(fit.dominant_sector().unwrap().0, Sector::Holomorphic(2));
    }

    #[test]
    fn ill_conditioned_fit_refused() {
        // a single sample cannot separate the sectors
        let g = Grid::points(1, vec![Complex64::new(0.3, 0.1); 8]).unwrap();
        let f = SampledField::zeros(g);
        let opts = FitOptions { condition_limit: 1e6, ..Default::default() };
        assert!(matches!(fit_projection_expansion(&f, 2, 1, &opts), Err(TsmError::IllConditioned { .. })));
    }
}
