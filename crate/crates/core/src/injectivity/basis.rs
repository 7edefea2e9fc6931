//! Truncated bases whose coefficients parametrize test functions.

use crate::error::{invalid, Result, TsmError};
use crate::euclidean::{EuclideanField, EuclideanTerm, Parity, RadialProfile};
use crate::quadrature::gauss_legendre_interval;
use crate::special_functions::{SpecialHermiteIndex, MAX_HERMITE_INDEX};
use crate::twisted::{DecayClass, HermiteCombination};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Dilation that puts `φ_{αβ}(s·z)` into the Gaussian-weighted class.
pub const WEIGHTED_SCALE: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisSpec {
    /// `φ_{αβ}(s·z)` on ℂ, `α, β ≤ max_index`.
    SpecialHermite { max_index: usize, scale: f64 },
    /// `φ_{α₁β₁}(s·z₁) φ_{α₂β₂}(s·z₂)` on ℂ² with `α₁+β₁+α₂+β₂ ≤ cap`.
    HermiteProduct { cap: usize, scale: f64 },
    /// `g_j(ρ) ρ^m {cos, sin}(mθ)`, `m ≤ max_order`, L²-normalized.
    Euclidean { profiles: Vec<RadialProfile>, max_order: u32 },
}

/// One basis function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Column {
    Hermite { index: SpecialHermiteIndex },
    Product { first: SpecialHermiteIndex, second: SpecialHermiteIndex },
    Euclidean { profile: usize, order: u32, parity: Parity },
}

impl Column {
    /// Laguerre eigenspace the column lies in (twisted bases only).
    pub fn spectral_degree(&self) -> Option<usize> {
        match self {
            Column::Hermite { index } => Some(index.alpha),
            Column::Product { first, second } => Some(first.alpha + second.alpha),
            Column::Euclidean { .. } => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Column::Hermite { index } => format!("phi[{},{}]", index.alpha, index.beta),
            Column::Product { first, second } => {
                format!("phi[{},{}]x phi[{},{}]", first.alpha, first.beta, second.alpha, second.beta)
            }
            Column::Euclidean { profile, order, parity } => {
                let p = match parity {
                    Parity::Cos => "cos",
                    Parity::Sin => "sin",
                };
                format!("g{profile}*{p}({order})")
            }
        }
    }
}

impl BasisSpec {
    pub fn dimension(&self) -> usize {
        match self {
            BasisSpec::SpecialHermite { .. } | BasisSpec::Euclidean { .. } => 1,
            BasisSpec::HermiteProduct { .. } => 2,
        }
    }

    pub fn is_twisted(&self) -> bool {
        !matches!(self, BasisSpec::Euclidean { .. })
    }

    pub fn truncation(&self) -> usize {
        match self {
            BasisSpec::SpecialHermite { max_index, .. } => *max_index,
            BasisSpec::HermiteProduct { cap, .. } => *cap,
            BasisSpec::Euclidean { max_order, .. } => *max_order as usize,
        }
    }

    pub fn with_truncation(&self, k: usize) -> BasisSpec {
        let mut out = self.clone();
        match &mut out {
            BasisSpec::SpecialHermite { max_index, .. } => *max_index = k,
            BasisSpec::HermiteProduct { cap, .. } => *cap = k,
            BasisSpec::Euclidean { max_order, .. } => *max_order = k as u32,
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BasisSpec::SpecialHermite { max_index, scale } | BasisSpec::HermiteProduct { cap: max_index, scale } => {
                if *max_index > MAX_HERMITE_INDEX {
                    return Err(invalid(format!("basis truncation {max_index} exceeds {MAX_HERMITE_INDEX}")));
                }
                if !(scale.is_finite() && *scale > 0.0) {
                    return Err(invalid("basis dilation must be positive"));
                }
            }
            BasisSpec::Euclidean { profiles, .. } => {
                if profiles.is_empty() {
                    return Err(invalid("the Euclidean basis needs at least one radial profile"));
                }
                for p in profiles {
                    p.validate()?;
                    if matches!(p, RadialProfile::Constant) {
                        return Err(invalid("constant radial profiles are not square integrable"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn decay_class(&self) -> DecayClass {
        match self {
            BasisSpec::SpecialHermite { scale, .. } | BasisSpec::HermiteProduct { scale, .. } if *scale > 1.0 => {
                DecayClass::GaussianQuarterWeighted
            }
            _ => DecayClass::SchwartzLike,
        }
    }

    pub fn label(&self) -> String {
        match self {
            BasisSpec::SpecialHermite { max_index, scale } => format!("special_hermite(K={max_index},s={scale})"),
            BasisSpec::HermiteProduct { cap, scale } => format!("hermite_product(cap={cap},s={scale})"),
            BasisSpec::Euclidean { profiles, max_order } => format!(
                "euclidean(K={max_order},profiles=[{}])",
                profiles.iter().map(|p| p.label()).collect::<Vec<_>>().join(",")
            ),
        }
    }

    /// Columns in a fixed order: `(α, β)` with `α` outer; products
    /// lexicographic in `(α₁, β₁, α₂, β₂)`; Euclidean by profile, order,
    /// then cos before sin.
    pub fn columns(&self) -> Vec<Column> {
        match self {
            BasisSpec::SpecialHermite { max_index, .. } => (0..=*max_index)
                .flat_map(|a| (0..=*max_index).map(move |b| Column::Hermite { index: SpecialHermiteIndex::new(a, b) }))
                .collect(),
            BasisSpec::HermiteProduct { cap, .. } => {
                let cap = *cap;
                let mut out = Vec::new();
                for a1 in 0..=cap {
                    for b1 in 0..=cap - a1 {
                        for a2 in 0..=cap - a1 - b1 {
                            for b2 in 0..=cap - a1 - b1 - a2 {
                                out.push(Column::Product {
                                    first: SpecialHermiteIndex::new(a1, b1),
                                    second: SpecialHermiteIndex::new(a2, b2),
                                });
                            }
                        }
                    }
                }
                out
            }
            BasisSpec::Euclidean { profiles, max_order } => {
                let mut out = Vec::new();
                for profile in 0..profiles.len() {
                    for order in 0..=*max_order {
                        out.push(Column::Euclidean { profile, order, parity: Parity::Cos });
                        if order > 0 {
                            out.push(Column::Euclidean { profile, order, parity: Parity::Sin });
                        }
                    }
                }
                out
            }
        }
    }

    /// Largest special Hermite index appearing in the columns.
    pub fn max_hermite_index(&self) -> usize {
        self.truncation()
    }

    pub fn scale(&self) -> f64 {
        match self {
            BasisSpec::SpecialHermite { scale, .. } | BasisSpec::HermiteProduct { scale, .. } => *scale,
            BasisSpec::Euclidean { .. } => 1.0,
        }
    }

    /// L² norms of the unnormalized Euclidean columns `g(ρ) ρ^m trig(mθ)`.
    pub fn euclidean_norms(&self) -> Result<Vec<f64>> {
        let BasisSpec::Euclidean { profiles, .. } = self else {
            return Err(invalid("norms are defined for the Euclidean basis"));
        };
        Ok(self
            .columns()
            .iter()
            .map(|c| match c {
                Column::Euclidean { profile, order, .. } => euclidean_norm(&profiles[*profile], *order),
                _ => unreachable!(),
            })
            .collect())
    }

    /// The twisted field `Σ c_b b`.
    pub fn twisted_field(&self, coeffs: &[Complex64]) -> Result<HermiteCombination> {
        let cols = self.columns();
        if coeffs.len() != cols.len() {
            return Err(invalid("coefficient vector length does not match the basis"));
        }
        let terms = cols
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| **c != Complex64::default())
            .map(|(col, c)| match col {
                Column::Hermite { index } => Ok((vec![*index], *c)),
                Column::Product { first, second } => Ok((vec![*first, *second], *c)),
                Column::Euclidean { .. } => Err(invalid("Euclidean columns have no twisted field")),
            })
            .collect::<Result<Vec<_>>>()?;
        HermiteCombination::new(self.dimension(), self.scale(), terms)
    }

    /// The real Euclidean field `Σ Re(c_b) b` with normalized columns.
    pub fn euclidean_field(&self, coeffs: &[Complex64]) -> Result<EuclideanField> {
        let BasisSpec::Euclidean { profiles, .. } = self else {
            return Err(invalid("not a Euclidean basis"));
        };
        let norms = self.euclidean_norms()?;
        let cols = self.columns();
        if coeffs.len() != cols.len() {
            return Err(invalid("coefficient vector length does not match the basis"));
        }
        let terms = cols
            .iter()
            .zip(coeffs)
            .zip(&norms)
            .filter(|((_, c), _)| c.re != 0.0)
            .map(|((col, c), nrm)| match col {
                Column::Euclidean { profile, order, parity } => EuclideanTerm {
                    profile: profiles[*profile],
                    order: *order,
                    parity: *parity,
                    coeff: c.re / nrm,
                },
                _ => unreachable!(),
            })
            .collect();
        EuclideanField::analytic(terms)
    }

    /// Coefficients of an analytic Euclidean field whose terms all match
    /// basis columns, in normalized-column units.
    pub fn euclidean_coefficients(&self, f: &EuclideanField) -> Result<Vec<Complex64>> {
        let (BasisSpec::Euclidean { profiles, .. }, EuclideanField::Analytic(terms)) = (self, f) else {
            return Err(invalid("expected a Euclidean basis and an analytic field"));
        };
        let norms = self.euclidean_norms()?;
        let cols = self.columns();
        let mut v = vec![Complex64::default(); cols.len()];
        for t in terms {
            let pos = cols
                .iter()
                .position(|c| match c {
                    Column::Euclidean { profile, order, parity } => {
                        profiles[*profile] == t.profile && *order == t.order && *parity == t.parity
                    }
                    _ => false,
                })
                .ok_or_else(|| TsmError::InvalidArgument(format!("term of order {} is not in the basis", t.order)))?;
            v[pos] += Complex64::new(t.coeff * norms[pos], 0.0);
        }
        Ok(v)
    }
}

fn euclidean_norm(profile: &RadialProfile, order: u32) -> f64 {
    let (x, w) = gauss_legendre_interval(200, 0.0, profile.support_radius());
    let radial: f64 = x.iter().zip(&w).map(|(r, wi)| wi * (profile.eval(*r) * r.powi(order as i32)).powi(2) * r).sum();
    let angular = if order == 0 { 2.0 * PI } else { PI };
    (radial * angular).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_counts() {
        assert_eq!(BasisSpec::SpecialHermite { max_index: 10, scale: 1.0 }.columns().len(), 121);
        // compositions of at most 4 into 4 parts
        assert_eq!(BasisSpec::HermiteProduct { cap: 4, scale: 1.0 }.columns().len(), 70);
        let e = BasisSpec::Euclidean { profiles: vec![RadialProfile::Gaussian { scale: 1.0 }; 2], max_order: 3 };
        assert_eq!(e.columns().len(), 14);
    }

    #[test]
    fn euclidean_norm_of_gaussian() {
        // ∫ e^{-2ρ²} ρ dρ = 1/4, angular 2π
        let n = euclidean_norm(&RadialProfile::Gaussian { scale: 1.0 }, 0);
        assert!((n - (PI / 2.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn coefficient_roundtrip() {
        let basis = BasisSpec::Euclidean { profiles: vec![RadialProfile::Gaussian { scale: 0.8 }], max_order: 4 };
        let f = crate::euclidean::coxeter_odd_counterexample(3, RadialProfile::Gaussian { scale: 0.8 }).unwrap();
        let v = basis.euclidean_coefficients(&f).unwrap();
        assert_eq!(v.iter().filter(|c| c.norm() > 0.0).count(), 1);
        let back = basis.euclidean_field(&v).unwrap();
        let x = Complex64::new(0.3, 0.7);
        assert!((back.eval(x).unwrap() - f.eval(x).unwrap()).abs() < 1e-15);
    }
}
