//! Functions on ℂⁿ that can be evaluated pointwise.

use crate::error::{invalid, Result};
use crate::grid::MAX_DIM;
use crate::special_functions::{
    laguerre_function_unchecked, special_hermite_basis, special_hermite_table, LaguerreSpec, Monomial,
    SolidHarmonic, SpecialHermiteIndex, MAX_HERMITE_INDEX,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Which decay hypothesis a test function is meant to satisfy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayClass {
    /// Smooth with rapid decay.
    #[default]
    SchwartzLike,
    /// `|f(z)| e^{|z|²/4}` bounded.
    GaussianQuarterWeighted,
}

impl DecayClass {
    pub fn name(self) -> &'static str {
        match self {
            DecayClass::SchwartzLike => "schwartz_like",
            DecayClass::GaussianQuarterWeighted => "gaussian_quarter_weighted",
        }
    }
}

/// A complex-valued function on ℂⁿ.
pub trait Field: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, z: &[Complex64]) -> Result<Complex64>;

    fn decay_class(&self) -> DecayClass {
        DecayClass::SchwartzLike
    }
}

impl<F: Field + ?Sized> Field for &F {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        (**self).eval(z)
    }
    fn decay_class(&self) -> DecayClass {
        (**self).decay_class()
    }
}

impl<F: Field + ?Sized> Field for Box<F> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        (**self).eval(z)
    }
    fn decay_class(&self) -> DecayClass {
        (**self).decay_class()
    }
}

impl<F: Field + ?Sized> Field for Arc<F> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        (**self).eval(z)
    }
    fn decay_class(&self) -> DecayClass {
        (**self).decay_class()
    }
}

pub(crate) fn norm_sqr(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum()
}

/// `Im(z·w̄) = Σ Im(z_j conj(w_j))`.
#[inline]
pub(crate) fn symplectic(z: &[Complex64], w: &[Complex64]) -> f64 {
    z.iter().zip(w).map(|(a, b)| a.im * b.re - a.re * b.im).sum()
}

/// `e^{(i/2) Im(z·w̄)}`.
#[inline]
pub(crate) fn twist(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    Complex64::from_polar(1.0, 0.5 * symplectic(z, w))
}

fn check_dim(expected: usize, z: &[Complex64]) -> Result<()> {
    if z.len() != expected {
        return Err(invalid(format!("expected a point in C^{expected}, got {} coordinates", z.len())));
    }
    Ok(())
}

/// The radial Laguerre function `φ_k^{n-1}` on ℂⁿ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreField {
    pub n: usize,
    pub k: usize,
}

impl LaguerreField {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(invalid(format!("dimension must be in 1..={MAX_DIM}")));
        }
        Ok(Self { n, k })
    }

    pub fn radial(&self, rho: f64) -> f64 {
        laguerre_function_unchecked(LaguerreSpec::new(self.k, self.n - 1), rho)
    }
}

impl Field for LaguerreField {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        check_dim(self.n, z)?;
        Ok(Complex64::new(self.radial(norm_sqr(z).sqrt()), 0.0))
    }
}

/// Finite linear combination of (possibly dilated) special Hermite
/// functions on ℂ or tensor products of them on ℂ².
///
/// Each term is `c · Π_j φ_{α_j β_j}(s·z_j)`. With `s > 1` the functions
/// satisfy the Gaussian-weighted decay hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteCombination {
    n: usize,
    scale: f64,
    max_index: usize,
    terms: Vec<(Vec<SpecialHermiteIndex>, Complex64)>,
}

impl HermiteCombination {
    pub fn new(n: usize, scale: f64, terms: Vec<(Vec<SpecialHermiteIndex>, Complex64)>) -> Result<Self> {
        if !(1..=2).contains(&n) {
            return Err(invalid(format!("special Hermite combinations support n in 1..=2, got {n}")));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(invalid("dilation must be positive"));
        }
        let mut max_index = 0;
        for (idx, _) in &terms {
            if idx.len() != n {
                return Err(invalid("each term needs one index pair per coordinate"));
            }
            for i in idx {
                max_index = max_index.max(i.alpha).max(i.beta);
            }
        }
        if max_index > MAX_HERMITE_INDEX {
            return Err(invalid(format!("special Hermite index {max_index} exceeds {MAX_HERMITE_INDEX}")));
        }
        Ok(Self { n, scale, max_index, terms })
    }

    pub fn single(idx: SpecialHermiteIndex) -> Self {
        Self { n: 1, scale: 1.0, max_index: idx.alpha.max(idx.beta), terms: vec![(vec![idx], Complex64::new(1.0, 0.0))] }
    }

    pub fn terms(&self) -> &[(Vec<SpecialHermiteIndex>, Complex64)] {
        &self.terms
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

impl Field for HermiteCombination {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        check_dim(self.n, z)?;
        if self.terms.len() == 1 && self.n == 1 {
            let (idx, c) = &self.terms[0];
            return Ok(c * special_hermite_basis(idx[0], z[0] * self.scale));
        }
        let stride = self.max_index + 1;
        let mut tables = vec![Complex64::default(); self.n * stride * stride];
        for j in 0..self.n {
            special_hermite_table(self.max_index, z[j] * self.scale, &mut tables[j * stride * stride..]);
        }
        let mut acc = Complex64::default();
        for (idx, c) in &self.terms {
            let mut v = *c;
            for (j, i) in idx.iter().enumerate() {
                v *= tables[j * stride * stride + i.alpha * stride + i.beta];
            }
            acc += v;
        }
        Ok(acc)
    }

    fn decay_class(&self) -> DecayClass {
        if self.scale > 1.0 {
            DecayClass::GaussianQuarterWeighted
        } else {
            DecayClass::SchwartzLike
        }
    }
}

/// `amplitude · e^{-a|z-c|²}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianField {
    pub n: usize,
    pub a: f64,
    pub center: Vec<Complex64>,
    pub amplitude: Complex64,
}

impl GaussianField {
    pub fn new(n: usize, a: f64) -> Result<Self> {
        Self::shifted(vec![Complex64::default(); n], a)
    }

    pub fn shifted(center: Vec<Complex64>, a: f64) -> Result<Self> {
        let n = center.len();
        if n == 0 || n > MAX_DIM {
            return Err(invalid(format!("dimension must be in 1..={MAX_DIM}")));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(invalid(format!("Gaussian exponent must be positive, got {a}")));
        }
        Ok(Self { n, a, center, amplitude: Complex64::new(1.0, 0.0) })
    }
}

impl Field for GaussianField {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        check_dim(self.n, z)?;
        let d: f64 = z.iter().zip(&self.center).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok(self.amplitude * (-self.a * d).exp())
    }
    fn decay_class(&self) -> DecayClass {
        if self.a > 0.25 {
            DecayClass::GaussianQuarterWeighted
        } else {
            DecayClass::SchwartzLike
        }
    }
}

/// Type function `e^{-a|z|²} P(z)` with `P` a bigraded solid harmonic.
#[derive(Debug, Clone)]
pub struct TypeField {
    n: usize,
    a: f64,
    terms: Vec<(Monomial, Complex64)>,
}

impl TypeField {
    pub fn new(a: f64, harmonic: &SolidHarmonic) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(crate::error::TsmError::Decay(format!(
                "radial profile exp(-{a} rho^2) does not decay"
            )));
        }
        Ok(Self { n: harmonic.dimension(), a, terms: harmonic.float_terms() })
    }

    pub fn polynomial(&self, z: &[Complex64]) -> Complex64 {
        self.terms.iter().map(|(m, c)| c * m.evaluate(z)).sum()
    }

    pub fn radial(&self, rho: f64) -> f64 {
        (-self.a * rho * rho).exp()
    }
}

impl Field for TypeField {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        check_dim(self.n, z)?;
        Ok(self.polynomial(z) * (-self.a * norm_sqr(z)).exp())
    }
    fn decay_class(&self) -> DecayClass {
        if self.a > 0.25 {
            DecayClass::GaussianQuarterWeighted
        } else {
            DecayClass::SchwartzLike
        }
    }
}

/// Wraps a closure as a [`Field`].
pub struct FnField<F> {
    n: usize,
    decay: DecayClass,
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(&[Complex64]) -> Complex64 + Send + Sync,
{
    pub fn new(n: usize, f: F) -> Self {
        Self { n, decay: DecayClass::SchwartzLike, f }
    }

    pub fn with_decay(mut self, decay: DecayClass) -> Self {
        self.decay = decay;
        self
    }
}

impl<F> Field for FnField<F>
where
    F: Fn(&[Complex64]) -> Complex64 + Send + Sync,
{
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        check_dim(self.n, z)?;
        Ok((self.f)(z))
    }
    fn decay_class(&self) -> DecayClass {
        self.decay
    }
}

/// Left twisted translate `τ_η f(ξ) = f(ξ-η) e^{(i/2) Im(η·ξ̄)}`.
pub struct TwistedTranslate<F> {
    inner: F,
    eta: Vec<Complex64>,
}

impl<F: Field> TwistedTranslate<F> {
    pub fn new(inner: F, eta: Vec<Complex64>) -> Result<Self> {
        check_dim(inner.dim(), &eta)?;
        Ok(Self { inner, eta })
    }
}

impl<F: Field> Field for TwistedTranslate<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, xi: &[Complex64]) -> Result<Complex64> {
        check_dim(self.dim(), xi)?;
        let mut shifted = [Complex64::default(); MAX_DIM];
        for j in 0..xi.len() {
            shifted[j] = xi[j] - self.eta[j];
        }
        Ok(self.inner.eval(&shifted[..xi.len()])? * twist(&self.eta, xi))
    }
    fn decay_class(&self) -> DecayClass {
        self.inner.decay_class()
    }
}

/// `Σ c_i f_i`.
pub struct LinearCombination {
    n: usize,
    terms: Vec<(Complex64, Box<dyn Field>)>,
}

impl LinearCombination {
    pub fn new(terms: Vec<(Complex64, Box<dyn Field>)>) -> Result<Self> {
        let n = terms.first().map(|(_, f)| f.dim()).ok_or_else(|| invalid("empty combination"))?;
        if terms.iter().any(|(_, f)| f.dim() != n) {
            return Err(invalid("combined fields must share a dimension"));
        }
        Ok(Self { n, terms })
    }
}

impl Field for LinearCombination {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        let mut acc = Complex64::default();
        for (c, f) in &self.terms {
            acc += c * f.eval(z)?;
        }
        Ok(acc)
    }
    fn decay_class(&self) -> DecayClass {
        if self.terms.iter().all(|(_, f)| f.decay_class() == DecayClass::GaussianQuarterWeighted) {
            DecayClass::GaussianQuarterWeighted
        } else {
            DecayClass::SchwartzLike
        }
    }
}

/// `g(z_1) h(z_2)` on ℂ² from two fields on ℂ.
pub struct ProductField<G, H> {
    g: G,
    h: H,
}

impl<G: Field, H: Field> ProductField<G, H> {
    pub fn new(g: G, h: H) -> Result<Self> {
        if g.dim() != 1 || h.dim() != 1 {
            return Err(invalid("product fields take two fields on C"));
        }
        Ok(Self { g, h })
    }
}

impl<G: Field, H: Field> Field for ProductField<G, H> {
    fn dim(&self) -> usize {
        2
    }
    fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        check_dim(2, z)?;
        Ok(self.g.eval(&z[..1])? * self.h.eval(&z[1..])?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_functions::solid_harmonic_basis;

    #[test]
    fn translate_is_unimodular_shift() {
        let g = GaussianField::new(1, 0.3).unwrap();
        let eta = vec![Complex64::new(0.7, -1.1)];
        let t = TwistedTranslate::new(&g, eta.clone()).unwrap();
        for &x in &[0.0, 0.4, -2.0] {
            let xi = [Complex64::new(x, 0.5 * x + 0.1)];
            let v = t.eval(&xi).unwrap();
            let base = g.eval(&[xi[0] - eta[0]]).unwrap();
            assert!((v.norm() - base.norm()).abs() < 1e-15);
        }
        let zero = TwistedTranslate::new(&g, vec![Complex64::default()]).unwrap();
        let xi = [Complex64::new(0.3, 0.2)];
        assert_eq!(zero.eval(&xi).unwrap(), g.eval(&xi).unwrap());
    }

    #[test]
    fn hermite_combination_matches_pointwise() {
        let idx = [SpecialHermiteIndex::new(2, 0), SpecialHermiteIndex::new(1, 3)];
        let comb = HermiteCombination::new(
            2,
            1.0,
            vec![(idx.to_vec(), Complex64::new(0.5, -1.0)), (vec![idx[1], idx[0]], Complex64::new(2.0, 0.0))],
        )
        .unwrap();
        let z = [Complex64::new(0.3, -0.8), Complex64::new(-1.2, 0.4)];
        let direct = Complex64::new(0.5, -1.0)
            * special_hermite_basis(idx[0], z[0])
            * special_hermite_basis(idx[1], z[1])
            + 2.0 * special_hermite_basis(idx[1], z[0]) * special_hermite_basis(idx[0], z[1]);
        assert!((comb.eval(&z).unwrap() - direct).norm() < 1e-15);
        assert!(comb.eval(&z[..1]).is_err());
    }

    #[test]
    fn type_field_decay_classes() {
        let p = &solid_harmonic_basis(1, 0, 1).unwrap()[0];
        assert_eq!(TypeField::new(0.25, p).unwrap().decay_class(), DecayClass::SchwartzLike);
        assert_eq!(TypeField::new(0.5, p).unwrap().decay_class(), DecayClass::GaussianQuarterWeighted);
        assert!(TypeField::new(0.0, p).is_err());
    }
}
