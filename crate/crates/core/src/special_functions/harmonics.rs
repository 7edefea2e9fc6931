//! Bigraded solid harmonics `H_{p,q}` on ℂⁿ.
//!
//! A polynomial `P = Σ c_{αβ} z^α z̄^β` with `|α| = p`, `|β| = q` is stored as
//! a list of monomials with exact complex-rational coefficients. The basis
//! of `H_{p,q}` is the rational null space of the Laplacian
//! `Δ = 4 Σ_j ∂²/∂z_j∂z̄_j : P_{p,q} → P_{p-1,q-1}`, computed by exact row
//! reduction. Restricting an element to the unit sphere gives the bigraded
//! spherical harmonics; `harmonic_dimension` is `d(p,q)`.

use crate::constants::binomial;
use crate::error::{invalid, Result};
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

pub type RationalCoeff = Complex<BigRational>;

/// Exponents of `z^α z̄^β`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct Monomial {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

impl Monomial {
    pub fn new(alpha: Vec<u32>, beta: Vec<u32>) -> Self {
        Self { alpha, beta }
    }

    pub fn bidegree(&self) -> (u32, u32) {
        (self.alpha.iter().sum(), self.beta.iter().sum())
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for ((zj, &a), &b) in z.iter().zip(&self.alpha).zip(&self.beta) {
            acc *= zj.powu(a) * zj.conj().powu(b);
        }
        acc
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (j, &a) in self.alpha.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(format!("z{}", j + 1)),
                _ => parts.push(format!("z{}^{}", j + 1, a)),
            }
        }
        for (j, &b) in self.beta.iter().enumerate() {
            match b {
                0 => {}
                1 => parts.push(format!("zb{}", j + 1)),
                _ => parts.push(format!("zb{}^{}", j + 1, b)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Exponent vectors of total degree `d` in `n` variables, descending lexicographic.
fn compositions(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in compositions(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Monomial basis of `P_{p,q}` in graded-lexicographic order (`z_1 > z_2 > …`,
/// holomorphic exponents first).
pub fn monomials(n: usize, p: u32, q: u32) -> Vec<Monomial> {
    let alphas = compositions(n, p);
    let betas = compositions(n, q);
    let mut out = Vec::with_capacity(alphas.len() * betas.len());
    for a in &alphas {
        for b in &betas {
            out.push(Monomial::new(a.clone(), b.clone()));
        }
    }
    out
}

/// `d(p,q) = dim H_{p,q}` on ℂⁿ.
pub fn harmonic_dimension(n: usize, p: u32, q: u32) -> usize {
    let dim = |p: i64, q: i64| -> f64 {
        if p < 0 || q < 0 {
            0.0
        } else {
            binomial(p as usize + n - 1, p as usize) * binomial(q as usize + n - 1, q as usize)
        }
    };
    (dim(p as i64, q as i64) - dim(p as i64 - 1, q as i64 - 1)) as usize
}

/// A homogeneous polynomial of bidegree `(p, q)` on ℂⁿ with exact coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SolidHarmonic {
    n: usize,
    p: u32,
    q: u32,
    terms: Vec<(Monomial, RationalCoeff)>,
}

fn rational(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl SolidHarmonic {
    /// Builds a polynomial from explicit terms; every monomial must have bidegree `(p, q)`.
    ///
    /// The harmonic condition is not enforced here; see [`SolidHarmonic::is_harmonic`].
    pub fn new(n: usize, p: u32, q: u32, terms: Vec<(Monomial, RationalCoeff)>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("dimension must be positive"));
        }
        let mut merged: BTreeMap<Monomial, RationalCoeff> = BTreeMap::new();
        for (m, c) in terms {
            if m.alpha.len() != n || m.beta.len() != n {
                return Err(invalid(format!("monomial {m} does not live on C^{n}")));
            }
            if m.bidegree() != (p, q) {
                return Err(invalid(format!("monomial {m} is not of bidegree ({p},{q})")));
            }
            let e = merged.entry(m).or_insert_with(RationalCoeff::zero);
            *e = e.clone() + c;
        }
        let order = monomials(n, p, q);
        let terms = order
            .into_iter()
            .filter_map(|m| merged.remove(&m).filter(|c| !c.is_zero()).map(|c| (m, c)))
            .collect();
        Ok(Self { n, p, q, terms })
    }

    /// A single monomial with unit coefficient, e.g. `z_1 z̄_2`.
    pub fn monomial(alpha: Vec<u32>, beta: Vec<u32>) -> Result<Self> {
        let m = Monomial::new(alpha, beta);
        let (p, q) = m.bidegree();
        let n = m.alpha.len();
        Self::new(n, p, q, vec![(m, RationalCoeff::one())])
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn bidegree(&self) -> (u32, u32) {
        (self.p, self.q)
    }

    pub fn terms(&self) -> &[(Monomial, RationalCoeff)] {
        &self.terms
    }

    /// Exact Laplacian, as a list of nonzero terms of bidegree `(p-1, q-1)`.
    pub fn laplacian(&self) -> Vec<(Monomial, RationalCoeff)> {
        let mut acc: BTreeMap<Monomial, RationalCoeff> = BTreeMap::new();
        for (m, c) in &self.terms {
            for j in 0..self.n {
                let (a, b) = (m.alpha[j], m.beta[j]);
                if a == 0 || b == 0 {
                    continue;
                }
                let mut d = m.clone();
                d.alpha[j] -= 1;
                d.beta[j] -= 1;
                let factor = rational(4 * a as i64 * b as i64);
                let e = acc.entry(d).or_insert_with(RationalCoeff::zero);
                *e = e.clone() + c.clone() * Complex::new(factor, BigRational::zero());
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    pub fn is_harmonic(&self) -> bool {
        self.laplacian().is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        self.float_terms().iter().map(|(m, c)| c * m.evaluate(z)).sum()
    }

    /// Terms with coefficients rounded to `f64`, for repeated evaluation.
    pub fn float_terms(&self) -> Vec<(Monomial, Complex64)> {
        self.terms
            .iter()
            .map(|(m, c)| {
                let cf = Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN));
                (m.clone(), cf)
            })
            .collect()
    }

    /// Human-readable form, e.g. `1*z1*zb1 + -1*z2*zb2`.
    pub fn describe(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                if c.im.is_zero() {
                    format!("{}*{}", c.re, m)
                } else {
                    format!("({}+{}i)*{}", c.re, c.im, m)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Basis of `H_{p,q}` on ℂⁿ, `n ∈ {1, 2, 3}`.
///
/// Columns of the Laplacian matrix follow [`monomials`]; one basis vector is
/// produced per free column of the reduced row echelon form, scaled to
/// coprime integers with a positive leading coefficient.
pub fn solid_harmonic_basis(p: u32, q: u32, n: usize) -> Result<Vec<SolidHarmonic>> {
    if !(1..=3).contains(&n) {
        return Err(invalid(format!("solid harmonics are supported for n in 1..=3, got {n}")));
    }
    let cols = monomials(n, p, q);
    if p == 0 || q == 0 {
        return cols
            .into_iter()
            .map(|m| SolidHarmonic::new(n, p, q, vec![(m, RationalCoeff::one())]))
            .collect();
    }
    let rows = monomials(n, p - 1, q - 1);
    let row_index: BTreeMap<&Monomial, usize> = rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat = vec![vec![BigRational::zero(); cols.len()]; rows.len()];
    for (c, m) in cols.iter().enumerate() {
        for j in 0..n {
            let (a, b) = (m.alpha[j], m.beta[j]);
            if a == 0 || b == 0 {
                continue;
            }
            let mut d = m.clone();
            d.alpha[j] -= 1;
            d.beta[j] -= 1;
            mat[row_index[&d]][c] += rational(4 * a as i64 * b as i64);
        }
    }
    let pivots = rref(&mut mat);
    let pivot_of_col: BTreeMap<usize, usize> = pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
    let mut basis = Vec::new();
    for free in (0..cols.len()).filter(|c| !pivot_of_col.contains_key(c)) {
        let mut v = vec![BigRational::zero(); cols.len()];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -mat[r][free].clone();
        }
        let v = primitive_integer_vector(v);
        let terms = cols
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.clone(), Complex::new(c, BigRational::zero())))
            .collect();
        basis.push(SolidHarmonic::new(n, p, q, terms)?);
    }
    Ok(basis)
}

/// In-place reduced row echelon form; returns pivot columns by row.
fn rref(mat: &mut [Vec<BigRational>]) -> Vec<usize> {
    let nrows = mat.len();
    let ncols = mat.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(sel) = (row..nrows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, sel);
        let inv = mat[row][col].recip();
        for v in mat[row].iter_mut() {
            *v *= inv.clone();
        }
        for r in 0..nrows {
            if r != row && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in 0..ncols {
                    let delta = factor.clone() * mat[row][c].clone();
                    mat[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

fn primitive_integer_vector(v: Vec<BigRational>) -> Vec<BigRational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = ints.iter().find(|x| !x.is_zero()).map_or(BigInt::one(), |x| x.signum());
    let scale = if gcd.is_zero() { BigInt::one() } else { gcd * sign };
    ints.into_iter().map(|x| BigRational::from_integer(x / &scale)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> RationalCoeff {
        Complex::new(rational(v), BigRational::zero())
    }

    #[test]
    fn holomorphic_degree_one() {
        let basis = solid_harmonic_basis(1, 0, 2).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0].describe(), "1*z1");
        assert_eq!(basis[1].describe(), "1*z2");
    }

    #[test]
    fn bidegree_one_one_on_c2() {
        let basis = solid_harmonic_basis(1, 1, 2).unwrap();
        let names: Vec<String> = basis.iter().map(|b| b.describe()).collect();
        assert_eq!(names, vec!["1*z1*zb2", "1*z2*zb1", "1*z1*zb1 + -1*z2*zb2"]);
        assert!(basis.iter().all(|b| b.is_harmonic()));
    }

    #[test]
    fn no_harmonics_of_bidegree_one_one_on_c() {
        assert!(solid_harmonic_basis(1, 1, 1).unwrap().is_empty());
        let zzbar = SolidHarmonic::monomial(vec![1], vec![1]).unwrap();
        assert_eq!(zzbar.laplacian(), vec![(Monomial::new(vec![0], vec![0]), int(4))]);
    }

    #[test]
    fn dimensions_match_formula() {
        for n in 1..=3 {
            for p in 0..=3 {
                for q in 0..=3 {
                    let basis = solid_harmonic_basis(p, q, n).unwrap();
                    assert_eq!(basis.len(), harmonic_dimension(n, p, q), "n={n} p={p} q={q}");
                    assert!(basis.iter().all(|b| b.is_harmonic() && b.bidegree() == (p, q)));
                }
            }
        }
    }

    #[test]
    fn rejects_mixed_bidegree() {
        let terms = vec![
            (Monomial::new(vec![1, 0], vec![0, 1]), int(1)),
            (Monomial::new(vec![2, 0], vec![0, 0]), int(1)),
        ];
        assert!(SolidHarmonic::new(2, 1, 1, terms).is_err());
        assert!(solid_harmonic_basis(1, 1, 4).is_err());
    }

    #[test]
    fn evaluation() {
        let p = SolidHarmonic::monomial(vec![1, 0], vec![0, 1]).unwrap();
        let z = [Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.25)];
        let v = p.evaluate(&z);
        let expect = z[0] * z[1].conj();
        assert!((v - expect).norm() < 1e-15);
    }
}
