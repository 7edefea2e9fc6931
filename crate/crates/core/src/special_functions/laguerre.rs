use crate::error::{invalid, Result};

/// Degree `k` and order `α` of a generalized Laguerre polynomial `L_k^α`.
///
/// The Laguerre functions on ℂⁿ use `α = n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct LaguerreSpec {
    pub degree: usize,
    pub order: usize,
}

impl LaguerreSpec {
    pub fn new(degree: usize, order: usize) -> Self {
        Self { degree, order }
    }

    /// Spec for `φ_k^{n-1}` on ℂⁿ.
    pub fn for_dimension(degree: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("dimension n must be at least 1"));
        }
        Ok(Self::new(degree, n - 1))
    }
}

/// `L_k^α(x)` by the upward three-term recurrence
/// `(j+1) L_{j+1} = (2j+1+α-x) L_j - (j+α) L_{j-1}`.
pub fn laguerre_polynomial(spec: LaguerreSpec, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(invalid(format!("Laguerre argument must be finite and nonnegative, got {x}")));
    }
    Ok(laguerre_unchecked(spec.degree, spec.order as f64, x))
}

#[inline]
fn laguerre_unchecked(k: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Writes `L_0^α(x), …, L_{out.len()-1}^α(x)` into `out`.
#[inline]
pub fn fill_laguerre(alpha: f64, x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = 1.0 + alpha - x;
    for j in 1..out.len() - 1 {
        let jf = j as f64;
        out[j + 1] = ((2.0 * jf + 1.0 + alpha - x) * out[j] - (jf + alpha) * out[j - 1]) / (jf + 1.0);
    }
}

/// Laguerre function `L_k^α(ρ²/2) e^{-ρ²/4}` at radius `rho`.
pub fn laguerre_function(spec: LaguerreSpec, rho: f64) -> Result<f64> {
    if !rho.is_finite() || rho < 0.0 {
        return Err(invalid(format!("radius must be finite and nonnegative, got {rho}")));
    }
    Ok(laguerre_function_unchecked(spec, rho))
}

#[inline]
pub fn laguerre_function_unchecked(spec: LaguerreSpec, rho: f64) -> f64 {
    let s = rho * rho;
    laguerre_unchecked(spec.degree, spec.order as f64, 0.5 * s) * (-0.25 * s).exp()
}

/// Writes `φ_0^α(ρ), …` (Laguerre functions of order `alpha`) into `out`.
#[inline]
pub fn fill_laguerre_functions(alpha: usize, rho: f64, out: &mut [f64]) {
    let s = rho * rho;
    fill_laguerre(alpha as f64, 0.5 * s, out);
    let g = (-0.25 * s).exp();
    out.iter_mut().for_each(|v| *v *= g);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::binomial;

    #[test]
    fn low_degree_values() {
        assert_eq!(laguerre_polynomial(LaguerreSpec::new(0, 3), 7.2).unwrap(), 1.0);
        assert_eq!(laguerre_polynomial(LaguerreSpec::new(1, 2), 3.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(laguerre_polynomial(LaguerreSpec::new(2, 0), -0.1).is_err());
        assert!(laguerre_polynomial(LaguerreSpec::new(2, 0), f64::NAN).is_err());
        assert!(laguerre_polynomial(LaguerreSpec::new(2, 0), f64::INFINITY).is_err());
        assert!(laguerre_function(LaguerreSpec::new(2, 0), -1.0).is_err());
        assert!(LaguerreSpec::for_dimension(1, 0).is_err());
    }

    #[test]
    fn value_at_origin_is_binomial() {
        for n in 1..4 {
            for k in 0..12 {
                let spec = LaguerreSpec::for_dimension(k, n).unwrap();
                let v = laguerre_function(spec, 0.0).unwrap();
                assert_eq!(v, binomial(k + n - 1, k));
            }
        }
    }

    #[test]
    fn laguerre_function_examples() {
        let r = 1.7f64;
        let v = laguerre_function(LaguerreSpec::new(0, 2), r).unwrap();
        assert!((v - (-r * r / 4.0).exp()).abs() < 1e-16);
        let v = laguerre_function(LaguerreSpec::new(2, 0), 2f64.sqrt()).unwrap();
        assert!((v - (-0.5 * (-0.5f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn fill_matches_single() {
        let mut buf = [0.0; 15];
        fill_laguerre(1.0, 3.3, &mut buf);
        for (k, v) in buf.iter().enumerate() {
            assert_eq!(*v, laguerre_unchecked(k, 1.0, 3.3));
        }
    }
}
