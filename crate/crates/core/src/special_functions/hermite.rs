use super::laguerre::fill_laguerre;
use crate::constants::hermite_amplitude;
use num_complex::Complex64;

/// Largest index supported by [`special_hermite_table`].
pub const MAX_HERMITE_INDEX: usize = 120;

/// Index pair `(α, β)` of a special Hermite function on ℂ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct SpecialHermiteIndex {
    pub alpha: usize,
    pub beta: usize,
}

impl SpecialHermiteIndex {
    pub fn new(alpha: usize, beta: usize) -> Self {
        Self { alpha, beta }
    }

    /// Degree picked out by right twisted convolution with `φ_k`.
    pub fn spectral_degree(&self) -> usize {
        self.alpha
    }

    /// Angular frequency: `φ_{αβ}(e^{iθ}z) = e^{i(α-β)θ} φ_{αβ}(z)`.
    pub fn angular_frequency(&self) -> i64 {
        self.alpha as i64 - self.beta as i64
    }
}

/// `φ_{αβ}(z)` on ℂ.
///
/// `(2π)^{-1/2} (α!/β!)^{1/2} (i z̄/√2)^{β-α} L_α^{β-α}(|z|²/2) e^{-|z|²/4}`
/// for `β ≥ α`, and `conj(φ_{βα}(z))` otherwise.
pub fn special_hermite_basis(idx: SpecialHermiteIndex, z: Complex64) -> Complex64 {
    let (lo, hi) = if idx.beta >= idx.alpha { (idx.alpha, idx.beta) } else { (idx.beta, idx.alpha) };
    let m = hi - lo;
    let s = z.norm_sqr();
    let mut lag = vec![0.0; lo + 1];
    fill_laguerre(m as f64, 0.5 * s, &mut lag);
    let ratio: f64 = (lo + 1..=hi).map(|t| t as f64).product::<f64>().sqrt().recip();
    let zeta = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2) * z.conj();
    let v = zeta.powu(m as u32) * (hermite_amplitude() * ratio * lag[lo] * (-0.25 * s).exp());
    if idx.beta >= idx.alpha {
        v
    } else {
        v.conj()
    }
}

/// Fills `out[α·(max+1) + β] = φ_{αβ}(z)` for all `α, β ≤ max`.
///
/// Panics if `max > MAX_HERMITE_INDEX` or `out` is too short.
pub fn special_hermite_table(max: usize, z: Complex64, out: &mut [Complex64]) {
    assert!(max <= MAX_HERMITE_INDEX, "special Hermite index {max} exceeds {MAX_HERMITE_INDEX}");
    let stride = max + 1;
    assert!(out.len() >= stride * stride);
    let s = z.norm_sqr();
    let x = 0.5 * s;
    let base = hermite_amplitude() * (-0.25 * s).exp();
    let zeta = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2) * z.conj();
    let mut lag = [0.0f64; MAX_HERMITE_INDEX + 1];
    let mut zeta_pow = Complex64::new(1.0, 0.0);
    for m in 0..=max {
        let len = max - m + 1;
        fill_laguerre(m as f64, x, &mut lag[..len]);
        // ratio_j = (j!/(j+m)!)^{1/2}, updated in j
        let mut ratio_sq: f64 = (1..=m).map(|t| t as f64).product::<f64>().recip();
        for (j, &l) in lag[..len].iter().enumerate() {
            if j > 0 {
                ratio_sq *= j as f64 / (j + m) as f64;
            }
            let v = zeta_pow * (base * ratio_sq.sqrt() * l);
            out[j * stride + j + m] = v;
            if m > 0 {
                out[(j + m) * stride + j] = v.conj();
            }
        }
        zeta_pow *= zeta;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ground_state_is_normalized_gaussian() {
        for &z in &[Complex64::new(0.0, 0.0), Complex64::new(1.2, -0.7), Complex64::new(-3.0, 2.0)] {
            let v = special_hermite_basis(SpecialHermiteIndex::new(0, 0), z);
            let expect = (2.0 * PI).powf(-0.5) * (-z.norm_sqr() / 4.0).exp();
            assert!((v - expect).norm() < 1e-16);
        }
    }

    #[test]
    fn table_matches_pointwise() {
        let z = Complex64::new(0.9, -1.4);
        let max = 7;
        let mut table = vec![Complex64::default(); (max + 1) * (max + 1)];
        special_hermite_table(max, z, &mut table);
        for a in 0..=max {
            for b in 0..=max {
                let direct = special_hermite_basis(SpecialHermiteIndex::new(a, b), z);
                let t = table[a * (max + 1) + b];
                assert!((direct - t).norm() <= 1e-14 * (1.0 + direct.norm()), "{a} {b}");
            }
        }
    }

    #[test]
    fn angular_covariance() {
        let z = Complex64::new(0.4, 1.1);
        let rot = Complex64::from_polar(1.0, 0.83);
        for (a, b) in [(0, 3), (4, 1), (2, 2), (5, 0)] {
            let idx = SpecialHermiteIndex::new(a, b);
            let lhs = special_hermite_basis(idx, rot * z);
            let rhs = Complex64::from_polar(1.0, 0.83 * idx.angular_frequency() as f64)
                * special_hermite_basis(idx, z);
            assert!((lhs - rhs).norm() < 1e-15);
        }
    }
}
