//! Normalization constants used throughout the crate.
//!
//! Every constant below is fixed by evaluating an identity at the origin,
//! where the twist factor `exp((i/2) Im(z·w̄))` is identically one.
//!
//! * Laguerre functions: `φ_k^{n-1}(z) = L_k^{n-1}(|z|²/2) exp(-|z|²/4)`, so
//!   `φ_k^{n-1}(0) = C(k+n-1, k)`.
//! * Sphere product relation `φ_k×μ_r(z) = B(n,k) φ_k(r) φ_k(|z|)`: at `z = 0`
//!   the mean is the average of the radial function `φ_k` over `|w| = r`,
//!   i.e. `φ_k(r)`. Matching gives `B(n,k) = 1 / C(k+n-1, k) = k!(n-1)!/(k+n-1)!`.
//! * Polar decomposition `f×φ_k(z) = ω ∫_0^∞ (f×μ_r)(z) φ_k(r) r^{2n-1} dr`
//!   holds with `ω = |S^{2n-1}| = 2π^n/(n-1)!`, the unnormalized sphere area.
//!   Check: `f = φ_0` on ℂ at `z = 0`, `k = 0` gives `2π ∫ e^{-r²/2} r dr = 2π`,
//!   which equals `φ_0×φ_0(0) = 2π φ_0(0) = 2π`.
//! * Special Hermite expansion `f = (2π)^{-n} Σ_k f×φ_k^{n-1}`, with
//!   `φ_k×φ_m = (2π)^n δ_{km} φ_k`.
//! * Special Hermite basis on ℂ: `φ_{αβ}(z) = (2π)^{-1/2} (α!/β!)^{1/2}
//!   (i z̄/√2)^{β-α} L_α^{β-α}(|z|²/2) e^{-|z|²/4}` for `β ≥ α` and
//!   `φ_{αβ} = conj(φ_{βα})` for `β < α`. The first index is the spectral
//!   one: `φ_{αβ}×φ_k = 2π δ_{αk} φ_{αβ}` and `φ_{αβ}×μ_r = φ_α^0(r) φ_{αβ}`.

use std::f64::consts::PI;

/// Binomial coefficient, exact while it fits in `u128`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut exact: Option<u128> = Some(1);
    let mut approx = 1.0f64;
    for j in 0..k {
        exact = exact
            .and_then(|acc| acc.checked_mul((n - j) as u128))
            .map(|acc| acc / (j + 1) as u128);
        approx = approx * (n - j) as f64 / (j + 1) as f64;
    }
    exact.map_or(approx, |e| e as f64)
}

/// `B(n,k) = k!(n-1)!/(k+n-1)!`.
pub fn sphere_product_constant(n: usize, k: usize) -> f64 {
    assert!(n >= 1);
    1.0 / binomial(k + n - 1, k)
}

/// Surface area `ω_{2n-1} = 2π^n/(n-1)!` of the unit sphere in ℂⁿ.
pub fn unit_sphere_area(n: usize) -> f64 {
    assert!(n >= 1);
    let fact: f64 = (1..n).map(|j| j as f64).product();
    2.0 * PI.powi(n as i32) / fact
}

/// `(2π)^{-n}`, the special Hermite expansion constant.
pub fn expansion_constant(n: usize) -> f64 {
    (2.0 * PI).powi(-(n as i32))
}

/// `(2π)^{-1/2}`, the amplitude of `φ_{00}` on ℂ.
pub fn hermite_amplitude() -> f64 {
    (2.0 * PI).sqrt().recip()
}

/// Serializable snapshot written into run manifests.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FrozenConstants {
    pub laguerre_function: &'static str,
    pub special_hermite: &'static str,
    pub sphere_product_b: Vec<(usize, usize, f64)>,
    pub unit_sphere_area: Vec<(usize, f64)>,
    pub expansion_constant: Vec<(usize, f64)>,
}

pub fn frozen_constants() -> FrozenConstants {
    let mut b = Vec::new();
    for n in 1..=3 {
        for k in 0..=8 {
            b.push((n, k, sphere_product_constant(n, k)));
        }
    }
    FrozenConstants {
        laguerre_function: "phi_k^{n-1}(z) = L_k^{n-1}(|z|^2/2) exp(-|z|^2/4)",
        special_hermite: "phi_ab(z) = (2pi)^{-1/2} (a!/b!)^{1/2} (i conj(z)/sqrt2)^{b-a} L_a^{b-a}(|z|^2/2) exp(-|z|^2/4), b >= a; phi_ab = conj(phi_ba) for b < a",
        sphere_product_b: b,
        unit_sphere_area: (1..=3).map(|n| (n, unit_sphere_area(n))).collect(),
        expansion_constant: (1..=3).map(|n| (n, expansion_constant(n))).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_constant_matches_factorials() {
        assert_eq!(sphere_product_constant(1, 7), 1.0);
        assert_eq!(sphere_product_constant(2, 3), 0.25);
        // k!(n-1)!/(k+n-1)! for n = 3, k = 4: 24*2/720
        assert!((sphere_product_constant(3, 4) - 48.0 / 720.0).abs() < 1e-15);
    }

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(1) - 2.0 * PI).abs() < 1e-15);
        assert!((unit_sphere_area(2) - 2.0 * PI * PI).abs() < 1e-14);
        assert!((unit_sphere_area(3) - PI.powi(3)).abs() < 1e-13);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), 120.0);
        assert_eq!(binomial(40, 20), 137846528820.0);
        assert_eq!(binomial(3, 5), 0.0);
    }
}
