use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use tsmlab::constants::{binomial, hermite_amplitude};
use tsmlab::special_functions::*;
use tsmlab::Complex64;

fn exact_binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// `L_k^α(x) = Σ_j (-1)^j C(k+α, k-j) x^j / j!` in exact arithmetic, along
/// with `Σ_j |term_j|` as the cancellation scale.
fn exact_laguerre(k: usize, alpha: usize, x: &BigRational) -> (f64, f64) {
    let mut sum = BigRational::zero();
    let mut scale = BigRational::zero();
    let mut power = BigRational::one();
    let mut fact = BigInt::one();
    for j in 0..=k {
        if j > 0 {
            power *= x.clone();
            fact *= BigInt::from(j);
        }
        let term = BigRational::from_integer(exact_binomial(k + alpha, k - j)) * power.clone()
            / BigRational::from_integer(fact.clone());
        scale += term.abs();
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    (sum.to_f64().unwrap(), scale.to_f64().unwrap())
}

#[test]
fn laguerre_recurrence_matches_exact_series() {
    let points = [(1, 8), (1, 2), (3, 1), (29, 4), (15, 1)];
    for alpha in 0..=3 {
        for k in 0..=30 {
            for &(p, q) in &points {
                let x = BigRational::new(BigInt::from(p), BigInt::from(q));
                let (exact, scale) = exact_laguerre(k, alpha, &x);
                let got = laguerre_polynomial(LaguerreSpec::new(k, alpha), p as f64 / q as f64).unwrap();
                assert!(
                    (got - exact).abs() <= 1e-13 * scale.max(1.0),
                    "L_{k}^{alpha}({p}/{q}) = {got}, exact {exact}, scale {scale:e}"
                );
            }
        }
    }
}

#[test]
fn binomial_is_exact_where_it_fits() {
    for n in 0..=60 {
        for k in 0..=n {
            assert_eq!(binomial(n, k), exact_binomial(n, k).to_f64().unwrap(), "C({n},{k})");
        }
    }
}

#[test]
fn laguerre_rejects_bad_arguments() {
    assert!(laguerre_polynomial(LaguerreSpec::new(3, 0), -1.0).is_err());
    assert!(laguerre_polynomial(LaguerreSpec::new(3, 0), f64::NAN).is_err());
    assert!(laguerre_function(LaguerreSpec::new(3, 1), f64::INFINITY).is_err());
    assert!(LaguerreSpec::for_dimension(2, 0).is_err());
}

#[test]
fn solid_harmonics_are_harmonic_with_expected_dimension() {
    for n in 1..=3 {
        for p in 0..=3 {
            for q in 0..=3 {
                let basis = solid_harmonic_basis(p, q, n).unwrap();
                assert_eq!(basis.len(), harmonic_dimension(n, p, q), "n={n} p={p} q={q}");
                for h in &basis {
                    assert!(h.is_harmonic(), "n={n} ({p},{q}): {}", h.describe());
                    assert_eq!(h.bidegree(), (p, q));
                }
            }
        }
    }
}

fn point() -> impl Strategy<Value = Complex64> {
    (-5.0f64..5.0, -5.0f64..5.0).prop_map(|(a, b)| Complex64::new(a, b))
}

proptest! {
    #[test]
    fn order_lowering_identity(k in 1usize..25, alpha in 0usize..4, x in 0.0f64..12.0) {
        // L_k^α = L_k^{α+1} - L_{k-1}^{α+1}
        let lhs = laguerre_polynomial(LaguerreSpec::new(k, alpha), x).unwrap();
        let a = laguerre_polynomial(LaguerreSpec::new(k, alpha + 1), x).unwrap();
        let b = laguerre_polynomial(LaguerreSpec::new(k - 1, alpha + 1), x).unwrap();
        prop_assert!((lhs - (a - b)).abs() <= 1e-10 * (1.0 + a.abs() + b.abs()));
    }

    #[test]
    fn fill_agrees_with_pointwise(alpha in 0usize..4, rho in 0.0f64..8.0) {
        let mut out = [0.0; 16];
        fill_laguerre_functions(alpha, rho, &mut out);
        for (k, &v) in out.iter().enumerate() {
            let w = laguerre_function(LaguerreSpec::new(k, alpha), rho).unwrap();
            prop_assert!((v - w).abs() <= 1e-14 * (1.0 + w.abs()));
        }
    }

    #[test]
    fn hermite_rotation_covariance(alpha in 0usize..12, beta in 0usize..12, z in point(), theta in 0.0f64..6.3) {
        let idx = SpecialHermiteIndex::new(alpha, beta);
        let rotated = special_hermite_basis(idx, Complex64::from_polar(1.0, theta) * z);
        let expect = Complex64::from_polar(1.0, idx.angular_frequency() as f64 * theta) * special_hermite_basis(idx, z);
        prop_assert!((rotated - expect).norm() <= 1e-13);
    }

    #[test]
    fn hermite_transpose_is_conjugate(alpha in 0usize..12, beta in 0usize..12, z in point()) {
        let a = special_hermite_basis(SpecialHermiteIndex::new(alpha, beta), z);
        let b = special_hermite_basis(SpecialHermiteIndex::new(beta, alpha), z);
        prop_assert!((a - b.conj()).norm() <= 1e-15);
    }

    #[test]
    fn hermite_diagonal_is_laguerre_function(k in 0usize..20, z in point()) {
        let v = special_hermite_basis(SpecialHermiteIndex::new(k, k), z);
        let w = hermite_amplitude() * laguerre_function(LaguerreSpec::new(k, 0), z.norm()).unwrap();
        prop_assert!(v.im.abs() <= 1e-15);
        prop_assert!((v.re - w).abs() <= 1e-13);
    }

    #[test]
    fn hermite_table_matches_pointwise(max in 0usize..16, z in point()) {
        let stride = max + 1;
        let mut table = vec![Complex64::new(0.0, 0.0); stride * stride];
        special_hermite_table(max, z, &mut table);
        for a in 0..=max {
            for b in 0..=max {
                let v = special_hermite_basis(SpecialHermiteIndex::new(a, b), z);
                prop_assert!((table[a * stride + b] - v).norm() <= 1e-14);
            }
        }
    }
}
