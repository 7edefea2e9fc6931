//! Laguerre polynomials and functions, the special Hermite basis on ℂ, and
//! bigraded solid harmonics on ℂⁿ.

mod eigen;
mod harmonics;
mod hermite;
mod laguerre;

pub use eigen::{radial_eigen_residual, RadialStencil};
pub use harmonics::{
    harmonic_dimension, monomials, solid_harmonic_basis, Monomial, RationalCoeff, SolidHarmonic,
};
pub use hermite::{special_hermite_basis, special_hermite_table, SpecialHermiteIndex, MAX_HERMITE_INDEX};
pub use laguerre::{
    fill_laguerre, fill_laguerre_functions, laguerre_function, laguerre_function_unchecked,
    laguerre_polynomial, LaguerreSpec,
};
