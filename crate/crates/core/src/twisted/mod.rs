//! Twisted translation, twisted convolution and twisted spherical means on
//! ℂⁿ, spectral projections onto Laguerre eigenspaces, the special Hermite
//! expansion and the polar-decomposition bridge between them.
//!
//! Conventions: `f×g(z) = ∫ f(z-w) g(w) e^{(i/2) Im(z·w̄)} dw` with
//! `z·w̄ = Σ z_j conj(w_j)`, and `μ_r` is the normalized surface measure on
//! `|w| = r`. See [`crate::constants`] for the normalizations.

mod convolution;
mod field;
mod means;
mod operator;
mod sampled;

pub use convolution::{
    polar_bridge, relative_distance, special_hermite_coefficients, spectral_projection, spectral_projections,
    sum_pieces, tensor_decompose_projection, twisted_convolution, twisted_convolution_on, DiagonalPiece,
    RuleSamples, Spectrum, SpectrumTruncation, POLAR_TAIL_TOLERANCE,
};
pub use field::{
    DecayClass, Field, FnField, GaussianField, HermiteCombination, LaguerreField, LinearCombination, ProductField,
    TwistedTranslate, TypeField,
};
pub(crate) use field::twist;
pub use means::{mean_profile, mean_profile_on_rule, twisted_spherical_mean, twisted_translate, MeanProfile, Translated};
pub use operator::{apply_special_hermite_operator, eigen_residual};
pub use sampled::{fmt_f64, GridHeader, SampledField, SampledFieldHeader, DEFAULT_INTERPOLATION_ORDER};
