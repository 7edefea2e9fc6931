//! Numerical toolkit for twisted spherical means on ℂⁿ.
//!
//! Building blocks ([`special_functions`], [`quadrature`]) feed the transform
//! layer ([`twisted`]), which in turn drives the Euclidean contrast
//! experiments ([`euclidean`]), the sampling-operator probes
//! ([`injectivity`]) and the batch front-end ([`experiment`]).

// `!(x > 0.0)` is how NaN gets rejected; index loops mirror the formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod constants;
pub mod error;
pub mod euclidean;
pub mod exec;
pub mod experiment;
pub mod grid;
pub mod injectivity;
pub mod quadrature;
pub mod special_functions;
pub mod summation;
pub mod twisted;

pub use error::{Result, TsmError};
pub use exec::Exec;
pub use num_complex::Complex64;
