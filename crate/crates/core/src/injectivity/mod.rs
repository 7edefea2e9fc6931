//! Numerical injectivity experiments for twisted spherical means over
//! sampling sets, with the Euclidean circular-mean engine as a control.

mod basis;
mod expansion;
mod hecke_bochner;
mod operator;
mod probe;
mod sets;

pub use basis::{BasisSpec, Column, WEIGHTED_SCALE};
pub use operator::{
    assemble_operator, degree_block_structure, singular_report, BlockReport, Engine, NearNull, OperatorConfig,
    OperatorMetadata, RowMeta, RowRecord, SamplingOperator, SingularReport,
};
pub use sets::{curve_set, make_set, CurveProfile, Isometry, RadiusGrid, SamplingSet, SetKind, MEMBERSHIP_TOLERANCE};
pub use probe::{
    default_basis, filtered_operator, injectivity_probe, measured_means, ColumnFilter, NearNullField, ProbeConfig,
    ProbeReport, SigmaPoint, CONDITIONING_FACTOR, INJECTIVITY_CAVEAT, ROUNDING_FLOOR,
};
pub use expansion::{fit_projection_expansion, ExpansionFit, FitOptions, ProjectionExpansion, Sector};
pub use hecke_bochner::{hecke_bochner_counterexample, ScanPoint, TypeFunctionSpec, VanishingSetReport};
