//! Singular-value probes of sampling operators and certification of
//! near-null fields.

use super::basis::{BasisSpec, Column, WEIGHTED_SCALE};
use super::operator::{assemble_operator, Engine, OperatorConfig, SamplingOperator};
use super::sets::{SamplingSet, SetKind};
use crate::error::{invalid, Result};
use crate::euclidean::{circular_mean, Parity};
use crate::exec::Exec;
use crate::quadrature::SphereRule;
use crate::twisted::{twisted_spherical_mean, DecayClass, Field};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Attached verbatim to every probe report.
pub const INJECTIVITY_CAVEAT: &str = "A positive smallest singular value of a truncated sampling operator is \
numerical evidence only and does not show that the set is a set of injectivity. Only near-null fields whose \
measured means vanish on the set certify non-injectivity.";

/// Reconstructed mean profiles of a near-null vector `v` with `‖v‖ = 1` are
/// bounded by `CONDITIONING_FACTOR · ‖Mv‖` plus [`ROUNDING_FLOOR`].
pub const CONDITIONING_FACTOR: f64 = 1.0;
pub const ROUNDING_FLOOR: f64 = 1e-13;

/// Column subsets used to compare matched sectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColumnFilter {
    #[default]
    All,
    /// Euclidean columns `g(ρ) sin(mθ)` with `lines | m`, odd with respect to
    /// every line of `Σ_lines`.
    OddSector { lines: u32 },
}

impl ColumnFilter {
    pub fn keep(&self, c: &Column) -> bool {
        match (self, c) {
            (ColumnFilter::All, _) => true,
            (ColumnFilter::OddSector { lines }, Column::Euclidean { order, parity, .. }) => {
                *parity == Parity::Sin && *order > 0 && order % lines == 0
            }
            (ColumnFilter::OddSector { .. }, _) => false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeConfig {
    pub operator: OperatorConfig,
    /// Truncation increments for the `σ_min` curve.
    pub curve_steps: Vec<usize>,
    pub filter: ColumnFilter,
    /// Largest number of near-null vectors reconstructed as fields.
    pub max_reconstructions: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self { operator: OperatorConfig::default(), curve_steps: vec![0, 2, 4], filter: ColumnFilter::All, max_reconstructions: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaPoint {
    pub truncation: usize,
    pub columns: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

/// A near-null vector reconstructed as a field and re-measured on the set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearNullField {
    pub sigma: f64,
    pub residual_ratio: f64,
    /// `[re, im]` per column.
    pub coefficients: Vec<[f64; 2]>,
    pub max_mean_abs: f64,
    pub bound: f64,
    pub certified: bool,
    pub decay_class: DecayClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub schema_version: u32,
    pub set: String,
    pub engine: Engine,
    pub basis: String,
    #[serde(rename = "K")]
    pub truncation: usize,
    pub rows: usize,
    pub columns: usize,
    pub sigma: Vec<f64>,
    pub sigma_min: f64,
    pub sigma_curve: Vec<SigmaPoint>,
    pub near_null: Vec<NearNullField>,
    pub degenerate: bool,
    /// Empty set, zero operator or fewer rows than columns.
    pub trivially_non_injective: bool,
    pub caveat: String,
}

impl ProbeReport {
    pub fn certified_count(&self) -> usize {
        self.near_null.iter().filter(|f| f.certified).count()
    }

    /// `truncation, columns, sigma_min, sigma_max` for plotting.
    pub fn write_curve_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["truncation", "columns", "sigma_min", "sigma_max"])?;
        for p in &self.sigma_curve {
            w.write_record([
                p.truncation.to_string(),
                p.columns.to_string(),
                crate::twisted::fmt_f64(p.sigma_min),
                crate::twisted::fmt_f64(p.sigma_max),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Default basis for probing `set`: sphere sets get the dilated special
/// Hermite functions, which carry the Gaussian quarter weight.
pub fn default_basis(set: &SamplingSet, engine: Engine, k: usize) -> BasisSpec {
    let weighted = matches!(set.kind, SetKind::Sphere { .. } | SetKind::SphereCrossPlane { .. });
    let scale = if weighted { WEIGHTED_SCALE } else { 1.0 };
    match (engine, set.n) {
        (Engine::Euclidean, _) => BasisSpec::Euclidean {
            profiles: [0.5, 1.0, 2.0].iter().map(|&s| crate::euclidean::RadialProfile::Gaussian { scale: s }).collect(),
            max_order: k as u32,
        },
        (Engine::Twisted, 1) => BasisSpec::SpecialHermite { max_index: k, scale },
        (Engine::Twisted, _) => BasisSpec::HermiteProduct { cap: k, scale },
    }
}

/// Assembles `basis` on `set`, restricted by `config.filter`.
pub fn filtered_operator(set: &SamplingSet, basis: &BasisSpec, engine: Engine, config: &ProbeConfig, exec: Exec) -> Result<SamplingOperator> {
    let op = assemble_operator(set, basis, engine, &config.operator, exec)?;
    Ok(match config.filter {
        ColumnFilter::All => op,
        f => op.restrict_columns(|c| f.keep(c)),
    })
}

/// `σ_min` curve over `K + steps`, near-null reconstructions and the caveat.
///
/// Sphere sets must be probed with a weighted basis; other bases are
/// rejected rather than silently probed outside the function class.
pub fn injectivity_probe(op: &SamplingOperator, config: &ProbeConfig, exec: Exec) -> Result<ProbeReport> {
    let weighted_set = matches!(op.set.kind, SetKind::Sphere { .. } | SetKind::SphereCrossPlane { .. });
    if weighted_set && op.engine == Engine::Twisted && op.basis.decay_class() != DecayClass::GaussianQuarterWeighted {
        return Err(invalid("sphere sets are probed with gaussian_quarter_weighted test fields only"));
    }
    let k = op.basis.truncation();
    let mut sigma_curve = Vec::with_capacity(config.curve_steps.len());
    for &step in &config.curve_steps {
        let point = if step == 0 {
            SigmaPoint { truncation: k, columns: op.columns.len(), sigma_min: op.sigma_min(), sigma_max: op.report.sigma_max() }
        } else {
            let basis = op.basis.with_truncation(k + step);
            let larger = filtered_operator(&op.set, &basis, op.engine, config, exec)?;
            SigmaPoint {
                truncation: k + step,
                columns: larger.columns.len(),
                sigma_min: larger.sigma_min(),
                sigma_max: larger.report.sigma_max(),
            }
        };
        sigma_curve.push(point);
    }
    let full_columns = op.basis.columns();
    let mut near_null = Vec::new();
    for nn in op.report.near_null.iter().take(config.max_reconstructions) {
        // lift restricted vectors back to the full basis
        let mut full = vec![Complex64::default(); full_columns.len()];
        for (c, v) in op.columns.iter().zip(&nn.vector) {
            let pos = full_columns.iter().position(|f| f == c).expect("restricted column in basis");
            full[pos] = *v;
        }
        near_null.push(reconstruct(op, &nn.vector, &full, nn.sigma, exec)?);
    }
    Ok(ProbeReport {
        schema_version: 1,
        set: op.set.label(),
        engine: op.engine,
        basis: op.basis.label(),
        truncation: k,
        rows: op.rows.len(),
        columns: op.columns.len(),
        sigma: op.report.sigma.clone(),
        sigma_min: op.sigma_min(),
        sigma_curve,
        near_null,
        degenerate: op.report.degenerate,
        trivially_non_injective: op.report.degenerate || op.report.sigma_max() == 0.0 || op.rows.len() < op.columns.len(),
        caveat: INJECTIVITY_CAVEAT.to_string(),
    })
}

/// Measured means of the field with coefficients `full` on every row of
/// `op`, as one value per row.
pub fn measured_means(op: &SamplingOperator, full: &[Complex64], exec: Exec) -> Result<Vec<Complex64>> {
    match op.engine {
        Engine::Twisted => {
            let field = op.basis.twisted_field(full)?;
            let rule = SphereRule::unit(op.set.n, &op.config.sphere)?;
            exec.try_map(op.rows.len(), |r| {
                let m = op.rows[r];
                twisted_spherical_mean(&field, op.set.center(m.center_index), m.radius, &rule)
            })
        }
        Engine::Euclidean => {
            let field = op.basis.euclidean_field(full)?;
            exec.try_map(op.rows.len(), |r| {
                let m = op.rows[r];
                circular_mean(&field, op.set.center(m.center_index)[0], m.radius, op.config.circle_nodes)
                    .map(|v| Complex64::new(v, 0.0))
            })
        }
    }
}

fn reconstruct(op: &SamplingOperator, v: &[Complex64], full: &[Complex64], sigma: f64, exec: Exec) -> Result<NearNullField> {
    let residual_ratio = op.residual_ratio(v)?;
    let means = measured_means(op, full, exec)?;
    let max_mean_abs = means.iter().map(|m| m.norm()).fold(0.0, f64::max);
    let bound = CONDITIONING_FACTOR * residual_ratio + ROUNDING_FLOOR;
    let decay_class = match op.engine {
        Engine::Twisted => op.basis.twisted_field(full)?.decay_class(),
        Engine::Euclidean => DecayClass::SchwartzLike,
    };
    Ok(NearNullField {
        sigma,
        residual_ratio,
        coefficients: v.iter().map(|c| [c.re, c.im]).collect(),
        max_mean_abs,
        bound,
        certified: residual_ratio <= op.config.near_null_threshold && max_mean_abs <= bound,
        decay_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euclidean::{coxeter_odd_counterexample, RadialProfile};
    use crate::injectivity::sets::{make_set, RadiusGrid};

    fn coxeter(lines: usize) -> SamplingSet {
        make_set(SetKind::CoxeterLines { lines, extent: 3.0, per_ray: 5 }, RadiusGrid::default().radii().unwrap()).unwrap()
    }

    #[test]
    fn odd_counterexample_is_certified() {
        let set = coxeter(2);
        let profile = RadialProfile::Gaussian { scale: 1.0 };
        let basis = BasisSpec::Euclidean { profiles: vec![profile], max_order: 4 };
        let op = assemble_operator(&set, &basis, Engine::Euclidean, &OperatorConfig::default(), Exec::Serial).unwrap();
        let f = coxeter_odd_counterexample(2, profile).unwrap();
        let v = basis.euclidean_coefficients(&f).unwrap();
        assert!(op.residual_ratio(&v).unwrap() < 1e-10);
        let report = injectivity_probe(&op, &ProbeConfig { curve_steps: vec![0], ..Default::default() }, Exec::Serial).unwrap();
        assert!(report.certified_count() >= 1);
        assert_eq!(report.caveat, INJECTIVITY_CAVEAT);
    }

    #[test]
    fn empty_set_is_trivially_non_injective() {
        let set = SamplingSet::custom(1, vec![], vec![1.0]).unwrap();
        let basis = BasisSpec::SpecialHermite { max_index: 1, scale: 1.0 };
        let op = assemble_operator(&set, &basis, Engine::Twisted, &OperatorConfig::default(), Exec::Serial).unwrap();
        let report = injectivity_probe(&op, &ProbeConfig { curve_steps: vec![0], ..Default::default() }, Exec::Serial).unwrap();
        assert!(report.trivially_non_injective);
        assert_eq!(report.sigma_min, 0.0);
        assert!(report.near_null.iter().all(|f| f.certified));
    }

    #[test]
    fn sphere_sets_require_weighted_basis() {
        let set = make_set(SetKind::Sphere { n: 1, radius: 1.0, circle_points: 8, sphere3: Default::default() }, vec![0.5, 1.0])
            .unwrap();
        let basis = BasisSpec::SpecialHermite { max_index: 2, scale: 1.0 };
        let op = assemble_operator(&set, &basis, Engine::Twisted, &OperatorConfig::default(), Exec::Serial).unwrap();
        assert!(injectivity_probe(&op, &ProbeConfig::default(), Exec::Serial).is_err());
        assert_eq!(default_basis(&set, Engine::Twisted, 2).decay_class(), DecayClass::GaussianQuarterWeighted);
    }

    #[test]
    fn row_addition_does_not_decrease_sigma_min() {
        let radii = RadiusGrid { count: 8, ..Default::default() }.radii().unwrap();
        let small = make_set(SetKind::CoxeterLines { lines: 2, extent: 2.0, per_ray: 3 }, radii.clone()).unwrap();
        let mut centers = small.centers.clone();
        centers.extend([Complex64::new(0.7, 0.4), Complex64::new(-1.1, 0.3)]);
        let large = SamplingSet::custom(1, centers, radii).unwrap();
        let basis = BasisSpec::SpecialHermite { max_index: 4, scale: 1.0 };
        let cfg = OperatorConfig::default();
        let a = assemble_operator(&small, &basis, Engine::Twisted, &cfg, Exec::Serial).unwrap();
        let b = assemble_operator(&large, &basis, Engine::Twisted, &cfg, Exec::Serial).unwrap();
        assert!(b.sigma_min() >= a.sigma_min() * (1.0 - 1e-12));
    }
}
