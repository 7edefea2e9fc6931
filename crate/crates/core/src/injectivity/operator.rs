//! Sampling operators: truncated basis coefficients ↦ spherical means on a
//! sampling set, with their singular value decomposition.

use super::basis::{BasisSpec, Column};
use super::sets::SamplingSet;
use crate::constants::unit_sphere_area;
use crate::error::{invalid, Result, TsmError};
use crate::euclidean::{EuclideanTerm, DEFAULT_CIRCLE_NODES};
use crate::exec::Exec;
use crate::grid::MAX_DIM;
use crate::quadrature::{circle_rule_with_phase, SphereOrders, SphereRule};
use crate::special_functions::{fill_laguerre_functions, special_hermite_table};
use crate::summation::{ComplexSum, NeumaierSum};
use crate::twisted::{fmt_f64, twist};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Twisted,
    Euclidean,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Twisted => "twisted",
            Engine::Euclidean => "euclidean",
        }
    }
}

/// Quadrature and size limits for operator assembly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorConfig {
    pub sphere: SphereOrders,
    pub circle_nodes: usize,
    /// Right singular vectors with `σ` at or below this are near-null.
    pub near_null_threshold: f64,
    pub max_rows: usize,
    pub max_columns: usize,
}

impl Default for OperatorConfig {
    fn default() -> Self {
        Self {
            sphere: SphereOrders::default(),
            circle_nodes: DEFAULT_CIRCLE_NODES,
            near_null_threshold: 1e-8,
            max_rows: 200_000,
            max_columns: 2_000,
        }
    }
}

/// Row `(center j, radius i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowMeta {
    pub center_index: usize,
    pub radius_index: usize,
    pub radius: f64,
}

/// A right singular vector with small singular value.
#[derive(Debug, Clone, PartialEq)]
pub struct NearNull {
    pub sigma: f64,
    pub vector: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularReport {
    /// Descending; padded with zeros when there are fewer rows than columns.
    pub sigma: Vec<f64>,
    pub near_null: Vec<NearNull>,
    /// No rows, or no columns.
    pub degenerate: bool,
}

impl SingularReport {
    pub fn sigma_min(&self) -> f64 {
        self.sigma.last().copied().unwrap_or(0.0)
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone)]
pub struct SamplingOperator {
    pub set: SamplingSet,
    pub basis: BasisSpec,
    pub engine: Engine,
    pub config: OperatorConfig,
    pub columns: Vec<Column>,
    pub rows: Vec<RowMeta>,
    pub matrix: DMatrix<Complex64>,
    pub report: SingularReport,
}

/// `M[(j,i), b] = (b×μ_{r_i})(z_j)` (twisted) or the circular mean of `b`
/// (Euclidean), followed by an SVD.
pub fn assemble_operator(set: &SamplingSet, basis: &BasisSpec, engine: Engine, config: &OperatorConfig, exec: Exec) -> Result<SamplingOperator> {
    basis.validate()?;
    match (engine, basis.is_twisted()) {
        (Engine::Twisted, false) | (Engine::Euclidean, true) => {
            return Err(invalid(format!("basis {} does not fit the {} engine", basis.label(), engine.name())))
        }
        _ => {}
    }
    if basis.dimension() != set.n {
        return Err(invalid(format!("basis on C^{} for a set in C^{}", basis.dimension(), set.n)));
    }
    let columns = basis.columns();
    let nr = set.radii.len();
    let rows: Vec<RowMeta> = (0..set.len())
        .flat_map(|j| (0..nr).map(move |i| (j, i)))
        .map(|(j, i)| RowMeta { center_index: j, radius_index: i, radius: set.radii[i] })
        .collect();
    if rows.len() > config.max_rows || columns.len() > config.max_columns {
        return Err(invalid(format!(
            "operator of {} x {} exceeds the configured limits {} x {}",
            rows.len(),
            columns.len(),
            config.max_rows,
            config.max_columns
        )));
    }
    let data: Vec<Vec<Complex64>> = match engine {
        Engine::Twisted => {
            let rule = SphereRule::unit(set.n, &config.sphere)?;
            exec.try_map(rows.len(), |r| {
                let m = rows[r];
                twisted_row(set.center(m.center_index), m.radius, basis, &columns, &rule).map_err(|e| row_error(r, m, e))
            })?
        }
        Engine::Euclidean => {
            let BasisSpec::Euclidean { profiles, .. } = basis else { unreachable!() };
            let norms = basis.euclidean_norms()?;
            let terms: Vec<EuclideanTerm> = columns
                .iter()
                .zip(&norms)
                .map(|(c, nrm)| match c {
                    Column::Euclidean { profile, order, parity } => {
                        EuclideanTerm { profile: profiles[*profile], order: *order, parity: *parity, coeff: 1.0 / nrm }
                    }
                    _ => unreachable!(),
                })
                .collect();
            exec.try_map(rows.len(), |r| {
                let m = rows[r];
                euclidean_row(set.center(m.center_index)[0], m.radius, &terms, config.circle_nodes)
                    .map_err(|e| row_error(r, m, e))
            })?
        }
    };
    let matrix = DMatrix::from_fn(rows.len(), columns.len(), |r, c| data[r][c]);
    let report = singular_report(&matrix, config.near_null_threshold);
    Ok(SamplingOperator { set: set.clone(), basis: basis.clone(), engine, config: *config, columns, rows, matrix, report })
}

fn row_error(r: usize, m: RowMeta, e: TsmError) -> TsmError {
    TsmError::Row { row: r, center: m.center_index, radius: m.radius_index, source: Box::new(e) }
}

fn twisted_row(z: &[Complex64], r: f64, basis: &BasisSpec, columns: &[Column], rule: &SphereRule) -> Result<Vec<Complex64>> {
    let n = z.len();
    let kmax = basis.max_hermite_index();
    let stride = kmax + 1;
    let s = basis.scale();
    let rs = r / rule.radius();
    let mut tables = vec![Complex64::default(); n * stride * stride];
    let mut acc = vec![ComplexSum::new(); columns.len()];
    let mut w = [Complex64::default(); MAX_DIM];
    for q in 0..rule.len() {
        for (j, node) in rule.node(q).iter().enumerate() {
            w[j] = node * rs;
            special_hermite_table(kmax, (z[j] - w[j]) * s, &mut tables[j * stride * stride..(j + 1) * stride * stride]);
        }
        let t = twist(z, &w[..n]) * rule.weights()[q];
        for (a, col) in acc.iter_mut().zip(columns) {
            let v = match col {
                Column::Hermite { index } => tables[index.alpha * stride + index.beta],
                Column::Product { first, second } => {
                    tables[first.alpha * stride + first.beta] * tables[stride * stride + second.alpha * stride + second.beta]
                }
                Column::Euclidean { .. } => return Err(invalid("Euclidean column in a twisted basis")),
            };
            a.add(v * t);
        }
    }
    Ok(acc.iter().map(|a| a.value()).collect())
}

fn euclidean_row(x: Complex64, r: f64, terms: &[EuclideanTerm], nodes: usize) -> Result<Vec<Complex64>> {
    let phase = if x == Complex64::default() { 0.0 } else { x.arg() };
    let rule = circle_rule_with_phase(r, nodes, phase)?;
    let mut acc = vec![NeumaierSum::new(); terms.len()];
    for q in 0..rule.len() {
        let p = x + rule.node(q)[0];
        for (a, t) in acc.iter_mut().zip(terms) {
            a.add(t.eval(p) * rule.weights()[q]);
        }
    }
    Ok(acc.iter().map(|a| Complex64::new(a.value(), 0.0)).collect())
}

/// Singular values (descending) and near-null right singular vectors.
pub fn singular_report(matrix: &DMatrix<Complex64>, threshold: f64) -> SingularReport {
    let (rows, cols) = matrix.shape();
    if cols == 0 {
        return SingularReport { sigma: Vec::new(), near_null: Vec::new(), degenerate: true };
    }
    // pad with zero rows so that the full right singular basis is returned
    let padded = if rows < cols {
        let mut m = DMatrix::zeros(cols, cols);
        m.view_mut((0, 0), (rows, cols)).copy_from(matrix);
        m
    } else {
        matrix.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]).then(a.cmp(&b)));
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut near_null = Vec::new();
    for &i in order.iter().rev() {
        let s = svd.singular_values[i];
        if s > threshold {
            break;
        }
        let vector = normalize_phase(v_t.row(i).iter().map(|c| c.conj()).collect());
        near_null.push(NearNull { sigma: s, vector });
    }
    SingularReport { sigma, near_null, degenerate: rows == 0 }
}

/// Rotates a vector so that its largest entry is real and positive.
fn normalize_phase(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let mut best = 0;
    for (i, c) in v.iter().enumerate() {
        if c.norm() > v[best].norm() * (1.0 + 1e-12) {
            best = i;
        }
    }
    let p = v[best];
    if p.norm() > 0.0 {
        let u = p.conj() / p.norm();
        v.iter_mut().for_each(|c| *c *= u);
    }
    v
}

impl SamplingOperator {
    pub fn sigma_min(&self) -> f64 {
        self.report.sigma_min()
    }

    /// `‖Mv‖ / ‖v‖`.
    pub fn residual_ratio(&self, v: &[Complex64]) -> Result<f64> {
        if v.len() != self.columns.len() {
            return Err(invalid("vector length does not match the operator"));
        }
        let x = nalgebra::DVector::from_column_slice(v);
        let y = &self.matrix * &x;
        let nv = x.norm();
        Ok(if nv == 0.0 { 0.0 } else { y.norm() / nv })
    }

    /// Operator restricted to the columns selected by `keep`.
    pub fn restrict_columns<P: Fn(&Column) -> bool>(&self, keep: P) -> SamplingOperator {
        let idx: Vec<usize> = (0..self.columns.len()).filter(|&c| keep(&self.columns[c])).collect();
        let matrix = self.matrix.select_columns(idx.iter());
        let report = singular_report(&matrix, self.config.near_null_threshold);
        SamplingOperator {
            set: self.set.clone(),
            basis: self.basis.clone(),
            engine: self.engine,
            config: self.config,
            columns: idx.iter().map(|&c| self.columns[c]).collect(),
            rows: self.rows.clone(),
            matrix,
            report,
        }
    }

    /// Matrix as CSV, one line per row with `re_c, im_c` column pairs.
    pub fn write_matrix_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = Vec::with_capacity(2 * self.columns.len());
        for c in 0..self.columns.len() {
            header.push(format!("re_{c}"));
            header.push(format!("im_{c}"));
        }
        w.write_record(&header)?;
        for r in 0..self.matrix.nrows() {
            let rec: Vec<String> = (0..self.matrix.ncols()).flat_map(|c| {
                let v = self.matrix[(r, c)];
                [fmt_f64(v.re), fmt_f64(v.im)]
            }).collect();
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Row and column metadata for the matrix CSV.
    pub fn metadata(&self) -> OperatorMetadata {
        OperatorMetadata {
            schema_version: 1,
            set: self.set.label(),
            engine: self.engine,
            basis: self.basis.label(),
            rows: self
                .rows
                .iter()
                .map(|m| RowRecord {
                    center_index: m.center_index,
                    radius_index: m.radius_index,
                    center: self.set.center(m.center_index).iter().map(|c| [c.re, c.im]).collect(),
                    radius: m.radius,
                })
                .collect(),
            columns: self.columns.iter().map(|c| c.label()).collect(),
        }
    }

    /// Singular values as CSV `index, sigma`.
    pub fn write_sigma_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["index", "sigma"])?;
        for (i, s) in self.report.sigma.iter().enumerate() {
            w.write_record([i.to_string(), fmt_f64(*s)])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RowRecord {
    pub center_index: usize,
    pub radius_index: usize,
    pub center: Vec<[f64; 2]>,
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorMetadata {
    pub schema_version: u32,
    pub set: String,
    pub engine: Engine,
    pub basis: String,
    pub rows: Vec<RowRecord>,
    pub columns: Vec<String>,
}

/// Mass of a degree-transformed twisted operator outside its diagonal blocks.
#[derive(Debug, Clone, Serialize)]
pub struct BlockReport {
    /// Column permutation grouping columns by spectral degree.
    pub permutation: Vec<usize>,
    pub degrees: Vec<usize>,
    pub off_block_mass: f64,
    pub total_mass: f64,
}

impl BlockReport {
    pub fn relative_off_block(&self) -> f64 {
        if self.total_mass == 0.0 {
            0.0
        } else {
            self.off_block_mass / self.total_mass
        }
    }
}

/// Replaces the radius index of every row by a degree index `k'` through
/// `ω Σ_i w_i φ_{k'}(r_i) r_i^{2n-1} M[(j,i), ·]`, the polar-decomposition
/// integral, and measures the mass off the blocks `k' = deg(column)`.
///
/// The set's radii must be the nodes of the radial rule with plain weights
/// `radial_weights`. Because every twisted basis column lies in one Laguerre
/// eigenspace, the transformed operator is block diagonal in the degree up
/// to quadrature error.
pub fn degree_block_structure(op: &SamplingOperator, radial_weights: &[f64]) -> Result<BlockReport> {
    if op.engine != Engine::Twisted {
        return Err(invalid("degree blocks are defined for twisted operators"));
    }
    let nr = op.set.radii.len();
    if radial_weights.len() != nr {
        return Err(invalid("radial weights must match the set radii"));
    }
    let degrees: Vec<usize> = op.columns.iter().map(|c| c.spectral_degree().expect("twisted column")).collect();
    let kmax = degrees.iter().copied().max().unwrap_or(0);
    let n = op.set.n;
    let omega = unit_sphere_area(n);
    let p = (2 * n - 1) as i32;
    // kernel[i][k'] = ω w_i φ_{k'}(r_i) r_i^{2n-1}
    let kernel: Vec<Vec<f64>> = op
        .set
        .radii
        .iter()
        .zip(radial_weights)
        .map(|(r, w)| {
            let mut lag = vec![0.0; kmax + 1];
            fill_laguerre_functions(n - 1, *r, &mut lag);
            lag.iter().map(|l| omega * w * l * r.powi(p)).collect()
        })
        .collect();
    let mut off = NeumaierSum::new();
    let mut total = NeumaierSum::new();
    for j in 0..op.set.len() {
        for kp in 0..=kmax {
            for (c, &deg) in degrees.iter().enumerate() {
                let mut acc = ComplexSum::new();
                for i in 0..nr {
                    acc.add(op.matrix[(j * nr + i, c)] * kernel[i][kp]);
                }
                let m = acc.value().norm_sqr();
                total.add(m);
                if kp != deg {
                    off.add(m);
                }
            }
        }
    }
    let mut permutation: Vec<usize> = (0..degrees.len()).collect();
    permutation.sort_by_key(|&c| (degrees[c], c));
    Ok(BlockReport { permutation, degrees, off_block_mass: off.value(), total_mass: total.value() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euclidean::RadialProfile;
    use crate::injectivity::sets::{make_set, RadiusGrid, SetKind};

    #[test]
    fn empty_set_gives_degenerate_operator() {
        let set = SamplingSet::custom(1, vec![], RadiusGrid::default().radii().unwrap()).unwrap();
        let basis = BasisSpec::SpecialHermite { max_index: 2, scale: 1.0 };
        let op = assemble_operator(&set, &basis, Engine::Twisted, &OperatorConfig::default(), Exec::Serial).unwrap();
        assert_eq!(op.matrix.nrows(), 0);
        assert!(op.report.degenerate);
        assert_eq!(op.sigma_min(), 0.0);
        assert_eq!(op.report.near_null.len(), 9);
    }

    #[test]
    fn twisted_entries_match_eigen_relation() {
        // φ_{αβ}×μ_r = φ_α^0(r) φ_{αβ}
        let set = make_set(SetKind::CoxeterLines { lines: 1, extent: 1.0, per_ray: 3 }, vec![0.5, 1.3]).unwrap();
        let basis = BasisSpec::SpecialHermite { max_index: 3, scale: 1.0 };
        let op = assemble_operator(&set, &basis, Engine::Twisted, &OperatorConfig::default(), Exec::Serial).unwrap();
        for (r, m) in op.rows.iter().enumerate() {
            let z = set.center(m.center_index)[0];
            for (c, col) in op.columns.iter().enumerate() {
                let Column::Hermite { index } = col else { unreachable!() };
                let expect = crate::special_functions::laguerre_function_unchecked(
                    crate::special_functions::LaguerreSpec::new(index.alpha, 0),
                    m.radius,
                ) * crate::special_functions::special_hermite_basis(*index, z);
                assert!((op.matrix[(r, c)] - expect).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn mismatched_engine_rejected() {
        let set = make_set(SetKind::CoxeterLines { lines: 1, extent: 1.0, per_ray: 3 }, vec![1.0]).unwrap();
        let basis = BasisSpec::Euclidean { profiles: vec![RadialProfile::Gaussian { scale: 1.0 }], max_order: 2 };
        assert!(assemble_operator(&set, &basis, Engine::Twisted, &OperatorConfig::default(), Exec::Serial).is_err());
    }

    #[test]
    fn unitary_mixing_preserves_singular_values() {
        let set = make_set(SetKind::CoxeterLines { lines: 2, extent: 2.0, per_ray: 4 }, vec![0.5, 1.0, 2.0]).unwrap();
        let basis = BasisSpec::SpecialHermite { max_index: 2, scale: 1.0 };
        let op = assemble_operator(&set, &basis, Engine::Twisted, &OperatorConfig::default(), Exec::Serial).unwrap();
        let c = op.columns.len();
        // Householder reflection: unitary
        let u = nalgebra::DVector::from_fn(c, |i, _| Complex64::new(1.0 + i as f64, 0.5 - i as f64));
        let u = &u / Complex64::new(u.norm(), 0.0);
        let h = DMatrix::<Complex64>::identity(c, c) - (&u * u.adjoint()) * Complex64::new(2.0, 0.0);
        let mixed = singular_report(&(&op.matrix * h), 1e-8);
        for (a, b) in op.report.sigma.iter().zip(&mixed.sigma) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
