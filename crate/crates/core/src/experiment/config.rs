//! Experiment configuration: flat `section.key = value` TOML with every
//! default documented in `config/defaults.toml`.

use crate::error::{Result, TsmError};
use crate::euclidean::RadialProfile;
use crate::injectivity::{ColumnFilter, CurveProfile, Engine, RadiusGrid, SetKind};
use crate::quadrature::{PlaneOrders, Sphere3Orders, SphereOrders};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentName {
    #[default]
    VerifyIdentities,
    TsmEval,
    Project,
    ExpandQk,
    Counterexample,
    Probe,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 6] = [
        ExperimentName::VerifyIdentities,
        ExperimentName::TsmEval,
        ExperimentName::Project,
        ExperimentName::ExpandQk,
        ExperimentName::Counterexample,
        ExperimentName::Probe,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentName::VerifyIdentities => "verify-identities",
            ExperimentName::TsmEval => "tsm-eval",
            ExperimentName::Project => "project",
            ExperimentName::ExpandQk => "expand-qk",
            ExperimentName::Counterexample => "counterexample",
            ExperimentName::Probe => "probe",
        }
    }
}

impl fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentName {
    type Err = TsmError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| TsmError::Config(format!("unknown experiment '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub experiment: ExperimentName,
    pub out: PathBuf,
    /// Use the rayon pool (ignored without the `parallel` feature).
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { experiment: ExperimentName::default(), out: PathBuf::from("tsmlab-out"), parallel: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub circle_nodes: usize,
    pub sphere3_theta: usize,
    pub sphere3_phi1: usize,
    pub sphere3_phi2: usize,
    pub plane_radial: usize,
    pub plane_angular: usize,
    pub plane_r_max: f64,
    pub moment_tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let s = SphereOrders::default();
        let p = PlaneOrders::default();
        Self {
            circle_nodes: s.circle,
            sphere3_theta: s.sphere3.theta,
            sphere3_phi1: s.sphere3.phi1,
            sphere3_phi2: s.sphere3.phi2,
            plane_radial: p.radial,
            plane_angular: p.angular,
            plane_r_max: 12.0,
            moment_tolerance: 1e-10,
        }
    }
}

impl QuadratureConfig {
    pub fn sphere3(&self) -> Sphere3Orders {
        Sphere3Orders { theta: self.sphere3_theta, phi1: self.sphere3_phi1, phi2: self.sphere3_phi2 }
    }

    pub fn sphere_orders(&self) -> SphereOrders {
        SphereOrders { circle: self.circle_nodes, sphere3: self.sphere3() }
    }

    pub fn plane_orders(&self) -> PlaneOrders {
        PlaneOrders { radial: self.plane_radial, angular: self.plane_angular, sphere3: self.sphere3() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IdentitiesConfig {
    pub dimensions: Vec<usize>,
    pub eigen_k_max: usize,
    pub eigen_tolerance: f64,
    /// Extent and points per axis of the Cartesian grid used on ℂ.
    pub eigen_extent: f64,
    pub eigen_points: usize,
    pub eigen_half_width: usize,
    pub product_k_max: usize,
    pub product_radii: Vec<f64>,
    pub product_tolerance: f64,
    pub expansion_a: f64,
    pub expansion_k_max: usize,
    pub expansion_extent: f64,
    pub expansion_points: usize,
    pub expansion_tolerance: f64,
    pub orthogonality_k_max: usize,
    pub orthogonality_tolerance: f64,
    pub polar_k_max: usize,
    pub polar_radial_nodes: usize,
    pub polar_tolerance: f64,
    pub tensor_k_max: usize,
    pub tensor_radial: usize,
    pub tensor_angular: usize,
    pub tensor_r_max: f64,
    pub tensor_tolerance: f64,
    pub block_cap: usize,
    pub block_radial_nodes: usize,
    pub block_r_max: f64,
    pub block_tolerance: f64,
}

impl Default for IdentitiesConfig {
    fn default() -> Self {
        Self {
            dimensions: vec![1, 2],
            eigen_k_max: 10,
            eigen_tolerance: 1e-6,
            eigen_extent: 8.0,
            eigen_points: 241,
            eigen_half_width: 4,
            product_k_max: 8,
            product_radii: vec![0.3, 1.0, 1.7, 2.5, 3.4],
            product_tolerance: 1e-8,
            expansion_a: 1.0 / 3.0,
            expansion_k_max: 40,
            expansion_extent: 8.0,
            expansion_points: 65,
            expansion_tolerance: 1e-6,
            orthogonality_k_max: 4,
            orthogonality_tolerance: 1e-8,
            polar_k_max: 6,
            polar_radial_nodes: 64,
            polar_tolerance: 1e-6,
            tensor_k_max: 4,
            tensor_radial: 40,
            tensor_angular: 48,
            tensor_r_max: 10.0,
            tensor_tolerance: 1e-6,
            block_cap: 4,
            block_radial_nodes: 32,
            block_r_max: 10.0,
            block_tolerance: 1e-8,
        }
    }
}

/// Test field used by `tsm-eval` and `project`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldConfig {
    /// `gaussian`, `laguerre`, `type` or `hermite`.
    pub kind: String,
    pub n: usize,
    /// Gaussian and type-function decay `e^{-a|z|²}`.
    pub a: f64,
    /// Laguerre degree.
    pub k: usize,
    /// Type-function monomial `z^alpha z̄^beta` (must be harmonic).
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    /// Special Hermite index on ℂ.
    pub hermite_alpha: usize,
    pub hermite_beta: usize,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self {
            kind: "gaussian".into(),
            n: 1,
            a: 1.0 / 3.0,
            k: 0,
            alpha: vec![1],
            beta: vec![0],
            hermite_alpha: 0,
            hermite_beta: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TsmConfig {
    /// Centers as flat `re, im` pairs, `n` pairs per center.
    pub centers: Vec<f64>,
    pub radii: Vec<f64>,
}

impl Default for TsmConfig {
    fn default() -> Self {
        Self { centers: vec![0.0, 0.0, 0.5, 0.5, -1.0, 0.3], radii: vec![0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProjectConfig {
    pub k_max: usize,
    /// Output grid on ℂ.
    pub extent: f64,
    pub points: usize,
    /// Output centers on ℂ² as flat `re, im` pairs.
    pub centers: Vec<f64>,
    pub tolerance: f64,
}

impl Default for ProjectConfig {
    fn default() -> Self {
        Self {
            k_max: 40,
            extent: 8.0,
            points: 65,
            centers: vec![0.0, 0.0, 0.0, 0.0, 0.5, -0.3, 0.2, 0.0, -1.0, 0.8, 1.1, 1.0],
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExpandConfig {
    pub a: f64,
    pub p_values: Vec<u32>,
    pub k_max: usize,
    pub q_max: usize,
    pub extent: f64,
    pub points: usize,
    pub tolerance: f64,
    pub condition_limit: f64,
    pub holdout_every: usize,
}

impl Default for ExpandConfig {
    fn default() -> Self {
        Self {
            a: 1.0 / 3.0,
            p_values: vec![0, 1, 2],
            k_max: 4,
            q_max: 3,
            extent: 8.0,
            points: 65,
            tolerance: 1e-6,
            condition_limit: 1e10,
            holdout_every: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CounterexampleConfig {
    pub euclidean: bool,
    pub twisted: bool,
    pub lines: Vec<usize>,
    /// Gaussian width of the odd counterexample's radial factor.
    pub profile_scale: f64,
    pub centers: usize,
    pub extent: f64,
    pub radii_min: f64,
    pub radii_max: f64,
    pub radii_count: usize,
    pub mean_tolerance: f64,
    pub near_null_tolerance: f64,
    /// Twisted type function `e^{-a|z|²} z₁ z̄₂` on ℂ².
    pub type_a: f64,
    pub zero_set_centers: usize,
    pub generic_centers: usize,
    pub vanishing_tolerance: f64,
    pub generic_floor: f64,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        Self {
            euclidean: true,
            twisted: true,
            lines: vec![1, 2, 3, 4],
            profile_scale: 1.0,
            centers: 40,
            extent: 3.0,
            radii_min: 0.2,
            radii_max: 6.0,
            radii_count: 20,
            mean_tolerance: 1e-10,
            near_null_tolerance: 1e-8,
            type_a: 0.25,
            zero_set_centers: 30,
            generic_centers: 10,
            vanishing_tolerance: 1e-8,
            generic_floor: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeSectionConfig {
    /// `coxeter_lines`, `plane_cross_coxeter`, `sphere`, `sphere_cross_plane` or `curve`.
    pub set: String,
    pub n: usize,
    pub lines: usize,
    pub half_lines: usize,
    pub extent: f64,
    pub per_ray: usize,
    pub plane_extent: f64,
    pub plane_points: usize,
    pub radius: f64,
    pub circle_points: usize,
    /// `exponential` (`r(t) = scale·e^{-rate·t}`) or `constant` (`r = scale`).
    pub curve_profile: String,
    pub curve_scale: f64,
    pub curve_rate: f64,
    pub t0: f64,
    pub t1: f64,
    pub samples: usize,
    pub radii_min: f64,
    pub radii_max: f64,
    pub radii_count: usize,
    pub engine: Engine,
    #[serde(rename = "K")]
    pub truncation: usize,
    /// Dilation of the special Hermite basis; 0 picks the default for the set.
    pub scale: f64,
    pub profile_scales: Vec<f64>,
    /// `all` or `odd_sector`.
    pub filter: String,
    pub curve_steps: Vec<usize>,
    pub near_null_threshold: f64,
    pub max_reconstructions: usize,
    pub max_rows: usize,
    pub max_columns: usize,
    /// Also probe the Euclidean engine's odd sector on the same set.
    pub contrast: bool,
    pub contrast_ratio: f64,
    pub check_regression: bool,
    pub regression_tolerance: f64,
    pub export_matrix: bool,
}

impl Default for ProbeSectionConfig {
    fn default() -> Self {
        Self {
            set: "coxeter_lines".into(),
            n: 1,
            lines: 2,
            half_lines: 1,
            extent: 4.0,
            per_ray: 9,
            plane_extent: 1.0,
            plane_points: 3,
            radius: 1.0,
            circle_points: 32,
            curve_profile: "exponential".into(),
            curve_scale: 1.0,
            curve_rate: 1.0,
            t0: 0.0,
            t1: 4.0 * std::f64::consts::PI,
            samples: 64,
            radii_min: 0.2,
            radii_max: 6.0,
            radii_count: 24,
            engine: Engine::Twisted,
            truncation: 10,
            scale: 0.0,
            profile_scales: vec![0.5, 1.0, 2.0],
            filter: "all".into(),
            curve_steps: vec![0, 2, 4],
            near_null_threshold: 1e-8,
            max_reconstructions: 4,
            max_rows: 200_000,
            max_columns: 2_000,
            contrast: true,
            contrast_ratio: 1e6,
            check_regression: true,
            regression_tolerance: 1e-10,
            export_matrix: false,
        }
    }
}

impl ProbeSectionConfig {
    pub fn radius_grid(&self) -> RadiusGrid {
        RadiusGrid { r_min: self.radii_min, r_max: self.radii_max, count: self.radii_count }
    }

    pub fn set_kind(&self, sphere3: Sphere3Orders) -> Result<SetKind> {
        Ok(match self.set.as_str() {
            "coxeter_lines" => SetKind::CoxeterLines { lines: self.lines, extent: self.extent, per_ray: self.per_ray },
            "plane_cross_coxeter" => SetKind::PlaneCrossCoxeter {
                n: self.n,
                half_lines: self.half_lines,
                extent: self.extent,
                per_ray: self.per_ray,
                plane_extent: self.plane_extent,
                plane_points: self.plane_points,
            },
            "sphere" => SetKind::Sphere { n: self.n, radius: self.radius, circle_points: self.circle_points, sphere3 },
            "sphere_cross_plane" => SetKind::SphereCrossPlane {
                n: self.n,
                radius: self.radius,
                circle_points: self.circle_points,
                sphere3,
                plane_extent: self.plane_extent,
                plane_points: self.plane_points,
            },
            "curve" => SetKind::Curve { profile: self.curve()?, t0: self.t0, t1: self.t1, samples: self.samples },
            other => return Err(TsmError::Config(format!("unknown probe.set '{other}'"))),
        })
    }

    pub fn curve(&self) -> Result<CurveProfile> {
        match self.curve_profile.as_str() {
            "exponential" => Ok(CurveProfile::Exponential { scale: self.curve_scale, rate: self.curve_rate }),
            "constant" => Ok(CurveProfile::Constant { radius: self.curve_scale }),
            other => Err(TsmError::Config(format!("unknown probe.curve_profile '{other}'"))),
        }
    }

    pub fn column_filter(&self) -> Result<ColumnFilter> {
        match self.filter.as_str() {
            "all" => Ok(ColumnFilter::All),
            "odd_sector" => Ok(ColumnFilter::OddSector { lines: self.lines as u32 }),
            other => Err(TsmError::Config(format!("unknown probe.filter '{other}'"))),
        }
    }

    pub fn profiles(&self) -> Vec<RadialProfile> {
        self.profile_scales.iter().map(|&s| RadialProfile::Gaussian { scale: s }).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub run: RunConfig,
    pub quadrature: QuadratureConfig,
    pub identities: IdentitiesConfig,
    pub field: FieldConfig,
    pub tsm: TsmConfig,
    pub project: ProjectConfig,
    pub expand: ExpandConfig,
    pub counterexample: CounterexampleConfig,
    pub probe: ProbeSectionConfig,
}

fn config_err(msg: impl Into<String>) -> TsmError {
    TsmError::Config(msg.into())
}

/// Parses the right-hand side of `--override key=value` as a TOML value,
/// falling back to a bare string.
fn parse_value(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    match toml::from_str::<toml::Table>(&doc) {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.to_string())),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

fn insert_dotted(table: &mut toml::Table, key: &str, value: toml::Value) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(config_err(format!("malformed key '{key}'")));
    }
    let mut cur = table;
    for p in &parts[..parts.len() - 1] {
        let entry = cur.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = match entry {
            toml::Value::Table(t) => t,
            _ => return Err(config_err(format!("'{p}' in '{key}' is not a section"))),
        };
    }
    cur.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

/// Sources of a configuration, applied in order: file, then the dedicated
/// flags, then `--override` pairs.
#[derive(Debug, Clone, Default)]
pub struct ConfigSources {
    pub file: Option<PathBuf>,
    pub experiment: Option<String>,
    pub out: Option<PathBuf>,
    pub overrides: Vec<String>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        Self::from_table(table)
    }

    fn from_table(table: toml::Table) -> Result<Self> {
        let cfg: ExperimentConfig = table.try_into().map_err(|e| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(sources: &ConfigSources) -> Result<Self> {
        let mut table = match &sources.file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
                toml::from_str::<toml::Table>(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))?
            }
            None => toml::Table::new(),
        };
        if let Some(e) = &sources.experiment {
            insert_dotted(&mut table, "run.experiment", toml::Value::String(e.clone()))?;
        }
        if let Some(out) = &sources.out {
            insert_dotted(&mut table, "run.out", toml::Value::String(out.display().to_string()))?;
        }
        for ov in &sources.overrides {
            let (key, raw) = ov.split_once('=').ok_or_else(|| config_err(format!("override '{ov}' is not key=value")))?;
            insert_dotted(&mut table, key.trim(), parse_value(raw.trim()))?;
        }
        Self::from_table(table)
    }

    pub fn out_dir(&self) -> &Path {
        &self.run.out
    }

    /// Range checks beyond what the types enforce.
    pub fn validate(&self) -> Result<()> {
        let q = &self.quadrature;
        positive_counts(&[
            ("quadrature.circle_nodes", q.circle_nodes),
            ("quadrature.sphere3_theta", q.sphere3_theta),
            ("quadrature.sphere3_phi1", q.sphere3_phi1),
            ("quadrature.sphere3_phi2", q.sphere3_phi2),
            ("quadrature.plane_radial", q.plane_radial),
            ("quadrature.plane_angular", q.plane_angular),
        ])?;
        positive(&[("quadrature.plane_r_max", q.plane_r_max), ("quadrature.moment_tolerance", q.moment_tolerance)])?;

        let i = &self.identities;
        if i.dimensions.is_empty() || i.dimensions.iter().any(|&n| n != 1 && n != 2) {
            return Err(config_err("identities.dimensions must be a nonempty subset of [1, 2]"));
        }
        positive(&[
            ("identities.eigen_tolerance", i.eigen_tolerance),
            ("identities.eigen_extent", i.eigen_extent),
            ("identities.product_tolerance", i.product_tolerance),
            ("identities.expansion_a", i.expansion_a),
            ("identities.expansion_extent", i.expansion_extent),
            ("identities.expansion_tolerance", i.expansion_tolerance),
            ("identities.orthogonality_tolerance", i.orthogonality_tolerance),
            ("identities.polar_tolerance", i.polar_tolerance),
            ("identities.tensor_r_max", i.tensor_r_max),
            ("identities.tensor_tolerance", i.tensor_tolerance),
            ("identities.block_r_max", i.block_r_max),
            ("identities.block_tolerance", i.block_tolerance),
        ])?;
        positive_counts(&[
            ("identities.eigen_points", i.eigen_points),
            ("identities.eigen_half_width", i.eigen_half_width),
            ("identities.expansion_points", i.expansion_points),
            ("identities.polar_radial_nodes", i.polar_radial_nodes),
            ("identities.tensor_radial", i.tensor_radial),
            ("identities.tensor_angular", i.tensor_angular),
            ("identities.block_radial_nodes", i.block_radial_nodes),
        ])?;
        radii(&i.product_radii, "identities.product_radii")?;

        let f = &self.field;
        if !(1..=3).contains(&f.n) {
            return Err(config_err("field.n must be 1, 2 or 3"));
        }
        if !["gaussian", "laguerre", "type", "hermite"].contains(&f.kind.as_str()) {
            return Err(config_err(format!("unknown field.kind '{}'", f.kind)));
        }
        positive(&[("field.a", f.a)])?;

        if !self.tsm.centers.len().is_multiple_of(2 * f.n) {
            return Err(config_err("tsm.centers must hold 2n reals per center"));
        }
        radii(&self.tsm.radii, "tsm.radii")?;

        let p = &self.project;
        positive(&[("project.extent", p.extent), ("project.tolerance", p.tolerance)])?;
        positive_counts(&[("project.points", p.points)])?;
        if !p.centers.len().is_multiple_of(4) {
            return Err(config_err("project.centers must hold 4 reals per center on C^2"));
        }

        let e = &self.expand;
        positive(&[
            ("expand.a", e.a),
            ("expand.extent", e.extent),
            ("expand.tolerance", e.tolerance),
            ("expand.condition_limit", e.condition_limit),
        ])?;
        positive_counts(&[("expand.points", e.points)])?;
        if e.holdout_every < 2 {
            return Err(config_err("expand.holdout_every must be at least 2"));
        }

        let c = &self.counterexample;
        positive(&[
            ("counterexample.profile_scale", c.profile_scale),
            ("counterexample.extent", c.extent),
            ("counterexample.radii_min", c.radii_min),
            ("counterexample.mean_tolerance", c.mean_tolerance),
            ("counterexample.near_null_tolerance", c.near_null_tolerance),
            ("counterexample.type_a", c.type_a),
            ("counterexample.vanishing_tolerance", c.vanishing_tolerance),
            ("counterexample.generic_floor", c.generic_floor),
        ])?;
        positive_counts(&[("counterexample.centers", c.centers), ("counterexample.radii_count", c.radii_count)])?;
        if c.lines.contains(&0) {
            return Err(config_err("counterexample.lines must be positive"));
        }
        if c.radii_max <= c.radii_min {
            return Err(config_err("counterexample.radii_max must exceed radii_min"));
        }

        let p = &self.probe;
        p.set_kind(q.sphere3())?;
        p.column_filter()?;
        positive(&[
            ("probe.radii_min", p.radii_min),
            ("probe.near_null_threshold", p.near_null_threshold),
            ("probe.contrast_ratio", p.contrast_ratio),
            ("probe.regression_tolerance", p.regression_tolerance),
        ])?;
        if p.radii_max <= p.radii_min || p.radii_count == 0 {
            return Err(config_err("probe radii need radii_max > radii_min and radii_count >= 1"));
        }
        if p.scale < 0.0 || !p.scale.is_finite() {
            return Err(config_err("probe.scale must be 0 (automatic) or positive"));
        }
        if p.profile_scales.is_empty() || p.profile_scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(config_err("probe.profile_scales must be positive"));
        }
        Ok(())
    }
}

fn positive(values: &[(&str, f64)]) -> Result<()> {
    for (name, v) in values {
        if !(v.is_finite() && *v > 0.0) {
            return Err(config_err(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(())
}

fn positive_counts(values: &[(&str, usize)]) -> Result<()> {
    for (name, v) in values {
        if *v == 0 {
            return Err(config_err(format!("{name} must be at least 1")));
        }
    }
    Ok(())
}

fn radii(r: &[f64], name: &str) -> Result<()> {
    if r.is_empty() || r.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(config_err(format!("{name} must be nonempty and positive")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_file_matches_defaults() {
        let text = include_str!("../../../../config/defaults.toml");
        let parsed = ExperimentConfig::from_toml_str(text).unwrap();
        assert_eq!(parsed, ExperimentConfig::default());
    }

    #[test]
    fn overrides_are_typed() {
        let cfg = ExperimentConfig::load(&ConfigSources {
            overrides: vec!["probe.K=6".into(), "probe.engine=euclidean".into(), "identities.dimensions=[1]".into()],
            experiment: Some("probe".into()),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(cfg.probe.truncation, 6);
        assert_eq!(cfg.probe.engine, Engine::Euclidean);
        assert_eq!(cfg.identities.dimensions, vec![1]);
        assert_eq!(cfg.run.experiment, ExperimentName::Probe);
    }

    #[test]
    fn bad_configs_rejected() {
        for bad in [
            "tsm.radii = [-1.0]",
            "probe.unknown_key = 3",
            "run.experiment = \"nope\"",
            "probe.set = \"torus\"",
            "quadrature.circle_nodes = 0",
        ] {
            assert!(matches!(ExperimentConfig::from_toml_str(bad), Err(TsmError::Config(_))), "{bad}");
        }
    }
}
