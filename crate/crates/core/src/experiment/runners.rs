//! One function per experiment. Each writes its payload files and returns
//! its checks.

use super::checks::CheckResult;
use super::config::{ExperimentConfig, FieldConfig};
use super::identities::{self, IdentityReport};
use super::output::OutputDir;
use super::TWISTED_SIGMA2_SIGMA_MIN;
use crate::constants::{expansion_constant, sphere_product_constant};
use crate::error::{Result, TsmError};
use crate::euclidean::{circular_mean_table, coxeter_odd_counterexample, write_mean_table, RadialProfile};
use crate::exec::Exec;
use crate::grid::{Grid, UniformGrid};
use crate::injectivity::{
    fit_projection_expansion, filtered_operator, hecke_bochner_counterexample, injectivity_probe, make_set, BasisSpec,
    ColumnFilter, Engine, FitOptions, OperatorConfig, ProbeConfig, ProjectionExpansion, RadiusGrid, SamplingSet,
    Sector, SetKind, TypeFunctionSpec, WEIGHTED_SCALE,
};
use crate::quadrature::{plane_rule, SphereRule};
use crate::special_functions::{SolidHarmonic, SpecialHermiteIndex};
use crate::twisted::{
    fmt_f64, spectral_projections, twisted_spherical_mean, Field, GaussianField, HermiteCombination, LaguerreField,
    RuleSamples, SampledField, SpectrumTruncation, TypeField,
};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

pub fn verify_identities(cfg: &ExperimentConfig, exec: Exec, out: &mut OutputDir) -> Result<Vec<CheckResult>> {
    let mut report = IdentityReport { schema_version: 1, ..Default::default() };
    let mut checks = vec![
        identities::eigen_suite(&cfg.identities, exec, &mut report)?,
        identities::product_relation(cfg, &mut report)?,
    ];
    if cfg.identities.dimensions.contains(&1) {
        checks.push(identities::expansion(&cfg.identities, exec, &mut report)?);
        checks.push(identities::orthogonality(cfg, exec, &mut report)?);
        checks.extend(identities::polar_bridge_suite(cfg, exec, &mut report)?);
    }
    if cfg.identities.dimensions.contains(&2) {
        checks.push(identities::tensor_diagonal(cfg, exec, &mut report)?);
    }
    checks.push(identities::degree_blocks(cfg, exec, &mut report)?);
    out.json("identities.json", &report)?;
    Ok(checks)
}

/// The test field described by `[field]`.
pub fn build_field(f: &FieldConfig) -> Result<Box<dyn Field>> {
    let config = |m: String| TsmError::Config(m);
    Ok(match f.kind.as_str() {
        "gaussian" => Box::new(GaussianField::new(f.n, f.a)?),
        "laguerre" => Box::new(LaguerreField::new(f.n, f.k)?),
        "type" => {
            if f.alpha.len() != f.n || f.beta.len() != f.n {
                return Err(config("field.alpha and field.beta need n entries".into()));
            }
            let h = SolidHarmonic::monomial(f.alpha.clone(), f.beta.clone())?;
            if !h.is_harmonic() {
                return Err(config(format!("z^{:?} conj(z)^{:?} is not harmonic", f.alpha, f.beta)));
            }
            Box::new(TypeField::new(f.a, &h)?)
        }
        "hermite" => {
            if f.n != 1 {
                return Err(config("special Hermite fields live on C (field.n = 1)".into()));
            }
            Box::new(HermiteCombination::single(SpecialHermiteIndex::new(f.hermite_alpha, f.hermite_beta)))
        }
        other => return Err(config(format!("unknown field.kind '{other}'"))),
    })
}

fn centers_from_flat(flat: &[f64], n: usize) -> Vec<Vec<Complex64>> {
    flat.chunks(2 * n).map(|c| c.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect()).collect()
}

pub fn tsm_eval(cfg: &ExperimentConfig, exec: Exec, out: &mut OutputDir) -> Result<Vec<CheckResult>> {
    let n = cfg.field.n;
    let field = build_field(&cfg.field)?;
    let rule = SphereRule::unit(n, &cfg.quadrature.sphere_orders())?;
    let centers = centers_from_flat(&cfg.tsm.centers, n);
    let radii = &cfg.tsm.radii;
    let values = exec.try_map(centers.len() * radii.len(), |i| {
        twisted_spherical_mean(field.as_ref(), &centers[i / radii.len()], radii[i % radii.len()], &rule)
    })?;
    out.csv("tsm.csv", |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["center_index", "r", "re", "im"])?;
        for (i, v) in values.iter().enumerate() {
            let (j, r) = (i / radii.len(), radii[i % radii.len()]);
            csv.write_record([j.to_string(), fmt_f64(r), fmt_f64(v.re), fmt_f64(v.im)])?;
        }
        csv.flush()?;
        Ok(())
    })?;
    let finite = values.iter().all(|v| v.re.is_finite() && v.im.is_finite());
    let mut checks = vec![CheckResult::at_least("tsm.finite", if finite { 1.0 } else { 0.0 }, 1.0, "all means finite")];
    if cfg.field.kind == "laguerre" {
        let f = LaguerreField::new(n, cfg.field.k)?;
        let b = sphere_product_constant(n, cfg.field.k);
        let mut worst: f64 = 0.0;
        for (i, v) in values.iter().enumerate() {
            let z = &centers[i / radii.len()];
            let rho = z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            let expect = b * f.radial(radii[i % radii.len()]) * f.radial(rho);
            worst = worst.max((v - expect).norm() / (1.0 + expect.abs()));
        }
        checks.push(CheckResult::at_most("tsm.product_relation", worst, cfg.identities.product_tolerance, "worst relative deviation"));
    } else {
        checks.push(CheckResult::skipped("tsm.product_relation", "field is not a Laguerre function"));
    }
    Ok(checks)
}

#[derive(Debug, Clone, Serialize)]
struct ProjectionSummary {
    schema_version: u32,
    n: usize,
    k_max: usize,
    l2_norms: Vec<f64>,
    partial_errors: Vec<f64>,
}

pub fn project(cfg: &ExperimentConfig, exec: Exec, out: &mut OutputDir) -> Result<Vec<CheckResult>> {
    let n = cfg.field.n;
    let field = build_field(&cfg.field)?;
    let pc = &cfg.project;
    let (l2_norms, partial_errors) = match n {
        1 => {
            let grid = Grid::Uniform(UniformGrid::square(1, pc.extent, pc.points)?);
            let f = SampledField::sample(field.as_ref(), grid.clone(), exec)?;
            let qs = spectral_projections(&RuleSamples::from_sampled(&f)?, pc.k_max, &grid, exec)?;
            let norms = qs.iter().map(|q| q.l2_norm()).collect();
            out.csv("projections.csv", |w| {
                let mut csv = csv::Writer::from_writer(w);
                csv.write_record(["k", "re_z1", "im_z1", "re", "im"])?;
                for (k, q) in qs.iter().enumerate() {
                    for (i, v) in q.values().iter().enumerate() {
                        let z = grid.point(i)[0];
                        csv.write_record([k.to_string(), fmt_f64(z.re), fmt_f64(z.im), fmt_f64(v.re), fmt_f64(v.im)])?;
                    }
                }
                csv.flush()?;
                Ok(())
            })?;
            let errors = SpectrumTruncation::from_projections(1, qs)?.partial_errors(&f, exec)?;
            (norms, errors)
        }
        _ => {
            let q = &cfg.quadrature;
            let rule = plane_rule(n, q.plane_r_max, &q.plane_orders(), q.moment_tolerance)?;
            let samples = RuleSamples::from_field(field.as_ref(), rule, exec)?;
            let centers = centers_from_flat(&pc.centers, n);
            let proj: Vec<Vec<Complex64>> = exec.map(centers.len(), |j| samples.projections_at(pc.k_max, &centers[j]));
            let exact: Vec<Complex64> = centers.iter().map(|z| field.eval(z)).collect::<Result<_>>()?;
            out.csv("projections.csv", |w| {
                let mut csv = csv::Writer::from_writer(w);
                let mut header = vec!["k".to_string()];
                for j in 1..=n {
                    header.push(format!("re_z{j}"));
                    header.push(format!("im_z{j}"));
                }
                header.extend(["re".into(), "im".into()]);
                csv.write_record(&header)?;
                for k in 0..=pc.k_max {
                    for (z, p) in centers.iter().zip(&proj) {
                        let mut rec = vec![k.to_string()];
                        for x in z {
                            rec.push(fmt_f64(x.re));
                            rec.push(fmt_f64(x.im));
                        }
                        rec.push(fmt_f64(p[k].re));
                        rec.push(fmt_f64(p[k].im));
                        csv.write_record(&rec)?;
                    }
                }
                csv.flush()?;
                Ok(())
            })?;
            let scale = expansion_constant(n);
            let norms = (0..=pc.k_max).map(|k| proj.iter().map(|p| p[k].norm_sqr()).sum::<f64>().sqrt()).collect();
            let errors = (0..=pc.k_max)
                .map(|upto| {
                    let approx: Vec<Complex64> = proj.iter().map(|p| p[..=upto].iter().sum::<Complex64>() * scale).collect();
                    crate::twisted::relative_distance(&approx, &exact)
                })
                .collect();
            (norms, errors)
        }
    };
    let last = *partial_errors.last().expect("k_max + 1 partial sums");
    out.json("projections.json", &ProjectionSummary { schema_version: 1, n, k_max: pc.k_max, l2_norms, partial_errors })?;
    Ok(vec![CheckResult::at_most("project.reconstruction", last, pc.tolerance, "relative error of the truncated expansion")])
}

#[derive(Debug, Clone, Serialize)]
struct ExpansionRecord {
    p: u32,
    k: usize,
    projection_max_abs: f64,
    expansion: Option<ProjectionExpansion>,
    dominant_sector: Option<Sector>,
    localization: Option<f64>,
}

pub fn expand_qk(cfg: &ExperimentConfig, exec: Exec, out: &mut OutputDir) -> Result<Vec<CheckResult>> {
    let ec = &cfg.expand;
    let grid = Grid::Uniform(UniformGrid::square(1, ec.extent, ec.points)?);
    let options = FitOptions { condition_limit: ec.condition_limit, holdout_every: ec.holdout_every };
    let mut records = Vec::new();
    let mut worst_holdout: f64 = 0.0;
    let mut worst_localization: f64 = 0.0;
    let mut worst_below: f64 = 0.0;
    let mut sectors_ok = true;
    for &p in &ec.p_values {
        let f = TypeField::new(ec.a, &SolidHarmonic::monomial(vec![p], vec![0])?)?;
        let sampled = SampledField::sample(&f, grid.clone(), exec)?;
        let qs = spectral_projections(&RuleSamples::from_sampled(&sampled)?, ec.k_max, &grid, exec)?;
        let scale = qs.iter().map(|q| q.max_abs()).fold(0.0, f64::max);
        for (k, q) in qs.iter().enumerate() {
            let projection_max_abs = q.max_abs();
            if k < p as usize {
                let rel = if scale > 0.0 { projection_max_abs / scale } else { 0.0 };
                worst_below = worst_below.max(rel);
                records.push(ExpansionRecord { p, k, projection_max_abs, expansion: None, dominant_sector: None, localization: None });
                continue;
            }
            let fit = fit_projection_expansion(q, k, ec.q_max, &options)?;
            let dominant = fit.dominant_sector();
            worst_holdout = worst_holdout.max(fit.expansion.holdout_error);
            match dominant {
                Some((s, share)) => {
                    sectors_ok &= s == Sector::Holomorphic(p as usize);
                    worst_localization = worst_localization.max(1.0 - share);
                }
                None => sectors_ok = false,
            }
            records.push(ExpansionRecord {
                p,
                k,
                projection_max_abs,
                dominant_sector: dominant.map(|d| d.0),
                localization: dominant.map(|d| d.1),
                expansion: Some(fit.expansion),
            });
        }
    }
    out.json("expansions.json", &records)?;
    let sector_value = if sectors_ok { worst_localization } else { f64::INFINITY };
    Ok(vec![
        CheckResult::at_most("expand.holdout", worst_holdout, ec.tolerance, "worst held-out relative error"),
        CheckResult::at_most("expand.sector", sector_value, ec.tolerance, "1 - share of the z^p sector (∞ if another sector dominates)"),
        CheckResult::at_most("expand.below_p", worst_below, 1e-8, "max |Q_k| / max_k max |Q_k| for k < p"),
    ])
}

/// `count` centers spread over the `2·lines` rays of `Σ_lines`, at radii
/// in `(0, extent]`, starting with the origin.
pub fn coxeter_centers(lines: usize, count: usize, extent: f64) -> Vec<Complex64> {
    let rays = 2 * lines;
    let mut out = vec![Complex64::default()];
    let per_ray = (count - 1).div_ceil(rays);
    for i in 0..count - 1 {
        let (ray, step) = (i % rays, i / rays);
        let t = extent * (step + 1) as f64 / per_ray as f64;
        out.push(Complex64::from_polar(t, PI * ray as f64 / lines as f64));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
struct EuclideanCertificate {
    lines: usize,
    centers: usize,
    radii: usize,
    max_abs_f: f64,
    max_mean_abs: f64,
    relative: f64,
    residual_ratio: f64,
}

/// `zero` centers on `P⁻¹(0)` for `P = z₁z̄₂` (alternating `z₁ = 0` and
/// `z₂ = 0`) and `generic` centers off it.
pub fn type_function_centers(zero: usize, generic: usize) -> Vec<Vec<Complex64>> {
    let mut out = Vec::with_capacity(zero + generic);
    for i in 0..zero {
        let t = 0.25 + 0.2 * (i / 2) as f64;
        let w = Complex64::from_polar(t, 0.7 * i as f64);
        out.push(if i % 2 == 0 { vec![Complex64::default(), w] } else { vec![w, Complex64::default()] });
    }
    for i in 0..generic {
        let t = 0.5 + 0.3 * i as f64;
        out.push(vec![Complex64::new(t, 0.3), Complex64::new(-0.4, 0.7 * t)]);
    }
    out
}

pub fn counterexample(cfg: &ExperimentConfig, exec: Exec, out: &mut OutputDir) -> Result<Vec<CheckResult>> {
    let cc = &cfg.counterexample;
    let radii = RadiusGrid { r_min: cc.radii_min, r_max: cc.radii_max, count: cc.radii_count }.radii()?;
    let mut checks = Vec::new();
    if cc.euclidean {
        let profile = RadialProfile::Gaussian { scale: cc.profile_scale };
        let mut certs = Vec::new();
        for &lines in &cc.lines {
            let f = coxeter_odd_counterexample(lines as u32, profile)?;
            let centers = coxeter_centers(lines, cc.centers, cc.extent);
            let table = circular_mean_table(&f, &centers, &radii, cfg.quadrature.circle_nodes, exec)?;
            out.csv(&format!("euclidean_means_N{lines}.csv"), |w| write_mean_table(&table, w))?;
            let max_abs_f = f.max_abs()?;
            let max_mean_abs = table.iter().map(|e| e.value.abs()).fold(0.0, f64::max);
            let set = SamplingSet::custom(1, centers.clone(), radii.clone())?;
            let basis = BasisSpec::Euclidean { profiles: vec![profile], max_order: lines as u32 };
            let op_cfg = OperatorConfig { circle_nodes: cfg.quadrature.circle_nodes, ..Default::default() };
            let op = crate::injectivity::assemble_operator(&set, &basis, Engine::Euclidean, &op_cfg, exec)?;
            let residual_ratio = op.residual_ratio(&basis.euclidean_coefficients(&f)?)?;
            certs.push(EuclideanCertificate {
                lines,
                centers: centers.len(),
                radii: radii.len(),
                max_abs_f,
                max_mean_abs,
                relative: max_mean_abs / max_abs_f,
                residual_ratio,
            });
        }
        out.json("euclidean_certificates.json", &certs)?;
        let worst_mean = certs.iter().map(|c| c.relative).fold(0.0, f64::max);
        let worst_res = certs.iter().map(|c| c.residual_ratio).fold(0.0, f64::max);
        checks.push(CheckResult::at_most("counterexample.euclidean_means", worst_mean, cc.mean_tolerance, "max |mean| / max |f|"));
        checks.push(CheckResult::at_most(
            "counterexample.euclidean_near_null",
            worst_res,
            cc.near_null_tolerance,
            "‖Mv‖/‖v‖ of the counterexample coefficients",
        ));
    } else {
        checks.push(CheckResult::skipped("counterexample.euclidean_means", "disabled"));
        checks.push(CheckResult::skipped("counterexample.euclidean_near_null", "disabled"));
    }
    if cc.twisted {
        let spec = TypeFunctionSpec { a: cc.type_a, harmonic: SolidHarmonic::monomial(vec![1, 0], vec![0, 1])? };
        let centers = type_function_centers(cc.zero_set_centers, cc.generic_centers);
        let (sampled, report) = hecke_bochner_counterexample(
            &spec,
            &centers,
            &radii,
            &cfg.quadrature.sphere_orders(),
            cc.vanishing_tolerance,
            exec,
        )?;
        out.csv("type_function_samples.csv", |w| sampled.write_csv(w))?;
        out.json("vanishing_report.json", &report)?;
        checks.push(CheckResult::at_most(
            "counterexample.zero_set",
            report.worst_on_zero_set(),
            cc.vanishing_tolerance,
            "max over P⁻¹(0) centers of max_r |f×μ_r| / max |f|",
        ));
        checks.push(CheckResult::at_least(
            "counterexample.generic_floor",
            report.floor_off_zero_set(),
            cc.generic_floor,
            "min over generic centers of max_r |f×μ_r| / max |f|",
        ));
    } else {
        checks.push(CheckResult::skipped("counterexample.zero_set", "disabled"));
        checks.push(CheckResult::skipped("counterexample.generic_floor", "disabled"));
    }
    Ok(checks)
}

#[derive(Debug, Clone, Serialize)]
struct ContrastReport {
    schema_version: u32,
    set: String,
    twisted_sigma_min: f64,
    euclidean_odd_sector_columns: usize,
    euclidean_odd_sector_sigma_min: f64,
    ratio: f64,
}

fn probe_basis(cfg: &ExperimentConfig, set: &SamplingSet, engine: Engine, k: usize) -> BasisSpec {
    let p = &cfg.probe;
    let weighted = matches!(set.kind, SetKind::Sphere { .. } | SetKind::SphereCrossPlane { .. });
    let scale = if p.scale > 0.0 {
        p.scale
    } else if weighted {
        WEIGHTED_SCALE
    } else {
        1.0
    };
    match (engine, set.n) {
        (Engine::Euclidean, _) => BasisSpec::Euclidean { profiles: p.profiles(), max_order: k as u32 },
        (Engine::Twisted, 1) => BasisSpec::SpecialHermite { max_index: k, scale },
        (Engine::Twisted, _) => BasisSpec::HermiteProduct { cap: k, scale },
    }
}

/// True when the probe section describes the configuration the regression
/// value was frozen for.
pub fn is_reference_probe(cfg: &ExperimentConfig) -> bool {
    let d = ExperimentConfig::default();
    let (p, r) = (&cfg.probe, &d.probe);
    p.set == r.set
        && p.lines == r.lines
        && p.extent == r.extent
        && p.per_ray == r.per_ray
        && p.radius_grid() == r.radius_grid()
        && p.engine == Engine::Twisted
        && p.truncation == r.truncation
        && (p.scale == 0.0 || p.scale == 1.0)
        && p.filter == "all"
        && cfg.quadrature.sphere_orders() == d.quadrature.sphere_orders()
}

pub fn probe(cfg: &ExperimentConfig, exec: Exec, out: &mut OutputDir) -> Result<Vec<CheckResult>> {
    let pc = &cfg.probe;
    let set = make_set(pc.set_kind(cfg.quadrature.sphere3())?, pc.radius_grid().radii()?)?;
    let op_cfg = OperatorConfig {
        sphere: cfg.quadrature.sphere_orders(),
        circle_nodes: cfg.quadrature.circle_nodes,
        near_null_threshold: pc.near_null_threshold,
        max_rows: pc.max_rows,
        max_columns: pc.max_columns,
    };
    let probe_cfg = ProbeConfig {
        operator: op_cfg,
        curve_steps: pc.curve_steps.clone(),
        filter: pc.column_filter()?,
        max_reconstructions: pc.max_reconstructions,
    };
    let basis = probe_basis(cfg, &set, pc.engine, pc.truncation);
    let op = filtered_operator(&set, &basis, pc.engine, &probe_cfg, exec)?;
    let report = injectivity_probe(&op, &probe_cfg, exec)?;
    out.json("probe_report.json", &report)?;
    out.csv("sigma.csv", |w| op.write_sigma_csv(w))?;
    out.csv("sigma_curve.csv", |w| report.write_curve_csv(w))?;
    if pc.export_matrix {
        out.csv("matrix.csv", |w| op.write_matrix_csv(w))?;
        out.json("matrix_rows.json", &op.metadata())?;
    }
    let mut checks = Vec::new();
    if pc.engine == Engine::Twisted && !op.columns.is_empty() {
        checks.push(CheckResult::at_least("probe.sigma_positive", op.sigma_min(), f64::MIN_POSITIVE, "σ_min (evidence only)"));
    } else {
        checks.push(CheckResult::skipped("probe.sigma_positive", "only meaningful for the twisted engine"));
    }
    let uncertified = report.near_null.iter().filter(|f| !f.certified).count();
    checks.push(CheckResult::at_most(
        "probe.certified",
        uncertified as f64,
        0.0,
        format!("{} near-null vectors reconstructed", report.near_null.len()),
    ));
    let coxeter = matches!(set.kind, SetKind::CoxeterLines { .. });
    if pc.contrast && coxeter && pc.engine == Engine::Twisted {
        let ecfg = ProbeConfig { filter: ColumnFilter::OddSector { lines: pc.lines as u32 }, ..probe_cfg.clone() };
        let ebasis = probe_basis(cfg, &set, Engine::Euclidean, pc.truncation);
        let eop = filtered_operator(&set, &ebasis, Engine::Euclidean, &ecfg, exec)?;
        let es = eop.sigma_min();
        let ratio = if es > 0.0 { op.sigma_min() / es } else { f64::INFINITY };
        out.json(
            "contrast.json",
            &ContrastReport {
                schema_version: 1,
                set: set.label(),
                twisted_sigma_min: op.sigma_min(),
                euclidean_odd_sector_columns: eop.columns.len(),
                euclidean_odd_sector_sigma_min: es,
                ratio,
            },
        )?;
        if eop.columns.is_empty() {
            checks.push(CheckResult::skipped("probe.contrast", "no Euclidean odd-sector columns at this truncation"));
        } else {
            checks.push(CheckResult::at_least("probe.contrast", ratio, pc.contrast_ratio, "twisted σ_min / Euclidean odd-sector σ_min"));
        }
    } else {
        checks.push(CheckResult::skipped("probe.contrast", "needs a twisted probe on a Coxeter set with contrast enabled"));
    }
    if pc.check_regression && is_reference_probe(cfg) {
        let rel = (op.sigma_min() - TWISTED_SIGMA2_SIGMA_MIN).abs() / TWISTED_SIGMA2_SIGMA_MIN;
        checks.push(CheckResult::at_most(
            "probe.regression",
            rel,
            pc.regression_tolerance,
            format!("σ_min = {} vs frozen {}", fmt_f64(op.sigma_min()), fmt_f64(TWISTED_SIGMA2_SIGMA_MIN)),
        ));
    } else {
        checks.push(CheckResult::skipped("probe.regression", "not the reference configuration"));
    }
    Ok(checks)
}
