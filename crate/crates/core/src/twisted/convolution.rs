//! Twisted convolution, spectral projections `Q_k = f×φ_k^{n-1}`, the
//! special Hermite expansion and the polar-decomposition bridge.
//!
//! Convolutions are evaluated in the form
//! `f×g(z) = ∫ f(u) g(z-u) e^{-(i/2) Im(z·ū)} du`, so the quadrature rule only
//! has to resolve `f`. For a field sampled on a uniform grid the rule is the
//! trapezoidal rule on that grid and no interpolation of `f` is needed.

use super::field::{twist, Field};
use super::means::MeanProfile;
use super::sampled::SampledField;
use crate::constants::{expansion_constant, unit_sphere_area};
use crate::error::{invalid, Result, TsmError};
use crate::exec::Exec;
use crate::grid::{Grid, MAX_DIM};
use crate::quadrature::PlaneRule;
use crate::special_functions::{
    fill_laguerre_functions, laguerre_function_unchecked, special_hermite_table, LaguerreSpec, MAX_HERMITE_INDEX,
};
use crate::summation::{ComplexSum, NeumaierSum};
use num_complex::Complex64;

/// Values of `f` at the nodes of a [`PlaneRule`].
#[derive(Debug, Clone)]
pub struct RuleSamples {
    rule: PlaneRule,
    values: Vec<Complex64>,
}

impl RuleSamples {
    pub fn from_field<F: Field + ?Sized>(f: &F, rule: PlaneRule, exec: Exec) -> Result<Self> {
        if f.dim() != rule.dimension() {
            return Err(TsmError::GridMismatch(format!("field on C^{} with a rule on C^{}", f.dim(), rule.dimension())));
        }
        let values = exec.try_map(rule.len(), |i| f.eval(rule.node(i)))?;
        Ok(Self { rule, values })
    }

    /// Trapezoidal rule on the field's own uniform grid.
    pub fn from_sampled(f: &SampledField) -> Result<Self> {
        match f.grid() {
            Grid::Uniform(g) => Ok(Self { rule: PlaneRule::from_grid(g), values: f.values().to_vec() }),
            Grid::Points { .. } => Err(TsmError::GridMismatch("convolution needs samples on a uniform grid".into())),
        }
    }

    pub fn rule(&self) -> &PlaneRule {
        &self.rule
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.rule.dimension()
    }

    /// `(f×g)(z)`.
    pub fn convolve_at<G: Field + ?Sized>(&self, g: &G, z: &[Complex64]) -> Result<Complex64> {
        let n = self.dim();
        let mut acc = ComplexSum::new();
        let mut d = [Complex64::default(); MAX_DIM];
        for (i, fv) in self.values.iter().enumerate() {
            if *fv == Complex64::default() {
                continue;
            }
            let u = self.rule.node(i);
            for j in 0..n {
                d[j] = z[j] - u[j];
            }
            let gv = g.eval(&d[..n])?;
            acc.add(fv * gv * twist(u, z) * self.rule.weights()[i]);
        }
        Ok(acc.value())
    }

    /// `(f×φ_k^{n-1})(z)` for all `k ≤ kmax`.
    pub fn projections_at(&self, kmax: usize, z: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        let mut acc = vec![ComplexSum::new(); kmax + 1];
        let mut lag = vec![0.0; kmax + 1];
        for (i, fv) in self.values.iter().enumerate() {
            if *fv == Complex64::default() {
                continue;
            }
            let u = self.rule.node(i);
            let rho = z.iter().zip(u).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            fill_laguerre_functions(n - 1, rho, &mut lag);
            let t = fv * twist(u, z) * self.rule.weights()[i];
            for (a, l) in acc.iter_mut().zip(&lag) {
                a.add(t * *l);
            }
        }
        acc.iter().map(|a| a.value()).collect()
    }
}

fn check_output_grid(samples: &RuleSamples, out: &Grid) -> Result<()> {
    if out.dim() != samples.dim() {
        return Err(TsmError::GridMismatch(format!("output grid in C^{} for a field on C^{}", out.dim(), samples.dim())));
    }
    Ok(())
}

/// `f×g` evaluated on `out`.
pub fn twisted_convolution_on<G: Field + ?Sized>(samples: &RuleSamples, g: &G, out: &Grid, exec: Exec) -> Result<SampledField> {
    check_output_grid(samples, out)?;
    if g.dim() != samples.dim() {
        return Err(TsmError::GridMismatch("convolution factors live in different dimensions".into()));
    }
    let values = exec.try_map(out.len(), |i| samples.convolve_at(g, &out.point(i)))?;
    SampledField::new(out.clone(), values, g.decay_class())
}

/// `f×g` for two fields sampled on the same uniform grid; `g` is
/// interpolated and taken as zero outside the grid.
pub fn twisted_convolution(f: &SampledField, g: &SampledField, exec: Exec) -> Result<SampledField> {
    if f.grid() != g.grid() {
        return Err(TsmError::GridMismatch("twisted convolution needs both fields on one grid".into()));
    }
    let samples = RuleSamples::from_sampled(f)?;
    let zero_fill = ZeroFilled(g);
    twisted_convolution_on(&samples, &zero_fill, f.grid(), exec)
}

struct ZeroFilled<'a>(&'a SampledField);

impl Field for ZeroFilled<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        self.0.interpolate_or_zero(z)
    }
}

/// `Q_k = f×φ_k^{n-1}` for `k ≤ kmax` on `out`.
pub fn spectral_projections(samples: &RuleSamples, kmax: usize, out: &Grid, exec: Exec) -> Result<Vec<SampledField>> {
    check_output_grid(samples, out)?;
    let rows = exec.map(out.len(), |i| samples.projections_at(kmax, &out.point(i)));
    (0..=kmax)
        .map(|k| SampledField::new(out.clone(), rows.iter().map(|r| r[k]).collect(), Default::default()))
        .collect()
}

/// `Q_k = f×φ_k^{n-1}` on the grid of `f`.
pub fn spectral_projection(f: &SampledField, k: usize, exec: Exec) -> Result<SampledField> {
    let samples = RuleSamples::from_sampled(f)?;
    Ok(spectral_projections(&samples, k, f.grid(), exec)?.pop().expect("kmax + 1 projections"))
}

/// Truncated special Hermite data of a function.
#[derive(Debug, Clone)]
pub enum Spectrum {
    /// `Q_0, …, Q_K` on a common grid.
    Projections(Vec<SampledField>),
    /// `c_{αβ} = ⟨f, φ_{αβ}⟩` on ℂ, stored at `α·(K+1) + β`.
    Coefficients(Vec<Complex64>),
}

#[derive(Debug, Clone)]
pub struct SpectrumTruncation {
    pub n: usize,
    pub max_degree: usize,
    pub spectrum: Spectrum,
}

impl SpectrumTruncation {
    pub fn from_projections(n: usize, projections: Vec<SampledField>) -> Result<Self> {
        let first = projections.first().ok_or_else(|| invalid("at least one projection is required"))?;
        if projections.iter().any(|q| q.grid() != first.grid()) {
            return Err(TsmError::GridMismatch("projections must share a grid".into()));
        }
        Ok(Self { n, max_degree: projections.len() - 1, spectrum: Spectrum::Projections(projections) })
    }

    /// `c_{αβ}` at `(α, β)`.
    pub fn coefficient(&self, alpha: usize, beta: usize) -> Option<Complex64> {
        match &self.spectrum {
            Spectrum::Coefficients(c) if alpha <= self.max_degree && beta <= self.max_degree => {
                Some(c[alpha * (self.max_degree + 1) + beta])
            }
            _ => None,
        }
    }

    /// Partial sum of the expansion through degree `upto`, on `grid`.
    ///
    /// Projections use `(2π)^{-n} Σ_{k≤upto} Q_k` and require `grid` to be
    /// their grid; coefficients use `Σ_{α,β≤upto} c_{αβ} φ_{αβ}`.
    pub fn reconstruct(&self, upto: usize, grid: &Grid, exec: Exec) -> Result<SampledField> {
        let upto = upto.min(self.max_degree);
        match &self.spectrum {
            Spectrum::Projections(qs) => {
                if qs[0].grid() != grid {
                    return Err(TsmError::GridMismatch("reconstruction grid differs from the projection grid".into()));
                }
                let c = expansion_constant(self.n);
                let values = (0..grid.len())
                    .map(|i| {
                        let mut acc = ComplexSum::new();
                        for q in &qs[..=upto] {
                            acc.add(q.values()[i] * c);
                        }
                        acc.value()
                    })
                    .collect();
                SampledField::new(grid.clone(), values, Default::default())
            }
            Spectrum::Coefficients(coeffs) => {
                if grid.dim() != 1 {
                    return Err(TsmError::GridMismatch("coefficient expansions live on C".into()));
                }
                let kk = self.max_degree + 1;
                let values = exec.map(grid.len(), |i| {
                    let mut table = vec![Complex64::default(); kk * kk];
                    special_hermite_table(self.max_degree, grid.point(i)[0], &mut table);
                    let mut acc = ComplexSum::new();
                    for a in 0..=upto {
                        for b in 0..=upto {
                            acc.add(coeffs[a * kk + b] * table[a * kk + b]);
                        }
                    }
                    acc.value()
                });
                SampledField::new(grid.clone(), values, Default::default())
            }
        }
    }

    /// Relative grid-ℓ² errors of the partial sums `upto = 0..=K` against `f`.
    pub fn partial_errors(&self, f: &SampledField, exec: Exec) -> Result<Vec<f64>> {
        (0..=self.max_degree).map(|k| self.reconstruct(k, f.grid(), exec)?.relative_l2_error(f)).collect()
    }
}

/// `c_{αβ} = ∫ f conj(φ_{αβ})` for `α, β ≤ max_degree`, on ℂ.
pub fn special_hermite_coefficients(samples: &RuleSamples, max_degree: usize, exec: Exec) -> Result<SpectrumTruncation> {
    if samples.dim() != 1 {
        return Err(TsmError::UnsupportedDimension(samples.dim()));
    }
    if max_degree > MAX_HERMITE_INDEX {
        return Err(invalid(format!("degree {max_degree} exceeds {MAX_HERMITE_INDEX}")));
    }
    let kk = max_degree + 1;
    let len = samples.values.len();
    let chunk = crate::exec::REDUCTION_CHUNK;
    let partials = exec.map(len.div_ceil(chunk), |c| {
        let mut acc = vec![ComplexSum::new(); kk * kk];
        let mut table = vec![Complex64::default(); kk * kk];
        for i in c * chunk..((c + 1) * chunk).min(len) {
            let fv = samples.values[i] * samples.rule.weights()[i];
            if fv == Complex64::default() {
                continue;
            }
            special_hermite_table(max_degree, samples.rule.node(i)[0], &mut table);
            for (a, t) in acc.iter_mut().zip(&table) {
                a.add(fv * t.conj());
            }
        }
        acc
    });
    let mut total = vec![ComplexSum::new(); kk * kk];
    for p in &partials {
        for (t, a) in total.iter_mut().zip(p) {
            t.merge(a);
        }
    }
    Ok(SpectrumTruncation {
        n: 1,
        max_degree,
        spectrum: Spectrum::Coefficients(total.iter().map(|a| a.value()).collect()),
    })
}

/// Relative size of the last integrand sample above which
/// [`polar_bridge`] warns about truncation.
pub const POLAR_TAIL_TOLERANCE: f64 = 1e-10;

/// `ω ∫_0^∞ (f×μ_r)(z) φ_k^{n-1}(r) r^{2n-1} dr` with `ω = 2π^n/(n-1)!`,
/// which equals `(f×φ_k^{n-1})(z)`.
///
/// Uses the profile's radial weights if present, else the trapezoidal rule
/// on its radii. Logs a warning when the integrand has not decayed by the
/// last radius.
pub fn polar_bridge(profile: &MeanProfile, k: usize, n: usize) -> Result<Complex64> {
    if n == 0 || n > MAX_DIM {
        return Err(TsmError::UnsupportedDimension(n));
    }
    let radii = &profile.radii;
    if radii.len() != profile.values.len() {
        return Err(invalid("profile radii and values differ in length"));
    }
    if radii.is_empty() {
        return Ok(Complex64::default());
    }
    let weights = match &profile.radial_weights {
        Some(w) if w.len() == radii.len() => w.clone(),
        Some(_) => return Err(invalid("profile radial weights do not match its radii")),
        None => trapezoid_weights(radii),
    };
    let spec = LaguerreSpec::new(k, n - 1);
    let p = (2 * n - 1) as i32;
    let integrand: Vec<Complex64> = radii
        .iter()
        .zip(&profile.values)
        .map(|(r, v)| v * (laguerre_function_unchecked(spec, *r) * r.powi(p)))
        .collect();
    let peak = integrand.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let last = integrand.last().map_or(0.0, |v| v.norm());
    if peak > 0.0 && last > POLAR_TAIL_TOLERANCE * peak {
        log::warn!(
            "polar bridge: integrand at r = {} is {:.3e} of its peak; radius grid may be too short",
            radii[radii.len() - 1],
            last / peak
        );
    }
    let mut acc = ComplexSum::new();
    for (v, w) in integrand.iter().zip(&weights) {
        acc.add(v * *w);
    }
    Ok(acc.value() * unit_sphere_area(n))
}

fn trapezoid_weights(x: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; x.len()];
    for i in 1..x.len() {
        let h = 0.5 * (x[i] - x[i - 1]);
        w[i - 1] += h;
        w[i] += h;
    }
    w
}

/// One diagonal piece `F_{z₂,β₂} ×₁ φ_{β₁}` of the tensor decomposition.
#[derive(Debug, Clone)]
pub struct DiagonalPiece {
    pub beta1: usize,
    pub beta2: usize,
    /// Values on the product grid `(z1[a], z2[b])`, `a` outer.
    pub field: SampledField,
}

/// Splits `Q_k = f×φ_k^1` on ℂ² along `φ_k^1(z) = Σ_{β₁+β₂=k} φ_{β₁}^0(z₁) φ_{β₂}^0(z₂)`.
///
/// First the partial convolution in the `z₂` slot against `φ_{β₂}` is formed
/// for every node of `rule1` in the `z₁` slot, then the partial convolution
/// in the `z₁` slot against `φ_{β₁}`. `rule1` is a rule on ℂ used for both
/// slots; targets form the product grid `z1 × z2`.
pub fn tensor_decompose_projection<F: Field + ?Sized>(
    f: &F,
    k: usize,
    rule1: &PlaneRule,
    z1: &[Complex64],
    z2: &[Complex64],
    exec: Exec,
) -> Result<Vec<DiagonalPiece>> {
    if f.dim() != 2 {
        return Err(TsmError::UnsupportedDimension(f.dim()));
    }
    if rule1.dimension() != 1 {
        return Err(invalid("the slot rule must be a rule on C"));
    }
    let m = rule1.len();
    let nb = z2.len();
    let kk = k + 1;
    // kernel2[(b·m + c)·kk + β] = w_c φ_β(z2_b - u_c) e^{-(i/2) Im(z2_b ū_c)}
    let mut kernel2 = vec![Complex64::default(); nb * m * kk];
    let mut lag = vec![0.0; kk];
    for b in 0..nb {
        for c in 0..m {
            let u = rule1.node(c)[0];
            fill_laguerre_functions(0, (z2[b] - u).norm(), &mut lag);
            let t = twist(&[u], &[z2[b]]) * rule1.weights()[c];
            for beta in 0..kk {
                kernel2[(b * m + c) * kk + beta] = t * lag[beta];
            }
        }
    }
    // partial[(a·nb + b)·kk + β₂] = F_{z2_b, β₂}(u_a)
    let partial: Vec<Vec<Complex64>> = exec.try_map(m, |a| {
        let ua = rule1.node(a)[0];
        let fa: Vec<Complex64> = (0..m).map(|c| f.eval(&[ua, rule1.node(c)[0]])).collect::<Result<_>>()?;
        let mut out = vec![Complex64::default(); nb * kk];
        for b in 0..nb {
            let mut acc = vec![ComplexSum::new(); kk];
            for (c, fv) in fa.iter().enumerate() {
                let base = (b * m + c) * kk;
                for beta in 0..kk {
                    acc[beta].add(fv * kernel2[base + beta]);
                }
            }
            for beta in 0..kk {
                out[b * kk + beta] = acc[beta].value();
            }
        }
        Ok::<_, TsmError>(out)
    })?;
    let points: Vec<Complex64> = z1.iter().flat_map(|&a| z2.iter().flat_map(move |&b| [a, b])).collect();
    let grid = Grid::points(2, points)?;
    // piece values[(d·nb + b)] for each (β₁, β₂ = k - β₁)
    let rows = exec.map(z1.len(), |d| {
        let mut lag = vec![0.0; kk];
        let mut acc = vec![ComplexSum::new(); nb * kk];
        for a in 0..m {
            let u = rule1.node(a)[0];
            fill_laguerre_functions(0, (z1[d] - u).norm(), &mut lag);
            let t = twist(&[u], &[z1[d]]) * rule1.weights()[a];
            for b in 0..nb {
                for beta1 in 0..kk {
                    let beta2 = k - beta1;
                    acc[b * kk + beta1].add(partial[a][b * kk + beta2] * t * lag[beta1]);
                }
            }
        }
        acc.iter().map(|s| s.value()).collect::<Vec<_>>()
    });
    (0..kk)
        .map(|beta1| {
            let values = (0..z1.len()).flat_map(|d| (0..nb).map(move |b| (d, b))).map(|(d, b)| rows[d][b * kk + beta1]).collect();
            Ok(DiagonalPiece { beta1, beta2: k - beta1, field: SampledField::new(grid.clone(), values, f.decay_class())? })
        })
        .collect()
}

/// Sum of the pieces, to compare against `Q_k`.
pub fn sum_pieces(pieces: &[DiagonalPiece]) -> Result<SampledField> {
    let first = pieces.first().ok_or_else(|| invalid("no pieces to sum"))?;
    let mut total = first.field.clone();
    for p in &pieces[1..] {
        total = total.axpby(Complex64::new(1.0, 0.0), &p.field, Complex64::new(1.0, 0.0))?;
    }
    Ok(total)
}

/// Relative ℓ² distance `‖a-b‖/‖b‖` between two sample vectors.
pub fn relative_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut num = NeumaierSum::new();
    let mut den = NeumaierSum::new();
    for (x, y) in a.iter().zip(b) {
        num.add((x - y).norm_sqr());
        den.add(y.norm_sqr());
    }
    if den.value() == 0.0 {
        num.value().sqrt()
    } else {
        (num.value() / den.value()).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{plane_rule, PlaneOrders};
    use crate::twisted::field::{GaussianField, LaguerreField};
    use std::f64::consts::PI;

    fn rule1() -> PlaneRule {
        plane_rule(1, 12.0, &PlaneOrders::default(), 1e-10).unwrap()
    }

    #[test]
    fn ground_state_self_convolution() {
        let phi0 = LaguerreField::new(1, 0).unwrap();
        let s = RuleSamples::from_field(&phi0, rule1(), Exec::Serial).unwrap();
        for z in [Complex64::new(0.0, 0.0), Complex64::new(1.2, -0.7), Complex64::new(-2.0, 2.5)] {
            let v = s.convolve_at(&phi0, &[z]).unwrap();
            let expect = 2.0 * PI * phi0.eval(&[z]).unwrap();
            assert!((v - expect).norm() < 1e-10, "{z}: {v} vs {expect}");
        }
    }

    #[test]
    fn convolution_at_origin_has_no_twist() {
        let f = GaussianField::shifted(vec![Complex64::new(0.5, 0.2)], 0.7).unwrap();
        let g = GaussianField::new(1, 0.4).unwrap();
        let s = RuleSamples::from_field(&f, rule1(), Exec::Serial).unwrap();
        let v = s.convolve_at(&g, &[Complex64::default()]).unwrap();
        // ∫ f(u) g(-u) du with both Gaussian: closed form
        let c = 0.5f64.hypot(0.2);
        let expect = PI / 1.1 * (-(0.7 * 0.4 / 1.1) * c * c).exp();
        assert!((v.re - expect).abs() < 1e-12 && v.im.abs() < 1e-13);
    }

    #[test]
    fn polar_bridge_zero_profile() {
        let p = MeanProfile { center: vec![Complex64::default()], radii: vec![0.5, 1.0], values: vec![Complex64::default(); 2], radial_weights: None };
        assert_eq!(polar_bridge(&p, 3, 1).unwrap(), Complex64::default());
    }
}
