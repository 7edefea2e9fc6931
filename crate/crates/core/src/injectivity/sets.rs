//! Candidate injectivity sets and their discretizations.

use crate::error::{invalid, Result};
use crate::grid::MAX_DIM;
use crate::quadrature::{circle_rule, sphere3_rule, Sphere3Orders};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::f64::consts::PI;

/// Membership tolerance for generated centers.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-12;

/// Geometric radius grid `r_i = r_min (r_max/r_min)^{i/(count-1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub count: usize,
}

impl Default for RadiusGrid {
    fn default() -> Self {
        Self { r_min: 0.2, r_max: 6.0, count: 24 }
    }
}

impl RadiusGrid {
    pub fn radii(&self) -> Result<Vec<f64>> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) || self.count < 2 {
            return Err(invalid("radius grid needs 0 < r_min < r_max and at least two radii"));
        }
        let ratio = self.r_max / self.r_min;
        Ok((0..self.count)
            .map(|i| if i + 1 == self.count { self.r_max } else { self.r_min * ratio.powf(i as f64 / (self.count - 1) as f64) })
            .collect())
    }
}

/// Radius profile of a curve `γ(t) = r(t) e^{it}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveProfile {
    /// `r(t) = scale · e^{rate t}`.
    Exponential { scale: f64, rate: f64 },
    /// `r(t) = radius`.
    Constant { radius: f64 },
}

impl CurveProfile {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            CurveProfile::Exponential { scale, rate } => scale * (rate * t).exp(),
            CurveProfile::Constant { radius } => radius,
        }
    }
}

/// Which set a [`SamplingSet`] discretizes, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetKind {
    /// `Σ_N ⊂ ℂ`: `lines` lines through the origin, `per_ray` points on each
    /// half-line including the origin, `|t| ≤ extent`.
    CoxeterLines { lines: usize, extent: f64, per_ray: usize },
    /// `ℂ^{n-1} × Σ_{2N}`: a square grid (`plane_points` per real axis on
    /// `[-plane_extent, plane_extent]`) times `2N` lines in the last slot.
    PlaneCrossCoxeter { n: usize, half_lines: usize, extent: f64, per_ray: usize, plane_extent: f64, plane_points: usize },
    /// `S_R^{2n-1} ⊂ ℂⁿ` sampled at sphere-rule nodes.
    Sphere { n: usize, radius: f64, circle_points: usize, sphere3: Sphere3Orders },
    /// `S_R^{2n-1} × ℂ ⊂ ℂ^{n+1}`.
    SphereCrossPlane { n: usize, radius: f64, circle_points: usize, sphere3: Sphere3Orders, plane_extent: f64, plane_points: usize },
    /// `γ(t) = r(t) e^{it}` at `samples` equispaced `t ∈ [t0, t1)`.
    Curve { profile: CurveProfile, t0: f64, t1: f64, samples: usize },
    /// User-supplied points.
    Custom { n: usize },
}

/// A rigid motion of ℂ, `x ↦ e^{iθ} x + shift`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Isometry {
    pub rotation: f64,
    pub shift: Complex64,
}

impl Isometry {
    pub fn apply(&self, x: Complex64) -> Complex64 {
        Complex64::from_polar(1.0, self.rotation) * x + self.shift
    }
}

/// Finite set of centers in ℂⁿ with a radius grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingSet {
    pub kind: SetKind,
    pub n: usize,
    /// `n` coordinates per center, lexicographically sorted.
    pub centers: Vec<Complex64>,
    pub radii: Vec<f64>,
    pub isometry: Option<Isometry>,
}

impl SamplingSet {
    pub fn len(&self) -> usize {
        self.centers.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn center(&self, j: usize) -> &[Complex64] {
        &self.centers[j * self.n..(j + 1) * self.n]
    }

    pub fn rows(&self) -> usize {
        self.len() * self.radii.len()
    }

    /// Short label for reports.
    pub fn label(&self) -> String {
        match &self.kind {
            SetKind::CoxeterLines { lines, .. } => format!("coxeter_lines(N={lines})"),
            SetKind::PlaneCrossCoxeter { n, half_lines, .. } => format!("plane_cross_coxeter(n={n},N={half_lines})"),
            SetKind::Sphere { n, radius, .. } => format!("sphere(n={n},R={radius})"),
            SetKind::SphereCrossPlane { n, radius, .. } => format!("sphere_cross_plane(n={n},R={radius})"),
            SetKind::Curve { .. } => "curve".into(),
            SetKind::Custom { n } => format!("custom(n={n})"),
        }
    }

    /// Maximum distance from a center to the declared set.
    pub fn membership_error(&self) -> f64 {
        (0..self.len()).map(|j| self.distance_to_set(self.center(j))).fold(0.0, f64::max)
    }

    fn distance_to_set(&self, z: &[Complex64]) -> f64 {
        let z = match self.isometry {
            Some(iso) => {
                // undo the motion before testing membership
                let inv = Complex64::from_polar(1.0, -iso.rotation);
                vec![inv * (z[0] - iso.shift)]
            }
            None => z.to_vec(),
        };
        match &self.kind {
            SetKind::CoxeterLines { lines, .. } => line_distance(*lines, z[0]),
            SetKind::PlaneCrossCoxeter { n, half_lines, .. } => line_distance(2 * half_lines, z[n - 1]),
            SetKind::Sphere { radius, .. } => {
                (z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() - radius).abs() / radius.max(1.0)
            }
            SetKind::SphereCrossPlane { n, radius, .. } => {
                (z[..*n].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() - radius).abs() / radius.max(1.0)
            }
            SetKind::Curve { .. } | SetKind::Custom { .. } => 0.0,
        }
    }

    /// Applies a rigid motion to every center (sets in ℂ only).
    pub fn transformed(&self, iso: Isometry) -> Result<Self> {
        if self.n != 1 {
            return Err(invalid("rigid motions are applied to sets in C"));
        }
        let mut out = self.clone();
        out.centers = self.centers.iter().map(|&x| iso.apply(x)).collect();
        out.isometry = Some(iso);
        sort_dedup(&mut out.centers, 1);
        Ok(out)
    }

    /// Same centers, different radii.
    pub fn with_radii(&self, radii: Vec<f64>) -> Result<Self> {
        check_radii(&radii)?;
        let mut out = self.clone();
        out.radii = radii;
        Ok(out)
    }

    /// A set with explicit centers.
    pub fn custom(n: usize, mut centers: Vec<Complex64>, radii: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_DIM || !centers.len().is_multiple_of(n) {
            return Err(invalid("custom centers must be a whole number of points in C^n, n <= 3"));
        }
        check_radii(&radii)?;
        sort_dedup(&mut centers, n);
        Ok(Self { kind: SetKind::Custom { n }, n, centers, radii, isometry: None })
    }
}

fn line_distance(lines: usize, x: Complex64) -> f64 {
    (0..lines)
        .map(|l| (x * Complex64::from_polar(1.0, -PI * l as f64 / lines as f64)).im.abs())
        .fold(f64::INFINITY, f64::min)
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("radii must be positive and strictly increasing"));
    }
    Ok(())
}

fn cmp_points(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Lexicographic sort; points closer than the membership tolerance merge.
fn sort_dedup(points: &mut Vec<Complex64>, n: usize) {
    let mut chunks: Vec<Vec<Complex64>> = points.chunks(n).map(|c| c.to_vec()).collect();
    // snap near-zero coordinates so that ±0 and rounding noise sort together
    for c in chunks.iter_mut().flatten() {
        if c.re.abs() < MEMBERSHIP_TOLERANCE {
            c.re = 0.0;
        }
        if c.im.abs() < MEMBERSHIP_TOLERANCE {
            c.im = 0.0;
        }
    }
    chunks.sort_by(|a, b| cmp_points(a, b));
    chunks.dedup_by(|a, b| a.iter().zip(b.iter()).all(|(x, y)| (*x - *y).norm() <= MEMBERSHIP_TOLERANCE));
    *points = chunks.concat();
}

/// Points of `Σ_lines` on `|t| ≤ extent`, origin once.
fn coxeter_points(lines: usize, extent: f64, per_ray: usize) -> Vec<Complex64> {
    let mut pts = Vec::new();
    for ray in 0..2 * lines {
        let dir = Complex64::from_polar(1.0, PI * ray as f64 / lines as f64);
        for j in 0..per_ray {
            pts.push(dir * (extent * j as f64 / (per_ray - 1) as f64));
        }
    }
    sort_dedup(&mut pts, 1);
    pts
}

fn square_points(extent: f64, per_axis: usize) -> Vec<Complex64> {
    let step = if per_axis > 1 { 2.0 * extent / (per_axis - 1) as f64 } else { 0.0 };
    let mut pts = Vec::with_capacity(per_axis * per_axis);
    for a in 0..per_axis {
        for b in 0..per_axis {
            pts.push(Complex64::new(-extent + a as f64 * step, -extent + b as f64 * step));
        }
    }
    pts
}

fn sphere_points(n: usize, radius: f64, circle_points: usize, sphere3: Sphere3Orders) -> Result<Vec<Complex64>> {
    let rule = match n {
        1 => circle_rule(radius, circle_points)?,
        2 => sphere3_rule(radius, sphere3)?,
        _ => return Err(invalid("sphere sets are supported for n in 1..=2")),
    };
    Ok((0..rule.len()).flat_map(|i| rule.node(i).to_vec()).collect())
}

/// Cartesian product: every `a` (in `ℂ^{na}`) followed by every `b` point.
fn product(a: &[Complex64], na: usize, b: &[Complex64], nb: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() / na * b.len() / nb * (na + nb));
    for pa in a.chunks(na) {
        for pb in b.chunks(nb) {
            out.extend_from_slice(pa);
            out.extend_from_slice(pb);
        }
    }
    out
}

/// Deterministic discretization of `kind` with the given radii.
pub fn make_set(kind: SetKind, radii: Vec<f64>) -> Result<SamplingSet> {
    check_radii(&radii)?;
    let positive = |v: f64, what: &str| {
        if v.is_finite() && v > 0.0 {
            Ok(())
        } else {
            Err(invalid(format!("{what} must be positive, got {v}")))
        }
    };
    let (n, mut centers) = match &kind {
        SetKind::CoxeterLines { lines, extent, per_ray } => {
            if *lines == 0 || *per_ray < 2 {
                return Err(invalid("Coxeter sets need N >= 1 and at least two points per ray"));
            }
            positive(*extent, "extent")?;
            (1, coxeter_points(*lines, *extent, *per_ray))
        }
        SetKind::PlaneCrossCoxeter { n, half_lines, extent, per_ray, plane_extent, plane_points } => {
            if !(2..=MAX_DIM).contains(n) || *half_lines == 0 || *per_ray < 2 || *plane_points < 2 {
                return Err(invalid("plane x Coxeter sets need n in 2..=3, N >= 1 and counts >= 2"));
            }
            positive(*extent, "extent")?;
            positive(*plane_extent, "plane extent")?;
            let mut plane = square_points(*plane_extent, *plane_points);
            for _ in 2..*n {
                plane = product(&plane, 1, &square_points(*plane_extent, *plane_points), 1);
            }
            let lines = coxeter_points(2 * half_lines, *extent, *per_ray);
            (*n, product(&plane, n - 1, &lines, 1))
        }
        SetKind::Sphere { n, radius, circle_points, sphere3 } => {
            positive(*radius, "sphere radius")?;
            (*n, sphere_points(*n, *radius, *circle_points, *sphere3)?)
        }
        SetKind::SphereCrossPlane { n, radius, circle_points, sphere3, plane_extent, plane_points } => {
            positive(*radius, "sphere radius")?;
            positive(*plane_extent, "plane extent")?;
            if *plane_points < 2 || n + 1 > MAX_DIM {
                return Err(invalid("sphere x plane sets need n + 1 <= 3 and at least two plane points"));
            }
            let sphere = sphere_points(*n, *radius, *circle_points, *sphere3)?;
            (n + 1, product(&sphere, *n, &square_points(*plane_extent, *plane_points), 1))
        }
        SetKind::Curve { profile, t0, t1, samples } => {
            if *samples < 2 || !(t1 > t0) {
                return Err(invalid("curve sets need t1 > t0 and at least two samples"));
            }
            let mut pts = Vec::with_capacity(*samples);
            for i in 0..*samples {
                let t = t0 + (t1 - t0) * i as f64 / *samples as f64;
                let r = profile.eval(t);
                if !(r.is_finite() && r > 0.0) {
                    return Err(invalid(format!("curve radius r({t}) = {r} is not positive")));
                }
                pts.push(Complex64::from_polar(r, t));
            }
            (1, pts)
        }
        SetKind::Custom { .. } => return Err(invalid("custom sets are built with SamplingSet::custom")),
    };
    // curve samples keep their parameter order
    if !matches!(kind, SetKind::Curve { .. }) {
        sort_dedup(&mut centers, n);
    }
    let set = SamplingSet { kind, n, centers, radii, isometry: None };
    let err = set.membership_error();
    if err > MEMBERSHIP_TOLERANCE {
        return Err(invalid(format!("generated centers miss the set by {err:e}")));
    }
    Ok(set)
}

/// `γ(t_i) = r(t_i) e^{it_i}` for `samples` points of `[t0, t1)`.
pub fn curve_set(profile: CurveProfile, t_range: (f64, f64), samples: usize, radii: Vec<f64>) -> Result<SamplingSet> {
    make_set(SetKind::Curve { profile, t0: t_range.0, t1: t_range.1, samples }, radii)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn radii() -> Vec<f64> {
        RadiusGrid::default().radii().unwrap()
    }

    #[test]
    fn coxeter_count_and_membership() {
        let s = make_set(SetKind::CoxeterLines { lines: 2, extent: 3.0, per_ray: 7 }, radii()).unwrap();
        assert_eq!(s.len(), 25);
        for j in 0..s.len() {
            let z = s.center(j)[0];
            assert!(z.re.abs() < 1e-15 || z.im.abs() < 1e-15);
        }
        assert_eq!(s.rows(), 25 * 24);
        for j in 1..s.len() {
            assert_eq!(cmp_points(s.center(j - 1), s.center(j)), Ordering::Less);
        }
    }

    #[test]
    fn plane_cross_coxeter_last_slot_on_axes() {
        let kind = SetKind::PlaneCrossCoxeter { n: 2, half_lines: 1, extent: 2.0, per_ray: 4, plane_extent: 1.0, plane_points: 3 };
        let s = make_set(kind, radii()).unwrap();
        assert_eq!(s.len(), 9 * 13);
        for j in 0..s.len() {
            let z2 = s.center(j)[1];
            assert!(z2.re == 0.0 || z2.im == 0.0);
        }
    }

    #[test]
    fn spheres_and_products() {
        let s = make_set(SetKind::Sphere { n: 1, radius: 1.0, circle_points: 32, sphere3: Sphere3Orders::default() }, radii()).unwrap();
        assert_eq!(s.len(), 32);
        assert!(s.membership_error() < 1e-15);
        let kind = SetKind::SphereCrossPlane {
            n: 1,
            radius: 2.0,
            circle_points: 8,
            sphere3: Sphere3Orders::default(),
            plane_extent: 1.0,
            plane_points: 2,
        };
        let p = make_set(kind, radii()).unwrap();
        assert_eq!((p.n, p.len()), (2, 32));
    }

    #[test]
    fn spiral_and_circle_curves() {
        let spiral = curve_set(CurveProfile::Exponential { scale: 1.0, rate: -1.0 }, (0.0, 4.0 * PI), 64, radii()).unwrap();
        let norms: Vec<f64> = spiral.centers.iter().map(|z| z.norm()).collect();
        assert!(norms.windows(2).all(|w| w[1] < w[0]));
        let circle = curve_set(CurveProfile::Constant { radius: 1.5 }, (0.0, 2.0 * PI), 16, radii()).unwrap();
        let rule = circle_rule(1.5, 16).unwrap();
        for j in 0..16 {
            assert!((circle.center(j)[0] - rule.node(j)[0]).norm() < 1e-14);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(make_set(SetKind::CoxeterLines { lines: 0, extent: 1.0, per_ray: 3 }, radii()).is_err());
        assert!(make_set(SetKind::CoxeterLines { lines: 1, extent: -1.0, per_ray: 3 }, radii()).is_err());
        assert!(make_set(SetKind::CoxeterLines { lines: 1, extent: 1.0, per_ray: 3 }, vec![1.0, 0.5]).is_err());
        assert!(RadiusGrid { r_min: 0.0, r_max: 1.0, count: 4 }.radii().is_err());
    }

    #[test]
    fn isometry_moves_set() {
        let s = make_set(SetKind::CoxeterLines { lines: 1, extent: 1.0, per_ray: 3 }, radii()).unwrap();
        let t = s.transformed(Isometry { rotation: 0.3, shift: Complex64::new(1.0, -2.0) }).unwrap();
        assert_eq!(t.len(), s.len());
        assert!(t.membership_error() < 1e-14);
    }
}
