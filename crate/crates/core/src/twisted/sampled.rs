//! Fields stored as samples on a [`Grid`].

use super::field::{norm_sqr, DecayClass, Field};
use crate::error::{invalid, Result, TsmError};
use crate::exec::Exec;
use crate::grid::{Grid, UniformGrid, MAX_DIM};
use crate::summation::NeumaierSum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// Default number of Lagrange nodes per axis for off-grid evaluation.
pub const DEFAULT_INTERPOLATION_ORDER: usize = 6;

/// Samples of `f` on a grid together with the decay hypothesis they stand for.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    grid: Grid,
    values: Vec<Complex64>,
    decay_class: DecayClass,
    interpolation_order: usize,
}

/// JSON header written next to a sampled-field CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampledFieldHeader {
    pub schema_version: u32,
    pub n: usize,
    pub len: usize,
    pub decay_class: DecayClass,
    pub interpolation_order: usize,
    pub grid: GridHeader,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridHeader {
    Uniform(UniformGrid),
    Points,
}

impl SampledField {
    pub fn new(grid: Grid, values: Vec<Complex64>, decay_class: DecayClass) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(TsmError::GridMismatch(format!("{} values for a grid of {} points", values.len(), grid.len())));
        }
        if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid(format!("sample {i} is not finite")));
        }
        Ok(Self { grid, values, decay_class, interpolation_order: DEFAULT_INTERPOLATION_ORDER })
    }

    /// Samples an analytic field on `grid`.
    pub fn sample<F: Field + ?Sized>(f: &F, grid: Grid, exec: Exec) -> Result<Self> {
        if f.dim() != grid.dim() {
            return Err(TsmError::GridMismatch(format!("field on C^{} sampled on a grid in C^{}", f.dim(), grid.dim())));
        }
        let values = exec.try_map(grid.len(), |i| f.eval(&grid.point(i)))?;
        Self::new(grid, values, f.decay_class())
    }

    pub fn zeros(grid: Grid) -> Self {
        let len = grid.len();
        Self { grid, values: vec![Complex64::default(); len], decay_class: DecayClass::SchwartzLike, interpolation_order: DEFAULT_INTERPOLATION_ORDER }
    }

    /// Lagrange nodes per axis used by off-grid evaluation (at least 2).
    pub fn with_interpolation_order(mut self, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(invalid("interpolation order must be at least 2"));
        }
        self.interpolation_order = order;
        Ok(self)
    }

    pub fn with_decay_class(mut self, decay_class: DecayClass) -> Self {
        self.decay_class = decay_class;
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn interpolation_order(&self) -> usize {
        self.interpolation_order
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        let mut out = Self::new(self.grid.clone(), values, self.decay_class)?;
        out.interpolation_order = self.interpolation_order;
        Ok(out)
    }

    fn check_same_grid(&self, other: &SampledField) -> Result<()> {
        if self.grid != other.grid {
            return Err(TsmError::GridMismatch("fields live on different grids".into()));
        }
        Ok(())
    }

    /// `a·self + b·other` on a shared grid.
    pub fn axpby(&self, a: Complex64, other: &SampledField, b: Complex64) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        self.with_values(values)
    }

    /// Grid-ℓ² norm, weighted by the cell volume on uniform grids.
    pub fn l2_norm(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for v in &self.values {
            acc.add(v.norm_sqr());
        }
        (acc.value() * self.grid.l2_weight()).sqrt()
    }

    /// `‖self - other‖ / ‖other‖` in grid-ℓ².
    pub fn relative_l2_error(&self, reference: &SampledField) -> Result<f64> {
        self.check_same_grid(reference)?;
        let mut num = NeumaierSum::new();
        let mut den = NeumaierSum::new();
        for (a, b) in self.values.iter().zip(&reference.values) {
            num.add((a - b).norm_sqr());
            den.add(b.norm_sqr());
        }
        let den = den.value();
        Ok(if den == 0.0 { num.value().sqrt() } else { (num.value() / den).sqrt() })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max |f(z)| e^{|z|²/4}` over the grid.
    pub fn weighted_sup(&self) -> f64 {
        let mut best = 0.0f64;
        let mut buf = [Complex64::default(); MAX_DIM];
        for (i, v) in self.values.iter().enumerate() {
            self.grid.write_point(i, &mut buf);
            let w = v.norm() * (0.25 * norm_sqr(&buf[..self.grid.dim()])).exp();
            best = best.max(w);
        }
        best
    }

    /// Checks the decay hypothesis recorded in `decay_class`.
    ///
    /// For the Gaussian-weighted class the weighted sup must stay below
    /// `bound · max|f|`; Schwartz-like fields only need finite samples.
    pub fn check_decay(&self, bound: f64) -> Result<()> {
        if self.decay_class == DecayClass::GaussianQuarterWeighted {
            let scale = self.max_abs();
            let sup = self.weighted_sup();
            if scale > 0.0 && !(sup <= bound * scale) {
                return Err(TsmError::Decay(format!(
                    "|f| exp(|z|^2/4) reaches {sup:.3e}, above {bound:.1e} x max|f| = {:.3e}",
                    bound * scale
                )));
            }
        }
        Ok(())
    }

    /// Off-grid value by tensor-product Lagrange interpolation; values
    /// outside the grid box are an error.
    pub fn interpolate(&self, z: &[Complex64]) -> Result<Complex64> {
        match &self.grid {
            Grid::Uniform(g) => interpolate_uniform(g, &self.values, self.interpolation_order, z)?
                .ok_or_else(|| TsmError::OutOfDomain { point: real_coords(z) }),
            Grid::Points { .. } => Err(TsmError::GridMismatch("point-list samples cannot be interpolated".into())),
        }
    }

    /// Like [`SampledField::interpolate`] but zero outside the grid box.
    pub fn interpolate_or_zero(&self, z: &[Complex64]) -> Result<Complex64> {
        match &self.grid {
            Grid::Uniform(g) => Ok(interpolate_uniform(g, &self.values, self.interpolation_order, z)?.unwrap_or_default()),
            Grid::Points { .. } => Err(TsmError::GridMismatch("point-list samples cannot be interpolated".into())),
        }
    }

    /// CSV with columns `re_z1, im_z1, …, re_f, im_f`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let n = self.grid.dim();
        let mut w = csv::Writer::from_writer(writer);
        let mut header = Vec::with_capacity(2 * n + 2);
        for j in 1..=n {
            header.push(format!("re_z{j}"));
            header.push(format!("im_z{j}"));
        }
        header.push("re_f".into());
        header.push("im_f".into());
        w.write_record(&header)?;
        let mut buf = [Complex64::default(); MAX_DIM];
        let mut record = Vec::with_capacity(2 * n + 2);
        for (i, v) in self.values.iter().enumerate() {
            self.grid.write_point(i, &mut buf);
            record.clear();
            for c in &buf[..n] {
                record.push(fmt_f64(c.re));
                record.push(fmt_f64(c.im));
            }
            record.push(fmt_f64(v.re));
            record.push(fmt_f64(v.im));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn header(&self) -> SampledFieldHeader {
        SampledFieldHeader {
            schema_version: 1,
            n: self.grid.dim(),
            len: self.len(),
            decay_class: self.decay_class,
            interpolation_order: self.interpolation_order,
            grid: match &self.grid {
                Grid::Uniform(g) => GridHeader::Uniform(g.clone()),
                Grid::Points { .. } => GridHeader::Points,
            },
        }
    }

    /// Reads a field written by [`SampledField::write_csv`] with its header.
    pub fn read_csv<R: Read>(header: &SampledFieldHeader, reader: R) -> Result<Self> {
        let n = header.n;
        let mut rdr = csv::Reader::from_reader(reader);
        let mut points = Vec::new();
        let mut values = Vec::new();
        for record in rdr.records() {
            let record = record?;
            if record.len() != 2 * n + 2 {
                return Err(invalid(format!("expected {} columns, found {}", 2 * n + 2, record.len())));
            }
            let nums = record
                .iter()
                .map(|s| s.trim().parse::<f64>().map_err(|e| invalid(format!("bad number {s:?}: {e}"))))
                .collect::<Result<Vec<f64>>>()?;
            for j in 0..n {
                points.push(Complex64::new(nums[2 * j], nums[2 * j + 1]));
            }
            values.push(Complex64::new(nums[2 * n], nums[2 * n + 1]));
        }
        let grid = match &header.grid {
            GridHeader::Uniform(g) => {
                let grid = Grid::Uniform(g.clone());
                if grid.len() != values.len() {
                    return Err(TsmError::GridMismatch(format!("header grid has {} points, file has {}", grid.len(), values.len())));
                }
                grid
            }
            GridHeader::Points => Grid::points(n, points)?,
        };
        Self::new(grid, values, header.decay_class)?.with_interpolation_order(header.interpolation_order)
    }
}

impl Field for SampledField {
    fn dim(&self) -> usize {
        self.grid.dim()
    }
    fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dim() {
            return Err(invalid("point dimension does not match the field"));
        }
        self.interpolate(z)
    }
    fn decay_class(&self) -> DecayClass {
        self.decay_class
    }
}

/// Fixed 17-significant-digit scientific format used in every CSV.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn real_coords(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// `None` if `z` lies outside the grid box.
fn interpolate_uniform(g: &UniformGrid, values: &[Complex64], order: usize, z: &[Complex64]) -> Result<Option<Complex64>> {
    let dims = 2 * g.n;
    if z.len() != g.n {
        return Err(invalid("point dimension does not match the grid"));
    }
    let order = order.min(*g.counts.iter().min().unwrap_or(&2));
    let mut start = [0usize; 2 * MAX_DIM];
    let mut weights = [[0.0f64; 16]; 2 * MAX_DIM];
    let mut exact = [usize::MAX; 2 * MAX_DIM];
    let order = order.min(16);
    for axis in 0..dims {
        let x = if axis % 2 == 0 { z[axis / 2].re } else { z[axis / 2].im };
        let s = (x - g.lo[axis]) / g.spacing;
        let last = (g.counts[axis] - 1) as f64;
        let slack = 1e-9;
        if !(s >= -slack && s <= last + slack) {
            return Ok(None);
        }
        let nearest = s.round();
        if (s - nearest).abs() <= 1e-12 * (1.0 + nearest.abs()) {
            exact[axis] = nearest.clamp(0.0, last) as usize;
            continue;
        }
        let base = (s.floor() as isize - (order as isize / 2 - 1)).clamp(0, (g.counts[axis] - order) as isize) as usize;
        start[axis] = base;
        let t = s - base as f64;
        for j in 0..order {
            let mut w = 1.0;
            for m in 0..order {
                if m != j {
                    w *= (t - m as f64) / (j as f64 - m as f64);
                }
            }
            weights[axis][j] = w;
        }
    }
    // odometer over the stencil, axes with exact hits contribute one node
    let span: Vec<usize> = (0..dims).map(|a| if exact[a] != usize::MAX { 1 } else { order }).collect();
    let mut offs = [0usize; 2 * MAX_DIM];
    let mut multi = [0usize; 2 * MAX_DIM];
    let mut acc = Complex64::default();
    loop {
        let mut w = 1.0;
        for a in 0..dims {
            if exact[a] != usize::MAX {
                multi[a] = exact[a];
            } else {
                multi[a] = start[a] + offs[a];
                w *= weights[a][offs[a]];
            }
        }
        acc += values[g.flatten(&multi[..dims])] * w;
        let mut a = dims;
        loop {
            if a == 0 {
                return Ok(Some(acc));
            }
            a -= 1;
            offs[a] += 1;
            if offs[a] < span[a] {
                break;
            }
            offs[a] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twisted::field::GaussianField;

    fn gaussian_on_square(n: usize, extent: f64, points: usize) -> (GaussianField, SampledField) {
        let g = GaussianField::new(n, 0.3).unwrap();
        let grid = Grid::Uniform(UniformGrid::square(n, extent, points).unwrap());
        let f = SampledField::sample(&g, grid, Exec::Serial).unwrap();
        (g, f)
    }

    #[test]
    fn interpolation_reproduces_nodes_and_smooth_values() {
        let (g, f) = gaussian_on_square(1, 4.0, 81);
        let node = f.grid().point(1234);
        assert_eq!(f.eval(&node).unwrap(), f.values()[1234]);
        let z = [Complex64::new(0.37, -1.13)];
        let err = (f.eval(&z).unwrap() - g.eval(&z).unwrap()).norm();
        assert!(err < 1e-6, "{err}");
        assert!(matches!(f.eval(&[Complex64::new(4.5, 0.0)]), Err(TsmError::OutOfDomain { .. })));
        assert_eq!(f.interpolate_or_zero(&[Complex64::new(4.5, 0.0)]).unwrap(), Complex64::default());
    }

    #[test]
    fn interpolation_in_c2() {
        let (g, f) = gaussian_on_square(2, 3.0, 25);
        let z = [Complex64::new(0.31, -0.2), Complex64::new(-1.05, 0.66)];
        let err = (f.eval(&z).unwrap() - g.eval(&z).unwrap()).norm();
        assert!(err < 1e-4, "{err}");
    }

    #[test]
    fn csv_roundtrip() {
        let (_, f) = gaussian_on_square(1, 1.0, 5);
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let back = SampledField::read_csv(&f.header(), buf.as_slice()).unwrap();
        assert_eq!(back, f);
        let pts = Grid::points(1, vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.25)]).unwrap();
        let h = SampledField::new(pts, vec![Complex64::new(3.0, 4.0); 2], DecayClass::SchwartzLike).unwrap();
        let mut buf = Vec::new();
        h.write_csv(&mut buf).unwrap();
        assert_eq!(SampledField::read_csv(&h.header(), buf.as_slice()).unwrap(), h);
    }

    #[test]
    fn decay_check() {
        let grid = Grid::Uniform(UniformGrid::square(1, 8.0, 33).unwrap());
        let slow = SampledField::sample(&GaussianField::new(1, 0.125).unwrap(), grid.clone(), Exec::Serial)
            .unwrap()
            .with_decay_class(DecayClass::GaussianQuarterWeighted);
        assert!(matches!(slow.check_decay(1e6), Err(TsmError::Decay(_))));
        let fast = SampledField::sample(&GaussianField::new(1, 0.5).unwrap(), grid, Exec::Serial).unwrap();
        assert_eq!(fast.decay_class, DecayClass::GaussianQuarterWeighted);
        fast.check_decay(1.0 + 1e-12).unwrap();
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let grid = Grid::Uniform(UniformGrid::square(1, 1.0, 3).unwrap());
        assert!(SampledField::new(grid, vec![Complex64::default(); 8], DecayClass::SchwartzLike).is_err());
    }
}
