//! Sample locations in ℂⁿ: uniform Cartesian grids and scattered point lists.

use crate::error::{invalid, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Largest complex dimension handled anywhere in the crate.
pub const MAX_DIM: usize = 3;

/// Uniform Cartesian grid over ℂⁿ ≅ ℝ^{2n}.
///
/// Real axes are ordered `(re z_1, im z_1, re z_2, …)`; flat indices are
/// row-major with the last real axis varying fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    pub n: usize,
    pub lo: Vec<f64>,
    pub spacing: f64,
    pub counts: Vec<usize>,
}

impl UniformGrid {
    pub fn new(n: usize, lo: Vec<f64>, spacing: f64, counts: Vec<usize>) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(invalid(format!("grid dimension must be in 1..={MAX_DIM}, got {n}")));
        }
        if lo.len() != 2 * n || counts.len() != 2 * n {
            return Err(invalid("grid needs one origin and one count per real axis"));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(invalid(format!("grid spacing must be positive, got {spacing}")));
        }
        if counts.iter().any(|&c| c < 2) || lo.iter().any(|v| !v.is_finite()) {
            return Err(invalid("grid needs at least two finite nodes per axis"));
        }
        Ok(Self { n, lo, spacing, counts })
    }

    /// `points` nodes per axis on `[-extent, extent]`.
    pub fn square(n: usize, extent: f64, points: usize) -> Result<Self> {
        if !(extent > 0.0) || points < 2 {
            return Err(invalid("square grid needs positive extent and at least two points"));
        }
        let spacing = 2.0 * extent / (points - 1) as f64;
        Self::new(n, vec![-extent; 2 * n], spacing, vec![points; 2 * n])
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(2 * self.n as i32)
    }

    pub fn upper(&self, axis: usize) -> f64 {
        self.lo[axis] + self.spacing * (self.counts[axis] - 1) as f64
    }

    /// Multi-index of a flat index.
    pub fn unflatten(&self, mut index: usize, out: &mut [usize]) {
        for axis in (0..2 * self.n).rev() {
            out[axis] = index % self.counts[axis];
            index /= self.counts[axis];
        }
    }

    pub fn flatten(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.counts).fold(0, |acc, (&i, &c)| acc * c + i)
    }

    pub fn write_point(&self, index: usize, out: &mut [Complex64]) {
        let mut multi = [0usize; 2 * MAX_DIM];
        self.unflatten(index, &mut multi);
        for j in 0..self.n {
            out[j] = Complex64::new(
                self.lo[2 * j] + self.spacing * multi[2 * j] as f64,
                self.lo[2 * j + 1] + self.spacing * multi[2 * j + 1] as f64,
            );
        }
    }
}

/// Where a [`crate::twisted::SampledField`] holds its values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Grid {
    Uniform(UniformGrid),
    /// Flat list of points, `n` complex coordinates each.
    Points { n: usize, points: Vec<Complex64> },
}

impl Grid {
    pub fn points(n: usize, points: Vec<Complex64>) -> Result<Self> {
        if n == 0 || n > MAX_DIM || !points.len().is_multiple_of(n) {
            return Err(invalid("point list length must be a multiple of the dimension"));
        }
        if points.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("point list contains non-finite coordinates"));
        }
        Ok(Grid::Points { n, points })
    }

    pub fn dim(&self) -> usize {
        match self {
            Grid::Uniform(g) => g.n,
            Grid::Points { n, .. } => *n,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::Uniform(g) => g.len(),
            Grid::Points { n, points } => points.len() / n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn write_point(&self, index: usize, out: &mut [Complex64]) {
        match self {
            Grid::Uniform(g) => g.write_point(index, out),
            Grid::Points { n, points } => out[..*n].copy_from_slice(&points[index * n..(index + 1) * n]),
        }
    }

    pub fn point(&self, index: usize) -> Vec<Complex64> {
        let mut buf = [Complex64::default(); MAX_DIM];
        self.write_point(index, &mut buf);
        buf[..self.dim()].to_vec()
    }

    /// Weight of each sample in grid-ℓ² norms: the cell volume on uniform
    /// grids, one for point lists.
    pub fn l2_weight(&self) -> f64 {
        match self {
            Grid::Uniform(g) => g.cell_volume(),
            Grid::Points { .. } => 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_roundtrip() {
        let g = UniformGrid::new(2, vec![0.0, -1.0, 2.0, 0.5], 0.25, vec![3, 4, 2, 5]).unwrap();
        assert_eq!(g.len(), 120);
        let mut m = [0usize; 4];
        for i in 0..g.len() {
            g.unflatten(i, &mut m);
            assert_eq!(g.flatten(&m), i);
        }
        let mut z = [Complex64::default(); 2];
        g.write_point(g.len() - 1, &mut z);
        assert_eq!(z[0], Complex64::new(0.5, -0.25));
        assert_eq!(z[1], Complex64::new(2.25, 1.5));
    }

    #[test]
    fn validation() {
        assert!(UniformGrid::square(1, -1.0, 10).is_err());
        assert!(UniformGrid::new(4, vec![0.0; 8], 0.1, vec![3; 8]).is_err());
        assert!(Grid::points(2, vec![Complex64::default(); 3]).is_err());
    }
}
