//! The special Hermite operator `A = -Δ + |z|²/4` on uniformly sampled fields.

use super::field::Field;
use super::sampled::SampledField;
use crate::error::{invalid, Result, TsmError};
use crate::grid::{Grid, MAX_DIM};
use crate::quadrature::central_weights;
use crate::summation::NeumaierSum;
use num_complex::Complex64;

/// `A f` at the grid nodes lying at least `half_width` nodes from every
/// edge, by centered finite differences of order `2·half_width`.
///
/// Returns the interior samples of `A f` and of `f` on a point-list grid.
pub fn apply_special_hermite_operator(f: &SampledField, half_width: usize) -> Result<(SampledField, SampledField)> {
    let g = match f.grid() {
        Grid::Uniform(g) => g,
        Grid::Points { .. } => return Err(TsmError::GridMismatch("finite differences need a uniform grid".into())),
    };
    if half_width == 0 || g.counts.iter().any(|&c| c <= 2 * half_width) {
        return Err(invalid("grid too small for the requested stencil"));
    }
    let (_, second) = central_weights(half_width);
    let h2 = g.spacing * g.spacing;
    let dims = 2 * g.n;
    let mut multi = [0usize; 2 * MAX_DIM];
    let mut z = [Complex64::default(); MAX_DIM];
    let mut points = Vec::new();
    let mut a_vals = Vec::new();
    let mut f_vals = Vec::new();
    for i in 0..f.len() {
        g.unflatten(i, &mut multi);
        if (0..dims).any(|a| multi[a] < half_width || multi[a] + half_width >= g.counts[a]) {
            continue;
        }
        g.write_point(i, &mut z);
        let mut lap = Complex64::default();
        for axis in 0..dims {
            let mut probe = multi;
            for (s, w) in second.iter().enumerate() {
                probe[axis] = multi[axis] + s - half_width;
                lap += f.values()[g.flatten(&probe[..dims])] * *w;
            }
        }
        let r2: f64 = z[..g.n].iter().map(|c| c.norm_sqr()).sum();
        points.extend_from_slice(&z[..g.n]);
        a_vals.push(-lap / h2 + f.values()[i] * (0.25 * r2));
        f_vals.push(f.values()[i]);
    }
    let grid = Grid::points(g.n, points)?;
    Ok((
        SampledField::new(grid.clone(), a_vals, f.decay_class())?,
        SampledField::new(grid, f_vals, f.decay_class())?,
    ))
}

/// `‖A f - λ f‖ / ‖f‖` over the interior of the grid.
pub fn eigen_residual(f: &SampledField, lambda: f64, half_width: usize) -> Result<f64> {
    let (af, fi) = apply_special_hermite_operator(f, half_width)?;
    let mut num = NeumaierSum::new();
    let mut den = NeumaierSum::new();
    for (a, v) in af.values().iter().zip(fi.values()) {
        num.add((a - v * lambda).norm_sqr());
        den.add(v.norm_sqr());
    }
    Ok((num.value() / den.value()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::grid::UniformGrid;
    use crate::twisted::field::LaguerreField;

    #[test]
    fn laguerre_function_is_eigenfunction_on_cartesian_grid() {
        let grid = Grid::Uniform(UniformGrid::square(1, 8.0, 161).unwrap());
        for k in [0, 3] {
            let f = SampledField::sample(&LaguerreField::new(1, k).unwrap(), grid.clone(), Exec::Serial).unwrap();
            let res = eigen_residual(&f, (2 * k + 1) as f64, 4).unwrap();
            assert!(res < 1e-6, "k={k}: {res}");
        }
    }
}
