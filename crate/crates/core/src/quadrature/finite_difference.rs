//! Finite-difference weights by Fornberg's recursion.

/// Weights `c[m][j]` for the `m`-th derivative at `z` from values at `x[j]`,
/// for all `m ≤ max_derivative`.
pub fn fornberg_weights(z: f64, x: &[f64], max_derivative: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; max_derivative + 1];
    if n == 0 {
        return c;
    }
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_derivative);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Centered stencil weights on unit spacing with `half_width` points per side.
///
/// Returns `(first, second)` derivative weights, each of length `2·half_width+1`;
/// the approximation order is `2·half_width`.
pub fn central_weights(half_width: usize) -> (Vec<f64>, Vec<f64>) {
    let x: Vec<f64> = (0..=2 * half_width).map(|j| j as f64 - half_width as f64).collect();
    let mut c = fornberg_weights(0.0, &x, 2);
    let second = c.pop().unwrap();
    let first = c.pop().unwrap();
    (first, second)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_second_order_stencil() {
        let (d1, d2) = central_weights(1);
        assert!((d1[0] + 0.5).abs() < 1e-15 && d1[1].abs() < 1e-15 && (d1[2] - 0.5).abs() < 1e-15);
        assert!((d2[0] - 1.0).abs() < 1e-15 && (d2[1] + 2.0).abs() < 1e-15 && (d2[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn high_order_accuracy_on_sine() {
        let h = 0.05;
        let (d1, d2) = central_weights(5);
        let x0 = 0.3f64;
        let f = |x: f64| (2.0 * x).sin();
        let vals: Vec<f64> = (0..11).map(|j| f(x0 + (j as f64 - 5.0) * h)).collect();
        let fp: f64 = d1.iter().zip(&vals).map(|(w, v)| w * v).sum::<f64>() / h;
        let fpp: f64 = d2.iter().zip(&vals).map(|(w, v)| w * v).sum::<f64>() / (h * h);
        assert!((fp - 2.0 * (2.0 * x0).cos()).abs() < 1e-11);
        assert!((fpp + 4.0 * (2.0 * x0).sin()).abs() < 1e-9);
    }
}
