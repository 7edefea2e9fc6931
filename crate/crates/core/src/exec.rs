//! Execution policy for the data-parallel loops.
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] maps over rayon's
//! pool; without it every policy runs sequentially. Results never depend on
//! the policy: each output element is computed by the same sequential code and
//! chunked reductions are combined in index order.

use crate::summation::ComplexSum;
use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk length for [`Exec::sum_complex`].
pub const REDUCTION_CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Serial,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Serial
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// `(0..len).map(f).collect()`, possibly in parallel, order preserved.
    pub fn map<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..len).into_par_iter().map(f).collect();
        }
        (0..len).map(f).collect()
    }

    /// Fallible [`Exec::map`]; the error reported is the one with the lowest index.
    pub fn try_map<T, E, F>(self, len: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        let results = self.map(len, f);
        results.into_iter().collect()
    }

    /// Compensated sum of `f(i)` for `i < len`.
    ///
    /// Terms are accumulated in fixed chunks of [`REDUCTION_CHUNK`]; chunk
    /// partials are merged in index order, so the result is bit-identical for
    /// any thread count and for both policies.
    pub fn sum_complex<F>(self, len: usize, f: F) -> Complex64
    where
        F: Fn(usize) -> Complex64 + Sync + Send,
    {
        let chunks = len.div_ceil(REDUCTION_CHUNK);
        let partials = self.map(chunks, |c| {
            let mut acc = ComplexSum::new();
            let end = ((c + 1) * REDUCTION_CHUNK).min(len);
            for i in c * REDUCTION_CHUNK..end {
                acc.add(f(i));
            }
            acc
        });
        let mut total = ComplexSum::new();
        for p in &partials {
            total.merge(p);
        }
        total.value()
    }
}

/// Environment variable capping the size of the global thread pool.
pub const THREADS_ENV: &str = "TSMLAB_THREADS";

/// Sizes rayon's global pool from [`THREADS_ENV`] when it is set.
///
/// Must run before any parallel work. Returns the requested count.
pub fn init_threads_from_env() -> crate::Result<Option<usize>> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| crate::TsmError::Config(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| crate::TsmError::Config(format!("cannot size the thread pool: {e}")))?;
    Ok(Some(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree_bitwise() {
        let f = |i: usize| Complex64::new((i as f64 * 0.013).sin(), (i as f64).sqrt().cos() * 1e-3);
        let a = Exec::Serial.sum_complex(10_001, f);
        let b = Exec::Parallel.sum_complex(10_001, f);
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
        assert_eq!(Exec::Serial.map(100, |i| i * i), Exec::Parallel.map(100, |i| i * i));
    }

    #[test]
    fn try_map_reports_first_error() {
        let r: Result<Vec<usize>, usize> =
            Exec::Parallel.try_map(50, |i| if i % 7 == 3 { Err(i) } else { Ok(i) });
        assert_eq!(r, Err(3));
    }
}
