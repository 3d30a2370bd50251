use rayon::prelude::*;

use crate::error::{Error, Result};

/// Samples per work unit. Fixed so that partial sums, and therefore every
/// floating-point reduction, do not depend on the thread count.
pub const CHUNK: u64 = 256;

/// Runs `f(acc, index)` for every sample index, one accumulator per chunk,
/// and returns the accumulators in chunk order.
pub(crate) fn chunked<A, I, F>(n: u64, init: I, f: F) -> Vec<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, u64) + Sync,
{
    let n_chunks = n.div_ceil(CHUNK);
    (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                f(&mut acc, i);
            }
            acc
        })
        .collect()
}

/// Runs `f` on a dedicated pool of `workers` threads (0 picks the number of
/// cores). Results are identical for every worker count.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfiguration(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Mean and standard error of a sum and sum of squares over `n` terms.
pub(crate) fn mean_stderr(sum: f64, sum_sq: f64, n: u64) -> Option<(f64, f64)> {
    if n == 0 {
        return None;
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = if n > 1 { ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0) } else { 0.0 };
    Some((mean, (var / nf).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_arrive_in_order() {
        let parts = with_workers(3, || chunked(1000, Vec::new, |v: &mut Vec<u64>, i| v.push(i))).unwrap();
        let flat: Vec<u64> = parts.into_iter().flatten().collect();
        assert_eq!(flat, (0..1000).collect::<Vec<_>>());
    }

    #[test]
    fn float_sums_ignore_worker_count() {
        let run = |w| {
            with_workers(w, || {
                chunked(5000, || 0.0, |s: &mut f64, i| *s += (i as f64).sqrt().sin())
                    .into_iter()
                    .fold(0.0, |a, b| a + b)
            })
            .unwrap()
        };
        let a = run(1);
        assert_eq!(a.to_bits(), run(4).to_bits());
        assert_eq!(a.to_bits(), run(7).to_bits());
    }

    #[test]
    fn empty_input() {
        assert!(chunked(0, || 0u8, |_, _| unreachable!()).is_empty());
        assert_eq!(mean_stderr(0.0, 0.0, 0), None);
        assert_eq!(mean_stderr(2.0, 4.0, 1), Some((2.0, 0.0)));
    }
}
