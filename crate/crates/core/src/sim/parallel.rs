use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::RngStream;

use super::config::THREADS_ENV;

/// Replications folded sequentially before chunk results are combined.
const CHUNK: u64 = 64;

/// Worker count: the explicit setting, else the environment variable, else
/// the number of available cores.
pub(crate) fn resolve_threads(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| std::env::var(THREADS_ENV).ok()?.parse().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Run `replications` independent replications and sum their tallies.
///
/// Replication `r` gets `RngStream::new(seed, r)` and adds into a tally of
/// length `width`. Replications are summed within fixed chunks and the
/// chunks are then summed in index order, so floating-point totals are
/// identical for any thread count.
pub(crate) fn replicate<F>(
    replications: u64,
    seed: u64,
    threads: Option<usize>,
    width: usize,
    step: F,
) -> Result<Vec<f64>>
where
    F: Fn(&mut [f64], &mut RngStream) -> Result<()> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(resolve_threads(threads))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let chunks = replications.div_ceil(CHUNK);
    let partials: Vec<Result<Vec<f64>>> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut tally = vec![0.0; width];
                for r in c * CHUNK..((c + 1) * CHUNK).min(replications) {
                    step(&mut tally, &mut RngStream::new(seed, r))?;
                }
                Ok(tally)
            })
            .collect()
    });
    let mut total = vec![0.0; width];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part?) {
            *t += p;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_count_does_not_change_sums() {
        let run = |threads| {
            replicate(1000, 7, Some(threads), 2, |t, rng| {
                let u = rng.uniform();
                t[0] += u;
                t[1] += u.ln();
                Ok(())
            })
            .unwrap()
        };
        let one = run(1);
        for threads in [2, 3, 8] {
            assert_eq!(run(threads), one);
        }
    }

    #[test]
    fn errors_propagate() {
        let r = replicate(10, 1, Some(2), 1, |_, rng| {
            if rng.stream_id() == 5 {
                Err(Error::Invalid("boom".into()))
            } else {
                Ok(())
            }
        });
        assert!(r.is_err());
    }
}
