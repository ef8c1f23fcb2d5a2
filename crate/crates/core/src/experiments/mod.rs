//! Batch experiments: parameter sweeps over state families, Monte Carlo
//! detector comparisons and measurement-basis optimization.
//!
//! Stochastic runs split the sample range into fixed chunks of
//! [`CHUNK_SIZE`]; chunk `k` draws from `RngStream::new(seed, k)`. Per-chunk
//! results are merged in chunk order, so output depends on the seed only and
//! never on the number of worker threads.

pub mod export;
pub mod montecarlo;
pub mod optimize;
pub mod sweep;

pub use export::{export_results, write_results, Exportable, Format, Meta};
pub use montecarlo::{run_lur_comparison, run_montecarlo, Detector, MontecarloSpec, TallyMatrix};
pub use optimize::{run_basis_optimization, ModeResult, OptimizationMode, OptimizationSpec, OptimizationSummary};
pub use sweep::{parse_grid, run_sweep, Measure, SweepRow, SweepSpec};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::states::RngStream;

/// Samples per RNG stream.
pub const CHUNK_SIZE: usize = 4096;

/// Stream ids from here down are reserved for candidate grids and other
/// non-sample randomness.
pub(crate) const AUX_STREAM: u64 = u64::MAX;

/// Maps `work(rng, count)` over the chunks of `0..n` on `threads` workers
/// (all available cores when `None`) and returns per-chunk outputs in order.
pub(crate) fn map_chunks<T, F>(n: usize, seed: u64, threads: Option<usize>, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream, usize) -> T + Sync,
{
    let n_chunks = n.div_ceil(CHUNK_SIZE);
    let run = || {
        (0..n_chunks)
            .into_par_iter()
            .map(|k| {
                let count = CHUNK_SIZE.min(n - k * CHUNK_SIZE);
                work(&mut RngStream::new(seed, k as u64), count)
            })
            .collect::<Vec<T>>()
    };
    match threads {
        Some(0) => Err(Error::OutOfRange { name: "threads", value: 0.0, min: 1.0, max: f64::INFINITY }),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Io(std::io::Error::other(e)))?;
            Ok(pool.install(run))
        }
        None => Ok(run()),
    }
}
