//! Deterministic chunked replication and Monte Carlo summaries.
//!
//! `n` replications are cut into chunks of `chunk_size`; chunk `c` draws from
//! substream `c` of the root stream and chunk results are reduced in chunk
//! order. Output therefore depends on `(seed, stream, n, chunk_size)` only,
//! never on the number of workers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::rng::RngStream;

pub const DEFAULT_CHUNK_SIZE: usize = 4096;

#[derive(Clone, Debug)]
pub struct Replication {
    root: RngStream,
    chunk_size: usize,
    workers: usize,
}

impl Replication {
    pub fn new(root: RngStream) -> Self {
        Self {
            root,
            chunk_size: DEFAULT_CHUNK_SIZE,
            workers: 1,
        }
    }

    pub fn from_seed(seed: u64) -> Self {
        Self::new(RngStream::new(seed, 0))
    }

    pub fn with_chunk_size(mut self, chunk_size: usize) -> Self {
        self.chunk_size = chunk_size.max(1);
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn root(&self) -> &RngStream {
        &self.root
    }

    pub fn chunk_size(&self) -> usize {
        self.chunk_size
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Independent replication plan for the `index`-th sub-experiment.
    pub fn child(&self, index: u64) -> Replication {
        Replication {
            root: self.root.substream(index.wrapping_add(1 << 48)),
            ..self.clone()
        }
    }

    /// Runs `f(rng, count)` on every chunk and returns the results in chunk order.
    pub fn map_chunks<R, F>(&self, n: usize, f: F) -> Result<Vec<R>>
    where
        R: Send,
        F: Fn(&mut RngStream, usize) -> Result<R> + Sync,
    {
        let chunks = n.div_ceil(self.chunk_size);
        let work = |c: usize| {
            let count = self.chunk_size.min(n - c * self.chunk_size);
            let mut rng = self.root.substream(c as u64);
            f(&mut rng, count)
        };
        if self.workers <= 1 || chunks <= 1 {
            return (0..chunks).map(work).collect();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Pool(e.to_string()))?;
        pool.install(|| (0..chunks).into_par_iter().map(work).collect())
    }

    /// Collects one `f64` per replication, concatenated in replication order.
    pub fn collect<F>(&self, n: usize, f: F) -> Result<Vec<f64>>
    where
        F: Fn(&mut RngStream, usize, &mut Vec<f64>) -> Result<()> + Sync,
    {
        let parts = self.map_chunks(n, |rng, count| {
            let mut out = Vec::with_capacity(count);
            f(rng, count, &mut out)?;
            Ok(out)
        })?;
        Ok(parts.concat())
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Reliability annotations attached to a Monte Carlo estimate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateFlags {
    /// Fewer than ten hits: the relative error is not controlled.
    pub low_hit_count: bool,
    /// Grid step exceeds a tenth of the Pickands scale `u^{-2/α}`.
    pub coarse_step: bool,
}

impl EstimateFlags {
    pub fn any(&self) -> bool {
        self.low_hit_count || self.coarse_step
    }
}

/// Monte Carlo mean with its standard error.
///
/// `stderr` is the sample standard deviation over `sqrt(n_samples)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub grid_step: f64,
    /// Empirical 0.999 quantile of the samples, when they were retained.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantile_999: Option<f64>,
    #[serde(default)]
    pub flags: EstimateFlags,
}

pub const MIN_RELIABLE_HITS: u64 = 10;

impl Estimate {
    pub fn from_samples(samples: &[f64], grid_step: f64) -> Result<Self> {
        ensure(!samples.is_empty(), "n", || {
            "at least one sample is required".into()
        })?;
        let n = samples.len() as f64;
        let mean = samples.iter().copied().collect::<NeumaierSum>().value() / n;
        let ss = samples
            .iter()
            .map(|x| (x - mean) * (x - mean))
            .collect::<NeumaierSum>()
            .value();
        let var = if samples.len() > 1 {
            ss / (n - 1.0)
        } else {
            0.0
        };
        Ok(Self {
            mean,
            stderr: (var / n).sqrt(),
            n_samples: samples.len() as u64,
            grid_step,
            quantile_999: Some(quantile(samples, 0.999)),
            flags: EstimateFlags::default(),
        })
    }

    /// Estimate of a probability from `hits` successes in `n` trials.
    pub fn from_count(hits: u64, n: u64, grid_step: f64) -> Result<Self> {
        ensure(n > 0, "n", || "at least one sample is required".into())?;
        ensure(hits <= n, "hits", || {
            format!("{hits} hits exceed {n} trials")
        })?;
        let nf = n as f64;
        let p = hits as f64 / nf;
        let var = if n > 1 {
            nf / (nf - 1.0) * p * (1.0 - p)
        } else {
            0.0
        };
        Ok(Self {
            mean: p,
            stderr: (var / nf).sqrt(),
            n_samples: n,
            grid_step,
            quantile_999: None,
            flags: EstimateFlags {
                low_hit_count: hits < MIN_RELIABLE_HITS,
                coarse_step: false,
            },
        })
    }

    pub fn relative_stderr(&self) -> f64 {
        if self.mean == 0.0 {
            f64::INFINITY
        } else {
            self.stderr / self.mean.abs()
        }
    }
}

/// Root of the sum of squared standard errors.
pub fn combined_stderr(parts: &[f64]) -> f64 {
    parts.iter().map(|s| s * s).sum::<f64>().sqrt()
}

/// Nearest-rank empirical quantile.
pub fn quantile(samples: &[f64], q: f64) -> f64 {
    let mut v = samples.to_vec();
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1;
    let (_, x, _) = v.select_nth_unstable_by(rank, |a, b| a.total_cmp(b));
    *x
}
