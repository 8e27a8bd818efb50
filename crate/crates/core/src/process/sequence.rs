//! Zero-mean stationary Gaussian vectors with a prescribed autocovariance.
//!
//! The default method is circulant embedding: the autocovariance
//! `γ₀, …, γ_{M/2}` is wrapped into a symmetric circulant of size
//! `M = 2^⌈log₂ 2(m−1)⌉`, whose eigenvalues are the FFT of its first row.
//! One complex FFT of `√(λ/M)·(ξ₁ + iξ₂)` yields two independent samples in
//! its real and imaginary parts; the second one is kept in the workspace and
//! returned by the next call.

use std::sync::Arc;

use nalgebra::DMatrix;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauss::CholeskyFactor;
use crate::rng::RngStream;

/// Eigenvalues at or above `−EIGENVALUE_TOLERANCE·λ_max` are clipped to zero;
/// anything more negative rejects the embedding.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceMethod {
    Iid,
    Ar1,
    Circulant,
    Cholesky,
}

#[derive(Clone)]
struct Circulant {
    size: usize,
    scale: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Circulant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Circulant")
            .field("size", &self.size)
            .finish()
    }
}

impl Circulant {
    fn new(m: usize, autocov: &dyn Fn(usize) -> f64) -> std::result::Result<Self, String> {
        let size = (2 * (m - 1)).next_power_of_two().max(2);
        let mut row: Vec<Complex64> = (0..size)
            .map(|j| Complex64::new(autocov(j.min(size - j)), 0.0))
            .collect();
        let fft = FftPlanner::new().plan_fft_forward(size);
        fft.process(&mut row);
        let lambda_max = row.iter().map(|c| c.re).fold(f64::NEG_INFINITY, f64::max);
        if lambda_max.is_nan() || lambda_max <= 0.0 {
            return Err("embedding has no positive eigenvalue".into());
        }
        let floor = -EIGENVALUE_TOLERANCE * lambda_max;
        let mut scale = Vec::with_capacity(size);
        for (k, c) in row.iter().enumerate() {
            if c.re < floor {
                return Err(format!("eigenvalue {k} is {:e} (max {lambda_max:e})", c.re));
            }
            scale.push((c.re.max(0.0) / size as f64).sqrt());
        }
        Ok(Self { size, scale, fft })
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Iid {
        sd: f64,
    },
    Ar1 {
        coef: f64,
        innovation_sd: f64,
        sd: f64,
    },
    Circulant(Circulant),
    Cholesky(CholeskyFactor),
}

/// Sampler for a stationary Gaussian vector of fixed length.
#[derive(Clone, Debug)]
pub struct GaussianSequence {
    len: usize,
    kind: Kind,
}

/// Per-worker scratch space; never shared between threads.
#[derive(Debug, Default)]
pub struct Workspace {
    buffer: Vec<Complex64>,
    scratch: Vec<Complex64>,
    spare: Vec<f64>,
    has_spare: bool,
    z: Vec<f64>,
}

impl GaussianSequence {
    /// Independent `N(0, sd²)` entries.
    pub fn iid(len: usize, sd: f64) -> Self {
        Self {
            len,
            kind: Kind::Iid { sd },
        }
    }

    /// Stationary AR(1) with lag-one correlation `coef` and marginal variance `sd²`.
    pub fn ar1(len: usize, coef: f64, sd: f64) -> Self {
        let innovation_sd = sd * (1.0 - coef * coef).max(0.0).sqrt();
        Self {
            len,
            kind: Kind::Ar1 {
                coef,
                innovation_sd,
                sd,
            },
        }
    }

    /// Circulant embedding of the autocovariance `autocov(lag)`, falling back
    /// to a pivoted Cholesky factor of the Toeplitz matrix when the embedding
    /// is not PSD. Lags up to `M/2` are evaluated, so the embedding extends
    /// the true covariance rather than zero-padding it.
    pub fn from_autocovariance(len: usize, autocov: impl Fn(usize) -> f64) -> Result<Self> {
        if len == 0 {
            return Err(Error::domain("len", "empty sequence"));
        }
        if len == 1 {
            return Ok(Self::iid(1, autocov(0).max(0.0).sqrt()));
        }
        match Circulant::new(len, &autocov) {
            Ok(c) => Ok(Self {
                len,
                kind: Kind::Circulant(c),
            }),
            Err(embedding) => Self::cholesky(len, &autocov).map_err(|chol| {
                Error::Sampler(format!(
                    "circulant embedding failed ({embedding}); Cholesky fallback failed ({chol})"
                ))
            }),
        }
    }

    /// Pivoted Cholesky factor of the Toeplitz covariance of `autocov`.
    pub fn cholesky(len: usize, autocov: impl Fn(usize) -> f64) -> Result<Self> {
        let cov = DMatrix::from_fn(len, len, |i, j| autocov(i.abs_diff(j)));
        Ok(Self {
            len,
            kind: Kind::Cholesky(CholeskyFactor::new(&cov)?),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn method(&self) -> SequenceMethod {
        match self.kind {
            Kind::Iid { .. } => SequenceMethod::Iid,
            Kind::Ar1 { .. } => SequenceMethod::Ar1,
            Kind::Circulant(_) => SequenceMethod::Circulant,
            Kind::Cholesky(_) => SequenceMethod::Cholesky,
        }
    }

    pub fn workspace(&self) -> Workspace {
        let mut ws = Workspace::default();
        match &self.kind {
            Kind::Circulant(c) => {
                ws.buffer = vec![Complex64::default(); c.size];
                ws.scratch = vec![Complex64::default(); c.fft.get_inplace_scratch_len()];
                ws.spare = vec![0.0; self.len];
            }
            Kind::Cholesky(f) => ws.z = vec![0.0; f.rank()],
            _ => {}
        }
        ws
    }

    /// Fills `out` (length `len`) with one sample.
    pub fn fill(&self, rng: &mut RngStream, ws: &mut Workspace, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.len);
        match &self.kind {
            Kind::Iid { sd } => {
                for x in out.iter_mut() {
                    *x = sd * rng.normal();
                }
            }
            Kind::Ar1 {
                coef,
                innovation_sd,
                sd,
            } => {
                let mut x = sd * rng.normal();
                out[0] = x;
                for o in out.iter_mut().skip(1) {
                    x = coef * x + innovation_sd * rng.normal();
                    *o = x;
                }
            }
            Kind::Circulant(c) => {
                if ws.has_spare {
                    out.copy_from_slice(&ws.spare);
                    ws.has_spare = false;
                    return;
                }
                for (b, s) in ws.buffer.iter_mut().zip(&c.scale) {
                    let re = rng.normal();
                    let im = rng.normal();
                    *b = Complex64::new(s * re, s * im);
                }
                c.fft.process_with_scratch(&mut ws.buffer, &mut ws.scratch);
                for ((o, sp), b) in out.iter_mut().zip(ws.spare.iter_mut()).zip(&ws.buffer) {
                    *o = b.re;
                    *sp = b.im;
                }
                ws.has_spare = true;
            }
            Kind::Cholesky(f) => f.sample_into(rng, &mut ws.z, out),
        }
    }
}
