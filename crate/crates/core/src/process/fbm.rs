//! Fractional Brownian motion with `E B²(1) = 2` and the drifted process
//! `χ(t) = B(t) − t^α`.
//!
//! `B` has covariance `t^α + s^α − |t−s|^α`, i.e. `√2` times standard fBm
//! with Hurst index `α/2`. Paths are the cumulative sum of fractional
//! Gaussian noise sampled by circulant embedding, rescaled by `√2`.

use crate::error::{ensure, Result};
use crate::process::grid::{Grid, Path};
use crate::process::sequence::{GaussianSequence, Workspace};
use crate::rng::RngStream;

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    ensure(
        alpha.is_finite() && alpha > 0.0 && alpha <= 2.0,
        "alpha",
        || format!("{alpha} is outside (0, 2]"),
    )
}

fn check_origin(grid: &Grid) -> Result<()> {
    ensure(grid.start() == 0.0, "grid", || {
        format!("grid must start at 0, starts at {}", grid.start())
    })
}

/// Autocovariance of standard fractional Gaussian noise with Hurst index
/// `α/2` at spacing `h`.
fn fgn_autocov(alpha: f64, h: f64) -> impl Fn(usize) -> f64 {
    let scale = 0.5 * h.powf(alpha);
    move |k| {
        let k = k as f64;
        let below = if k >= 1.0 { (k - 1.0).powf(alpha) } else { 1.0 };
        scale * ((k + 1.0).powf(alpha) - 2.0 * k.powf(alpha) + below)
    }
}

#[derive(Clone, Debug)]
enum Increments {
    /// Grid of a single point.
    None,
    /// `α = 2`: `B(t) = √2·t·Z`; the increments are perfectly correlated.
    Linear,
    Noise(GaussianSequence),
}

#[derive(Clone, Debug)]
pub struct FbmSampler {
    alpha: f64,
    grid: Grid,
    increments: Increments,
}

impl FbmSampler {
    pub fn new(alpha: f64, grid: Grid) -> Result<Self> {
        check_alpha(alpha)?;
        check_origin(&grid)?;
        let m = grid.count() - 1;
        let increments = if m == 0 {
            Increments::None
        } else if alpha == 2.0 {
            Increments::Linear
        } else if alpha == 1.0 {
            // white noise: the embedding spectrum is flat
            Increments::Noise(GaussianSequence::iid(m, grid.step().sqrt()))
        } else {
            Increments::Noise(GaussianSequence::from_autocovariance(
                m,
                fgn_autocov(alpha, grid.step()),
            )?)
        };
        Ok(Self {
            alpha,
            grid,
            increments,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn noise(&self) -> Option<&GaussianSequence> {
        match &self.increments {
            Increments::Noise(seq) => Some(seq),
            _ => None,
        }
    }

    pub fn workspace(&self) -> Workspace {
        match &self.increments {
            Increments::Noise(seq) => seq.workspace(),
            _ => Workspace::default(),
        }
    }

    /// Fills `out` (length `grid.count()`) with `B(t_k)`.
    pub fn fill(&self, rng: &mut RngStream, ws: &mut Workspace, out: &mut [f64]) {
        out[0] = 0.0;
        match &self.increments {
            Increments::None => {}
            Increments::Linear => {
                let slope = std::f64::consts::SQRT_2 * rng.normal();
                for (k, o) in out.iter_mut().enumerate() {
                    *o = slope * self.grid.point(k);
                }
            }
            Increments::Noise(seq) => {
                seq.fill(rng, ws, &mut out[1..]);
                let mut acc = 0.0;
                for o in out.iter_mut().skip(1) {
                    acc += *o;
                    *o = std::f64::consts::SQRT_2 * acc;
                }
            }
        }
    }

    pub fn sample(&self, rng: &mut RngStream) -> Path {
        let mut values = vec![0.0; self.grid.count()];
        self.fill(rng, &mut self.workspace(), &mut values);
        Path {
            grid: self.grid,
            values,
        }
    }
}

/// One path of `B` on `grid` (which must start at 0).
pub fn fbm_sample(alpha: f64, grid: Grid, rng: &mut RngStream) -> Result<Path> {
    Ok(FbmSampler::new(alpha, grid)?.sample(rng))
}

/// Sampler for `χ(t) = B(t) − t^α`, mean `−t^α`, covariance `t^α + s^α − |t−s|^α`.
#[derive(Clone, Debug)]
pub struct PickandsSampler {
    fbm: FbmSampler,
    drift: Vec<f64>,
}

impl PickandsSampler {
    pub fn new(alpha: f64, grid: Grid) -> Result<Self> {
        let fbm = FbmSampler::new(alpha, grid)?;
        let drift = grid.points().map(|t| t.powf(alpha)).collect();
        Ok(Self { fbm, drift })
    }

    pub fn grid(&self) -> &Grid {
        self.fbm.grid()
    }

    pub fn fbm(&self) -> &FbmSampler {
        &self.fbm
    }

    pub fn workspace(&self) -> Workspace {
        self.fbm.workspace()
    }

    pub fn fill(&self, rng: &mut RngStream, ws: &mut Workspace, out: &mut [f64]) {
        self.fbm.fill(rng, ws, out);
        for (o, d) in out.iter_mut().zip(&self.drift) {
            *o -= d;
        }
    }

    pub fn sample(&self, rng: &mut RngStream) -> Path {
        let mut values = vec![0.0; self.grid().count()];
        self.fill(rng, &mut self.workspace(), &mut values);
        Path {
            grid: *self.grid(),
            values,
        }
    }
}

pub fn pickands_process_sample(alpha: f64, grid: Grid, rng: &mut RngStream) -> Result<Path> {
    Ok(PickandsSampler::new(alpha, grid)?.sample(rng))
}
