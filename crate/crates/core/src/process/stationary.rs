use crate::error::Result;
use crate::process::covariance::CovarianceModel;
use crate::process::grid::{Grid, Path};
use crate::process::sequence::{GaussianSequence, SequenceMethod, Workspace};
use crate::rng::RngStream;

/// Centred stationary process with unit variance and covariance `model.r`.
///
/// `exp(−|t|)` uses the exact AR(1) recursion
/// `X_{k+1} = r(h)·X_k + √(1 − r(h)²)·ξ`; other models use circulant embedding
/// with a Cholesky fallback.
#[derive(Clone, Debug)]
pub struct StationarySampler {
    model: CovarianceModel,
    grid: Grid,
    seq: GaussianSequence,
}

impl StationarySampler {
    pub fn new(model: CovarianceModel, grid: Grid) -> Result<Self> {
        model.validate()?;
        let h = grid.step();
        let seq = if model.alpha() == 1.0 {
            GaussianSequence::ar1(grid.count(), model.r(h), 1.0)
        } else {
            GaussianSequence::from_autocovariance(grid.count(), |k| model.r(k as f64 * h))?
        };
        Ok(Self { model, grid, seq })
    }

    pub fn model(&self) -> &CovarianceModel {
        &self.model
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn method(&self) -> SequenceMethod {
        self.seq.method()
    }

    pub fn workspace(&self) -> Workspace {
        self.seq.workspace()
    }

    pub fn fill(&self, rng: &mut RngStream, ws: &mut Workspace, out: &mut [f64]) {
        self.seq.fill(rng, ws, out)
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

pub fn stationary_sample(model: CovarianceModel, grid: Grid, rng: &mut RngStream) -> Result<Path> {
    Ok(StationarySampler::new(model, grid)?.sample(rng))
}
