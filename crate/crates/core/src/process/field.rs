use crate::error::Result;
use crate::process::fbm::PickandsSampler;
use crate::process::grid::{Field2D, Grid};
use crate::process::sequence::Workspace;
use crate::rng::RngStream;

/// Two-parameter field `χ(t₁,t₂) = B¹(t₁) + B²(t₂) − t₁^α − t₂^α` with
/// independent `B¹`, `B²`.
///
/// Its mean is `−t₁^α − t₂^α` and its covariance
/// `t₁^α + t₂^α + s₁^α + s₂^α − |t₁−s₁|^α − |t₂−s₂|^α`.
#[derive(Clone, Debug)]
pub struct PickandsFieldSampler {
    first: PickandsSampler,
    second: PickandsSampler,
}

#[derive(Debug)]
pub struct FieldWorkspace {
    first: Workspace,
    second: Workspace,
    row: Vec<f64>,
    col: Vec<f64>,
}

impl PickandsFieldSampler {
    pub fn new(alpha: f64, grid1: Grid, grid2: Grid) -> Result<Self> {
        Ok(Self {
            first: PickandsSampler::new(alpha, grid1)?,
            second: PickandsSampler::new(alpha, grid2)?,
        })
    }

    pub fn grids(&self) -> (Grid, Grid) {
        (*self.first.grid(), *self.second.grid())
    }

    pub fn workspace(&self) -> FieldWorkspace {
        FieldWorkspace {
            first: self.first.workspace(),
            second: self.second.workspace(),
            row: vec![0.0; self.first.grid().count()],
            col: vec![0.0; self.second.grid().count()],
        }
    }

    /// Fills `out` (row-major, `count₁ × count₂`).
    pub fn fill(&self, rng: &mut RngStream, ws: &mut FieldWorkspace, out: &mut [f64]) {
        self.first.fill(rng, &mut ws.first, &mut ws.row);
        self.second.fill(rng, &mut ws.second, &mut ws.col);
        let n2 = ws.col.len();
        for (i, a) in ws.row.iter().enumerate() {
            for (o, b) in out[i * n2..(i + 1) * n2].iter_mut().zip(&ws.col) {
                *o = a + b;
            }
        }
    }

    pub fn sample(&self, rng: &mut RngStream) -> Field2D {
        let (grid1, grid2) = self.grids();
        let mut values = vec![0.0; grid1.count() * grid2.count()];
        self.fill(rng, &mut self.workspace(), &mut values);
        Field2D {
            grid1,
            grid2,
            values,
        }
    }
}

pub fn pickands_field_2d_sample(
    alpha: f64,
    grid1: Grid,
    grid2: Grid,
    rng: &mut RngStream,
) -> Result<Field2D> {
    Ok(PickandsFieldSampler::new(alpha, grid1, grid2)?.sample(rng))
}
