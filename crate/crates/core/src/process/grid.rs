use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};

/// Uniform grid `start + k·step`, `k = 0..count`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    start: f64,
    step: f64,
    count: usize,
}

impl Grid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        ensure(start.is_finite(), "start", || {
            format!("{start} is not finite")
        })?;
        ensure(step.is_finite() && step > 0.0, "step", || {
            format!("{step} must be finite and positive")
        })?;
        ensure(count >= 1, "count", || {
            "a grid needs at least one point".into()
        })?;
        Ok(Self { start, step, count })
    }

    /// Finest uniform grid on `[start, start + span]` with step at most
    /// `max_step` whose last point is exactly the right endpoint.
    ///
    /// A zero span gives the single point `{start}` with step `max_step`.
    pub fn covering(start: f64, span: f64, max_step: f64) -> Result<Self> {
        ensure(span.is_finite() && span >= 0.0, "span", || {
            format!("{span} must be finite and non-negative")
        })?;
        ensure(max_step.is_finite() && max_step > 0.0, "step", || {
            format!("{max_step} must be finite and positive")
        })?;
        if span == 0.0 {
            return Grid::new(start, max_step, 1);
        }
        let intervals = ((span / max_step) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        Grid::new(start, span / intervals as f64, intervals + 1)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn span(&self) -> f64 {
        self.step * (self.count - 1) as f64
    }

    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }

    #[inline]
    pub fn point(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|k| self.point(k))
    }

    /// Index range of grid points lying in `[a, b]`, with a relative slack of
    /// `1e-9` steps so that endpoints on the grid are included.
    pub fn indices_within(&self, a: f64, b: f64) -> std::ops::Range<usize> {
        let lo = ((a - self.start) / self.step - 1e-9).ceil().max(0.0) as usize;
        let hi = ((b - self.start) / self.step + 1e-9).floor();
        if hi < 0.0 {
            return 0..0;
        }
        let hi = (hi as usize + 1).min(self.count);
        lo.min(hi)..hi
    }
}

/// Sampled trajectory on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl Path {
    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Writes `t,value` rows with a header.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,value")?;
        for (t, v) in self.grid.points().zip(&self.values) {
            writeln!(w, "{t},{v}")?;
        }
        Ok(())
    }
}

/// Field on the product of two grids, row-major (`grid1` indexes rows).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Field2D {
    pub grid1: Grid,
    pub grid2: Grid,
    pub values: Vec<f64>,
}

impl Field2D {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid2.count() + j]
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t1,t2,value")?;
        for (i, t1) in self.grid1.points().enumerate() {
            for (j, t2) in self.grid2.points().enumerate() {
                writeln!(w, "{t1},{t2},{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}
