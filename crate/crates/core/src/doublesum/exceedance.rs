use serde::Serialize;

use crate::error::{ensure, Result};
use crate::gauss::std_normal_tail;
use crate::mc::{Estimate, Replication};
use crate::process::{CovarianceModel, Grid, StationarySampler};
use crate::scalar::{lit, Real};

/// `H·p·u^{2/α}·Ψ(u)`.
pub fn pickands_approximation<T: Real>(alpha: T, p: T, u: T, h: T) -> Result<T> {
    ensure(
        alpha.is_finite() && alpha > T::zero() && alpha <= lit(2.0),
        "alpha",
        || format!("{alpha} is outside (0, 2]"),
    )?;
    for (name, x) in [("p", p), ("u", u), ("H", h)] {
        ensure(x.is_finite() && x > T::zero(), name, || {
            format!("{x} must be finite and positive")
        })?;
    }
    Ok(h * p * u.powf(lit::<T>(2.0) / alpha) * std_normal_tail(u)?)
}

/// Default grid step `u^{-2/α}/20`.
pub fn default_step(alpha: f64, u: f64) -> Result<f64> {
    ensure(u.is_finite() && u > 0.0, "u", || {
        format!("{u} must be positive to set a default step")
    })?;
    Ok(u.powf(-2.0 / alpha) / 20.0)
}

/// Step coarser than a tenth of the Pickands scale `u^{-2/α}`.
pub(crate) fn is_coarse(alpha: f64, u: f64, step: f64) -> bool {
    u > 0.0 && step > 0.1 * u.powf(-2.0 / alpha)
}

pub(crate) fn check_level(u: f64) -> Result<()> {
    ensure(u.is_finite(), "u", || format!("{u} must be finite"))
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    ensure(n > 0, "n", || "at least one replication is required".into())
}

pub(crate) fn grid_max(values: &[f64]) -> f64 {
    values.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x))
}

/// Grid suprema of `n` independent paths, kept for evaluating many
/// functionals on one ensemble.
#[derive(Clone, Debug)]
pub struct SupEnsemble {
    grid: Grid,
    sups: Vec<f64>,
}

impl SupEnsemble {
    pub fn generate(
        model: &CovarianceModel,
        grid: Grid,
        n: usize,
        rep: &Replication,
    ) -> Result<Self> {
        check_n(n)?;
        let sampler = StationarySampler::new(*model, grid)?;
        let sups = rep.collect(n, |rng, count, out| {
            let mut ws = sampler.workspace();
            let mut path = vec![0.0; grid.count()];
            for _ in 0..count {
                sampler.fill(rng, &mut ws, &mut path);
                out.push(grid_max(&path));
            }
            Ok(())
        })?;
        Ok(Self { grid, sups })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn sups(&self) -> &[f64] {
        &self.sups
    }

    pub fn hits(&self, u: f64) -> u64 {
        self.sups.iter().filter(|&&s| s > u).count() as u64
    }

    /// `P(sup > u)`.
    pub fn exceedance(&self, u: f64) -> Result<Estimate> {
        Estimate::from_count(self.hits(u), self.sups.len() as u64, self.grid.step())
    }

    /// `E sup`.
    pub fn mean(&self) -> Result<Estimate> {
        Estimate::from_samples(&self.sups, self.grid.step())
    }
}

/// Crude Monte Carlo of `P(sup_{[0,p]} X > u)` over the grid covering `[0,p]`.
///
/// `p = 0` gives a single-point grid.
pub fn mc_sup_exceedance(
    model: &CovarianceModel,
    p: f64,
    u: f64,
    step: f64,
    n: usize,
    rep: &Replication,
) -> Result<Estimate> {
    model.validate()?;
    ensure(p.is_finite() && p >= 0.0, "p", || {
        format!("{p} must be finite and non-negative")
    })?;
    check_level(u)?;
    check_n(n)?;
    let grid = Grid::covering(0.0, p, step)?;
    let sampler = StationarySampler::new(*model, grid)?;
    let counts = rep.map_chunks(n, |rng, count| {
        let mut ws = sampler.workspace();
        let mut path = vec![0.0; grid.count()];
        let mut hits = 0u64;
        for _ in 0..count {
            sampler.fill(rng, &mut ws, &mut path);
            hits += u64::from(grid_max(&path) > u);
        }
        Ok(hits)
    })?;
    let mut e = Estimate::from_count(counts.iter().sum(), n as u64, grid.step())?;
    e.flags.coarse_step = grid.count() > 1 && is_coarse(model.alpha(), u, grid.step());
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointReport {
    /// `P(sup_A X > u, sup_B X > u)`.
    pub joint: Estimate,
    pub first: Estimate,
    pub second: Estimate,
}

fn check_interval(name: &'static str, (a, b): (f64, f64)) -> Result<()> {
    ensure(a.is_finite() && b.is_finite() && a <= b, name, || {
        format!("[{a}, {b}] is not an interval")
    })
}

/// Joint and marginal exceedances of the grid suprema over disjoint `a` and `b`.
pub fn mc_joint_exceedance(
    model: &CovarianceModel,
    a: (f64, f64),
    b: (f64, f64),
    u: f64,
    step: f64,
    n: usize,
    rep: &Replication,
) -> Result<JointReport> {
    model.validate()?;
    check_interval("A", a)?;
    check_interval("B", b)?;
    ensure(a.1 < b.0 || b.1 < a.0, "B", || {
        format!("[{}, {}] overlaps [{}, {}]", b.0, b.1, a.0, a.1)
    })?;
    check_level(u)?;
    check_n(n)?;
    let start = a.0.min(b.0);
    let grid = Grid::covering(start, a.1.max(b.1) - start, step)?;
    let (ia, ib) = (grid.indices_within(a.0, a.1), grid.indices_within(b.0, b.1));
    ensure(!ia.is_empty() && !ib.is_empty(), "step", || {
        format!("{step} leaves an interval without grid points")
    })?;
    let sampler = StationarySampler::new(*model, grid)?;
    let counts = rep.map_chunks(n, |rng, count| {
        let mut ws = sampler.workspace();
        let mut path = vec![0.0; grid.count()];
        let mut hits = [0u64; 3];
        for _ in 0..count {
            sampler.fill(rng, &mut ws, &mut path);
            let ea = grid_max(&path[ia.clone()]) > u;
            let eb = grid_max(&path[ib.clone()]) > u;
            hits[0] += u64::from(ea && eb);
            hits[1] += u64::from(ea);
            hits[2] += u64::from(eb);
        }
        Ok(hits)
    })?;
    let total = counts.iter().fold([0u64; 3], |acc, c| {
        [acc[0] + c[0], acc[1] + c[1], acc[2] + c[2]]
    });
    let coarse = is_coarse(model.alpha(), u, grid.step());
    let mk = |hits| -> Result<Estimate> {
        let mut e = Estimate::from_count(hits, n as u64, grid.step())?;
        e.flags.coarse_step = coarse;
        Ok(e)
    };
    Ok(JointReport {
        joint: mk(total[0])?,
        first: mk(total[1])?,
        second: mk(total[2])?,
    })
}
