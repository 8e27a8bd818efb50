use crate::error::{ensure, Result};
use crate::mc::{Estimate, Replication};
use crate::pickands::table::{ConvergenceRow, ConvergenceTable};
use crate::process::{check_alpha, Grid, PickandsFieldSampler, PickandsSampler};

/// `sup_{[0,T]} (√2·tz − t²)`: vertex at `t* = z/√2` clipped to `[0,T]`.
pub fn alpha2_sup(z: f64, t: f64) -> f64 {
    let s = (z / std::f64::consts::SQRT_2).clamp(0.0, t);
    std::f64::consts::SQRT_2 * s * z - s * s
}

fn check_side(name: &'static str, t: f64, step: f64) -> Result<()> {
    ensure(t.is_finite() && t >= 0.0, name, || {
        format!("{t} must be finite and non-negative")
    })?;
    ensure(step.is_finite() && step > 0.0, "step", || {
        format!("{step} must be finite and positive")
    })?;
    ensure(t == 0.0 || step <= t, "step", || {
        format!("step {step} exceeds the side {t}")
    })
}

fn check_n(n: usize) -> Result<()> {
    ensure(n > 0, "n", || "at least one replication is required".into())
}

fn constant_one(n: usize, step: f64) -> Result<Estimate> {
    Ok(Estimate {
        mean: 1.0,
        stderr: 0.0,
        n_samples: n as u64,
        grid_step: step,
        quantile_999: Some(1.0),
        flags: Default::default(),
    })
}

/// Monte Carlo estimate of `H(T) = E exp(sup_{[0,T]} χ)`.
///
/// For `α < 2` the supremum is taken over the grid covering `[0,T]` with
/// step at most `step`, which biases the estimate low. For `α = 2` the
/// supremum is evaluated in closed form per sample.
pub fn estimate_h_interval(
    alpha: f64,
    t: f64,
    step: f64,
    n: usize,
    rep: &Replication,
) -> Result<Estimate> {
    check_alpha(alpha)?;
    check_side("T", t, step)?;
    check_n(n)?;
    if t == 0.0 {
        return constant_one(n, step);
    }
    if alpha == 2.0 {
        let samples = rep.collect(n, |rng, count, out| {
            out.extend((0..count).map(|_| alpha2_sup(rng.normal(), t).exp()));
            Ok(())
        })?;
        return Estimate::from_samples(&samples, step);
    }
    let grid = Grid::covering(0.0, t, step)?;
    let sampler = PickandsSampler::new(alpha, grid)?;
    let samples = rep.collect(n, |rng, count, out| {
        let mut ws = sampler.workspace();
        let mut path = vec![0.0; grid.count()];
        for _ in 0..count {
            sampler.fill(rng, &mut ws, &mut path);
            out.push(path.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x)).exp());
        }
        Ok(())
    })?;
    Estimate::from_samples(&samples, grid.step())
}

/// Monte Carlo estimate of `H([0,T₁]×[0,T₂]) = E exp(sup χ(t₁,t₂))`.
pub fn estimate_h_rect(
    alpha: f64,
    t1: f64,
    t2: f64,
    step1: f64,
    step2: f64,
    n: usize,
    rep: &Replication,
) -> Result<Estimate> {
    check_alpha(alpha)?;
    check_side("T1", t1, step1)?;
    check_side("T2", t2, step2)?;
    check_n(n)?;
    if t1 == 0.0 && t2 == 0.0 {
        return constant_one(n, step1.max(step2));
    }
    if alpha == 2.0 {
        let samples = rep.collect(n, |rng, count, out| {
            for _ in 0..count {
                let (z1, z2) = (rng.normal(), rng.normal());
                out.push((alpha2_sup(z1, t1) + alpha2_sup(z2, t2)).exp());
            }
            Ok(())
        })?;
        return Estimate::from_samples(&samples, step1.max(step2));
    }
    let grid1 = Grid::covering(0.0, t1, step1)?;
    let grid2 = Grid::covering(0.0, t2, step2)?;
    let sampler = PickandsFieldSampler::new(alpha, grid1, grid2)?;
    let samples = rep.collect(n, |rng, count, out| {
        let mut ws = sampler.workspace();
        let mut field = vec![0.0; grid1.count() * grid2.count()];
        for _ in 0..count {
            sampler.fill(rng, &mut ws, &mut field);
            out.push(field.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x)).exp());
        }
        Ok(())
    })?;
    let step = if t1 == 0.0 {
        grid2.step()
    } else if t2 == 0.0 {
        grid1.step()
    } else {
        grid1.step().max(grid2.step())
    };
    Estimate::from_samples(&samples, step)
}

/// Table of `H(T)/T` over an increasing list of horizons.
///
/// Row `i` draws from `rep.child(i)`, so rows are independent and adding a
/// horizon leaves earlier rows unchanged.
pub fn estimate_pickands_constant(
    alpha: f64,
    horizons: &[f64],
    step: f64,
    n: usize,
    rep: &Replication,
) -> Result<ConvergenceTable> {
    check_alpha(alpha)?;
    ensure(!horizons.is_empty(), "T_list", || {
        "at least one horizon is required".into()
    })?;
    ensure(
        horizons.iter().all(|t| t.is_finite() && *t > 0.0),
        "T_list",
        || "horizons must be finite and positive".into(),
    )?;
    ensure(horizons.windows(2).all(|w| w[0] < w[1]), "T_list", || {
        "horizons must be strictly increasing".into()
    })?;
    let mut rows = Vec::with_capacity(horizons.len());
    for (i, &t) in horizons.iter().enumerate() {
        let estimate = estimate_h_interval(alpha, t, step, n, &rep.child(i as u64))?;
        rows.push(ConvergenceRow {
            t,
            ratio: estimate.mean / t,
            estimate,
        });
    }
    Ok(ConvergenceTable { alpha, step, rows })
}
