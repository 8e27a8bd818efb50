use serde::Serialize;

use crate::doublesum::exceedance::{
    check_level, check_n, grid_max, is_coarse, pickands_approximation,
};
use crate::doublesum::partition::interval_partition;
use crate::error::{ensure, Result};
use crate::mc::{Estimate, Replication};
use crate::process::{CovarianceModel, Grid, StationarySampler};

/// Integer counts on the shared ensemble.
///
/// `lower ≤ full ≤ upper` holds for every seed, not only on average.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathwiseCounts {
    /// Paths whose grid supremum over `[0, p]` exceeds `u`.
    pub full: u64,
    /// Exceedances of each block `Δ_0..=Δ_{N_p}`.
    pub blocks: Vec<u64>,
    /// Joint exceedances of `Δ_i, Δ_{i+k}` for `i + k < N_p`, summed by lag `k ≥ 1` (index `k − 1`).
    pub pairs_by_lag: Vec<u64>,
    /// `Σ_{k<N_p} blocks[k] − Σ pairs_by_lag`; may be negative.
    pub lower: i64,
    /// `Σ_{k≤N_p} blocks[k]`.
    pub upper: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundsFlags {
    pub low_hit_count: bool,
    pub coarse_step: bool,
    /// `N_p < 2`: the double sum has no terms.
    pub empty_double_sum: bool,
}

impl BoundsFlags {
    pub fn any(&self) -> bool {
        self.low_hit_count || self.coarse_step || self.empty_double_sum
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub p: f64,
    pub u: f64,
    pub alpha: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub step: f64,
    pub n: u64,
    pub seed: u64,
    pub n_p: usize,
    pub block_length: f64,
    /// Full-horizon exceedance.
    pub mc: Estimate,
    /// Single-block exceedance pooled over all `N_p + 1` blocks.
    pub single: Estimate,
    /// Average joint exceedance of two blocks at lag `k` (index `k − 1`).
    pub joint_by_lag: Vec<f64>,
    pub bonferroni_lower: f64,
    pub union_upper: f64,
    pub pickands_value: f64,
    pub counts: PathwiseCounts,
    pub flags: BoundsFlags,
}

/// Brackets `P(sup_{[0,p]} X > u)` between the Bonferroni bound over
/// `Δ_0..Δ_{N_p−1}` and the union bound over `Δ_0..Δ_{N_p}`.
///
/// One path ensemble on a grid aligned to the blocks feeds every count.
/// `step` defaults to `u^{-2/α}/20` and is shrunk so that each block holds a
/// whole number of grid intervals. `h` is the constant used for the
/// asymptotic value `H·p·u^{2/α}·Ψ(u)`.
#[allow(clippy::too_many_arguments)]
pub fn exceedance_bracketing(
    model: &CovarianceModel,
    p: f64,
    u: f64,
    t: f64,
    step: Option<f64>,
    n: usize,
    h: f64,
    rep: &Replication,
) -> Result<BoundsReport> {
    model.validate()?;
    let alpha = model.alpha();
    check_level(u)?;
    check_n(n)?;
    let partition = interval_partition(p, u, alpha, t)?;
    let np = partition.n_p;
    ensure(np >= 1, "p", || {
        format!(
            "no complete block of length {} fits in [0, {p}]",
            partition.block_length
        )
    })?;
    let pickands_value = pickands_approximation(alpha, p, u, h)?;

    let scale = u.powf(-2.0 / alpha);
    let requested = step.unwrap_or(scale / 20.0);
    ensure(requested.is_finite() && requested > 0.0, "step", || {
        format!("{requested} must be finite and positive")
    })?;
    let per_block = ((partition.block_length / requested) * (1.0 - 1e-12))
        .ceil()
        .max(1.0) as usize;
    let h_step = partition.block_length / per_block as f64;
    let grid = Grid::new(0.0, h_step, (np + 1) * per_block + 1)?;
    let full_end = grid.indices_within(0.0, p).end;
    let sampler = StationarySampler::new(*model, grid)?;

    let lags = np.saturating_sub(1);
    let chunks = rep.map_chunks(n, |rng, count| {
        let mut ws = sampler.workspace();
        let mut path = vec![0.0; grid.count()];
        let mut exceed = vec![false; np + 1];
        let mut full = 0u64;
        let mut blocks = vec![0u64; np + 1];
        let mut pairs = vec![0u64; lags];
        for _ in 0..count {
            sampler.fill(rng, &mut ws, &mut path);
            full += u64::from(grid_max(&path[..full_end]) > u);
            for (k, e) in exceed.iter_mut().enumerate() {
                *e = grid_max(&path[k * per_block..=(k + 1) * per_block]) > u;
                blocks[k] += u64::from(*e);
            }
            for i in 0..np {
                if exceed[i] {
                    for j in i + 1..np {
                        pairs[j - i - 1] += u64::from(exceed[j]);
                    }
                }
            }
        }
        Ok((full, blocks, pairs))
    })?;

    let mut counts = PathwiseCounts {
        full: 0,
        blocks: vec![0; np + 1],
        pairs_by_lag: vec![0; lags],
        lower: 0,
        upper: 0,
    };
    for (full, blocks, pairs) in chunks {
        counts.full += full;
        counts
            .blocks
            .iter_mut()
            .zip(&blocks)
            .for_each(|(a, b)| *a += b);
        counts
            .pairs_by_lag
            .iter_mut()
            .zip(&pairs)
            .for_each(|(a, b)| *a += b);
    }
    counts.upper = counts.blocks.iter().sum();
    counts.lower = counts.blocks[..np].iter().sum::<u64>() as i64
        - counts.pairs_by_lag.iter().sum::<u64>() as i64;

    let nf = n as f64;
    let coarse = is_coarse(alpha, u, h_step);
    let mut mc = Estimate::from_count(counts.full, n as u64, h_step)?;
    mc.flags.coarse_step = coarse;
    let pooled = (np + 1) as u64;
    let mut single = Estimate::from_count(counts.upper, n as u64 * pooled, h_step)?;
    single.flags.low_hit_count = counts.blocks[0] < crate::mc::MIN_RELIABLE_HITS;
    single.flags.coarse_step = coarse;
    let joint_by_lag = counts
        .pairs_by_lag
        .iter()
        .enumerate()
        .map(|(k, &c)| c as f64 / ((np - k - 1) as f64 * nf))
        .collect();

    Ok(BoundsReport {
        p,
        u,
        alpha,
        t,
        step: h_step,
        n: n as u64,
        seed: rep.root().seed(),
        n_p: np,
        block_length: partition.block_length,
        bonferroni_lower: counts.lower as f64 / nf,
        union_upper: counts.upper as f64 / nf,
        flags: BoundsFlags {
            low_hit_count: mc.flags.low_hit_count,
            coarse_step: coarse,
            empty_double_sum: np < 2,
        },
        mc,
        single,
        joint_by_lag,
        pickands_value,
        counts,
    })
}
