use serde::Serialize;

use crate::error::{ensure, Result};
use crate::scalar::{lit, Real};

/// Blocks `Δ_k = [k·L, (k+1)·L]` with `L = u^{-2/α}·T`, `k = 0..=N_p`,
/// `N_p = ⌊p/L⌋`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntervalPartition<T> {
    pub p: T,
    pub u: T,
    pub alpha: T,
    #[serde(rename = "T")]
    pub t: T,
    pub block_length: T,
    pub n_p: usize,
}

impl<T: Real> IntervalPartition<T> {
    pub fn block(&self, k: usize) -> (T, T) {
        let k = T::from_usize(k).unwrap();
        (k * self.block_length, (k + T::one()) * self.block_length)
    }

    /// `Δ_0, …, Δ_{N_p}`.
    pub fn blocks(&self) -> impl Iterator<Item = (T, T)> + '_ {
        (0..=self.n_p).map(|k| self.block(k))
    }

    /// No complete block fits in `[0, p]`.
    pub fn is_degenerate(&self) -> bool {
        self.n_p == 0
    }
}

pub fn interval_partition<T: Real>(p: T, u: T, alpha: T, t: T) -> Result<IntervalPartition<T>> {
    ensure(p.is_finite() && p > T::zero(), "p", || {
        format!("{p} must be finite and positive")
    })?;
    ensure(u.is_finite() && u > T::zero(), "u", || {
        format!("{u} must be finite and positive")
    })?;
    ensure(
        alpha.is_finite() && alpha > T::zero() && alpha <= lit(2.0),
        "alpha",
        || format!("{alpha} is outside (0, 2]"),
    )?;
    ensure(t.is_finite() && t > T::zero(), "T", || {
        format!("{t} must be finite and positive")
    })?;
    let block_length = u.powf(-lit::<T>(2.0) / alpha) * t;
    // absorbs rounding when p is an exact multiple of the block length
    let ratio = p / block_length * (T::one() + lit(1e-12));
    let n_p = ratio
        .floor()
        .to_usize()
        .ok_or_else(|| crate::Error::domain("p", "too many blocks"))?;
    Ok(IntervalPartition {
        p,
        u,
        alpha,
        t,
        block_length,
        n_p,
    })
}
