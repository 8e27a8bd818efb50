use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};

/// Stationary covariance `r(t)` with `1 − r(t) = |t|^α + o(|t|^α)` at zero and
/// `r(t) < 1` for `t > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CovarianceModel {
    /// `r(t) = exp(−|t|^α)`; `α = 1` is the Ornstein–Uhlenbeck process.
    ExpAlpha { alpha: f64 },
}

impl CovarianceModel {
    pub fn exp_alpha(alpha: f64) -> Result<Self> {
        ensure(
            alpha.is_finite() && alpha > 0.0 && alpha <= 2.0,
            "alpha",
            || format!("{alpha} is outside (0, 2]"),
        )?;
        Ok(CovarianceModel::ExpAlpha { alpha })
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            CovarianceModel::ExpAlpha { alpha } => alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        CovarianceModel::exp_alpha(self.alpha()).map(|_| ())
    }

    #[inline]
    pub fn r(&self, t: f64) -> f64 {
        match *self {
            CovarianceModel::ExpAlpha { alpha } => (-t.abs().powf(alpha)).exp(),
        }
    }
}
