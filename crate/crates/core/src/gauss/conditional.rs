use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::scalar::{lit, Real};

/// Decomposition `X₂ = slope·X₁ + Z` of a Gaussian pair with `Z` independent
/// of `X₁`, `Z ~ N(residual_mean, residual_variance)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalDecomposition<T> {
    pub slope: T,
    pub residual_mean: T,
    pub residual_variance: T,
}

impl<T: Real> ConditionalDecomposition<T> {
    /// Mean of `X₂` given `X₁ = x1`.
    pub fn conditional_mean(&self, x1: T) -> T {
        self.slope * x1 + self.residual_mean
    }
}

/// Splits `(X₁, X₂)` with means `m1, m2`, variances `v1, v2` and covariance
/// `cov` into a regression on `X₁` plus an independent residual.
pub fn conditional_gaussian<T: Real>(
    m1: T,
    m2: T,
    v1: T,
    v2: T,
    cov: T,
) -> Result<ConditionalDecomposition<T>> {
    for (name, x) in [("m1", m1), ("m2", m2), ("v1", v1), ("v2", v2), ("cov", cov)] {
        ensure(x.is_finite(), name, || format!("{x} is not finite"))?;
    }
    ensure(v1 > T::zero(), "v1", || {
        format!("variance must be positive, got {v1}")
    })?;
    ensure(v2 > T::zero(), "v2", || {
        format!("variance must be positive, got {v2}")
    })?;
    // admit Cauchy–Schwarz equality up to rounding
    if cov * cov > v1 * v2 * (T::one() + lit::<T>(8.0) * T::epsilon()) {
        return Err(Error::domain(
            "cov",
            format!(
                "cov² = {} exceeds v1·v2 = {}; not a Gaussian vector",
                cov * cov,
                v1 * v2
            ),
        ));
    }
    let slope = cov / v1;
    Ok(ConditionalDecomposition {
        slope,
        residual_mean: m2 - slope * m1,
        residual_variance: (v2 - cov * cov / v1).max(T::zero()),
    })
}
