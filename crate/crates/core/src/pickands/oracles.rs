//! Closed forms of `H(T)` in the two cases where `χ` is explicit.

use crate::error::{ensure, Result};
use crate::gauss::{mills_ratio, std_normal_cdf, std_normal_tail};
use crate::quad::{integrate, Tolerance};
use crate::scalar::{lit, Real};

/// `H(T) = 1 + T/√π` for `α = 2`.
///
/// There `χ(t) = √2·tZ − t²`, whose supremum over `[0,T]` is `0` for `Z ≤ 0`,
/// `Z²/2` for `0 < Z ≤ √2T` and `√2TZ − T²` beyond; the three pieces of
/// `E exp(sup)` integrate to `1/2`, `T/√π` and `1/2`.
pub fn h_exact_alpha2<T: Real>(t: T) -> Result<T> {
    ensure(t.is_finite() && t >= T::zero(), "T", || {
        format!("{t} must be finite and non-negative")
    })?;
    Ok(T::one() + t / T::PI().sqrt())
}

/// `P(sup_{[0,T]} (√2 W(t) − t) ≥ x)` for `x ≥ 0` (reflection principle).
pub fn alpha1_sup_tail<T: Real>(t: T, x: T) -> Result<T> {
    ensure(t.is_finite() && t > T::zero(), "T", || {
        format!("{t} must be finite and positive")
    })?;
    let s = (lit::<T>(2.0) * t).sqrt();
    Ok(std_normal_tail((x + t) / s)? + (-x).exp() * std_normal_cdf((t - x) / s)?)
}

/// `H(T)` for `α = 1` by adaptive quadrature of
/// `1 + ∫₀^∞ eˣ·P(M_T ≥ x) dx`, where `M_T` is the supremum of Brownian
/// motion with variance `2t` and drift `−t`.
pub fn h_quadrature_alpha1<T: Real>(t: T) -> Result<T> {
    ensure(t.is_finite() && t > T::zero(), "T", || {
        format!("{t} must be finite and positive")
    })?;
    let two = lit::<T>(2.0);
    let s = (two * t).sqrt();
    let inv_sqrt_2pi = (two * T::PI()).sqrt().recip();
    let integrand = |x: T| -> T {
        // eˣΨ(z) = exp(x − z²/2)·R(z)/√(2π) keeps both factors in range
        let z = (x + t) / s;
        let first = (x - z * z / two).exp() * inv_sqrt_2pi * mills_ratio(z).unwrap_or(T::zero());
        let second = std_normal_tail((x - t) / s).unwrap_or(T::zero());
        first + second
    };
    let tol = Tolerance::new(1e-13, 1e-12);
    let upper = t + lit::<T>(40.0) * s;
    let head = integrate(integrand, T::zero(), t, tol)?;
    let tail = integrate(integrand, t, upper, tol)?;
    Ok(T::one() + head + tail)
}
