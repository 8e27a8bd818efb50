//! Standard normal upper tail `Ψ(u) = 1 − Φ(u)` and the Mills ratio.
//!
//! For `|u| < 2` the tail is `1/2 − φ(u)·Σ u^{2k+1}/(2k+1)!!` (all terms of the
//! series share a sign, so it is accurate to a few ulps). For `u ≥ 2` the
//! Mills ratio `Ψ(u)/φ(u)` is evaluated from its Laplace continued fraction
//! `1/(u + 1/(u + 2/(u + 3/(u + …))))` with the modified Lentz algorithm; it
//! needs about a hundred terms at `u = 2` and a dozen at `u = 10`.

use crate::error::{ensure, Result};
use crate::scalar::{lit, Real};

const SERIES_LIMIT: f64 = 2.0;
const MAX_CF_TERMS: usize = 10_000;

pub fn std_normal_density<T: Real>(u: T) -> T {
    (-(u * u) * lit(0.5)).exp() / (lit::<T>(2.0) * T::PI()).sqrt()
}

/// `Σ u^{2k+1} / (2k+1)!!`, so that `Φ(u) − 1/2 = φ(u)·series(u)`.
fn odd_series<T: Real>(u: T) -> T {
    let u2 = u * u;
    let mut term = u;
    let mut sum = u;
    let mut k = 0u32;
    loop {
        term = term * u2 / lit(f64::from(2 * k + 3));
        sum = sum + term;
        k += 1;
        if term.abs() <= T::epsilon() * sum.abs() * lit(0.25) || k > 500 {
            return sum;
        }
    }
}

/// Mills ratio `Ψ(u)/φ(u)` from the continued fraction; requires `u > 0`.
fn mills_cf<T: Real>(u: T) -> T {
    let tiny = T::min_positive_value() * lit(1e10);
    let mut f = u;
    let mut c = f;
    let mut d = T::zero();
    for j in 1..=MAX_CF_TERMS {
        let a = lit::<T>(j as f64);
        d = u + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        d = d.recip();
        c = u + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        let delta = c * d;
        f = f * delta;
        if (delta - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    f.recip()
}

fn tail_unchecked<T: Real>(u: T) -> T {
    let limit = lit::<T>(SERIES_LIMIT);
    if u.abs() < limit {
        lit::<T>(0.5) - std_normal_density(u) * odd_series(u)
    } else if u > T::zero() {
        std_normal_density(u) * mills_cf(u)
    } else {
        T::one() - std_normal_density(u) * mills_cf(-u)
    }
}

fn ensure_finite<T: Real>(u: T) -> Result<()> {
    ensure(u.is_finite(), "u", || format!("{u} is not finite"))
}

fn ensure_positive<T: Real>(u: T) -> Result<()> {
    ensure(u.is_finite() && u > T::zero(), "u", || {
        format!("{u} must be a finite positive number")
    })
}

/// Upper tail `Ψ(u) = P(N(0,1) > u)`.
pub fn std_normal_tail<T: Real>(u: T) -> Result<T> {
    ensure_finite(u)?;
    Ok(tail_unchecked(u))
}

/// Distribution function `Φ(u)`.
pub fn std_normal_cdf<T: Real>(u: T) -> Result<T> {
    ensure_finite(u)?;
    Ok(tail_unchecked(-u))
}

/// Mills ratio `Ψ(u)/φ(u)`, computed without forming `Ψ(u)` for `u ≥ 2` so it
/// stays finite where `φ(u)` underflows.
pub fn mills_ratio<T: Real>(u: T) -> Result<T> {
    ensure_finite(u)?;
    if u >= lit(SERIES_LIMIT) {
        Ok(mills_cf(u))
    } else {
        Ok(tail_unchecked(u) / std_normal_density(u))
    }
}

/// Elementary bounds `((1/u − 1/u³)φ(u), φ(u)/u)` on `Ψ(u)` for `u > 0`.
///
/// The lower endpoint is non-positive for `u ≤ 1`.
pub fn psi_sandwich<T: Real>(u: T) -> Result<(T, T)> {
    ensure_positive(u)?;
    let phi = std_normal_density(u);
    let lower = (u.recip() - (u * u * u).recip()) * phi;
    Ok((lower, phi / u))
}

/// Leading-order tail `φ(u)/u`.
pub fn mills_asymptotic<T: Real>(u: T) -> Result<T> {
    ensure_positive(u)?;
    Ok(std_normal_density(u) / u)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values of Ψ(u) from mpmath.ncdf(-u) at 40-digit precision.
    #[allow(clippy::excessive_precision)]
    const REFERENCE: [(f64, f64); 10] = [
        (0.1, 0.4601721627229710163310661),
        (0.5, 0.3085375387259868963622954),
        (1.0, 0.1586552539314570514147675),
        (1.9, 0.02871655981600180522919203),
        (2.0, 0.02275013194817920720028264),
        (3.0, 0.001349898031630094526651815),
        (4.5, 0.000003397673124730060401687449),
        (6.0, 9.865876450376981407008641e-10),
        (10.0, 7.619853024160526065973343e-24),
        (30.0, 4.906713927148187059533809e-198),
    ];

    #[test]
    fn matches_reference_to_twelve_digits() {
        for (u, want) in REFERENCE {
            let got = std_normal_tail::<f64>(u).unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "Ψ({u}) = {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn examples() {
        assert_eq!(std_normal_tail::<f64>(0.0).unwrap(), 0.5);
        let psi3 = std_normal_tail::<f64>(3.0).unwrap();
        assert!((psi3 - 0.001349898).abs() < 5e-10);
        assert!(psi3 > 0.0013131 && psi3 < 0.0014773);
    }

    #[test]
    fn sandwich_examples() {
        let (lo, _) = psi_sandwich::<f64>(1.0).unwrap();
        assert_eq!(lo, 0.0);
        let (lo, hi) = psi_sandwich::<f64>(3.0).unwrap();
        assert!((lo - 0.0013131).abs() < 5e-8);
        assert!((hi - 0.0014773).abs() < 5e-8);
        let (lo, hi) = psi_sandwich::<f64>(10.0).unwrap();
        assert!((hi - lo) / hi < 0.011);
    }

    #[test]
    fn mills_examples() {
        assert!((mills_asymptotic::<f64>(1.0).unwrap() - 0.2419707).abs() < 5e-8);
        assert!((mills_asymptotic::<f64>(3.0).unwrap() - 0.0014773).abs() < 5e-8);
        let ratio = std_normal_tail::<f64>(8.0).unwrap() / mills_asymptotic::<f64>(8.0).unwrap();
        assert!((ratio - 1.0).abs() < 0.02);
        // Ψ(u)/φ(u) stays finite past the underflow of φ
        let r = mills_ratio::<f64>(60.0f64).unwrap();
        assert!((r * 60.0 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(std_normal_tail::<f64>(f64::NAN).is_err());
        assert!(std_normal_tail::<f64>(f64::INFINITY).is_err());
        assert!(psi_sandwich::<f64>(0.0).is_err());
        assert!(psi_sandwich::<f64>(-1.0).is_err());
        assert!(mills_asymptotic::<f64>(0.0).is_err());
    }

    #[test]
    fn sandwich_holds_on_log_grid() {
        let n = 400;
        for i in 0..=n {
            let u = (0.1f64.ln() + (37f64.ln() - 0.1f64.ln()) * i as f64 / n as f64).exp();
            let psi = std_normal_tail::<f64>(u).unwrap();
            let (lo, hi) = psi_sandwich::<f64>(u).unwrap();
            assert!(psi < hi, "upper fails at {u}");
            if lo > 0.0 {
                assert!(lo < psi, "lower fails at {u}");
            }
        }
    }

    #[test]
    fn symmetry() {
        for i in -800..=800 {
            let u = i as f64 * 0.01;
            let s = std_normal_tail::<f64>(u).unwrap() + std_normal_tail::<f64>(-u).unwrap();
            assert!((s - 1.0).abs() < 1e-12, "u = {u}");
        }
    }

    #[test]
    fn branches_agree_at_the_switch() {
        let below =
            0.5 - std_normal_density::<f64>(1.999_999_999f64) * odd_series(1.999_999_999f64);
        let above = std_normal_density::<f64>(2.0f64) * mills_cf(2.0f64);
        assert!(((below - above) / above).abs() < 1e-8);
    }

    #[test]
    fn single_precision() {
        let got = std_normal_tail(3.0f32).unwrap();
        assert!(((got - 0.001349898) / 0.001349898).abs() < 1e-5);
    }
}
