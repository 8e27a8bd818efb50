use crate::error::{ensure, Result};
use crate::gauss::gamma_fn;
use crate::mc::Estimate;
use crate::scalar::{lit, Real};

/// Lower bound `H_α ≥ α / (2^{2+2/α} Γ(1/α))`.
pub fn pickands_lower_bound<T: Real>(alpha: T) -> Result<T> {
    ensure(
        alpha.is_finite() && alpha > T::zero() && alpha <= lit(2.0),
        "alpha",
        || format!("{alpha} is outside (0, 2]"),
    )?;
    let inv = alpha.recip();
    let power = lit::<T>(2.0).powf(lit::<T>(2.0) + lit::<T>(2.0) * inv);
    Ok(alpha / (power * gamma_fn(inv)?))
}

/// `H(T) ≤ ⌈T⌉·H([0,1])`, evaluated at the estimate of `H([0,1])`.
pub fn ceiling_bound_1d(t: f64, h_unit: &Estimate) -> Result<f64> {
    ensure(t.is_finite() && t > 0.0, "T", || {
        format!("{t} must be finite and positive")
    })?;
    Ok(t.ceil() * h_unit.mean)
}

/// `H([a,b]×[c,d]) ≤ ⌈b−a⌉·⌈d−c⌉·H([0,1]²)`.
pub fn ceiling_bound_2d(a: f64, b: f64, c: f64, d: f64, h_square: &Estimate) -> Result<f64> {
    ensure(a.is_finite() && b.is_finite() && b > a, "b", || {
        format!("[{a}, {b}] is not a proper interval")
    })?;
    ensure(c.is_finite() && d.is_finite() && d > c, "d", || {
        format!("[{c}, {d}] is not a proper interval")
    })?;
    Ok((b - a).ceil() * (d - c).ceil() * h_square.mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pickands::h_exact_alpha2;

    fn point(mean: f64) -> Estimate {
        Estimate {
            mean,
            stderr: 0.0,
            n_samples: 1,
            grid_step: 0.01,
            quantile_999: None,
            flags: Default::default(),
        }
    }

    #[test]
    fn lower_bound_values() {
        assert!((pickands_lower_bound::<f64>(1.0).unwrap() - 0.0625).abs() < 1e-15);
        let two = 2.0 / (8.0 * std::f64::consts::PI.sqrt());
        assert!((pickands_lower_bound::<f64>(2.0).unwrap() - two).abs() < 1e-15);
        assert!((pickands_lower_bound::<f64>(2.0).unwrap() - 0.1410474).abs() < 5e-8);
        assert!((pickands_lower_bound::<f64>(0.5).unwrap() - 0.0078125).abs() < 1e-15);
        assert!(pickands_lower_bound::<f64>(0.0).is_err());
        assert!(pickands_lower_bound::<f64>(2.5).is_err());
        assert!((pickands_lower_bound(1.0f32).unwrap() - 0.0625).abs() < 1e-6);
    }

    #[test]
    fn ceiling_1d() {
        assert_eq!(ceiling_bound_1d(1.0, &point(1.7)).unwrap(), 1.7);
        assert_eq!(ceiling_bound_1d(2.3, &point(1.5)).unwrap(), 4.5);
        let h1 = point(h_exact_alpha2::<f64>(1.0).unwrap());
        let h = h_exact_alpha2::<f64>(2.3).unwrap();
        assert!((h - 2.298).abs() < 1e-3);
        assert!(h <= ceiling_bound_1d(2.3, &h1).unwrap());
        assert!((ceiling_bound_1d(2.3, &h1).unwrap() - 4.693).abs() < 1e-3);
    }

    #[test]
    fn ceiling_2d() {
        assert_eq!(
            ceiling_bound_2d(0.0, 1.0, 0.0, 1.0, &point(2.2)).unwrap(),
            2.2
        );
        assert_eq!(
            ceiling_bound_2d(0.0, 1.5, 0.0, 2.5, &point(2.0)).unwrap(),
            12.0
        );
        let unit = h_exact_alpha2::<f64>(1.0).unwrap();
        let rect = h_exact_alpha2::<f64>(1.5).unwrap() * h_exact_alpha2::<f64>(2.5).unwrap();
        assert!((rect - 4.4504).abs() < 1e-4);
        let bound = ceiling_bound_2d(0.0, 1.5, 0.0, 2.5, &point(unit * unit)).unwrap();
        assert!((bound - 14.68).abs() < 5e-3);
        assert!(rect <= bound);
        assert!(ceiling_bound_2d(1.0, 1.0, 0.0, 1.0, &point(1.0)).is_err());
    }
}
