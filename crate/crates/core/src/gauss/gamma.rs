//! Gamma function via the Lanczos approximation (g = 7, nine coefficients).

use crate::error::{ensure, Result};
use crate::scalar::{lit, Real};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos<T: Real>(x: T) -> T {
    // Γ(x) for x ≥ 1/2
    let x = x - T::one();
    let mut acc = lit::<T>(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + lit::<T>(c) / (x + lit(i as f64));
    }
    let t = x + lit(LANCZOS_G + 0.5);
    (lit::<T>(2.0) * T::PI()).sqrt() * t.powf(x + lit(0.5)) * (-t).exp() * acc
}

/// `Γ(x)` for `x > 0`; uses the reflection formula below one half.
///
/// Integers up to 20 return the exact factorial.
pub fn gamma_fn<T: Real>(x: T) -> Result<T> {
    ensure(x.is_finite() && x > T::zero(), "x", || {
        format!("Γ is evaluated only for finite x > 0, got {x}")
    })?;
    if x == x.round() && x <= lit(20.0) {
        let k = x.to_usize().unwrap_or(1);
        return Ok((1..k).fold(T::one(), |acc, i| acc * lit(i as f64)));
    }
    if x < lit(0.5) {
        Ok(T::PI() / ((T::PI() * x).sin() * lanczos(T::one() - x)))
    } else {
        Ok(lanczos(x))
    }
}
