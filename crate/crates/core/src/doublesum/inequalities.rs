use std::cell::Cell;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::doublesum::exceedance::{check_level, check_n};
use crate::error::{ensure, Error, Result};
use crate::gauss::CholeskyFactor;
use crate::mc::{Estimate, Replication};
use crate::quad::{integrate, Tolerance};
use crate::scalar::{lit, Real};

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    ensure(
        alpha.is_finite() && alpha > T::zero() && alpha <= lit(2.0),
        "alpha",
        || format!("{alpha} is outside (0, 2]"),
    )
}

/// `C = (2√2/√7)^{2/α}·16^{1/α}`.
pub fn joint_exceedance_scale<T: Real>(alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    let base = lit::<T>(2.0) * lit::<T>(2.0).sqrt() / lit::<T>(7.0).sqrt();
    Ok(base.powf(lit::<T>(2.0) / alpha) * lit::<T>(16.0).powf(alpha.recip()))
}

/// `4⌈CT⌉⌈C(t₀+T)⌉·exp(−(t₀−T)^α/8)·H([0,1]²)`, the constant bounding
/// `P(sup_{[0,u^{-2/α}T]} X > u, sup_{u^{-2/α}[t₀,t₀+T]} X > u) / Ψ(u)` for large `u`.
pub fn joint_exceedance_constant<T: Real>(alpha: T, t0: T, t: T, h_square: T) -> Result<T> {
    let c = joint_exceedance_scale(alpha)?;
    ensure(t.is_finite() && t > T::zero(), "T", || {
        format!("{t} must be finite and positive")
    })?;
    ensure(t0.is_finite() && t0 > t, "t0", || {
        format!("t0 = {t0} must exceed T = {t}")
    })?;
    ensure(
        h_square.is_finite() && h_square > T::zero(),
        "H_square",
        || format!("{h_square} must be finite and positive"),
    )?;
    let four = lit::<T>(4.0);
    Ok(four
        * (c * t).ceil()
        * (c * (t0 + t)).ceil()
        * (-(t0 - t).powf(alpha) / lit(8.0)).exp()
        * h_square)
}

/// `exp(−(w−m)²/(2σ²))` for `w ≥ m`.
pub fn borell_bound<T: Real>(m: T, sigma2: T, w: T) -> Result<T> {
    ensure(m.is_finite(), "m", || format!("{m} must be finite"))?;
    ensure(sigma2.is_finite() && sigma2 > T::zero(), "sigma2", || {
        format!("{sigma2} must be finite and positive")
    })?;
    ensure(w.is_finite() && w >= m, "w", || {
        format!("w = {w} is below m = {m}")
    })?;
    let d = w - m;
    Ok((-(d * d) / (lit::<T>(2.0) * sigma2)).exp())
}

/// `P(X₁ ≤ u, X₂ ≤ u)` for standard normals with correlation `rho`, by
/// nested adaptive quadrature of the density over `[−12, u]²`.
pub fn bivariate_normal_below(rho: f64, u: f64) -> Result<f64> {
    ensure(rho.is_finite() && rho.abs() < 1.0, "rho", || {
        format!("{rho} is outside (−1, 1)")
    })?;
    ensure(u.is_finite() && u > -12.0, "u", || {
        format!("{u} must be finite and above −12")
    })?;
    let det = 1.0 - rho * rho;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * det.sqrt());
    let tol = Tolerance::new(1e-14, 1e-11);
    let failure = Cell::new(None);
    let outer = |x: f64| {
        let inner = |y: f64| norm * (-(x * x - 2.0 * rho * x * y + y * y) / (2.0 * det)).exp();
        integrate(inner, -12.0, u, tol).unwrap_or_else(|e| {
            failure.set(Some(e.to_string()));
            f64::NAN
        })
    };
    let value = integrate(outer, -12.0, u, tol)?;
    match failure.take() {
        Some(msg) => Err(Error::Sampler(format!("inner quadrature: {msg}"))),
        None => Ok(value),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlepianReport {
    /// `P(max_i X_i < u)`.
    pub p_x: Estimate,
    /// `P(max_i Y_i < u)`.
    pub p_y: Estimate,
    /// `p_x.mean ≤ p_y.mean + 4·combined stderr`.
    pub consistent: bool,
}

fn check_slepian(cov_x: &DMatrix<f64>, cov_y: &DMatrix<f64>, means: &[f64]) -> Result<()> {
    let d = means.len();
    let shape = |name: &str, m: &DMatrix<f64>| {
        if m.nrows() == d && m.ncols() == d {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{name} is {}×{} but there are {d} means",
                m.nrows(),
                m.ncols()
            )))
        }
    };
    shape("cov_x", cov_x)?;
    shape("cov_y", cov_y)?;
    for i in 0..d {
        let (a, b) = (cov_x[(i, i)], cov_y[(i, i)]);
        if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
            return Err(Error::Precondition(format!(
                "diagonals differ at ({i},{i}): cov_x = {a}, cov_y = {b}"
            )));
        }
        for j in 0..d {
            let (a, b) = (cov_x[(i, j)], cov_y[(i, j)]);
            if a > b + 1e-12 * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::Precondition(format!(
                    "cov_x({i},{j}) = {a} exceeds cov_y({i},{j}) = {b}"
                )));
            }
        }
    }
    Ok(())
}

/// Monte Carlo check of `P(max X < u) ≤ P(max Y < u)` when `Cov X ≤ Cov Y`
/// entrywise with equal diagonals and equal means.
///
/// Both vectors are driven by the same normal draws.
pub fn slepian_check(
    cov_x: &DMatrix<f64>,
    cov_y: &DMatrix<f64>,
    means: &[f64],
    u: f64,
    n: usize,
    rep: &Replication,
) -> Result<SlepianReport> {
    ensure(!means.is_empty(), "means", || {
        "at least one coordinate is required".into()
    })?;
    ensure(means.iter().all(|m| m.is_finite()), "means", || {
        "means must be finite".into()
    })?;
    check_level(u)?;
    check_n(n)?;
    check_slepian(cov_x, cov_y, means)?;
    let fx = CholeskyFactor::new(cov_x).map_err(|e| Error::Precondition(format!("cov_x: {e}")))?;
    let fy = CholeskyFactor::new(cov_y).map_err(|e| Error::Precondition(format!("cov_y: {e}")))?;
    let d = means.len();
    let below = |v: &[f64]| v.iter().zip(means).all(|(x, m)| x + m < u);
    let counts = rep.map_chunks(n, |rng, count| {
        let (mut z, mut x, mut y) = (vec![0.0; d], vec![0.0; d], vec![0.0; d]);
        let mut hits = (0u64, 0u64);
        for _ in 0..count {
            let mut shared = rng.clone();
            fx.sample_into(rng, &mut z, &mut x);
            fy.sample_into(&mut shared, &mut z, &mut y);
            hits.0 += u64::from(below(&x));
            hits.1 += u64::from(below(&y));
        }
        Ok(hits)
    })?;
    let (hx, hy) = counts
        .iter()
        .fold((0, 0), |acc, c| (acc.0 + c.0, acc.1 + c.1));
    let p_x = Estimate::from_count(hx, n as u64, 0.0)?;
    let p_y = Estimate::from_count(hy, n as u64, 0.0)?;
    let consistent = p_x.mean <= p_y.mean + 4.0 * p_x.stderr.hypot(p_y.stderr);
    Ok(SlepianReport {
        p_x,
        p_y,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::std_normal_cdf;

    #[test]
    fn joint_exceedance_scale_values() {
        assert!((joint_exceedance_scale::<f64>(2.0).unwrap() - 4.27618).abs() < 5e-6);
        assert!((joint_exceedance_scale::<f64>(1.0).unwrap() - 128.0 / 7.0).abs() < 1e-12);
        assert!((joint_exceedance_scale::<f64>(1.0).unwrap() - 18.2857).abs() < 5e-5);
    }

    #[test]
    fn joint_exceedance_constant_offset_dependence() {
        // ⌈C(t₀+T)⌉ grows with t₀, so the value is not monotone for small offsets
        let a = joint_exceedance_constant::<f64>(1.0, 3.0, 1.0, 2.0).unwrap();
        let b = joint_exceedance_constant::<f64>(1.0, 5.0, 1.0, 2.0).unwrap();
        assert!(a > 0.0 && b > a);
        let far: Vec<f64> = [40.0, 60.0, 80.0]
            .iter()
            .map(|&t0| joint_exceedance_constant(1.0, t0, 1.0, 2.0).unwrap())
            .collect();
        assert!(far[1] < far[0] && far[2] < far[1]);
        let c = joint_exceedance_scale::<f64>(1.0).unwrap();
        let reduced: Vec<f64> = [3.0, 5.0, 9.0f64]
            .iter()
            .map(|&t0| {
                joint_exceedance_constant(1.0, t0, 1.0, 2.0).unwrap() / (c * (t0 + 1.0)).ceil()
            })
            .collect();
        assert!(reduced[1] < reduced[0] && reduced[2] < reduced[1]);
        let c1 = 128.0f64 / 7.0;
        let direct = 4.0 * c1.ceil() * (4.0 * c1).ceil() * (-0.25f64).exp() * 2.0;
        assert!((a - direct).abs() < 1e-9 * direct);
        assert!(joint_exceedance_constant::<f64>(1.0, 1.0, 1.0, 2.0).is_err());
        assert!(joint_exceedance_constant::<f64>(1.0, 3.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn borell_values() {
        assert_eq!(borell_bound::<f64>(1.0, 1.0, 1.0).unwrap(), 1.0);
        assert!((borell_bound::<f64>(1.0, 1.0, 3.0).unwrap() - (-2.0f64).exp()).abs() < 1e-15);
        assert!((borell_bound::<f64>(1.0, 1.0, 3.0).unwrap() - 0.135335).abs() < 5e-7);
        assert!(borell_bound::<f64>(1.0, 1.0, 0.5).is_err());
        assert!(borell_bound::<f64>(1.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn bivariate_quadrature_limits() {
        let u = 0.7;
        let phi = std_normal_cdf::<f64>(u).unwrap();
        assert!((bivariate_normal_below(0.0, u).unwrap() - phi * phi).abs() < 1e-10);
        // ρ = 1/2 orthant: 1/4 + asin(ρ)/(2π) = 1/3
        assert!((bivariate_normal_below(0.5, 0.0).unwrap() - 1.0 / 3.0).abs() < 1e-10);
        assert!(
            bivariate_normal_below(0.8, 1.0).unwrap() > bivariate_normal_below(0.2, 1.0).unwrap()
        );
        assert!(bivariate_normal_below(1.0, 1.0).is_err());
    }

    #[test]
    fn equal_covariances_agree() {
        let c = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 1.0]);
        let r =
            slepian_check(&c, &c, &[0.0, 0.0], 1.0, 10_000, &Replication::from_seed(1)).unwrap();
        assert!(r.consistent);
        assert_eq!(r.p_x.mean, r.p_y.mean);
    }

    #[test]
    fn precondition_diagnostics_name_entry() {
        let x = DMatrix::from_row_slice(2, 2, &[1.0, 0.9, 0.9, 1.0]);
        let y = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.2, 1.0]);
        let err =
            slepian_check(&x, &y, &[0.0, 0.0], 1.0, 10, &Replication::from_seed(1)).unwrap_err();
        assert!(err.to_string().contains("(0,1)"), "{err}");
        let z = DMatrix::from_row_slice(2, 2, &[2.0, 0.2, 0.2, 1.0]);
        let err =
            slepian_check(&z, &y, &[0.0, 0.0], 1.0, 10, &Replication::from_seed(1)).unwrap_err();
        assert!(err.to_string().contains("(0,0)"), "{err}");
        assert!(slepian_check(&y, &y, &[0.0], 1.0, 10, &Replication::from_seed(1)).is_err());
    }
}
