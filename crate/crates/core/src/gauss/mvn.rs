//! Pivoted Cholesky factorisation for positive semidefinite covariances.

use nalgebra::DMatrix;

use crate::error::{ensure, Error, Result};
use crate::rng::RngStream;

/// Pivots at or below this multiple of the trace are treated as zero; a
/// remaining diagonal below its negative is a PSD violation.
pub const PSD_RELATIVE_TOLERANCE: f64 = 1e-10;

/// Low-rank factor `P·L` with `P·L·Lᵀ·Pᵀ ≈ Σ`.
#[derive(Clone, Debug)]
pub struct CholeskyFactor {
    dim: usize,
    rank: usize,
    perm: Vec<usize>,
    // dim × rank, row-major, rows in pivot order
    factor: Vec<f64>,
}

impl CholeskyFactor {
    pub fn new(cov: &DMatrix<f64>) -> Result<Self> {
        let n = cov.nrows();
        ensure(n > 0 && cov.ncols() == n, "covariance", || {
            format!(
                "expected a non-empty square matrix, got {}×{}",
                cov.nrows(),
                cov.ncols()
            )
        })?;
        let scale = cov.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (cov[(i, j)], cov[(j, i)]);
                ensure(a.is_finite(), "covariance", || {
                    format!("entry ({i},{j}) is not finite")
                })?;
                ensure(
                    (a - b).abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE),
                    "covariance",
                    || format!("not symmetric at ({i},{j}): {a} vs {b}"),
                )?;
            }
        }
        let trace: f64 = (0..n).map(|i| cov[(i, i)]).sum();
        let tol = PSD_RELATIVE_TOLERANCE * trace.abs();

        let mut perm: Vec<usize> = (0..n).collect();
        let mut diag: Vec<f64> = (0..n).map(|i| cov[(i, i)]).collect();
        let mut l = vec![0.0; n * n];
        let mut rank = 0;
        for k in 0..n {
            let (p, &dmax) = (k..n)
                .map(|i| (i, &diag[perm[i]]))
                .max_by(|a, b| a.1.total_cmp(b.1))
                .expect("non-empty pivot range");
            if dmax <= tol {
                if let Some(i) = (k..n).find(|&i| diag[perm[i]] < -tol) {
                    return Err(Error::NotPsd(format!(
                        "residual pivot {} at index {} is below −{tol:e}",
                        diag[perm[i]], perm[i]
                    )));
                }
                break;
            }
            perm.swap(k, p);
            l.swap_with_slice_rows(k, p, n);
            let pivot = dmax.sqrt();
            l[k * n + k] = pivot;
            for i in (k + 1)..n {
                let mut s = cov[(perm[i], perm[k])];
                for j in 0..k {
                    s -= l[i * n + j] * l[k * n + j];
                }
                let v = s / pivot;
                l[i * n + k] = v;
                diag[perm[i]] -= v * v;
            }
            rank += 1;
        }
        let mut factor = vec![0.0; n * rank];
        for i in 0..n {
            factor[i * rank..(i + 1) * rank].copy_from_slice(&l[i * n..i * n + rank]);
        }
        Ok(Self {
            dim: n,
            rank,
            perm,
            factor,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Writes a centred sample into `out`, using `z` (length ≥ rank) as scratch.
    pub fn sample_into(&self, rng: &mut RngStream, z: &mut [f64], out: &mut [f64]) {
        let z = &mut z[..self.rank];
        rng.fill_normal(z);
        for (i, &target) in self.perm.iter().enumerate() {
            let row = &self.factor[i * self.rank..(i + 1) * self.rank];
            out[target] = row.iter().zip(z.iter()).map(|(a, b)| a * b).sum();
        }
    }

    /// Reconstructs `L·Lᵀ` in the original ordering.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let n = self.dim;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let ri = &self.factor[i * self.rank..(i + 1) * self.rank];
                let rj = &self.factor[j * self.rank..(j + 1) * self.rank];
                m[(self.perm[i], self.perm[j])] = ri.iter().zip(rj).map(|(a, b)| a * b).sum();
            }
        }
        m
    }
}

trait SwapRows {
    fn swap_with_slice_rows(&mut self, a: usize, b: usize, width: usize);
}

impl SwapRows for Vec<f64> {
    fn swap_with_slice_rows(&mut self, a: usize, b: usize, width: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.split_at_mut(hi * width);
        head[lo * width..(lo + 1) * width].swap_with_slice(&mut tail[..width]);
    }
}

/// One draw from `N(mean, covariance)`.
pub fn cholesky_sample(
    mean: &[f64],
    covariance: &DMatrix<f64>,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    ensure(mean.len() == covariance.nrows(), "mean", || {
        format!(
            "length {} does not match covariance dimension {}",
            mean.len(),
            covariance.nrows()
        )
    })?;
    let factor = CholeskyFactor::new(covariance)?;
    let mut z = vec![0.0; factor.rank()];
    let mut out = vec![0.0; mean.len()];
    factor.sample_into(rng, &mut z, &mut out);
    for (o, m) in out.iter_mut().zip(mean) {
        *o += m;
    }
    Ok(out)
}
