//! Scalar Gaussian analytics and dense Gaussian sampling.

mod conditional;
mod gamma;
mod mvn;
mod tail;

pub use conditional::{conditional_gaussian, ConditionalDecomposition};
pub use gamma::gamma_fn;
pub use mvn::{cholesky_sample, CholeskyFactor, PSD_RELATIVE_TOLERANCE};
pub use tail::{
    mills_asymptotic, mills_ratio, psi_sandwich, std_normal_cdf, std_normal_density,
    std_normal_tail,
};
