//! Numerical laboratory for Pickands' theorem on the supremum of stationary
//! Gaussian processes.
//!
//! The crate is organised in four layers:
//!
//! * [`gauss`]: scalar Gaussian analytics (upper tail `Ψ`, Mills bounds,
//!   `Γ`), the conditional decomposition of a Gaussian pair, and a pivoted
//!   Cholesky sampler.
//! * [`process`]: samplers for fractional Brownian motion, the Pickands drift
//!   process `χ(t) = B(t) − t^α`, its two-parameter field, and stationary
//!   processes with covariance `exp(−|t|^α)`.
//! * [`pickands`]: Monte Carlo estimators of `H(T)`, `H([0,T₁]×[0,T₂])` and the
//!   constant `H_α`, together with exact oracles and analytic bounds.
//! * [`doublesum`]: exceedance probabilities of suprema, Bonferroni bracketing
//!   over Pickands blocks, joint-exceedance constants and runtime checks of the
//!   Slepian and Borell inequalities.
//!
//! Closed-form functions are generic over the scalar type through [`Real`];
//! simulation runs in `f64`. Finite-space probability identities work over any
//! [`Probability`] type, including the exact rational [`ExactProb`].

pub mod cli;
pub mod doublesum;
pub mod error;
pub mod gauss;
pub mod mc;
pub mod pickands;
pub mod process;
pub mod quad;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use mc::{Estimate, EstimateFlags, Replication};
pub use rng::RngStream;
pub use scalar::{Probability, Real};

/// Exact rational probability used by the finite-space Bonferroni oracle.
pub type ExactProb = num_rational::Ratio<i64>;

/// Double-precision conditional decomposition of a Gaussian pair.
pub type Decomposition = gauss::ConditionalDecomposition<f64>;

/// Double-precision Pickands block partition.
pub type Partition = doublesum::IntervalPartition<f64>;

/// Exact finite probability space.
pub type ExactSpace = doublesum::FiniteSpace<ExactProb>;

/// Exact union report of a finite probability space.
pub type ExactUnion = doublesum::UnionReport<ExactProb>;
