//! Gaussian path samplers on uniform grids.
//!
//! All samplers are built once per grid (FFT plans, embedding eigenvalues or
//! Cholesky factors are precomputed) and then fill caller-owned buffers from
//! an [`RngStream`](crate::RngStream) using a per-worker [`Workspace`].

mod covariance;
mod fbm;
mod field;
mod grid;
mod sequence;
mod stationary;

pub use covariance::CovarianceModel;
pub(crate) use fbm::check_alpha;
pub use fbm::{fbm_sample, pickands_process_sample, FbmSampler, PickandsSampler};
pub use field::{pickands_field_2d_sample, PickandsFieldSampler};
pub use grid::{Field2D, Grid, Path};
pub use sequence::{GaussianSequence, SequenceMethod, Workspace, EIGENVALUE_TOLERANCE};
pub use stationary::{stationary_sample, StationarySampler};
