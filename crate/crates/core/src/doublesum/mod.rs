//! Exceedance probabilities of suprema and the bounds that bracket them.

mod bonferroni;
mod bracketing;
mod exceedance;
mod inequalities;
mod partition;

pub use bonferroni::{
    bonferroni_lower, brute_force_union, FiniteSpace, UnionReport, UpperTriangular,
};
pub use bracketing::{exceedance_bracketing, BoundsFlags, BoundsReport, PathwiseCounts};
pub use exceedance::{
    default_step, mc_joint_exceedance, mc_sup_exceedance, pickands_approximation, JointReport,
    SupEnsemble,
};
pub use inequalities::{
    bivariate_normal_below, borell_bound, joint_exceedance_constant, joint_exceedance_scale,
    slepian_check, SlepianReport,
};
pub use partition::{interval_partition, IntervalPartition};
