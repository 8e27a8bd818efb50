//! Estimators and bounds for the Pickands functionals
//! `H(T) = E exp(sup_{[0,T]} χ)`, `H([0,T₁]×[0,T₂])` and `H_α = lim H(T)/T`.

mod bounds;
mod estimators;
mod oracles;
mod table;

pub use bounds::{ceiling_bound_1d, ceiling_bound_2d, pickands_lower_bound};
pub use estimators::{
    alpha2_sup, estimate_h_interval, estimate_h_rect, estimate_pickands_constant,
};
pub use oracles::{alpha1_sup_tail, h_exact_alpha2, h_quadrature_alpha1};
pub use table::{ConvergenceRow, ConvergenceTable};
