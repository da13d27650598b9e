//! Worst- and best-case fidelity after swapping two links that each contain
//! a fraction `p` of `|Ψ00⟩` and have fidelity `F`.

mod curves;
mod perm;
mod problem;
mod sweep;

pub use curves::{
    delta_region, delta_region_with, f_max_sdp, f_max_sdp_with, f_min_sdp, f_min_sdp_with, fidelity_vs_delta,
    fidelity_vs_delta_with, relaxed_fidelity, CurveOptions, CurvePoint,
};
pub use perm::{
    build_permutation_algebra, permutation_matrix, Perm, PermCombination, PermutationOperator, A1, A2, B1, B2,
    REGISTER_NAMES,
};
pub use problem::{
    build_symmetrized_sdp, build_unsymmetrized_sdp, delta_of, delta_tilde, f_tilde, fidelity_of, pair_projector,
    symmetrized_family, trace_coefficients, unsymmetrized_family, Family, HermitianBasis, Sense, SymmetrizedProblem,
    Target, TraceCoefficients, FACE_TOL,
};
pub use sweep::{bound_row, bound_row_with, sweep_f, sweep_p, BoundSweepRow};

use crate::error::Result;

/// `1 − 2p(1 − F)`, attained by `ρ_opt(p, F)⊗²`.
pub fn f_max(p: f64, f: f64) -> Result<f64> {
    problem::check_pf(p, f)?;
    Ok(1.0 - 2.0 * p * (1.0 - f))
}

/// `p(2F − p)/(1 + (1 − p)²)`
pub fn f_min_analytic(p: f64, f: f64) -> Result<f64> {
    problem::check_pf(p, f)?;
    Ok(p * (2.0 * f - p) / (1.0 + (1.0 - p) * (1.0 - p)))
}
