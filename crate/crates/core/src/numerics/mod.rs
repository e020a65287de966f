//! Floating-point side of the toolkit: mass-action evaluation, class-constrained
//! Newton solves, nondegeneracy, multistart search and steady-state lifting.

mod lift;
mod mass_action;
mod newton;
mod search;
mod symbolic;

pub use lift::{continue_to_next_cycle, intermediate_cat_rate, lift_steady_state, Continuation, LiftResult};
pub use mass_action::{jacobian, rhs, scaled_residual, totals, MassAction};
pub use newton::{is_nondegenerate, rank_gap, ClassSolver, NewtonOutcome};
pub use search::{search_steady_states, totals_match as search_totals_match, SearchConfig, SteadyStateRecord};
pub use symbolic::{rhs_polynomials, symbolic_rhs_equal, Polynomial};

/// Normwise relative ℓ∞ distance, `‖a - b‖∞ / max(‖a‖∞, ‖b‖∞)`.
///
/// Componentwise ratios would separate copies of one state whose tiny
/// coordinates are only resolved to absolute accuracy.
pub fn relative_distance(a: &[f64], b: &[f64]) -> f64 {
    let norm = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = norm(a).max(norm(b));
    if scale == 0.0 {
        0.0
    } else {
        max_abs_diff(a, b) / scale
    }
}

/// Absolute ℓ∞ distance.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
