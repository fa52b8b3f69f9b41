//! Spinor components of solved states.
//!
//! The dominant component (G in the pseudospin limit, F in the spin limit)
//! has the closed form s^ν (1 − s)^{(1+μ)/2} P_n^{(2ν, μ)}(1 − 2s) with
//! s = e^{−2αr}; the other component follows from the first-order coupling
//! operator applied with analytic derivatives. Both are normalized jointly,
//! ∫ (F² + G²) dr = 1.

mod components;
pub mod jacobi;
pub mod quad;
mod verify;

pub use components::{
    components, dominant_closed_form, dominant_component, exponents, log_grid, lower_component,
    lower_component_with_branch, node_count, norm_integral, r_max, spin_limit_components,
    upper_component_from_lower, ClosedForm, CouplingOperator, Exponents, WavefunctionTable,
    DEFAULT_GRID_POINTS, DEFAULT_R_MIN, TAIL_CUTOFF,
};
pub use jacobi::{jacobi, jacobi_derivative, laguerre, JacobiSpec};
pub use verify::{verify_ode, MIN_INTERIOR_POINTS, S_MARGIN};
