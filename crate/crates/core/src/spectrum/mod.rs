//! Energy spectra in the pseudospin and spin limits.
//!
//! Roots of the quantization condition are isolated on a uniform energy
//! grid, refined by bisection, and confirmed against the roots of the
//! radical-free eliminant polynomial.

mod equation;
mod oracle;
mod solve;
mod splitting;

pub use equation::EnergyEquation;
pub use oracle::{eliminant, polynomial_oracle, OracleReport};
pub use solve::{
    bisection_roots, search_window, solve_batch, solve_spectrum, EnergyRoot, RootMethod,
    Selection, SelectionKind, SignClass, SolveOptions, SpectrumResult,
};
pub use splitting::{splitting_report, Doublet, Motion, RootChoice, SplitRow};

/// Default window margin ε, relative to M.
pub const DEFAULT_WINDOW_MARGIN: f64 = 1e-9;
