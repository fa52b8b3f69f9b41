//! Bound states of the Dirac equation for the attractive radial potential
//! with a Coulomb-like tensor coupling, in the pseudospin and spin symmetry
//! limits, solved with the parametric Nikiforov–Uvarov method.
//!
//! * [`model`]: parameters, quantum numbers, potential and tensor functions.
//! * [`nu`]: the generic parametric NU engine.
//! * [`spectrum`]: energy conditions, root isolation and the eliminant oracle.
//! * [`wavefn`]: Jacobi polynomials, spinor components, normalization and
//!   the ODE residual check.
//! * [`analysis`]: centrifugal approximation error, potential profiles and
//!   tensor-strength sweeps.
//! * [`golden`]: published reference spectra used by tests and the CLI.

pub mod analysis;
pub mod error;
pub mod exec;
pub mod golden;
pub mod model;
pub mod nu;
pub mod poly;
pub mod spectrum;
pub mod wavefn;

pub use error::{Error, Result};
pub use exec::Execution;
pub use model::{ModelParams, PotentialCoeffs, StateIndex, Symmetry};
