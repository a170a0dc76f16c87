//! Linear stability of traveling waves for equations of the form
//! `u_tt + 2ω u_tx + H u = 0`.
//!
//! The pipeline is: sample a wave profile on a periodic grid ([`profiles`]),
//! assemble the self-adjoint operator `H` ([`operators`]), check the spectral
//! assumptions ([`spectral`]), then compute the index `ω*(H)` and any unstable
//! eigenvalue of the quadratic pencil `λ² + 2ωλ∂ₓ + H` ([`pencil`]).
//! [`evolve`] and the companion eigensolve in [`pencil::companion`] serve as
//! independent oracles; [`verify`] holds closed forms and threshold scans.

pub mod cli;
pub mod error;
pub mod evolve;
pub mod grid;
pub mod linalg;
pub mod operators;
pub mod pencil;
pub mod problem;
pub mod profiles;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{diff_matrix, inner_product, make_grid, Grid};
pub use linalg::DenseMatrix;
pub use operators::OperatorH;
pub use pencil::{Pencil, StabilityVerdict};
pub use problem::{GridSpec, StabilityProblem};
pub use profiles::{Model, SolverOpts, WaveProfile};
pub use spectral::{SpectralReport, Spectrum, Tolerances};
