//! Krylov spread complexity and information-geometric (volume) complexity
//! for two-level quantum evolutions.
//!
//! The crate is organized bottom-up:
//!
//! - [`qstate`]: pure qubit states, Bloch vectors and spherical angles.
//! - [`hamiltonian`]: magnetic-field classes `H(t) = h0(t) I + h(t)·σ`.
//! - [`propagator`]: closed-form and time-ordered evolution, sampled trajectories.
//! - [`geometry`]: geodesic efficiency, curvature, metrics and SU(2) → SO(3).
//! - [`krylov`]: Lanczos/Krylov basis and spread complexity.
//! - [`igc`]: accessed/accessible Fubini–Study volumes and the complexity ratio.
//! - [`scenarios`]: the five reference evolutions and the verification table.
//! - [`cli`]: the command-line front end used by the `complexkit` binary.
//!
//! Units: ℏ = 1 throughout, so energies are angular frequencies.

// `!(x > 0.0)` is the idiom used to reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod geometry;
pub mod hamiltonian;
pub mod igc;
pub mod krylov;
pub mod linalg;
pub mod output;
pub mod propagator;
pub mod qstate;
pub mod quad;
pub mod scenarios;

pub use error::{Error, Result};
pub use hamiltonian::{FieldConfiguration, HermitianMatrix2, ScalarFn};
pub use linalg::{Matrix2, Vec3};
pub use num_complex::Complex64;
pub use propagator::{IntegratorOptions, Method, Trajectory};
pub use qstate::{BlochVector, PureQubitState, SphericalAngles};
