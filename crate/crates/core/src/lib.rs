//! Quantum optimal transport between density matrices: a Hermitian linear
//! algebra kernel, states and channels, transport costs, a primal-dual
//! semidefinite solver for the transport problem, closed-form qubit results
//! and a reproducible Monte Carlo harness for contraction experiments.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod cost;
pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod quantum;
pub mod qubit;
pub mod sdp;

pub use config::{Tolerances, TOL};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianMatrix, Subsystem};
