//! Exact verification of eigenvalue-count bounds under low-rank
//! perturbations.
//!
//! All arithmetic is over the Gaussian rationals `ℚ(i)`; no floating point
//! enters any decision.

pub mod bounds;
pub mod eigenstructure;
pub mod error;
pub mod exactpoly;
pub mod fuzz;
pub mod matfile;
pub mod matrix;

pub use bounds::{bound_report, split_bounds, BoundReport, SplitReport};
pub use eigenstructure::{summarize, EigenstructureSummary, InvariantFactors};
pub use error::{Error, Result, Violation, ViolationKind};
pub use exactpoly::{GaussianRational, Poly};
pub use matrix::ExactMatrix;
