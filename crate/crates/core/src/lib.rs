//! Quantum multiparameter Cramér-Rao bounds.
//!
//! Fisher information matrices for the SLD, RLD and β-logarithmic
//! derivatives, the bounds they induce, and the Holevo bound computed over a
//! 𝒟-invariant extension of the SLD span.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod checks;
pub mod error;
pub mod estimator;
pub mod holevo;
pub mod logderiv;
pub mod matcore;
pub mod model;
pub mod random;
pub mod report;

pub use bounds::{MaxBeta, SuzukiBound, SuzukiBranch};
pub use error::{Error, Result};
pub use holevo::{DinvReport, HolevoSolution, RExtension};
pub use logderiv::{FisherKind, FisherMatrix};
pub use matcore::{CMatrix, DensityMatrix, HermitianMatrix, RMatrix, WeightMatrix};
pub use model::ModelPoint;
pub use report::{bound_report, BoundReport, ReportOptions};
