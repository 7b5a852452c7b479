//! The Holevo bound over a 𝒟-invariant extension of the SLD span.
//!
//! The bound is `min_f Tr G·Re Z(f) + Tr|√G·Im Z(f)·√G|` with
//! `Z(f) = R₁ + R₂†f + fᵀR₂ + fᵀR₃f` and `f` a real `(r−d)×d` matrix.
//! Two independent solvers are provided: a smoothed Newton method on `f`
//! ([`holevo_min_f`]) and a log-barrier method on the equivalent
//! semidefinite program ([`holevo_sdp`]).

mod dinv;
mod extension;
mod min_f;
mod observables;
mod sdp;

pub use dinv::{dinv_check, DinvReport, DINV_TOL};
pub use extension::{build_extension, rank_one_params, RExtension, RankOne, CLOSURE_TOL};
pub use min_f::{holevo_min_f, holevo_objective, z_of_f};
pub use observables::{observables_from_f, optimal_observables};
pub use sdp::holevo_sdp;

use crate::error::{Error, Result};
use crate::matcore::{CMatrix, HermitianMatrix, RMatrix, WeightMatrix};
use crate::model::ModelPoint;

/// Minimizer of the Holevo function.
#[derive(Debug, Clone)]
pub struct HolevoSolution {
    pub value: f64,
    /// Real `(r−d)×d` matrix.
    pub f_opt: RMatrix,
    pub z_opt: CMatrix,
    /// Real covariance attaining `Tr G·V = value` with `V ≥ Z(f_opt)`.
    pub v_opt: RMatrix,
    /// Locally unbiased observables `Bᵢ` with `Tr ∂ᵢρ·Bⱼ = δᵢⱼ`.
    pub observables: Vec<HermitianMatrix>,
    pub iterations: usize,
}

pub(crate) fn check_weight(g: &WeightMatrix, ext: &RExtension) -> Result<()> {
    if g.d() != ext.d() {
        return Err(Error::InvalidWeight(format!(
            "weight is {}x{} but the model has {} parameters",
            g.d(),
            g.d(),
            ext.d()
        )));
    }
    Ok(())
}

/// Builds the extension and minimizes over `f`.
pub fn holevo_bound(g: &WeightMatrix, m: &ModelPoint) -> Result<HolevoSolution> {
    crate::bounds::check_weight(g, m)?;
    holevo_min_f(g, &build_extension(m)?)
}
