use serde::Serialize;

use super::extension::{invariance_residual, orthonormalize};
use crate::error::Result;
use crate::logderiv::{fisher_beta, fisher_sld, sld_operators};
use crate::matcore::{c, im_part, max_abs, re_part, to_complex, trace, CMatrix, I};
use crate::model::ModelPoint;

/// Residuals below this count as 𝒟-invariant.
pub const DINV_TOL: f64 = 1e-8;

const BETAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

/// Diagnostics for 𝒟-invariance of a model.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DinvReport {
    /// `max ‖(I − P)𝒟(qᵢ)‖` over an orthonormal basis of the tangent span.
    pub tangent_residual: f64,
    /// The same for the SLD span.
    pub sld_residual: f64,
    /// Largest entry of `J^(β)⁻¹ − J^(S)⁻¹(Re Z + iβ Im Z)J^(S)⁻¹` over a few `β`,
    /// with `Z_{ij} = Tr ρ·Lⱼ·Lᵢ`.
    pub fisher_identity_error: f64,
    pub invariant: bool,
}

pub fn dinv_check(m: &ModelPoint) -> Result<DinvReport> {
    let rho = m.rho();
    let tangent_residual = invariance_residual(&orthonormalize(m.tangents(), rho)?, rho)?;
    let slds = sld_operators(m);
    let sld_residual = invariance_residual(&orthonormalize(&slds, rho)?, rho)?;

    let s_inv = to_complex(&re_part(&fisher_sld(m).inverse()?));
    let d = m.d();
    let p = rho.as_matrix();
    let z = CMatrix::from_fn(d, d, |i, j| {
        trace(&(p * slds[j].as_matrix() * slds[i].as_matrix()))
    });
    let mut fisher_identity_error: f64 = 0.0;
    for &beta in &BETAS {
        let mixed = to_complex(&re_part(&z)) + to_complex(&im_part(&z)) * (I * c(beta));
        let predicted = &s_inv * mixed * &s_inv;
        let actual = fisher_beta(m, beta)?.inverse()?;
        fisher_identity_error = fisher_identity_error.max(max_abs(&(actual - predicted)));
    }
    Ok(DinvReport {
        tangent_residual,
        sld_residual,
        fisher_identity_error,
        invariant: sld_residual < DINV_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::HermitianMatrix;
    use crate::model::example_dim2;

    #[test]
    fn qubit_example_is_not_invariant() {
        let m = example_dim2(0.95, 0.3).unwrap();
        let rep = dinv_check(&m).unwrap();
        assert!(rep.sld_residual > 1e-4);
        assert!(rep.tangent_residual > 1e-4);
        assert!(rep.fisher_identity_error > 1e-4);
        assert!(!rep.invariant);
    }

    #[test]
    fn extended_qubit_is_invariant() {
        let m = example_dim2(0.95, 0.3).unwrap();
        let extra =
            HermitianMatrix::new(m.rho().as_matrix() - CMatrix::identity(2, 2) * c(0.5)).unwrap();
        let rep = dinv_check(&m.with_tangent(extra).unwrap()).unwrap();
        assert!(rep.sld_residual < 1e-10);
        assert!(rep.tangent_residual < 1e-10);
        assert!(rep.fisher_identity_error < 1e-9);
        assert!(rep.invariant);
    }

    #[test]
    fn classical_model_is_invariant() {
        let m = ModelPoint::classical(&[0.2, 0.8], &[vec![1.0, -1.0]], "bern").unwrap();
        let rep = dinv_check(&m).unwrap();
        assert_eq!(rep.sld_residual, 0.0);
        assert!(rep.invariant);
    }
}
