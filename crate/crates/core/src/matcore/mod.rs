//! Dense complex Hermitian linear algebra and the ρ-superoperators.
//!
//! Matrices are `nalgebra` dense matrices over `Complex64`. Superoperators act
//! on column-stacked vectorizations, `vec(AXB) = (Bᵀ ⊗ A) vec(X)`.

mod linalg;
mod superop;
mod types;

pub use linalg::{
    abs_antisymmetric, eig_hermitian, hermitian_inverse, hermitian_sqrt, hermitize, im_part,
    max_abs, min_real_cov, nuclear_norm, re_part, schur_complement, to_complex, trace,
    weighted_abs_trace, MinRealCov,
};
pub use superop::{
    apply_eigen_kernel, commutation_apply, commutation_superop, inner_beta, inner_sld,
    left_mult_superop, right_mult_superop, unvec, vec, Superoperator,
};
pub use types::{DensityMatrix, HermitianMatrix, WeightMatrix};

use nalgebra::DMatrix;
pub use num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;
/// Dense real matrix.
pub type RMatrix = DMatrix<f64>;

/// Relative Hermiticity drift accepted (and symmetrized away) on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest admissible eigenvalue of a density matrix.
pub const POSITIVITY_FLOOR: f64 = 1e-10;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Pauli matrix σ₁, σ₂ or σ₃ (`k` = 1, 2, 3); `k = 0` gives the identity.
pub fn pauli(k: usize) -> CMatrix {
    let o = c(0.0);
    let l = c(1.0);
    match k {
        0 => CMatrix::identity(2, 2),
        1 => CMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        2 => CMatrix::from_row_slice(2, 2, &[o, -I, I, o]),
        3 => CMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        _ => panic!("no Pauli matrix with index {k}"),
    }
}
