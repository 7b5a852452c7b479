//! Random states, models, weights and measurements for property tests and
//! the self-check suites.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::matcore::{
    hermitian_sqrt, hermitize, trace, CMatrix, Complex64, DensityMatrix, HermitianMatrix, RMatrix,
    WeightMatrix,
};
use crate::model::ModelPoint;

/// Weight of the maximally mixed state blended into [`random_density`].
pub const MIXING: f64 = 0.02;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex Ginibre matrix with standard normal entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(gaussian(rng), gaussian(rng))
    })
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianMatrix {
    HermitianMatrix::from_hermitized(ginibre(rng, dim, dim))
}

/// Traceless Hermitian matrix.
pub fn random_traceless<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianMatrix {
    let mut h = random_hermitian(rng, dim).into_inner();
    let shift = trace(&h) / dim as f64;
    for k in 0..dim {
        h[(k, k)] -= shift;
    }
    HermitianMatrix::from_hermitized(h)
}

/// Full-rank state `(1−p)·AA†/Tr AA† + p·I/dim` with Ginibre `A` and `p` = [`MIXING`].
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let a = ginibre(rng, dim, dim);
    let aa = &a * a.adjoint();
    let t = trace(&aa).re;
    let m = aa.map(|z| z * ((1.0 - MIXING) / t))
        + CMatrix::identity(dim, dim).map(|z| z * (MIXING / dim as f64));
    DensityMatrix::from_matrix(hermitize(&m)).expect("mixed Ginibre state is valid")
}

/// Random state with `d` random traceless tangents.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, dim: usize, d: usize) -> Result<ModelPoint> {
    let rho = random_density(rng, dim);
    let tangents = (0..d).map(|_| random_traceless(rng, dim)).collect();
    ModelPoint::new(rho, tangents, format!("random(dim={dim}, d={d})"))
}

/// Positive-definite weight `CCᵀ/d + 0.1·I`.
pub fn random_weight<R: Rng + ?Sized>(rng: &mut R, d: usize) -> WeightMatrix {
    let m = RMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let g = &m * m.transpose() / d as f64 + RMatrix::identity(d, d) * 0.1;
    WeightMatrix::new((&g + g.transpose()) * 0.5).expect("random weight is positive definite")
}

/// POVM `S^{-1/2}·Aₓ·S^{-1/2}` built from random positive `Aₓ` with `S = Σ Aₓ`.
pub fn random_povm<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    outcomes: usize,
) -> Vec<HermitianMatrix> {
    let parts: Vec<CMatrix> = (0..outcomes)
        .map(|_| {
            let b = ginibre(rng, dim, dim);
            &b * b.adjoint()
        })
        .collect();
    let total = parts
        .iter()
        .fold(CMatrix::zeros(dim, dim), |acc, p| acc + p);
    let root = hermitian_sqrt(&HermitianMatrix::from_hermitized(total)).expect("sum is positive");
    let inv_root = root.try_inverse().expect("sum is invertible");
    parts
        .iter()
        .map(|p| HermitianMatrix::from_hermitized(&inv_root * p * &inv_root))
        .collect()
}

/// Uniform value in `[lo, hi)`.
pub fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::max_abs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn povm_sums_to_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let povm = random_povm(&mut rng, 3, 4);
        let sum = povm
            .iter()
            .fold(CMatrix::zeros(3, 3), |acc, m| acc + m.as_matrix());
        assert!(max_abs(&(sum - CMatrix::identity(3, 3))) < 1e-12);
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for dim in 2..5 {
            let rho = random_density(&mut rng, dim);
            assert!(rho.min_eigenvalue() >= MIXING / dim as f64 - 1e-14);
            let t = random_traceless(&mut rng, dim);
            assert!(t.trace().abs() < 1e-13);
        }
    }
}
