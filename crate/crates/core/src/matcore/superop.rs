use super::{c, trace, CMatrix, DensityMatrix, HermitianMatrix, I};
use crate::error::{Error, Result};
use nalgebra::DVector;
use num_complex::Complex64;

/// Column-stacking vectorization.
pub fn vec(x: &CMatrix) -> DVector<Complex64> {
    DVector::from_column_slice(x.as_slice())
}

/// Inverse of [`vec`] for a `dim×dim` matrix.
pub fn unvec(v: &DVector<Complex64>, dim: usize) -> CMatrix {
    CMatrix::from_column_slice(dim, dim, v.as_slice())
}

/// A linear map on `dim×dim` matrices stored as a `dim²×dim²` matrix acting on
/// column-stacked vectors.
#[derive(Debug, Clone)]
pub struct Superoperator {
    dim: usize,
    matrix: CMatrix,
}

impl Superoperator {
    pub fn new(dim: usize, matrix: CMatrix) -> Result<Self> {
        let n = dim * dim;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::InvalidInput(format!(
                "superoperator on {dim}x{dim} matrices must be {n}x{n}"
            )));
        }
        Ok(Self { dim, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: CMatrix::identity(dim * dim, dim * dim),
        }
    }

    /// Map that is diagonal in the ρ-eigenbasis: `(U†XU)_{jk} ↦ kernel(λ_j, λ_k)·(U†XU)_{jk}`.
    pub fn from_eigen_kernel<F>(rho: &DensityMatrix, kernel: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64,
    {
        let dim = rho.dim();
        let u = rho.eigenvectors();
        let lam = rho.eigenvalues();
        let diag = DVector::from_fn(dim * dim, |idx, _| kernel(lam[idx % dim], lam[idx / dim]));
        // vec(U Y U†) = (Ū ⊗ U) vec(Y), vec(U† X U) = (Uᵀ ⊗ U†) vec(X)
        let to_original = u.map(|z| z.conj()).kronecker(u);
        let to_eigen = u.transpose().kronecker(&u.adjoint());
        let matrix = to_original * CMatrix::from_diagonal(&diag) * to_eigen;
        Self { dim, matrix }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        unvec(&(&self.matrix * vec(x)), self.dim)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Superoperator) -> Superoperator {
        Superoperator {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &Superoperator, b: Complex64) -> Superoperator {
        Superoperator {
            dim: self.dim,
            matrix: self.matrix.map(|z| z * a) + other.matrix.map(|z| z * b),
        }
    }

    pub fn inverse(&self) -> Result<Superoperator> {
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NumericalFailure("superoperator is singular".into()))?;
        Ok(Superoperator {
            dim: self.dim,
            matrix: inv,
        })
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.matrix.clone().singular_values().max()
    }
}

/// `X ↦ ρX`.
pub fn left_mult_superop(rho: &DensityMatrix) -> Superoperator {
    let dim = rho.dim();
    Superoperator {
        dim,
        matrix: CMatrix::identity(dim, dim).kronecker(rho.as_matrix()),
    }
}

/// `X ↦ Xρ`.
pub fn right_mult_superop(rho: &DensityMatrix) -> Superoperator {
    let dim = rho.dim();
    Superoperator {
        dim,
        matrix: rho
            .as_matrix()
            .transpose()
            .kronecker(&CMatrix::identity(dim, dim)),
    }
}

/// `U·(K ∘ U†XU)·U†` with `K_{jk} = kernel(λ_j, λ_k)` in the ρ-eigenbasis.
pub fn apply_eigen_kernel<F>(rho: &DensityMatrix, x: &CMatrix, kernel: F) -> CMatrix
where
    F: Fn(f64, f64) -> Complex64,
{
    let u = rho.eigenvectors();
    let lam = rho.eigenvalues();
    let mut y = u.adjoint() * x * u;
    for k in 0..y.ncols() {
        for j in 0..y.nrows() {
            y[(j, k)] *= kernel(lam[j], lam[k]);
        }
    }
    u * y * u.adjoint()
}

fn commutation_kernel(lj: f64, lk: f64) -> Complex64 {
    I * ((lk - lj) / (lj + lk))
}

fn check_floor(rho: &DensityMatrix) -> Result<()> {
    if rho.min_eigenvalue() < super::POSITIVITY_FLOOR {
        return Err(Error::SingularState {
            min_eigenvalue: rho.min_eigenvalue(),
        });
    }
    Ok(())
}

/// The commutation operator 𝒟, defined by `𝒟(X)ρ + ρ𝒟(X) = i(Xρ − ρX)`.
pub fn commutation_superop(rho: &DensityMatrix) -> Result<Superoperator> {
    check_floor(rho)?;
    Ok(Superoperator::from_eigen_kernel(rho, commutation_kernel))
}

/// `𝒟(X)` evaluated directly in the eigenbasis, without forming the superoperator.
pub fn commutation_apply(rho: &DensityMatrix, x: &CMatrix) -> Result<CMatrix> {
    check_floor(rho)?;
    Ok(apply_eigen_kernel(rho, x, commutation_kernel))
}

/// `⟨X, Y⟩^(β) = ½·Tr X†{(1+β)ρY + (1−β)Yρ}`.
pub fn inner_beta(x: &CMatrix, y: &CMatrix, rho: &DensityMatrix, beta: f64) -> Result<Complex64> {
    let dim = rho.dim();
    if x.shape() != (dim, dim) || y.shape() != (dim, dim) {
        return Err(Error::InvalidInput(format!(
            "inner product operands must be {dim}x{dim}"
        )));
    }
    if !(-1.0..=1.0).contains(&beta) {
        return Err(Error::InvalidInput(format!("β = {beta} outside [-1, 1]")));
    }
    let r = rho.as_matrix();
    let inner = r * y * c(1.0 + beta) + y * r * c(1.0 - beta);
    Ok(trace(&(x.adjoint() * inner)) * 0.5)
}

/// Real SLD inner product `⟨X, Y⟩^(0)` of two Hermitian matrices.
pub fn inner_sld(x: &HermitianMatrix, y: &HermitianMatrix, rho: &DensityMatrix) -> f64 {
    let r = rho.as_matrix();
    let (x, y) = (x.as_matrix(), y.as_matrix());
    // Tr X(ρY + Yρ)/2 is real for Hermitian X, Y
    0.5 * trace(&(x * (r * y + y * r))).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{hermitize, max_abs, RMatrix};
    use approx::assert_relative_eq;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn diag_state(p: &[f64]) -> DensityMatrix {
        DensityMatrix::from_matrix(CMatrix::from_diagonal(&DVector::from_vec(
            p.iter().map(|&v| c(v)).collect(),
        )))
        .unwrap()
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let m = CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        hermitize(&m)
    }

    fn random_state(rng: &mut ChaCha8Rng, n: usize) -> DensityMatrix {
        let a = CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let p = hermitize(&(&a * a.adjoint())) + CMatrix::identity(n, n).map(|z| z * 0.05);
        let t = trace(&p);
        DensityMatrix::from_matrix(p.map(|z| z / t)).unwrap()
    }

    fn pauli_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.), c(1.), c(1.), c(0.)])
    }
    fn pauli_y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.), -I, I, c(0.)])
    }

    /// Solves 𝒟(X)ρ + ρ𝒟(X) = i(Xρ − ρX) as a dense real system over Hermitian unknowns.
    fn commutation_by_linear_solve(rho: &DensityMatrix, x: &CMatrix) -> CMatrix {
        let n = rho.dim();
        let r = rho.as_matrix();
        // real basis of n×n Hermitian matrices
        let mut basis = Vec::new();
        for j in 0..n {
            for k in j..n {
                let mut e = CMatrix::zeros(n, n);
                e[(j, k)] = c(1.0);
                e[(k, j)] = c(1.0);
                basis.push(e);
                if j != k {
                    let mut e = CMatrix::zeros(n, n);
                    e[(j, k)] = -I;
                    e[(k, j)] = I;
                    basis.push(e);
                }
            }
        }
        let flatten =
            |m: &CMatrix| -> Vec<f64> { m.iter().flat_map(|z| [z.re, z.im]).collect::<Vec<_>>() };
        let cols: Vec<Vec<f64>> = basis.iter().map(|e| flatten(&(e * r + r * e))).collect();
        let a = DMatrix::from_fn(2 * n * n, basis.len(), |i, j| cols[j][i]);
        let rhs = DVector::from_vec(flatten(&((x * r - r * x) * I)));
        let sol = a.svd(true, true).solve(&rhs, 1e-14).unwrap();
        basis
            .iter()
            .zip(sol.iter())
            .fold(CMatrix::zeros(n, n), |acc, (e, &w)| acc + e * c(w))
    }

    #[test]
    fn commutation_example_qubit() {
        let rho = diag_state(&[0.75, 0.25]);
        let got = commutation_apply(&rho, &pauli_x()).unwrap();
        let oracle = commutation_by_linear_solve(&rho, &pauli_x());
        assert!(max_abs(&(&got - &oracle)) < 1e-12);
        assert!(max_abs(&(&got - pauli_y() * c(0.5))) < 1e-12);
        let sup = commutation_superop(&rho).unwrap();
        assert!(max_abs(&(sup.apply(&pauli_x()) - &got)) < 1e-12);
    }

    #[test]
    fn commutation_annihilates_rho_and_identity_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random_state(&mut rng, 3);
        let out = commutation_apply(&rho, rho.as_matrix()).unwrap();
        assert!(max_abs(&out) < 1e-13);
        let mixed = DensityMatrix::maximally_mixed(3);
        let x = random_hermitian(&mut rng, 3);
        assert!(max_abs(&commutation_apply(&mixed, &x).unwrap()) < 1e-14);
    }

    #[test]
    fn commutation_defining_equation_and_hermiticity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let rho = random_state(&mut rng, 3);
            let sup = commutation_superop(&rho).unwrap();
            let x = random_hermitian(&mut rng, 3);
            let y = sup.apply(&x);
            let r = rho.as_matrix();
            let resid = &y * r + r * &y - (&x * r - r * &x) * I;
            assert!(max_abs(&resid) < 1e-10);
            assert!(max_abs(&(&y - y.adjoint())) < 1e-12);
            assert!(max_abs(&(&y - commutation_by_linear_solve(&rho, &x))) < 1e-10);
        }
    }

    #[test]
    fn commutation_operator_norm_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let rho = random_state(&mut rng, 3);
            let lam = rho.eigenvalues();
            let mut bound: f64 = 0.0;
            for a in lam.iter() {
                for b in lam.iter() {
                    bound = bound.max(((a - b) / (a + b)).abs());
                }
            }
            let norm = commutation_superop(&rho).unwrap().operator_norm();
            assert!(norm < 1.0);
            assert!(norm <= bound + 1e-12);
        }
    }

    #[test]
    fn superoperator_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rho = random_state(&mut rng, 3);
        let sup = commutation_superop(&rho).unwrap();
        let (x, y) = (random_hermitian(&mut rng, 3), random_hermitian(&mut rng, 3));
        let (a, b) = (Complex64::new(0.3, -1.2), Complex64::new(-2.0, 0.5));
        let lhs = sup.apply(&(x.map(|z| z * a) + y.map(|z| z * b)));
        let rhs = sup.apply(&x).map(|z| z * a) + sup.apply(&y).map(|z| z * b);
        assert!(max_abs(&(lhs - rhs)) < 1e-10);
    }

    #[test]
    fn left_right_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rho = random_state(&mut rng, 3);
        let x = random_hermitian(&mut rng, 3);
        let l = left_mult_superop(&rho).apply(&x);
        let r = right_mult_superop(&rho).apply(&x);
        assert!(max_abs(&(l - rho.as_matrix() * &x)) < 1e-14);
        assert!(max_abs(&(r - &x * rho.as_matrix())) < 1e-14);
    }

    #[test]
    fn commutation_matches_superoperator_definition() {
        // 𝒟 = -i (L - R)(L + R)^{-1}
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho = random_state(&mut rng, 2);
        let l = left_mult_superop(&rho);
        let r = right_mult_superop(&rho);
        let diff = l.combine(c(1.0), &r, c(-1.0));
        let sum_inv = l.combine(c(1.0), &r, c(1.0)).inverse().unwrap();
        let d = diff
            .compose(&sum_inv)
            .combine(-I, &Superoperator::identity(2), c(0.0));
        let k = commutation_superop(&rho).unwrap();
        assert!(max_abs(&(d.matrix() - k.matrix())) < 1e-12);
    }

    #[test]
    fn inner_beta_examples() {
        let half = DensityMatrix::maximally_mixed(2);
        let z = CMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0), c(-1.0)]));
        assert_relative_eq!(
            inner_beta(&z, &z, &half, 0.0).unwrap().re,
            1.0,
            epsilon = 1e-15
        );

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = random_state(&mut rng, 3);
        let x = random_hermitian(&mut rng, 3);
        let v = inner_beta(&x, &x, &rho, 1.0).unwrap();
        let direct = trace(&(&x * rho.as_matrix() * &x));
        assert!((v - direct).norm() < 1e-14);
        assert!(v.re >= 0.0);
        assert!(inner_beta(&x, &x, &rho, 1.5).is_err());
        assert!(inner_beta(&pauli_x(), &x, &rho, 0.0).is_err());
    }

    #[test]
    fn inner_beta_via_commutation_operator() {
        let rho = diag_state(&[0.6, 0.4]);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let d = commutation_superop(&rho).unwrap();
        for &beta in &[0.0, 0.3, 0.7, 1.0] {
            let op = Superoperator::identity(2).combine(c(1.0), &d, I * beta);
            for _ in 0..5 {
                let x = CMatrix::from_fn(2, 2, |_, _| {
                    Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                });
                let y = CMatrix::from_fn(2, 2, |_, _| {
                    Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                });
                let lhs = inner_beta(&x, &y, &rho, beta).unwrap();
                let rhs = inner_beta(&x, &op.apply(&y), &rho, 0.0).unwrap();
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn inner_beta_reduces_to_trace_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let rho = random_state(&mut rng, 3);
        let r = rho.as_matrix();
        let x = random_hermitian(&mut rng, 3);
        let y = random_hermitian(&mut rng, 3);
        let sym = trace(&(x.adjoint() * (r * &y + &y * r))) * 0.5;
        assert!((inner_beta(&x, &y, &rho, 0.0).unwrap() - sym).norm() < 1e-14);
        let rld = trace(&(x.adjoint() * r * &y));
        assert!((inner_beta(&x, &y, &rho, 1.0).unwrap() - rld).norm() < 1e-14);
        let hx = HermitianMatrix::new(x.clone()).unwrap();
        let hy = HermitianMatrix::new(y.clone()).unwrap();
        assert_relative_eq!(inner_sld(&hx, &hy, &rho), sym.re, epsilon = 1e-14);
        let _ = RMatrix::zeros(1, 1);
    }
}
