//! Logarithmic derivatives and Fisher information matrices.
//!
//! All derivative equations are solved elementwise in the eigenbasis of ρ.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{
    apply_eigen_kernel, c, eig_hermitian, hermitian_inverse, hermitize, max_abs, re_part, trace,
    CMatrix, Complex64, HermitianMatrix, RMatrix,
};
use crate::model::ModelPoint;

/// Accepted deviation of a user metric function from `P(1) = 1`.
pub const MONOTONE_NORMALIZATION_TOL: f64 = 1e-12;
/// POVM elements may have eigenvalues down to `-POVM_PSD_TOL`.
pub const POVM_PSD_TOL: f64 = 1e-10;
/// Allowed deviation of `Σ Mₓ` from the identity.
pub const POVM_SUM_TOL: f64 = 1e-9;
/// Outcomes with `Tr ρMₓ` below this are skipped.
pub const POVM_ZERO_PROBABILITY: f64 = 1e-12;
/// A skipped outcome must have `|Tr ∂ᵢρ·Mₓ|` below this.
pub const POVM_ZERO_NUMERATOR: f64 = 1e-9;
/// Fisher matrices whose eigenvalue ratio falls below this are treated as singular.
pub const SINGULAR_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FisherKind {
    Sld,
    Rld,
    Beta(f64),
    Monotone(String),
    Classical,
}

impl fmt::Display for FisherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FisherKind::Sld => write!(f, "SLD"),
            FisherKind::Rld => write!(f, "RLD"),
            FisherKind::Beta(b) => write!(f, "beta({b})"),
            FisherKind::Monotone(name) => write!(f, "monotone({name})"),
            FisherKind::Classical => write!(f, "classical"),
        }
    }
}

/// A `d×d` Hermitian Fisher information matrix.
#[derive(Debug, Clone)]
pub struct FisherMatrix {
    entries: CMatrix,
    kind: FisherKind,
}

impl FisherMatrix {
    fn new(entries: CMatrix, kind: FisherKind) -> Self {
        let entries = match kind {
            FisherKind::Sld | FisherKind::Classical => re_part(&entries).map(c),
            _ => entries,
        };
        Self {
            entries: hermitize(&entries),
            kind,
        }
    }

    pub fn d(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn kind(&self) -> &FisherKind {
        &self.kind
    }

    pub fn real_part(&self) -> RMatrix {
        re_part(&self.entries)
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let h = HermitianMatrix::from_hermitized(self.entries.clone());
        Ok(eig_hermitian(&h)?.0.iter().copied().collect())
    }

    /// `J⁻¹`, or [`Error::DegenerateModel`] when `J` is numerically singular.
    pub fn inverse(&self) -> Result<CMatrix> {
        let eig = self.eigenvalues()?;
        let (lo, hi) = (eig[0], eig[eig.len() - 1]);
        if !(lo > SINGULAR_RATIO * hi.abs()) || hi <= 0.0 {
            return Err(Error::DegenerateModel(format!(
                "{} Fisher matrix is singular (eigenvalues {lo:e} .. {hi:e})",
                self.kind
            )));
        }
        hermitian_inverse(&self.entries).ok_or_else(|| {
            Error::DegenerateModel(format!("{} Fisher matrix is not invertible", self.kind))
        })
    }
}

/// The β-logarithmic derivatives `L₁, …, L_d` of a model.
#[derive(Debug, Clone)]
pub struct LogDerivativeSet {
    beta: f64,
    operators: Vec<CMatrix>,
}

impl LogDerivativeSet {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// Largest entry of `∂ᵢρ − ½(1+β)ρLᵢ − ½(1−β)Lᵢρ` over all `i`.
    pub fn residual(&self, m: &ModelPoint) -> f64 {
        let rho = m.rho().as_matrix();
        let b = self.beta;
        self.operators
            .iter()
            .zip(m.tangents())
            .map(|(l, t)| {
                let rebuilt = rho * l * c(0.5 * (1.0 + b)) + l * rho * c(0.5 * (1.0 - b));
                max_abs(&(t.as_matrix() - rebuilt))
            })
            .fold(0.0, f64::max)
    }
}

fn beta_kernel(beta: f64) -> impl Fn(f64, f64) -> Complex64 {
    move |lj, lk| c(2.0 / ((1.0 + beta) * lj + (1.0 - beta) * lk))
}

fn check_beta(beta: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&beta) {
        return Err(Error::InvalidInput(format!("β = {beta} outside [-1, 1]")));
    }
    Ok(())
}

/// Solves `∂ᵢρ = ½(1+β)ρLᵢ + ½(1−β)Lᵢρ`. `β = 0` gives the SLDs, `β = 1` the RLDs.
///
/// Negative β is accepted; `L^(−β) = (L^(β))†`.
pub fn beta_log_derivative(m: &ModelPoint, beta: f64) -> Result<LogDerivativeSet> {
    check_beta(beta)?;
    let kernel = beta_kernel(beta);
    let operators = m
        .tangents()
        .iter()
        .map(|t| apply_eigen_kernel(m.rho(), t.as_matrix(), &kernel))
        .collect();
    Ok(LogDerivativeSet { beta, operators })
}

/// Symmetric logarithmic derivatives as Hermitian matrices.
pub fn sld_operators(m: &ModelPoint) -> Vec<HermitianMatrix> {
    let kernel = beta_kernel(0.0);
    m.tangents()
        .iter()
        .map(|t| {
            HermitianMatrix::from_hermitized(apply_eigen_kernel(m.rho(), t.as_matrix(), &kernel))
        })
        .collect()
}

fn pairing(m: &ModelPoint, images: &[CMatrix]) -> CMatrix {
    let d = m.d();
    CMatrix::from_fn(d, d, |i, j| trace(&(m.tangent(i).as_matrix() * &images[j])))
}

/// `J^(β)_{ij} = Tr ∂ᵢρ·L_j^(β)`.
pub fn fisher_beta(m: &ModelPoint, beta: f64) -> Result<FisherMatrix> {
    let set = beta_log_derivative(m, beta)?;
    let kind = if beta == 0.0 {
        FisherKind::Sld
    } else if beta == 1.0 {
        FisherKind::Rld
    } else {
        FisherKind::Beta(beta)
    };
    Ok(FisherMatrix::new(pairing(m, set.operators()), kind))
}

pub fn fisher_sld(m: &ModelPoint) -> FisherMatrix {
    fisher_beta(m, 0.0).expect("β = 0 is in range")
}

pub fn fisher_rld(m: &ModelPoint) -> FisherMatrix {
    fisher_beta(m, 1.0).expect("β = 1 is in range")
}

/// Fisher matrix of the monotone metric generated by `p`, with kernel
/// `1/(λ_k·P(λ_j/λ_k))` in the eigenbasis of ρ.
///
/// `p` is trusted to be operator monotone; only `P(1) = 1` and positivity on
/// the eigenvalue ratios are checked.
pub fn fisher_monotone<P>(m: &ModelPoint, p: P, label: &str) -> Result<FisherMatrix>
where
    P: Fn(f64) -> f64,
{
    let at_one = p(1.0);
    if !((at_one - 1.0).abs() <= MONOTONE_NORMALIZATION_TOL) {
        return Err(Error::InvalidInput(format!("P(1) = {at_one}, expected 1")));
    }
    let lam = m.rho().eigenvalues();
    for &lj in lam.iter() {
        for &lk in lam.iter() {
            let v = p(lj / lk);
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "P({}) = {v} is not positive",
                    lj / lk
                )));
            }
        }
    }
    let kernel = |lj: f64, lk: f64| c(1.0 / (lk * p(lj / lk)));
    let images: Vec<CMatrix> = m
        .tangents()
        .iter()
        .map(|t| apply_eigen_kernel(m.rho(), t.as_matrix(), kernel))
        .collect();
    Ok(FisherMatrix::new(
        pairing(m, &images),
        FisherKind::Monotone(label.to_string()),
    ))
}

/// Classical Fisher matrix of the outcome distribution of `povm`.
pub fn classical_fisher(m: &ModelPoint, povm: &[HermitianMatrix]) -> Result<FisherMatrix> {
    let dim = m.dim();
    if povm.is_empty() {
        return Err(Error::InvalidInput("POVM has no elements".into()));
    }
    let mut sum = CMatrix::zeros(dim, dim);
    for (x, e) in povm.iter().enumerate() {
        if e.dim() != dim {
            return Err(Error::InvalidInput(format!(
                "POVM element {x} is {}x{}, state is {dim}x{dim}",
                e.dim(),
                e.dim()
            )));
        }
        let (vals, _) = eig_hermitian(e)?;
        if vals[0] < -POVM_PSD_TOL {
            return Err(Error::InvalidInput(format!(
                "POVM element {x} is not positive (eigenvalue {:e})",
                vals[0]
            )));
        }
        sum += e.as_matrix();
    }
    let drift = max_abs(&(sum - CMatrix::identity(dim, dim)));
    if drift > POVM_SUM_TOL {
        return Err(Error::InvalidInput(format!(
            "POVM does not sum to the identity (deviation {drift:e})"
        )));
    }
    let d = m.d();
    let rho = m.rho().as_matrix();
    let mut j = RMatrix::zeros(d, d);
    for (x, e) in povm.iter().enumerate() {
        let e = e.as_matrix();
        let p = trace(&(rho * e)).re;
        let dp: Vec<f64> = m
            .tangents()
            .iter()
            .map(|t| trace(&(t.as_matrix() * e)).re)
            .collect();
        if p < POVM_ZERO_PROBABILITY {
            if let Some(bad) = dp.iter().find(|v| v.abs() > POVM_ZERO_NUMERATOR) {
                return Err(Error::InvalidInput(format!(
                    "outcome {x} has zero probability but derivative {bad:e}"
                )));
            }
            continue;
        }
        for a in 0..d {
            for b in 0..d {
                j[(a, b)] += dp[a] * dp[b] / p;
            }
        }
    }
    Ok(FisherMatrix::new(j.map(c), FisherKind::Classical))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{commutation_superop, pauli, DensityMatrix, Superoperator, I};
    use crate::model::example_dim2;
    use crate::random::{random_model, random_povm};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bernoulli() -> ModelPoint {
        ModelPoint::classical(&[0.3, 0.7], &[vec![1.0, -1.0]], "bernoulli").unwrap()
    }

    fn min_eig(m: &CMatrix) -> f64 {
        eig_hermitian(&HermitianMatrix::from_hermitized(m.clone()))
            .unwrap()
            .0[0]
    }

    #[test]
    fn classical_model_all_betas_agree() {
        let m = bernoulli();
        for &beta in &[0.0, 0.3, 1.0] {
            let set = beta_log_derivative(&m, beta).unwrap();
            let l = &set.operators()[0];
            assert!((l[(0, 0)].re - 1.0 / 0.3).abs() < 1e-13);
            assert!((l[(1, 1)].re + 1.0 / 0.7).abs() < 1e-13);
            assert!(l[(0, 1)].norm() < 1e-15);
        }
    }

    #[test]
    fn rld_is_rho_inverse_times_tangent() {
        let m = example_dim2(0.95, 0.3).unwrap();
        let rho_inv = m.rho().as_matrix().clone().try_inverse().unwrap();
        let set = beta_log_derivative(&m, 1.0).unwrap();
        for (l, t) in set.operators().iter().zip(m.tangents()) {
            assert!(max_abs(&(l - &rho_inv * t.as_matrix())) < 1e-12);
        }
    }

    #[test]
    fn beta_derivative_from_sld_via_commutation_operator() {
        let m = example_dim2(0.95, 0.5).unwrap();
        let beta = 0.4;
        let d = commutation_superop(m.rho()).unwrap();
        let op = Superoperator::identity(2)
            .combine(c(1.0), &d, I * beta)
            .inverse()
            .unwrap();
        let sld = beta_log_derivative(&m, 0.0).unwrap();
        let lb = beta_log_derivative(&m, beta).unwrap();
        for (l0, l) in sld.operators().iter().zip(lb.operators()) {
            assert!(max_abs(&(op.apply(l0) - l)) < 1e-12);
        }
    }

    #[test]
    fn residuals_vanish() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let m = random_model(&mut rng, 3, 2).unwrap();
            for &beta in &[-0.5, 0.0, 0.25, 0.75, 1.0] {
                let set = beta_log_derivative(&m, beta).unwrap();
                assert!(set.residual(&m) < 1e-10);
            }
        }
        assert!(beta_log_derivative(&bernoulli(), 1.2).is_err());
    }

    #[test]
    fn maximally_mixed_qubit() {
        // For ρ = I/n every derivative is L = n·∂ρ, so J_ij = n·Tr ∂ᵢρ∂ⱼρ.
        let rho = DensityMatrix::maximally_mixed(2);
        let tangents = [1, 2]
            .map(|k| HermitianMatrix::new(pauli(k) * c(0.5)).unwrap())
            .to_vec();
        let m = ModelPoint::new(rho, tangents, "mixed").unwrap();
        let direct = CMatrix::from_fn(2, 2, |i, j| {
            trace(&(m.tangent(i).as_matrix() * m.tangent(j).as_matrix())) * 2.0
        });
        assert!(max_abs(&(&direct - CMatrix::identity(2, 2))) < 1e-15);
        for &beta in &[0.0, 0.5, 1.0] {
            let j = fisher_beta(&m, beta).unwrap();
            assert!(max_abs(&(j.entries() - &direct)) < 1e-14);
        }
    }

    #[test]
    fn sld_fisher_is_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let m = random_model(&mut rng, 3, 2).unwrap();
        let j = fisher_sld(&m);
        assert!(j.entries().iter().all(|z| z.im == 0.0));
        assert_eq!(j.kind(), &FisherKind::Sld);
    }

    #[test]
    fn conjugation_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let m = random_model(&mut rng, 3, 2).unwrap();
        for &beta in &[0.3, 0.8] {
            let plus = fisher_beta(&m, beta).unwrap();
            let minus = fisher_beta(&m, -beta).unwrap();
            assert!(max_abs(&(plus.entries().map(|z| z.conj()) - minus.entries())) < 1e-12);
            let set_plus = beta_log_derivative(&m, beta).unwrap();
            let set_minus = beta_log_derivative(&m, -beta).unwrap();
            for (a, b) in set_plus.operators().iter().zip(set_minus.operators()) {
                assert!(max_abs(&(a.adjoint() - b)) < 1e-12);
            }
        }
    }

    #[test]
    fn monotone_family_members() {
        let m = example_dim2(0.95, 0.3).unwrap();
        for &beta in &[0.0, 0.3, 1.0] {
            let p = move |x: f64| ((1.0 + beta) * x + 1.0 - beta) / 2.0;
            let jm = fisher_monotone(&m, p, "beta").unwrap();
            let jb = fisher_beta(&m, beta).unwrap();
            assert!(max_abs(&(jm.entries() - jb.entries())) < 1e-12);
        }
        let rld = fisher_monotone(&m, |x| x, "x").unwrap();
        assert!(max_abs(&(rld.entries() - fisher_rld(&m).entries())) < 1e-12);
    }

    #[test]
    fn geometric_mean_metric_dominates_sld() {
        let m = example_dim2(0.95, 0.3).unwrap();
        let jp = fisher_monotone(&m, f64::sqrt, "sqrt").unwrap();
        let js = fisher_sld(&m);
        assert!(min_eig(&(jp.entries() - js.entries())) >= -1e-10);
    }

    #[test]
    fn monotone_rejects_unnormalized() {
        let m = bernoulli();
        assert!(fisher_monotone(&m, |x| 2.0 * x, "2x").is_err());
        assert!(fisher_monotone(&m, |x| 2.0 - x, "2-x").is_err());
    }

    #[test]
    fn classical_fisher_examples() {
        let m = bernoulli();
        let proj = [0, 1]
            .map(|k| {
                let mut e = CMatrix::zeros(2, 2);
                e[(k, k)] = c(1.0);
                HermitianMatrix::new(e).unwrap()
            })
            .to_vec();
        let j = classical_fisher(&m, &proj).unwrap();
        assert!((j.entries()[(0, 0)].re - 1.0 / 0.21).abs() < 1e-12);
        let trivial = classical_fisher(&m, &[HermitianMatrix::identity(2)]).unwrap();
        assert!(max_abs(trivial.entries()) < 1e-15);
        assert!(classical_fisher(
            &m,
            &[
                HermitianMatrix::identity(2).clone(),
                HermitianMatrix::identity(2)
            ]
        )
        .is_err());
    }

    #[test]
    fn classical_fisher_skips_null_outcomes() {
        let m = bernoulli();
        let mut e = CMatrix::zeros(2, 2);
        e[(0, 0)] = c(1.0);
        e[(1, 1)] = c(1.0);
        let povm = vec![HermitianMatrix::new(e).unwrap(), HermitianMatrix::zeros(2)];
        assert!(classical_fisher(&m, &povm).is_ok());
    }

    #[test]
    fn povm_fisher_below_beta_fisher() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let m = example_dim2(0.95, 0.3).unwrap();
        for _ in 0..20 {
            let povm = random_povm(&mut rng, 2, 4);
            let jm = classical_fisher(&m, &povm).unwrap();
            for &beta in &[0.0, 0.5, 1.0] {
                let jb = fisher_beta(&m, beta).unwrap();
                assert!(min_eig(&(jb.entries() - jm.entries())) >= -1e-9);
            }
        }
    }

    #[test]
    fn singular_fisher_inverse_is_degenerate() {
        let j = FisherMatrix::new(CMatrix::from_element(2, 2, c(1.0)), FisherKind::Sld);
        assert!(matches!(j.inverse(), Err(Error::DegenerateModel(_))));
    }
}
