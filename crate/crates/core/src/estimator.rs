//! Locally unbiased estimators built from a POVM.

use nalgebra::DVector;

use crate::error::Result;
use crate::logderiv::classical_fisher;
use crate::matcore::{re_part, trace, HermitianMatrix, RMatrix};
use crate::model::ModelPoint;

/// Outcomes `x` with probability `p(x)` and estimate offsets `θ̂(x) − θ₀`.
#[derive(Debug, Clone)]
pub struct LocalEstimator {
    pub probabilities: Vec<f64>,
    pub offsets: Vec<DVector<f64>>,
    pub covariance: RMatrix,
}

/// `θ̂(x) = θ₀ + J_M⁻¹·∂p(x)/p(x)`, which attains the classical bound of `M`.
/// Outcomes of zero probability get zero offset.
pub fn locally_unbiased_estimator(
    m: &ModelPoint,
    povm: &[HermitianMatrix],
) -> Result<LocalEstimator> {
    let jinv = re_part(&classical_fisher(m, povm)?.inverse()?);
    let rho = m.rho().as_matrix();
    let d = m.d();
    let mut probabilities = Vec::with_capacity(povm.len());
    let mut offsets = Vec::with_capacity(povm.len());
    let mut covariance = RMatrix::zeros(d, d);
    for e in povm {
        let e = e.as_matrix();
        let p = trace(&(rho * e)).re;
        let dp = DVector::from_iterator(
            d,
            m.tangents().iter().map(|t| trace(&(t.as_matrix() * e)).re),
        );
        let offset = if p > crate::logderiv::POVM_ZERO_PROBABILITY {
            &jinv * dp / p
        } else {
            DVector::zeros(d)
        };
        covariance += &offset * offset.transpose() * p;
        probabilities.push(p);
        offsets.push(offset);
    }
    Ok(LocalEstimator {
        probabilities,
        offsets,
        covariance,
    })
}

impl LocalEstimator {
    /// Largest deviation from `Σₓ p(x)·(θ̂(x)−θ₀) = 0` and
    /// `Σₓ ∂ᵢp(x)·(θ̂ʲ(x)−θ₀ʲ) = δᵢⱼ`.
    pub fn bias(&self, m: &ModelPoint, povm: &[HermitianMatrix]) -> f64 {
        let d = m.d();
        let mut mean = DVector::zeros(d);
        let mut slope = RMatrix::zeros(d, d);
        for ((e, p), off) in povm.iter().zip(&self.probabilities).zip(&self.offsets) {
            mean += off * *p;
            for (i, t) in m.tangents().iter().enumerate() {
                let dp = trace(&(t.as_matrix() * e.as_matrix())).re;
                for j in 0..d {
                    slope[(i, j)] += dp * off[j];
                }
            }
        }
        mean.amax().max((slope - RMatrix::identity(d, d)).amax())
    }
}
