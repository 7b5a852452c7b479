//! Quantum statistical models evaluated at a point: a state and its tangents.

mod examples;
mod io;

pub use examples::{dim2_state, dim4_state, example_dim2, example_dim4};
pub use io::{load_model, model_from_json, model_to_json, save_model};

use crate::error::{Error, Result};
use crate::matcore::{
    c, hermitize, inner_sld, max_abs, trace, CMatrix, DensityMatrix, HermitianMatrix, RMatrix,
};
use nalgebra::DVector;

/// Tangents must satisfy `|Tr ∂ᵢρ| ≤ TRACELESS_TOL`.
pub const TRACELESS_TOL: f64 = 1e-9;
/// Smallest admissible eigenvalue of the tangent Gram matrix.
pub const INDEPENDENCE_TOL: f64 = 1e-10;
/// Largest Hilbert-space dimension [`tensor_power`] will build.
pub const MAX_TENSOR_DIM: usize = 8;
/// Default step for [`numeric_tangents`].
pub const DEFAULT_STEP: f64 = 1e-5;

const NUMERIC_DRIFT_TOL: f64 = 1e-6;

/// A density matrix together with `d` Hermitian traceless tangents `∂ᵢρ`.
#[derive(Debug, Clone)]
pub struct ModelPoint {
    rho: DensityMatrix,
    tangents: Vec<HermitianMatrix>,
    label: String,
}

impl ModelPoint {
    pub fn new(
        rho: DensityMatrix,
        tangents: Vec<HermitianMatrix>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if tangents.is_empty() {
            return Err(Error::InvalidInput(
                "model needs at least one tangent".into(),
            ));
        }
        let dim = rho.dim();
        for (i, t) in tangents.iter().enumerate() {
            if t.dim() != dim {
                return Err(Error::InvalidInput(format!(
                    "tangent {i} is {}x{}, state is {dim}x{dim}",
                    t.dim(),
                    t.dim()
                )));
            }
            let tr = t.trace();
            if tr.abs() > TRACELESS_TOL {
                return Err(Error::InvalidModel(format!(
                    "traceless: Tr ∂{}ρ = {tr:e}",
                    i + 1
                )));
            }
        }
        let gram = RMatrix::from_fn(tangents.len(), tangents.len(), |i, j| {
            inner_sld(&tangents[i], &tangents[j], &rho)
        });
        let min = gram.symmetric_eigenvalues().min();
        if !(min > INDEPENDENCE_TOL) {
            return Err(Error::DegenerateModel(format!(
                "tangents are linearly dependent (Gram eigenvalue {min:e})"
            )));
        }
        Ok(Self {
            rho,
            tangents,
            label: label.into(),
        })
    }

    /// Diagonal (commuting) model with probabilities `p` and tangents `dp[i]`.
    pub fn classical(p: &[f64], dp: &[Vec<f64>], label: impl Into<String>) -> Result<Self> {
        let diag = |v: &[f64]| {
            CMatrix::from_diagonal(&DVector::from_iterator(v.len(), v.iter().map(|&x| c(x))))
        };
        let rho = DensityMatrix::from_matrix(diag(p))?;
        let tangents = dp
            .iter()
            .map(|t| {
                if t.len() != p.len() {
                    return Err(Error::InvalidInput(format!(
                        "tangent has {} entries, expected {}",
                        t.len(),
                        p.len()
                    )));
                }
                Ok(HermitianMatrix::from_hermitized(diag(t)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rho, tangents, label)
    }

    /// Number of parameters.
    pub fn d(&self) -> usize {
        self.tangents.len()
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn tangents(&self) -> &[HermitianMatrix] {
        &self.tangents
    }

    pub fn tangent(&self, i: usize) -> &HermitianMatrix {
        &self.tangents[i]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The same state with one more tangent appended.
    pub fn with_tangent(&self, extra: HermitianMatrix) -> Result<Self> {
        let mut tangents = self.tangents.clone();
        tangents.push(extra);
        Self::new(self.rho.clone(), tangents, format!("{}+1", self.label))
    }
}

/// Central-difference tangents of a user-supplied family at `theta0`.
pub fn numeric_tangents<F>(rho_fn: F, theta0: &[f64], h: f64) -> Result<ModelPoint>
where
    F: Fn(&[f64]) -> Result<DensityMatrix>,
{
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!(
            "step must be positive, got {h}"
        )));
    }
    let rho = rho_fn(theta0)?;
    let dim = rho.dim();
    let mut tangents = Vec::with_capacity(theta0.len());
    for i in 0..theta0.len() {
        let mut plus = theta0.to_vec();
        let mut minus = theta0.to_vec();
        plus[i] += h;
        minus[i] -= h;
        let diff =
            (rho_fn(&plus)?.as_matrix() - rho_fn(&minus)?.as_matrix()).map(|z| z / (2.0 * h));
        let drift = max_abs(&(&diff - diff.adjoint()));
        if drift > NUMERIC_DRIFT_TOL {
            return Err(Error::NumericalFailure(format!(
                "finite-difference tangent {} drifts from Hermitian by {drift:e}",
                i + 1
            )));
        }
        let mut t = hermitize(&diff);
        let shift = trace(&t) / dim as f64;
        for k in 0..dim {
            t[(k, k)] -= shift;
        }
        tangents.push(HermitianMatrix::from_hermitized(t));
    }
    ModelPoint::new(rho, tangents, "numeric")
}

/// The i.i.d. model `ρ^{⊗n}` with Leibniz-rule tangents.
pub fn tensor_power(m: &ModelPoint, n: usize) -> Result<ModelPoint> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "tensor power must be at least 1".into(),
        ));
    }
    let big = (m.dim() as u64).checked_pow(n as u32);
    if big.is_none_or(|b| b > MAX_TENSOR_DIM as u64) {
        return Err(Error::InvalidInput(format!(
            "{}^{n} exceeds the supported dimension {MAX_TENSOR_DIM}",
            m.dim()
        )));
    }
    if n == 1 {
        return Ok(m.clone());
    }
    let r = m.rho().as_matrix();
    let mut rho = r.clone();
    for _ in 1..n {
        rho = rho.kronecker(r);
    }
    let tangents = m
        .tangents()
        .iter()
        .map(|t| {
            let mut sum: Option<CMatrix> = None;
            for pos in 0..n {
                let factor = |k: usize| if k == pos { t.as_matrix() } else { r };
                let mut term = factor(0).clone();
                for k in 1..n {
                    term = term.kronecker(factor(k));
                }
                sum = Some(match sum {
                    Some(s) => s + term,
                    None => term,
                });
            }
            HermitianMatrix::from_hermitized(sum.expect("n >= 1"))
        })
        .collect();
    ModelPoint::new(
        DensityMatrix::from_matrix(hermitize(&rho))?,
        tangents,
        format!("{}^{n}", m.label()),
    )
}
