use nalgebra::DVector;

use super::{
    eig_hermitian, hermitize, linalg, max_abs, trace, CMatrix, RMatrix, HERMITIAN_TOL,
    POSITIVITY_FLOOR, TRACE_TOL,
};
use crate::error::{Error, Result};

/// A complex square matrix equal to its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    /// Validates and symmetrizes `m`. Drift above `HERMITIAN_TOL` (relative to
    /// the largest entry) is rejected.
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInput(format!(
                "matrix is not square: {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let drift = max_abs(&(&m - m.adjoint()));
        let scale = max_abs(&m).max(1.0);
        if drift > HERMITIAN_TOL * scale || !drift.is_finite() {
            return Err(Error::InvalidInput(format!(
                "matrix is not Hermitian (drift {drift:e})"
            )));
        }
        Ok(Self(hermitize(&m)))
    }

    /// Symmetrizes without checking. For matrices Hermitian by construction.
    pub(crate) fn from_hermitized(m: CMatrix) -> Self {
        Self(hermitize(&m))
    }

    pub fn from_real(m: &RMatrix) -> Result<Self> {
        Self::new(m.map(super::c))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        trace(&self.0).re
    }
}

impl AsRef<CMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &CMatrix {
        &self.0
    }
}

/// A strictly positive, unit-trace Hermitian matrix with a cached eigenbasis.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    base: HermitianMatrix,
    eigenvalues: DVector<f64>,
    eigenvectors: CMatrix,
}

impl DensityMatrix {
    pub fn new(base: HermitianMatrix) -> Result<Self> {
        let tr = base.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidModel(format!("trace: Tr ρ = {tr}")));
        }
        let (eigenvalues, eigenvectors) = eig_hermitian(&base)?;
        let min = eigenvalues[0];
        if min < POSITIVITY_FLOOR {
            return Err(Error::SingularState {
                min_eigenvalue: min,
            });
        }
        Ok(Self {
            base,
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let m = CMatrix::identity(dim, dim).map(|z| z / dim as f64);
        Self::from_matrix(m).expect("maximally mixed state is valid")
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn as_matrix(&self) -> &CMatrix {
        self.base.as_matrix()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Unitary whose columns are the eigenvectors, in eigenvalue order.
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Real symmetric positive-definite weight `G` with cached `√G` and `√G⁻¹`.
#[derive(Debug, Clone)]
pub struct WeightMatrix {
    entries: RMatrix,
    sqrt: RMatrix,
    inv_sqrt: RMatrix,
}

impl WeightMatrix {
    pub fn new(entries: RMatrix) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::InvalidWeight(format!(
                "weight must be a non-empty square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let asym = max_abs(&(&entries - entries.transpose()));
        let scale = max_abs(&entries).max(1.0);
        if asym > HERMITIAN_TOL * scale || !asym.is_finite() {
            return Err(Error::InvalidWeight(format!(
                "weight is not symmetric (drift {asym:e})"
            )));
        }
        let sym = (&entries + entries.transpose()) * 0.5;
        let eig = sym.clone().symmetric_eigen();
        let min = eig.eigenvalues.min();
        if min <= 0.0 {
            return Err(Error::InvalidWeight(format!(
                "weight is not positive definite (smallest eigenvalue {min:e})"
            )));
        }
        let q = &eig.eigenvectors;
        let sqrt = q * RMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * q.transpose();
        let inv_sqrt =
            q * RMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt())) * q.transpose();
        Ok(Self {
            entries: sym,
            sqrt: linalg::symmetrize(&sqrt),
            inv_sqrt: linalg::symmetrize(&inv_sqrt),
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::new(RMatrix::identity(d, d)).expect("identity is a valid weight")
    }

    pub fn d(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &RMatrix {
        &self.entries
    }

    /// Symmetric PSD square root.
    pub fn sqrt(&self) -> &RMatrix {
        &self.sqrt
    }

    pub fn inv_sqrt(&self) -> &RMatrix {
        &self.inv_sqrt
    }

    /// `Tr G·X` for a real matrix `X`.
    pub fn trace_with(&self, x: &RMatrix) -> f64 {
        self.entries.component_mul(&x.transpose()).sum()
    }

    /// Returns `s·G`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(&self.entries * s)
    }
}
