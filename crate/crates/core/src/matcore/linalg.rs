use nalgebra::{DVector, SymmetricEigen};

use super::{c, CMatrix, HermitianMatrix, RMatrix, WeightMatrix, I};
use crate::error::{Error, Result};
use num_complex::Complex64;

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;
const SCHUR_MAX_CONDITION: f64 = 1e12;
const PSD_TOL: f64 = 1e-10;

/// Eigendecomposition `X = U·diag(λ)·U†` with ascending eigenvalues.
pub fn eig_hermitian(x: &HermitianMatrix) -> Result<(DVector<f64>, CMatrix)> {
    let n = x.dim();
    let eig = SymmetricEigen::try_new(x.as_matrix().clone(), EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::NumericalFailure("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure("non-finite eigenvalue".into()));
    }
    Ok((values, vectors))
}

pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).map(|z| z * 0.5)
}

pub(crate) fn symmetrize(m: &RMatrix) -> RMatrix {
    (m + m.transpose()) * 0.5
}

pub fn max_abs<T>(m: &nalgebra::DMatrix<T>) -> f64
where
    T: nalgebra::ComplexField<RealField = f64>,
{
    m.iter().map(|z| z.clone().modulus()).fold(0.0, f64::max)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().sum()
}

pub fn re_part(m: &CMatrix) -> RMatrix {
    m.map(|z| z.re)
}

pub fn im_part(m: &CMatrix) -> RMatrix {
    m.map(|z| z.im)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(c)
}

/// Sum of singular values.
pub fn nuclear_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().sum()
}

/// `Tr|√G·M·√G|`, the nuclear norm of the weighted matrix.
///
/// `M` is expected to be Hermitian, or a real antisymmetric matrix such as
/// `Im J` stored as complex.
pub fn weighted_abs_trace(g: &WeightMatrix, m: &CMatrix) -> Result<f64> {
    check_weight_dims(g, m)?;
    let s = super::to_complex(g.sqrt());
    Ok(nuclear_norm(&(&s * m * &s)))
}

/// `|A| = √(AᵀA)` for a real antisymmetric matrix, via the Hermitian matrix `iA`.
pub fn abs_antisymmetric(a: &RMatrix) -> Result<RMatrix> {
    let h = HermitianMatrix::from_hermitized(a.map(|x| I * x));
    let (vals, vecs) = eig_hermitian(&h)?;
    let d = CMatrix::from_diagonal(&vals.map(|v| c(v.abs())));
    Ok(super::linalg::symmetrize(&re_part(
        &(&vecs * d * vecs.adjoint()),
    )))
}

/// Minimizer of `Tr G·V` over real `V ≥ J`.
#[derive(Debug, Clone)]
pub struct MinRealCov {
    pub value: f64,
    pub v_star: RMatrix,
}

/// Solves `min { Tr G·V : V real, V ≥ J }` in closed form:
/// `Tr G·Re J + Tr|√G·Im J·√G|`, attained at `Re J + √G⁻¹·|√G·Im J·√G|·√G⁻¹`.
pub fn min_real_cov(g: &WeightMatrix, j: &CMatrix) -> Result<MinRealCov> {
    check_weight_dims(g, j)?;
    let h = HermitianMatrix::new(j.clone())?;
    let (vals, _) = eig_hermitian(&h)?;
    let scale = max_abs(j).max(1.0);
    if vals[0] < -PSD_TOL * scale {
        return Err(Error::InvalidInput(format!(
            "J is not positive semidefinite (smallest eigenvalue {:e})",
            vals[0]
        )));
    }
    let re = re_part(h.as_matrix());
    let im = im_part(h.as_matrix());
    let weighted = g.sqrt() * &im * g.sqrt();
    let abs = abs_antisymmetric(&weighted)?;
    let value = g.trace_with(&re) + abs.trace();
    let v_star = symmetrize(&(&re + g.inv_sqrt() * abs * g.inv_sqrt()));
    Ok(MinRealCov { value, v_star })
}

/// Schur complement `A₁ − A₂*·A₃⁻¹·A₂` of the trailing block of `A`, where
/// `A₁` is the leading `p×p` block.
pub fn schur_complement(a: &CMatrix, p: usize) -> Result<CMatrix> {
    let n = a.nrows();
    if !a.is_square() || p == 0 || p >= n {
        return Err(Error::InvalidInput(format!(
            "cannot take a {p}x{p} Schur block of a {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    let q = n - p;
    let a1 = a.view((0, 0), (p, p));
    let top_right = a.view((0, p), (p, q));
    let bottom_left = a.view((p, 0), (q, p));
    let a3 = a.view((p, p), (q, q)).into_owned();
    let sv = a3.clone().singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if !(condition < SCHUR_MAX_CONDITION) {
        return Err(Error::SingularBlock { condition });
    }
    let solved = a3
        .lu()
        .solve(&bottom_left.into_owned())
        .ok_or(Error::SingularBlock { condition })?;
    Ok(a1 - top_right * solved)
}

/// Inverse of a Hermitian matrix, symmetrized. `None` when singular.
pub fn hermitian_inverse(m: &CMatrix) -> Option<CMatrix> {
    let inv = m.clone().try_inverse()?;
    if inv.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return None;
    }
    Some(hermitize(&inv))
}

/// PSD square root of a Hermitian PSD matrix; small negative eigenvalues are clipped.
pub fn hermitian_sqrt(m: &HermitianMatrix) -> Result<CMatrix> {
    let (vals, vecs) = eig_hermitian(m)?;
    let scale = vals.amax().max(1.0);
    if vals[0] < -PSD_TOL * scale {
        return Err(Error::InvalidInput(format!(
            "square root of an indefinite matrix (smallest eigenvalue {:e})",
            vals[0]
        )));
    }
    let d = CMatrix::from_diagonal(&vals.map(|v| c(v.max(0.0).sqrt())));
    Ok(hermitize(&(&vecs * d * vecs.adjoint())))
}

fn check_weight_dims(g: &WeightMatrix, m: &CMatrix) -> Result<()> {
    if m.nrows() != g.d() || m.ncols() != g.d() {
        return Err(Error::InvalidInput(format!(
            "weight is {}x{} but matrix is {}x{}",
            g.d(),
            g.d(),
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}
