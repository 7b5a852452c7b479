use std::collections::VecDeque;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::logderiv::{fisher_rld, fisher_sld, sld_operators};
use crate::matcore::{
    c, commutation_apply, hermitian_inverse, im_part, inner_sld, max_abs, re_part, to_complex,
    trace, CMatrix, DensityMatrix, HermitianMatrix, RMatrix,
};
use crate::model::ModelPoint;

/// Appended directions shorter than this (relative to the vector they came
/// from) are treated as already inside the span.
pub const CLOSURE_TOL: f64 = 1e-8;
/// Tolerance of the rank-one shape checks on `R`.
pub const SHAPE_TOL: f64 = 1e-8;

/// `R = [[A, i|b⟩], [−i⟨b|, 1]]` for a one-dimensional extension.
#[derive(Debug, Clone)]
pub struct RankOne {
    pub a: CMatrix,
    pub b: DVector<f64>,
}

/// A 𝒟-invariant real span whose first `d` basis elements are the SLDs.
#[derive(Debug, Clone)]
pub struct RExtension {
    basis: Vec<HermitianMatrix>,
    d: usize,
    sigma: CMatrix,
    r: CMatrix,
    rank_one: Option<RankOne>,
}

fn norm(x: &HermitianMatrix, rho: &DensityMatrix) -> f64 {
    inner_sld(x, x, rho).max(0.0).sqrt()
}

/// Component of `y` orthogonal to the orthonormal set `q`, by two passes of
/// modified Gram–Schmidt.
fn orthogonal_part(
    y: &HermitianMatrix,
    q: &[HermitianMatrix],
    rho: &DensityMatrix,
) -> HermitianMatrix {
    let mut v = y.as_matrix().clone();
    for _ in 0..2 {
        for e in q {
            let coeff = inner_sld(e, &HermitianMatrix::from_hermitized(v.clone()), rho);
            v -= e.as_matrix() * c(coeff);
        }
    }
    HermitianMatrix::from_hermitized(v)
}

/// Orthonormal basis (under `⟨·,·⟩^(0)`) of the span of `vectors`.
pub(crate) fn orthonormalize(
    vectors: &[HermitianMatrix],
    rho: &DensityMatrix,
) -> Result<Vec<HermitianMatrix>> {
    let mut q: Vec<HermitianMatrix> = Vec::with_capacity(vectors.len());
    for (i, v) in vectors.iter().enumerate() {
        let scale = norm(v, rho);
        let w = orthogonal_part(v, &q, rho);
        let n = norm(&w, rho);
        if !(n > CLOSURE_TOL * scale) || n == 0.0 {
            return Err(Error::DegenerateModel(format!(
                "vector {} lies in the span of the previous ones",
                i + 1
            )));
        }
        q.push(HermitianMatrix::from_hermitized(w.as_matrix() / c(n)));
    }
    Ok(q)
}

/// Largest `‖(I − P)𝒟(qᵢ)‖^(0)` over an orthonormal set `q`, with `P` the
/// orthogonal projector onto its span.
pub(crate) fn invariance_residual(q: &[HermitianMatrix], rho: &DensityMatrix) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for e in q {
        let y = HermitianMatrix::from_hermitized(commutation_apply(rho, e.as_matrix())?);
        worst = worst.max(norm(&orthogonal_part(&y, q, rho), rho));
    }
    Ok(worst)
}

/// `Σ_{ij} = Tr ρ·Dⱼ·Dᵢ`.
fn sigma_matrix(basis: &[HermitianMatrix], rho: &DensityMatrix) -> CMatrix {
    let r = basis.len();
    let p = rho.as_matrix();
    CMatrix::from_fn(r, r, |i, j| {
        trace(&(p * basis[j].as_matrix() * basis[i].as_matrix()))
    })
}

impl RExtension {
    /// Builds `Σ`, `R` and, when the shape allows, the rank-one form from an
    /// explicit basis whose first `d` elements are the SLDs of `m`.
    pub fn from_basis(m: &ModelPoint, basis: Vec<HermitianMatrix>) -> Result<Self> {
        let d = m.d();
        if basis.len() < d {
            return Err(Error::InvalidInput(format!(
                "basis has {} elements, need at least {d}",
                basis.len()
            )));
        }
        let rho = m.rho();
        let sigma = sigma_matrix(&basis, rho);
        let re_inv = hermitian_inverse(&to_complex(&re_part(&sigma))).ok_or_else(|| {
            Error::DegenerateModel("extended basis has a singular Gram matrix".into())
        })?;
        let re_inv = to_complex(&re_part(&re_inv));
        let r = &re_inv * &sigma * &re_inv;
        let r = (&r + r.adjoint()) * c(0.5);
        let mut ext = Self {
            basis,
            d,
            sigma,
            r,
            rank_one: None,
        };
        ext.rank_one = ext.rank_one_from_blocks();
        Ok(ext)
    }

    fn rank_one_from_blocks(&self) -> Option<RankOne> {
        if self.dim() != self.d + 1 {
            return None;
        }
        let r2 = self.r2();
        let r3 = self.r3()[(0, 0)];
        let scale = max_abs(&self.r).max(1.0);
        let re_r2 = max_abs(&re_part(&r2));
        if re_r2 > SHAPE_TOL * scale || (r3 - c(1.0)).norm() > SHAPE_TOL {
            return None;
        }
        let b = DVector::from_iterator(self.d, im_part(&r2).iter().map(|v| -v));
        Some(RankOne { a: self.r1(), b })
    }

    /// Number of basis elements `r`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of model parameters `d`.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> &[HermitianMatrix] {
        &self.basis
    }

    pub fn sigma(&self) -> &CMatrix {
        &self.sigma
    }

    /// `τ_{ij} = Tr ρ·Lⱼ·Dᵢ`, the first `d` columns of `Σ`.
    pub fn tau(&self) -> CMatrix {
        self.sigma.columns(0, self.d).into_owned()
    }

    /// `R = (Re Σ)⁻¹·Σ·(Re Σ)⁻¹`.
    pub fn r_matrix(&self) -> &CMatrix {
        &self.r
    }

    pub fn r1(&self) -> CMatrix {
        self.r.view((0, 0), (self.d, self.d)).into_owned()
    }

    /// Lower-left `(r−d)×d` block.
    pub fn r2(&self) -> CMatrix {
        let k = self.dim() - self.d;
        self.r.view((self.d, 0), (k, self.d)).into_owned()
    }

    pub fn r3(&self) -> CMatrix {
        let k = self.dim() - self.d;
        self.r.view((self.d, self.d), (k, k)).into_owned()
    }

    pub fn rank_one(&self) -> Option<&RankOne> {
        self.rank_one.as_ref()
    }

    pub fn re_sigma(&self) -> RMatrix {
        re_part(&self.sigma)
    }

    /// 𝒟-invariance residual of the span.
    pub fn invariance_residual(&self, m: &ModelPoint) -> Result<f64> {
        let q = orthonormalize(&self.basis, m.rho())?;
        invariance_residual(&q, m.rho())
    }

    /// The model on the same state whose SLDs are the basis elements, with
    /// tangents `½(ρDᵢ + Dᵢρ)`.
    pub fn supermodel(&self, m: &ModelPoint) -> Result<ModelPoint> {
        let rho = m.rho().as_matrix();
        let tangents = self
            .basis
            .iter()
            .map(|x| {
                let x = x.as_matrix();
                HermitianMatrix::from_hermitized((rho * x + x * rho) * c(0.5))
            })
            .collect();
        ModelPoint::new(m.rho().clone(), tangents, format!("{}~", m.label()))
    }
}

/// Closes the SLD span under 𝒟.
///
/// Images `𝒟(X)` are reduced against the current orthonormal frame; a
/// remainder longer than [`CLOSURE_TOL`]·‖X‖ is normalized and appended.
pub fn build_extension(m: &ModelPoint) -> Result<RExtension> {
    let rho = m.rho();
    let slds = sld_operators(m);
    let mut frame = orthonormalize(&slds, rho)?;
    let mut appended: Vec<HermitianMatrix> = Vec::new();
    let limit = m.dim() * m.dim() - 1;
    let mut queue: VecDeque<HermitianMatrix> = slds.iter().cloned().collect();
    while let Some(x) = queue.pop_front() {
        let scale = norm(&x, rho);
        let y = HermitianMatrix::from_hermitized(commutation_apply(rho, x.as_matrix())?);
        let w = orthogonal_part(&y, &frame, rho);
        let n = norm(&w, rho);
        if n > CLOSURE_TOL * scale {
            let e = HermitianMatrix::from_hermitized(w.as_matrix() / c(n));
            frame.push(e.clone());
            appended.push(e.clone());
            queue.push_back(e);
            if frame.len() > limit {
                return Err(Error::InternalError(format!(
                    "𝒟-closure exceeded {limit} dimensions"
                )));
            }
        }
    }
    let mut basis = slds;
    basis.extend(appended);
    let mut ext = RExtension::from_basis(m, basis.clone())?;
    // fix the sign of a one-dimensional extension so that b's leading entry is positive
    if let Some(ro) = ext.rank_one() {
        let tol = 1e-12 * ro.b.amax();
        if let Some(first) = ro.b.iter().find(|v| v.abs() > tol) {
            if *first < 0.0 {
                let last = basis.len() - 1;
                basis[last] = HermitianMatrix::from_hermitized(-basis[last].as_matrix().clone());
                ext = RExtension::from_basis(m, basis)?;
            }
        }
    }
    Ok(ext)
}

/// `A = J^(S)⁻¹ + i·Im J^(R)⁻¹` and `b` with `|b⟩⟨b| = J^(S)⁻¹ − Re J^(R)⁻¹`.
pub fn rank_one_params(ext: &RExtension, m: &ModelPoint) -> Result<RankOne> {
    if ext.dim() != ext.d() + 1 || ext.rank_one().is_none() {
        return Err(Error::InvalidInput(format!(
            "rank-one parameters need a one-dimensional extension, got r = {} and d = {}",
            ext.dim(),
            ext.d()
        )));
    }
    let s_inv = re_part(&fisher_sld(m).inverse()?);
    let r_inv = fisher_rld(m).inverse()?;
    let a = to_complex(&s_inv) + to_complex(&im_part(&r_inv)) * crate::matcore::I;
    let diff = &s_inv - re_part(&r_inv);
    let diff = (&diff + diff.transpose()) * 0.5;
    let eig = diff.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let d = order.len();
    let top = eig.eigenvalues[order[d - 1]];
    let tol = SHAPE_TOL * top.abs() + 1e-12 * s_inv.amax();
    let second = if d > 1 {
        eig.eigenvalues[order[d - 2]]
    } else {
        0.0
    };
    if second.abs() > tol || eig.eigenvalues[order[0]] < -tol {
        return Err(Error::NotRankOne { second });
    }
    let mut b = if top > tol {
        eig.eigenvectors.column(order[d - 1]) * top.sqrt()
    } else {
        DVector::zeros(d)
    };
    let lead = 1e-12 * b.amax();
    if let Some(first) = b.iter().find(|v| v.abs() > lead) {
        if *first < 0.0 {
            b = -b;
        }
    }
    Ok(RankOne { a, b })
}
