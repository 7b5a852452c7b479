//! Scalar bounds on `Tr G·V` built from Fisher information matrices.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::logderiv::{fisher_beta, fisher_sld, sld_operators};
use crate::matcore::{
    im_part, re_part, to_complex, trace, weighted_abs_trace, CMatrix, WeightMatrix,
};
use crate::model::ModelPoint;

/// Number of grid points in [`max_beta_scan`].
pub const SCAN_POINTS: usize = 1001;
/// Golden-section refinement stops below this bracket width.
pub const SCAN_WIDTH: f64 = 1e-10;
/// Relative tolerance under which two objective values count as tied.
pub const TIE_TOL: f64 = 1e-12;

/// Result of maximizing `C^(β)` over `β ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxBeta {
    pub value: f64,
    pub beta_star: f64,
}

/// Branch taken by [`suzuki_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SuzukiBranch {
    /// `C^(R) ≥ (C^(Z) + C^(S))/2`: the bound is `C^(R)`.
    Rld,
    /// The interpolating branch.
    Interpolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuzukiBound {
    pub value: f64,
    pub branch: SuzukiBranch,
    pub c_z: f64,
}

pub(crate) fn check_weight(g: &WeightMatrix, m: &ModelPoint) -> Result<()> {
    if g.d() != m.d() {
        return Err(Error::InvalidWeight(format!(
            "weight is {}x{} but the model has {} parameters",
            g.d(),
            g.d(),
            m.d()
        )));
    }
    Ok(())
}

/// `Tr G·Re Z + Tr|√G·Im Z·√G|` for a Hermitian `Z`.
pub fn weighted_bound(g: &WeightMatrix, z: &CMatrix) -> Result<f64> {
    let abs = weighted_abs_trace(g, &to_complex(&im_part(z)))?;
    Ok(g.trace_with(&re_part(z)) + abs)
}

/// `C^(S) = Tr G·J^(S)⁻¹`.
pub fn bound_sld(g: &WeightMatrix, m: &ModelPoint) -> Result<f64> {
    check_weight(g, m)?;
    let inv = fisher_sld(m).inverse()?;
    Ok(g.trace_with(&re_part(&inv)))
}

/// `C^(β) = Tr G·Re J^(β)⁻¹ + Tr|√G·Im J^(β)⁻¹·√G|`.
pub fn bound_beta(g: &WeightMatrix, m: &ModelPoint, beta: f64) -> Result<f64> {
    check_weight(g, m)?;
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidInput(format!("β = {beta} outside [0, 1]")));
    }
    let inv = fisher_beta(m, beta)?.inverse()?;
    weighted_bound(g, &inv)
}

/// `C^(R)`, the β = 1 bound.
pub fn bound_rld(g: &WeightMatrix, m: &ModelPoint) -> Result<f64> {
    bound_beta(g, m, 1.0)
}

/// `2·C^(S)`, an upper bound on the Holevo bound.
pub fn upper_bound_2sld(g: &WeightMatrix, m: &ModelPoint) -> Result<f64> {
    Ok(2.0 * bound_sld(g, m)?)
}

fn better(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    // (β, value); larger value wins, near-ties go to larger β
    let tol = TIE_TOL * a.1.abs().max(b.1.abs()).max(1.0);
    if (a.1 - b.1).abs() <= tol {
        if a.0 >= b.0 {
            a
        } else {
            b
        }
    } else if a.1 > b.1 {
        a
    } else {
        b
    }
}

/// Maximizes `C^(β)` by a dense grid followed by golden-section refinement of
/// the best cell. Ties resolve to the largest β.
pub fn max_beta_scan(g: &WeightMatrix, m: &ModelPoint) -> Result<MaxBeta> {
    check_weight(g, m)?;
    let f = |beta: f64| bound_beta(g, m, beta);
    let step = 1.0 / (SCAN_POINTS - 1) as f64;
    let grid = (0..SCAN_POINTS)
        .map(|k| {
            let beta = if k + 1 == SCAN_POINTS {
                1.0
            } else {
                k as f64 * step
            };
            f(beta).map(|v| (beta, v))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best_k = 0;
    for k in 1..grid.len() {
        if better(grid[k], grid[best_k]) == grid[k] {
            best_k = k;
        }
    }
    let lo = grid[best_k.saturating_sub(1)];
    let hi = grid[(best_k + 1).min(grid.len() - 1)];
    let mut best = grid[best_k];

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo.0, hi.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > SCAN_WIDTH {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
        }
    }
    let mid = 0.5 * (a + b);
    for candidate in [(x1, f1), (x2, f2), (mid, f(mid)?), lo, hi] {
        best = better(candidate, best);
    }
    Ok(MaxBeta {
        value: best.1,
        beta_star: best.0,
    })
}

/// `C^(β) = Tr G·Re A + β·Tr|√G·Im A·√G| − β²⟨b|G|b⟩` for a rank-one extension.
pub fn rank_one_beta_bound(
    g: &WeightMatrix,
    a: &CMatrix,
    b: &DVector<f64>,
    beta: f64,
) -> Result<f64> {
    let t = weighted_abs_trace(g, &to_complex(&im_part(a)))?;
    let bgb = (g.entries() * b).dot(b);
    Ok(g.trace_with(&re_part(a)) + beta * t - beta * beta * bgb)
}

/// Maximum of `C^(β)` over `[0, 1]` from the rank-one parameters `(A, b)`.
pub fn max_beta_closed_form(g: &WeightMatrix, a: &CMatrix, b: &DVector<f64>) -> Result<MaxBeta> {
    if a.nrows() != g.d() || b.len() != g.d() {
        return Err(Error::InvalidInput(format!(
            "A is {}x{} and b has {} entries, weight is {}x{}",
            a.nrows(),
            a.ncols(),
            b.len(),
            g.d(),
            g.d()
        )));
    }
    let t = weighted_abs_trace(g, &to_complex(&im_part(a)))?;
    let bgb = (g.entries() * b).dot(b);
    let base = g.trace_with(&re_part(a));
    let beta_hat = if b.iter().all(|&x| x == 0.0) || bgb <= 0.0 {
        f64::INFINITY
    } else {
        t / (2.0 * bgb)
    };
    let value = if beta_hat >= 1.0 {
        base + t - bgb.max(0.0)
    } else {
        base + t * t / (4.0 * bgb)
    };
    Ok(MaxBeta {
        value,
        beta_star: beta_hat.min(1.0),
    })
}

/// `Z_{ij} = Tr ρ·Xⱼ·Xᵢ` for the dual SLD observables `Xᵢ = Σⱼ (J^(S)⁻¹)ⱼᵢ Lⱼ`.
pub fn sld_dual_z(m: &ModelPoint) -> Result<CMatrix> {
    let jinv = to_complex(&re_part(&fisher_sld(m).inverse()?));
    let l = sld_operators(m);
    let rho = m.rho().as_matrix();
    let d = m.d();
    let raw = CMatrix::from_fn(d, d, |i, j| {
        trace(&(rho * l[j].as_matrix() * l[i].as_matrix()))
    });
    Ok(&jinv * raw * &jinv)
}

/// Explicit Holevo bound for two-parameter qubit models.
pub fn suzuki_bound(g: &WeightMatrix, m: &ModelPoint) -> Result<SuzukiBound> {
    if m.dim() != 2 || m.d() != 2 {
        return Err(Error::InvalidInput(format!(
            "the explicit formula needs a qubit with two parameters, got dim {} and d {}",
            m.dim(),
            m.d()
        )));
    }
    check_weight(g, m)?;
    let c_s = bound_sld(g, m)?;
    let c_r = bound_rld(g, m)?;
    let c_z = weighted_bound(g, &sld_dual_z(m)?)?;
    let mid = 0.5 * (c_z + c_s);
    // the branches meet continuously at c_r = mid
    if c_r >= mid - TIE_TOL * mid.abs().max(1.0) {
        return Ok(SuzukiBound {
            value: c_r,
            branch: SuzukiBranch::Rld,
            c_z,
        });
    }
    let gap = c_z - c_r;
    if !(gap > f64::EPSILON * c_z.abs().max(1.0)) {
        return Err(Error::DegenerateCase(format!(
            "C^(Z) = C^(R) = {c_r} on the interpolating branch"
        )));
    }
    Ok(SuzukiBound {
        value: c_r + (mid - c_r).powi(2) / gap,
        branch: SuzukiBranch::Interpolated,
        c_z,
    })
}
