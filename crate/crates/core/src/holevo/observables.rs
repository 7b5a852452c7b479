use nalgebra::DVector;

use super::{check_weight, RExtension};
use crate::bounds::max_beta_closed_form;
use crate::error::{Error, Result};
use crate::matcore::{c, im_part, CMatrix, HermitianMatrix, RMatrix, WeightMatrix};
use crate::model::ModelPoint;

/// `Bᵢ = Σⱼ Fⱼᵢ·Dⱼ` with `F = (Re Σ)⁻¹·(I; f)`.
pub fn observables_from_f(ext: &RExtension, f: &RMatrix) -> Result<Vec<HermitianMatrix>> {
    let d = ext.d();
    let r = ext.dim();
    if f.nrows() != r - d || f.ncols() != d {
        return Err(Error::InvalidInput(format!(
            "f must be {}x{d}, got {}x{}",
            r - d,
            f.nrows(),
            f.ncols()
        )));
    }
    let mut e = RMatrix::zeros(r, d);
    e.view_mut((0, 0), (d, d)).fill_with_identity();
    e.view_mut((d, 0), (r - d, d)).copy_from(f);
    let re_inv = ext
        .re_sigma()
        .try_inverse()
        .ok_or_else(|| Error::DegenerateModel("singular extended Gram matrix".into()))?;
    let coeffs = re_inv * e;
    let dim = ext.basis()[0].dim();
    Ok((0..d)
        .map(|i| {
            let mut b = CMatrix::zeros(dim, dim);
            for (j, x) in ext.basis().iter().enumerate() {
                b += x.as_matrix() * c(coeffs[(j, i)]);
            }
            HermitianMatrix::from_hermitized(b)
        })
        .collect())
}

/// Observables attaining the Holevo bound.
///
/// For a 𝒟-invariant SLD span these are the SLD duals. For a two-parameter
/// model with a one-dimensional extension, `f = sgn(a)·β*·√G⁻¹·J·√G·b` with
/// `J = [[0, −1], [1, 0]]` and `a = (√G·Im A·√G)₂₁`.
pub fn optimal_observables(
    m: &ModelPoint,
    g: &WeightMatrix,
    ext: &RExtension,
) -> Result<Vec<HermitianMatrix>> {
    check_weight(g, ext)?;
    let d = ext.d();
    if m.d() != d || m.dim() != ext.basis()[0].dim() {
        return Err(Error::InvalidInput(
            "extension was built for a different model".into(),
        ));
    }
    if ext.dim() == d {
        return observables_from_f(ext, &RMatrix::zeros(0, d));
    }
    let rank_one = match ext.rank_one() {
        Some(ro) if d == 2 && ext.dim() == 3 => ro,
        _ => {
            return Err(Error::InvalidInput(format!(
                "explicit observables need d = 2 and r = 3, got d = {d} and r = {}",
                ext.dim()
            )))
        }
    };
    let beta = max_beta_closed_form(g, &rank_one.a, &rank_one.b)?.beta_star;
    let weighted = g.sqrt() * im_part(&rank_one.a) * g.sqrt();
    let sign = if weighted[(1, 0)] < 0.0 { -1.0 } else { 1.0 };
    let rot = RMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let fv: DVector<f64> = g.inv_sqrt() * rot * g.sqrt() * &rank_one.b * (sign * beta);
    let f = RMatrix::from_row_slice(1, 2, fv.as_slice());
    observables_from_f(ext, &f)
}
