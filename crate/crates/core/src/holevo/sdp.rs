use nalgebra::{Cholesky, DVector};

use super::min_f::finish;
use super::{check_weight, HolevoSolution, RExtension};
use crate::error::{Error, Result};
use crate::matcore::{
    c, hermitian_sqrt, im_part, max_abs, re_part, CMatrix, HermitianMatrix, RMatrix, WeightMatrix,
};

const MU_START: f64 = 1.0;
const MU_END: f64 = 1e-10;
const MU_FACTOR: f64 = 0.1;
const STAGE_ITERATIONS: usize = 200;
const ARMIJO: f64 = 0.25;

/// `min Tr G·V` over real symmetric `V` and real `f` subject to
/// `[[V, (√R·E)†], [√R·E, I]] ≥ 0` with `E = (I; f)`, by a primal
/// log-barrier method.
struct Lmi {
    d: usize,
    k: usize,
    base: CMatrix,
    dirs: Vec<CMatrix>,
    cost: DVector<f64>,
}

impl Lmi {
    fn new(g: &WeightMatrix, ext: &RExtension) -> Result<Self> {
        let d = ext.d();
        let r = ext.dim();
        let k = r - d;
        let size = d + r;
        let w = hermitian_sqrt(&HermitianMatrix::new(ext.r_matrix().clone())?)?;
        let mut base = CMatrix::zeros(size, size);
        let w1 = w.columns(0, d).into_owned();
        base.view_mut((d, 0), (r, d)).copy_from(&w1);
        base.view_mut((0, d), (d, r)).copy_from(&w1.adjoint());
        base.view_mut((d, d), (r, r)).fill_with_identity();

        let mut dirs = Vec::new();
        let mut cost = Vec::new();
        for i in 0..d {
            for j in i..d {
                let mut a = CMatrix::zeros(size, size);
                a[(i, j)] = c(1.0);
                a[(j, i)] = c(1.0);
                dirs.push(a);
                cost.push(if i == j {
                    g.entries()[(i, i)]
                } else {
                    2.0 * g.entries()[(i, j)]
                });
            }
        }
        for row in 0..k {
            for j in 0..d {
                let mut a = CMatrix::zeros(size, size);
                let col = w.column(d + row);
                for t in 0..r {
                    a[(d + t, j)] = col[t];
                    a[(j, d + t)] = col[t].conj();
                }
                dirs.push(a);
                cost.push(0.0);
            }
        }
        Ok(Self {
            d,
            k,
            base,
            dirs,
            cost: DVector::from_vec(cost),
        })
    }

    fn nv(&self) -> usize {
        self.d * (self.d + 1) / 2
    }

    fn matrix(&self, x: &DVector<f64>) -> CMatrix {
        let mut m = self.base.clone();
        for (a, &v) in self.dirs.iter().zip(x.iter()) {
            m += a * c(v);
        }
        m
    }

    /// Barrier value `t·cᵀx − log det X`, or `None` outside the cone.
    fn barrier(
        &self,
        x: &DVector<f64>,
        t: f64,
    ) -> Option<(f64, Cholesky<num_complex::Complex64, nalgebra::Dyn>)> {
        let ch = Cholesky::new(self.matrix(x))?;
        // complex square roots accept negative pivots, so check them explicitly
        if ch
            .l_dirty()
            .diagonal()
            .iter()
            .any(|z| !(z.re > 0.0) || z.im.abs() > 1e-12 * z.re)
        {
            return None;
        }
        let logdet: f64 = ch
            .l_dirty()
            .diagonal()
            .iter()
            .map(|z| 2.0 * z.re.ln())
            .sum();
        Some((t * self.cost.dot(x) - logdet, ch))
    }

    fn v_of(&self, x: &DVector<f64>) -> RMatrix {
        let mut v = RMatrix::zeros(self.d, self.d);
        let mut p = 0;
        for i in 0..self.d {
            for j in i..self.d {
                v[(i, j)] = x[p];
                v[(j, i)] = x[p];
                p += 1;
            }
        }
        v
    }

    fn f_of(&self, x: &DVector<f64>) -> RMatrix {
        let nv = self.nv();
        RMatrix::from_fn(self.k, self.d, |i, j| x[nv + i * self.d + j])
    }
}

/// Solves `H·x = −g` with Jacobi scaling, shifting the diagonal if the
/// scaled matrix does not factor.
fn newton_step(hess: &RMatrix, grad: &DVector<f64>) -> Option<DVector<f64>> {
    let n = grad.len();
    let diag = hess.diagonal();
    if diag.iter().any(|v| !(*v > 0.0)) {
        return None;
    }
    let s = diag.map(|v| 1.0 / v.sqrt());
    let scaled = RMatrix::from_fn(n, n, |i, j| hess[(i, j)] * s[i] * s[j]);
    let rhs = grad.component_mul(&s);
    let mut shift = 0.0;
    for _ in 0..12 {
        let h = &scaled + RMatrix::identity(n, n) * shift;
        if let Some(ch) = Cholesky::new(h) {
            return Some(-ch.solve(&rhs).component_mul(&s));
        }
        shift = if shift == 0.0 { 1e-14 } else { shift * 10.0 };
    }
    None
}

/// Solves the Holevo bound as a semidefinite program.
pub fn holevo_sdp(g: &WeightMatrix, ext: &RExtension) -> Result<HolevoSolution> {
    check_weight(g, ext)?;
    let lmi = Lmi::new(g, ext)?;
    let n = lmi.dirs.len();

    let z0 = ext.r1();
    let lift = im_part(&z0).norm() + max_abs(&z0) * 1e-6 + 1.0;
    let v0 = re_part(&z0) + RMatrix::identity(lmi.d, lmi.d) * lift;
    let mut x = DVector::zeros(n);
    let mut p = 0;
    for i in 0..lmi.d {
        for j in i..lmi.d {
            x[p] = v0[(i, j)];
            p += 1;
        }
    }
    if lmi.barrier(&x, 1.0).is_none() {
        return Err(Error::NumericalFailure(
            "SDP starting point is infeasible".into(),
        ));
    }

    let mut iterations = 0;
    let mut mu = MU_START;
    while mu >= MU_END * 0.5 {
        let t = 1.0 / mu;
        for _ in 0..STAGE_ITERATIONS {
            iterations += 1;
            let (value, ch) = lmi.barrier(&x, t).expect("iterate stays feasible");
            let inv = ch.inverse();
            let b: Vec<CMatrix> = lmi.dirs.iter().map(|a| &inv * a).collect();
            let mut grad = DVector::zeros(n);
            let mut hess = RMatrix::zeros(n, n);
            for p in 0..n {
                grad[p] = t * lmi.cost[p] - b[p].trace().re;
                for q in p..n {
                    let h = (&b[p] * &b[q]).trace().re;
                    hess[(p, q)] = h;
                    hess[(q, p)] = h;
                }
            }
            let Some(dir) = newton_step(&hess, &grad) else {
                return Err(Error::NumericalFailure(format!(
                    "singular barrier Hessian at μ = {mu:e}"
                )));
            };
            let decrement = -grad.dot(&dir);
            if decrement < 1e-10 {
                break;
            }
            let mut s = 1.0;
            let mut moved = false;
            while s >= 1e-14 {
                let trial = &x + &dir * s;
                if let Some((v, _)) = lmi.barrier(&trial, t) {
                    if v <= value - ARMIJO * s * decrement {
                        x = trial;
                        moved = true;
                        break;
                    }
                }
                s *= 0.5;
            }
            if !moved {
                // rounding limits progress at this μ; the iterate is still strictly feasible
                break;
            }
        }
        mu *= MU_FACTOR;
    }

    let f = lmi.f_of(&x);
    let mut sol = finish(g, ext, f, iterations)?;
    let v = lmi.v_of(&x);
    let value = g.trace_with(&v);
    sol.value = value;
    sol.v_opt = v;
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holevo::{build_extension, holevo_min_f};
    use crate::model::{example_dim2, example_dim4};

    #[test]
    fn agrees_with_min_f_on_examples() {
        let g = WeightMatrix::identity(2);
        for m in [
            example_dim2(0.95, 0.2).unwrap(),
            example_dim4(0.95, 0.4).unwrap(),
        ] {
            let ext = build_extension(&m).unwrap();
            let a = holevo_sdp(&g, &ext).unwrap();
            let b = holevo_min_f(&g, &ext).unwrap();
            assert!(
                (a.value - b.value).abs() < 1e-6 * b.value,
                "{}: {} vs {}",
                m.label(),
                a.value,
                b.value
            );
        }
    }

    #[test]
    fn barrier_rejects_points_outside_the_cone() {
        let m = example_dim2(0.8, 0.3).unwrap();
        let ext = build_extension(&m).unwrap();
        let lmi = Lmi::new(&WeightMatrix::identity(2), &ext).unwrap();
        let mut x = DVector::zeros(lmi.dirs.len());
        x[0] = -1.0;
        x[2] = 5.0;
        assert!(lmi.barrier(&x, 1.0).is_none());
        x[0] = 5.0;
        assert!(lmi.barrier(&x, 1.0).is_some());
    }

    #[test]
    fn solution_is_feasible() {
        let m = example_dim2(0.8, 0.3).unwrap();
        let g = WeightMatrix::identity(2);
        let sol = holevo_sdp(&g, &build_extension(&m).unwrap()).unwrap();
        let gap = crate::matcore::to_complex(&sol.v_opt) - &sol.z_opt;
        let (vals, _) = crate::matcore::eig_hermitian(
            &HermitianMatrix::new(crate::matcore::hermitize(&gap)).unwrap(),
        )
        .unwrap();
        assert!(vals[0] > -1e-9);
    }
}
