use nalgebra::{Cholesky, DVector};

use super::{check_weight, observables_from_f, HolevoSolution, RExtension};
use crate::bounds::weighted_bound;
use crate::error::{Error, Result};
use crate::matcore::{
    im_part, max_abs, min_real_cov, re_part, to_complex, CMatrix, RMatrix, WeightMatrix,
};

/// Smoothing levels relative to the squared scale of `√G·R·√G`.
const SMOOTHING: [f64; 6] = [1e-2, 1e-4, 1e-6, 1e-9, 1e-12, 1e-16];
const MAX_ITERATIONS: usize = 10_000;
const STAGE_ITERATIONS: usize = 500;
const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-12;

/// `Z(f) = R₁ + R₂†f + fᵀR₂ + fᵀR₃f`.
pub fn z_of_f(ext: &RExtension, f: &RMatrix) -> CMatrix {
    let r1 = ext.r1();
    if ext.dim() == ext.d() {
        return r1;
    }
    let (r2, r3) = (ext.r2(), ext.r3());
    let fc = to_complex(f);
    let z = r1 + r2.adjoint() * &fc + fc.transpose() * &r2 + fc.transpose() * r3 * &fc;
    (&z + z.adjoint()) * crate::matcore::c(0.5)
}

/// The Holevo function `Tr G·Re Z(f) + Tr|√G·Im Z(f)·√G|`.
pub fn holevo_objective(g: &WeightMatrix, ext: &RExtension, f: &RMatrix) -> Result<f64> {
    check_weight(g, ext)?;
    weighted_bound(g, &z_of_f(ext, f))
}

struct Smoothed<'a> {
    g: &'a WeightMatrix,
    d: usize,
    k: usize,
    r2: CMatrix,
    r3: CMatrix,
    ext: &'a RExtension,
}

struct Local {
    value: f64,
    grad: DVector<f64>,
    hess: RMatrix,
}

fn unit(k: usize, d: usize, p: usize) -> CMatrix {
    let mut e = CMatrix::zeros(k, d);
    e[(p / d, p % d)] = crate::matcore::c(1.0);
    e
}

/// Second divided difference of `√(x+ε)`, written without cancellation.
fn divided(x: f64, y: f64, eps: f64) -> f64 {
    let (a, b) = ((x + eps).sqrt(), (y + eps).sqrt());
    -0.5 / (a * b * (a + b))
}

impl Smoothed<'_> {
    fn to_f(&self, x: &DVector<f64>) -> RMatrix {
        RMatrix::from_fn(self.k, self.d, |i, j| x[i * self.d + j])
    }

    fn weighted_im(&self, z: &CMatrix) -> RMatrix {
        self.g.sqrt() * im_part(z) * self.g.sqrt()
    }

    fn value(&self, x: &DVector<f64>, eps: f64) -> f64 {
        let z = z_of_f(self.ext, &self.to_f(x));
        let m = self.weighted_im(&z);
        let s = m.transpose() * &m;
        let mu = s.symmetric_eigenvalues();
        self.g.trace_with(&re_part(&z)) + mu.iter().map(|v| (v.max(0.0) + eps).sqrt()).sum::<f64>()
    }

    fn local(&self, x: &DVector<f64>, eps: f64) -> Local {
        let n = self.k * self.d;
        let f = to_complex(&self.to_f(x));
        let z = z_of_f(self.ext, &self.to_f(x));
        let m = self.weighted_im(&z);
        let s = m.transpose() * &m;
        let eig = s.symmetric_eigen();
        let mu = eig.eigenvalues.map(|v| v.max(0.0));
        let q = &eig.eigenvectors;
        let first = mu.map(|v| 0.5 / (v + eps).sqrt());
        let w = q * RMatrix::from_diagonal(&first) * q.transpose();
        let value =
            self.g.trace_with(&re_part(&z)) + mu.iter().map(|v| (v + eps).sqrt()).sum::<f64>();

        let kmat = &self.r2 + &self.r3 * &f;
        let units: Vec<CMatrix> = (0..n).map(|p| unit(self.k, self.d, p)).collect();
        let dz: Vec<CMatrix> = units
            .iter()
            .map(|e| kmat.adjoint() * e + e.transpose() * &kmat)
            .collect();
        let dm: Vec<RMatrix> = dz.iter().map(|z| self.weighted_im(z)).collect();
        let ds: Vec<RMatrix> = dm
            .iter()
            .map(|x| q.transpose() * (x.transpose() * &m + m.transpose() * x) * q)
            .collect();

        let mut grad = DVector::zeros(n);
        let mut hess = RMatrix::zeros(n, n);
        for p in 0..n {
            grad[p] = self.g.trace_with(&re_part(&dz[p]))
                + (0..self.d).map(|i| first[i] * ds[p][(i, i)]).sum::<f64>();
            for qi in p..n {
                let d2z = units[p].transpose() * &self.r3 * &units[qi]
                    + units[qi].transpose() * &self.r3 * &units[p];
                let d2m = self.weighted_im(&d2z);
                let d2s = dm[p].transpose() * &dm[qi]
                    + dm[qi].transpose() * &dm[p]
                    + m.transpose() * &d2m
                    + d2m.transpose() * &m;
                let mut h = self.g.trace_with(&re_part(&d2z)) + (&w * d2s).trace();
                for a in 0..self.d {
                    for b in 0..self.d {
                        h += divided(mu[a], mu[b], eps) * ds[p][(a, b)] * ds[qi][(a, b)];
                    }
                }
                hess[(p, qi)] = h;
                hess[(qi, p)] = h;
            }
        }
        Local { value, grad, hess }
    }
}

/// Newton direction, shifting the Hessian until it factors.
fn newton_direction(local: &Local) -> Option<DVector<f64>> {
    let n = local.grad.len();
    let scale = local.hess.amax().max(1e-300);
    let mut shift = 0.0;
    for _ in 0..40 {
        let h = &local.hess + RMatrix::identity(n, n) * shift;
        if let Some(ch) = Cholesky::new(h) {
            return Some(-ch.solve(&local.grad));
        }
        shift = if shift == 0.0 {
            1e-14 * scale
        } else {
            shift * 10.0
        };
    }
    None
}

/// Minimizes the Holevo function over `f` by Newton's method on the
/// smoothed objective `Tr G·Re Z + Σₖ √(μₖ + ε)`, where `μₖ` are the
/// eigenvalues of `MᵀM` with `M = √G·Im Z·√G`, lowering `ε` in stages.
///
/// The returned value is the exact objective at the best stage iterate.
pub fn holevo_min_f(g: &WeightMatrix, ext: &RExtension) -> Result<HolevoSolution> {
    check_weight(g, ext)?;
    let d = ext.d();
    let k = ext.dim() - d;
    if k == 0 {
        return finish(g, ext, RMatrix::zeros(0, d), 0);
    }
    let problem = Smoothed {
        g,
        d,
        k,
        r2: ext.r2(),
        r3: ext.r3(),
        ext,
    };
    let scale = (max_abs(ext.r_matrix()) * g.entries().amax()).max(1e-300);

    // the SLD point −(Re R₃)⁻¹·Re R₂, zero for an orthogonal extension
    let re_r3 = re_part(&problem.r3);
    let start = re_r3
        .clone()
        .cholesky()
        .map(|ch| -ch.solve(&re_part(&problem.r2)))
        .unwrap_or_else(|| RMatrix::zeros(k, d));
    let mut x = DVector::from_fn(k * d, |p, _| start[(p / d, p % d)]);

    let mut best = (holevo_objective(g, ext, &problem.to_f(&x))?, x.clone());
    let mut iterations = 0;
    for &level in &SMOOTHING {
        let eps = level * scale * scale;
        for _ in 0..STAGE_ITERATIONS {
            iterations += 1;
            if iterations > MAX_ITERATIONS {
                return Err(Error::NumericalFailure(format!(
                    "Holevo minimization did not converge in {MAX_ITERATIONS} iterations (best value {})",
                    best.0
                )));
            }
            let local = problem.local(&x, eps);
            if !local.value.is_finite() || local.grad.iter().any(|v| !v.is_finite()) {
                return Err(Error::NumericalFailure(
                    "non-finite value in Holevo minimization".into(),
                ));
            }
            let Some(dir) = newton_direction(&local) else {
                break;
            };
            let decrement = -local.grad.dot(&dir);
            if !(decrement > 1e-22 * scale) {
                break;
            }
            let mut t = 1.0;
            let mut moved = false;
            while t >= MIN_STEP {
                let trial = &x + &dir * t;
                if problem.value(&trial, eps) <= local.value - ARMIJO * t * decrement {
                    x = trial;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if !moved {
                break;
            }
        }
        let exact = holevo_objective(g, ext, &problem.to_f(&x))?;
        if exact < best.0 {
            best = (exact, x.clone());
        }
    }
    finish(g, ext, problem.to_f(&best.1), iterations)
}

pub(super) fn finish(
    g: &WeightMatrix,
    ext: &RExtension,
    f: RMatrix,
    iterations: usize,
) -> Result<HolevoSolution> {
    let z = z_of_f(ext, &f);
    let cov = min_real_cov(g, &z)?;
    Ok(HolevoSolution {
        value: cov.value,
        observables: observables_from_f(ext, &f)?,
        f_opt: f,
        z_opt: z,
        v_opt: cov.v_star,
        iterations,
    })
}
