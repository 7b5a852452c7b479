use super::ModelPoint;
use crate::error::{Error, Result};
use crate::matcore::{c, pauli, CMatrix, DensityMatrix, HermitianMatrix};

fn check_params(a: f64, r: f64) -> Result<()> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidInput(format!(
            "a must lie in (0, 1), got {a}"
        )));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidInput(format!(
            "r must lie in [0, 1), got {r}"
        )));
    }
    Ok(())
}

/// `v·σ` for a real 3-vector.
fn bloch(v: [f64; 3]) -> CMatrix {
    pauli(1) * c(v[0]) + pauli(2) * c(v[1]) + pauli(3) * c(v[2])
}

fn unit_direction(theta: [f64; 2]) -> Result<(f64, [f64; 3])> {
    let norm = theta[0].hypot(theta[1]);
    if !(norm < 1.0) {
        return Err(Error::InvalidInput(format!(
            "|θ| must be below 1, got {norm}"
        )));
    }
    Ok((norm, [theta[0], theta[1], (1.0 - norm * norm).sqrt()]))
}

/// Qubit family `½(I + a(1−|θ|)·n(θ)·σ)` with `n(θ) = (θ¹, θ², √(1−|θ|²))`.
pub fn dim2_state(a: f64, theta: [f64; 2]) -> Result<DensityMatrix> {
    let (norm, n) = unit_direction(theta)?;
    let len = a * (1.0 - norm);
    let m = (pauli(0) + bloch(n.map(|x| len * x))) * c(0.5);
    DensityMatrix::from_matrix(m)
}

/// Two-qubit family `c·P⊗P + (1−c)·I/4` with `c = a(1−|θ|)` and `P = ½(I + n(θ)·σ)`.
pub fn dim4_state(a: f64, theta: [f64; 2]) -> Result<DensityMatrix> {
    let (norm, n) = unit_direction(theta)?;
    let weight = a * (1.0 - norm);
    let p = (pauli(0) + bloch(n)) * c(0.5);
    let m = p.kronecker(&p) * c(weight) + CMatrix::identity(4, 4) * c((1.0 - weight) / 4.0);
    DensityMatrix::from_matrix(m)
}

/// Qubit family of [`dim2_state`] at `θ = (r, 0)` with exact tangents.
///
/// At `r = 0` the derivative of `|θ|` along `θ¹` is taken one-sided (= 1).
pub fn example_dim2(a: f64, r: f64) -> Result<ModelPoint> {
    check_params(a, r)?;
    let rho = dim2_state(a, [r, 0.0])?;
    let s = (1.0 - r * r).sqrt();
    let len = a * (1.0 - r);
    let d1 = [-a * r + len, 0.0, -a * s - len * r / s];
    let d2 = [0.0, len, 0.0];
    let tangents = [d1, d2]
        .map(|v| HermitianMatrix::from_hermitized(bloch(v) * c(0.5)))
        .to_vec();
    ModelPoint::new(rho, tangents, format!("dim2(a={a}, r={r})"))
}

/// Two-qubit family of [`dim4_state`] at `θ = (r, 0)` with exact tangents.
pub fn example_dim4(a: f64, r: f64) -> Result<ModelPoint> {
    check_params(a, r)?;
    let rho = dim4_state(a, [r, 0.0])?;
    let s = (1.0 - r * r).sqrt();
    let weight = a * (1.0 - r);
    let p = (pauli(0) + bloch([r, 0.0, s])) * c(0.5);
    let dp1 = bloch([1.0, 0.0, -r / s]) * c(0.5);
    let dp2 = pauli(2) * c(0.5);
    let quarter = CMatrix::identity(4, 4) * c(0.25);
    let pp = p.kronecker(&p);
    let leibniz = |dp: &CMatrix| dp.kronecker(&p) + p.kronecker(dp);
    let d1 = (&pp - &quarter) * c(-a) + leibniz(&dp1) * c(weight);
    let d2 = leibniz(&dp2) * c(weight);
    let tangents = vec![
        HermitianMatrix::from_hermitized(d1),
        HermitianMatrix::from_hermitized(d2),
    ];
    ModelPoint::new(rho, tangents, format!("dim4(a={a}, r={r})"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::max_abs;
    use crate::model::{numeric_tangents, DEFAULT_STEP};

    #[test]
    fn dim2_at_origin_is_diagonal() {
        let m = example_dim2(0.95, 0.0).unwrap();
        let rho = m.rho().as_matrix();
        assert!((rho[(0, 0)].re - 0.975).abs() < 1e-15);
        assert!((rho[(1, 1)].re - 0.025).abs() < 1e-15);
        assert!(rho[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn dim2_spectrum() {
        for &(a, r) in &[(0.95, 0.3), (0.5, 0.0), (0.2, 0.9)] {
            let m = example_dim2(a, r).unwrap();
            assert!((m.rho().min_eigenvalue() - (1.0 - a * (1.0 - r)) / 2.0).abs() < 1e-13);
            for t in m.tangents() {
                assert!(t.trace().abs() < 1e-15);
            }
        }
    }

    #[test]
    fn dim4_is_valid_and_symmetric_at_origin() {
        let m = example_dim4(0.95, 0.0).unwrap();
        assert_eq!(m.dim(), 4);
        assert!((m.rho().as_hermitian().trace() - 1.0).abs() < 1e-14);
        assert!(m.rho().min_eigenvalue() > 0.0);
        let zz = pauli(3).kronecker(&pauli(3));
        let rho = m.rho().as_matrix();
        assert!(max_abs(&(rho * &zz - &zz * rho)) < 1e-15);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(example_dim2(1.0, 0.3).is_err());
        assert!(example_dim2(0.5, 1.0).is_err());
        assert!(example_dim4(0.0, 0.3).is_err());
        assert!(example_dim4(0.5, -0.1).is_err());
    }

    fn tangent_error(m: &ModelPoint, n: &ModelPoint) -> f64 {
        m.tangents()
            .iter()
            .zip(n.tangents())
            .map(|(a, b)| max_abs(&(a.as_matrix() - b.as_matrix())))
            .fold(0.0, f64::max)
    }

    #[test]
    fn analytic_tangents_match_finite_differences() {
        for &r in &[0.1, 0.3, 0.7] {
            let exact = example_dim2(0.95, r).unwrap();
            let num = numeric_tangents(|t| dim2_state(0.95, [t[0], t[1]]), &[r, 0.0], DEFAULT_STEP)
                .unwrap();
            assert!(tangent_error(&exact, &num) < 1e-8, "dim2 r={r}");
            let exact = example_dim4(0.95, r).unwrap();
            let num = numeric_tangents(|t| dim4_state(0.95, [t[0], t[1]]), &[r, 0.0], DEFAULT_STEP)
                .unwrap();
            assert!(tangent_error(&exact, &num) < 1e-8, "dim4 r={r}");
        }
    }

    #[test]
    fn finite_differences_converge_quadratically() {
        let exact = example_dim2(0.95, 0.4).unwrap();
        let err = |h: f64| {
            let num = numeric_tangents(|t| dim2_state(0.95, [t[0], t[1]]), &[0.4, 0.0], h).unwrap();
            tangent_error(&exact, &num)
        };
        let ratio = err(1e-2) / err(5e-3);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }
}
