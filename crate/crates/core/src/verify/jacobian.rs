//! Direct Jacobian determinants of the linear maps X ↦ AXB and X ↦ AXA*,
//! computed on real coordinates and compared with their closed forms.

use nalgebra::DMatrix;

use super::CheckReport;
use crate::error::{Error, Result};
use crate::linalg::{log_det_gram, AlgMatrix};
use crate::model::{hermitian_coordinates, hermitian_from_coordinates};
use crate::specfun::{ln_gamma, log_stiefel_volume};
use crate::linalg::Algebra;

/// Real matrix of a linear map given its action on coordinate vectors.
fn coordinate_matrix(dim: usize, map: impl Fn(&[f64]) -> Result<Vec<f64>>) -> Result<DMatrix<f64>> {
    let mut out = DMatrix::zeros(dim, dim);
    let mut e = vec![0.0; dim];
    for j in 0..dim {
        e[j] = 1.0;
        let col = map(&e)?;
        e[j] = 0.0;
        for (i, v) in col.into_iter().enumerate() {
            out[(i, j)] = v;
        }
    }
    Ok(out)
}

fn ratio_report(name: String, log_direct: f64, log_target: f64, tol: f64, detail: String) -> CheckReport {
    let ratio = (log_direct - log_target).exp();
    CheckReport::new(name, ratio, 1.0, tol, 1, format!("{detail}; log|det| = {log_direct:.12}, log target = {log_target:.12}"))
}

/// log |det| of the real matrix of X ↦ AXB on n×m matrices, and the target
/// log(|A*A|^{mβ/2}·|B*B|^{nβ/2}).
pub fn linear_jacobian(a: &AlgMatrix, b: &AlgMatrix) -> Result<(f64, f64)> {
    let (n, m) = (a.rows(), b.rows());
    if !a.is_square() || !b.is_square() || a.algebra() != b.algebra() {
        return Err(Error::Shape("A and B must be square over the same algebra".into()));
    }
    let alg = a.algebra();
    let beta = alg.beta_f64();
    let dim = alg.beta() as usize * n * m;
    let jm = coordinate_matrix(dim, |x| Ok(a.matmul(&AlgMatrix::from_coords(n, m, alg, x)?)?.matmul(b)?.coords()))?;
    let det = jm.determinant().abs();
    if det == 0.0 {
        return Err(Error::SingularTransform);
    }
    let target = m as f64 * beta / 2.0 * log_det_gram(a)? + n as f64 * beta / 2.0 * log_det_gram(b)?;
    Ok((det.ln(), target))
}

pub fn check_jacobian_linear(a: &AlgMatrix, b: &AlgMatrix, tol: f64) -> Result<CheckReport> {
    let (direct, target) = linear_jacobian(a, b)?;
    Ok(ratio_report(
        format!("jacobian-linear n={} m={} beta={}", a.rows(), b.rows(), a.beta()),
        direct,
        target,
        tol,
        "det(X -> AXB) / |A*A|^{m beta/2}|B*B|^{n beta/2}".into(),
    ))
}

/// log |det| of X ↦ AXA* on self-adjoint m×m matrices, and the target
/// log |A*A|^{(m−1)β/2+1}.
pub fn symmetric_jacobian(a: &AlgMatrix) -> Result<(f64, f64)> {
    if !a.is_square() {
        return Err(Error::Shape("A must be square".into()));
    }
    let m = a.rows();
    let alg = a.algebra();
    let beta = alg.beta_f64();
    let dim = m + alg.beta() as usize * m * (m - 1) / 2;
    let adj = a.adjoint();
    let jm = coordinate_matrix(dim, |x| {
        let h = hermitian_from_coordinates(m, alg, x)?;
        Ok(hermitian_coordinates(&a.matmul(&h)?.matmul(&adj)?))
    })?;
    let det = jm.determinant().abs();
    if det == 0.0 {
        return Err(Error::SingularTransform);
    }
    Ok((det.ln(), ((m as f64 - 1.0) * beta / 2.0 + 1.0) * log_det_gram(a)?))
}

pub fn check_jacobian_symmetric(a: &AlgMatrix, tol: f64) -> Result<CheckReport> {
    let (direct, target) = symmetric_jacobian(a)?;
    Ok(ratio_report(
        format!("jacobian-symmetric m={} beta={}", a.rows(), a.beta()),
        direct,
        target,
        tol,
        "det(X -> AXA*) / |A*A|^{(m-1)beta/2+1}".into(),
    ))
}

/// Vol(V_{1,n}^β) against the area 2π^{βn/2}/Γ(βn/2) of the unit sphere in ℝ^{βn}.
pub fn check_stiefel_sphere(n: usize, alg: Algebra, tol: f64) -> Result<CheckReport> {
    let d = alg.beta_f64() * n as f64;
    let sphere = std::f64::consts::LN_2 + d / 2.0 * std::f64::consts::PI.ln() - ln_gamma(d / 2.0);
    let vol = log_stiefel_volume(n, 1, alg)?;
    Ok(ratio_report(
        format!("stiefel-sphere n={n} beta={}", alg.beta()),
        vol,
        sphere,
        tol,
        format!("Vol(V_(1,{n})) / area(S^{})", d as usize - 1),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_examples() {
        let i2 = AlgMatrix::identity(2, Algebra::Real).unwrap();
        let (d, t) = linear_jacobian(&i2, &i2).unwrap();
        assert!(d.abs() < 1e-15 && t.abs() < 1e-15);
        let a = i2.scale(2.0);
        let b = AlgMatrix::identity(1, Algebra::Real).unwrap();
        let (d, t) = linear_jacobian(&a, &b).unwrap();
        assert!((d - 4f64.ln()).abs() < 1e-12 && (t - 4f64.ln()).abs() < 1e-12);
        let a = AlgMatrix::diag(&[2.0, 3.0], Algebra::Real).unwrap();
        let (d, t) = symmetric_jacobian(&a).unwrap();
        assert!((d - 216f64.ln()).abs() < 1e-12 && (t - 216f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn singular_transform_is_reported() {
        let z = AlgMatrix::zeros(2, 2, Algebra::Complex).unwrap();
        assert_eq!(symmetric_jacobian(&z), Err(Error::SingularTransform));
    }
}
