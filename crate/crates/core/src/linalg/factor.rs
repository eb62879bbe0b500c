use nalgebra::{DMatrix, SymmetricEigen};

use super::matrix::{AlgMatrix, HermitianPD, UpperTriangular};
use super::scalar::Quat;
use crate::error::{Error, Result};

/// Upper Cholesky factorization A = T*·T of a self-adjoint matrix.
///
/// A pivot t_ii² at or below `rel_tol · max_i a_ii` is rejected; parameter
/// matrices use `PIVOT_TOLERANCE`.
pub(crate) fn cholesky_with_tolerance(a: &AlgMatrix, rel_tol: f64) -> Result<UpperTriangular> {
    let m = a.rows();
    let max_diag = (0..m).map(|i| a[(i, i)].re).fold(f64::NEG_INFINITY, f64::max);
    let tol = rel_tol * max_diag.max(0.0);
    let mut t = AlgMatrix::zeros(m, m, a.algebra())?;
    for i in 0..m {
        let mut pivot = a[(i, i)].re;
        for k in 0..i {
            pivot -= t[(k, i)].norm_sqr();
        }
        if !(pivot > tol) || !pivot.is_finite() {
            return Err(Error::NotPositiveDefinite { index: i, pivot, tol });
        }
        let d = pivot.sqrt();
        t[(i, i)] = Quat::real(d);
        for j in (i + 1)..m {
            let mut acc = a[(i, j)];
            for k in 0..i {
                acc -= t[(k, i)].conj() * t[(k, j)];
            }
            t[(i, j)] = acc.scale(1.0 / d);
        }
    }
    Ok(UpperTriangular::new_unchecked(t))
}

/// Cholesky pivots of X*·X, read off a Gram–Schmidt QR of the n×m matrix X
/// (two orthogonalization passes). Unlike factoring the Gram matrix, this
/// keeps small pivots accurate relative to ‖X‖.
pub fn gram_pivots(x: &AlgMatrix) -> Result<Vec<f64>> {
    let (n, m) = x.shape();
    let mut cols: Vec<Vec<Quat>> = (0..m).map(|j| (0..n).map(|i| x[(i, j)]).collect()).collect();
    let mut pivots = Vec::with_capacity(m);
    for j in 0..m {
        let (done, rest) = cols.split_at_mut(j);
        let v = &mut rest[0];
        for _ in 0..2 {
            for q in done.iter() {
                let mut r = Quat::ZERO;
                for (qi, vi) in q.iter().zip(v.iter()) {
                    r += qi.conj() * *vi;
                }
                for (qi, vi) in q.iter().zip(v.iter_mut()) {
                    *vi -= *qi * r;
                }
            }
        }
        let norm_sqr: f64 = v.iter().map(|e| e.norm_sqr()).sum();
        if !(norm_sqr > 0.0) || !norm_sqr.is_finite() {
            return Err(Error::NotPositiveDefinite { index: j, pivot: norm_sqr, tol: 0.0 });
        }
        let inv = 1.0 / norm_sqr.sqrt();
        v.iter_mut().for_each(|e| *e = e.scale(inv));
        pivots.push(norm_sqr);
    }
    Ok(pivots)
}

/// Upper Cholesky factor T with A = T*·T and positive diagonal.
pub fn cholesky_upper(a: &HermitianPD) -> UpperTriangular {
    a.cholesky().clone()
}

/// Pivots λ_i of A = L*·diag(λ)·L with L unit upper triangular; λ_i = t_ii².
///
/// Equivalently λ_i = |A_i| / |A_{i-1}| for the leading principal minors.
pub fn ldl_pivots(a: &HermitianPD) -> Vec<f64> {
    a.cholesky().diagonal().iter().map(|d| d * d).collect()
}

/// Pivots taken in the reversed frame: μ_i = |A^{(i..m)}| / |A^{(i+1..m)}|,
/// ratios of trailing principal minors.
///
/// These are the pivots that turn q_κ(A⁻¹) into a product of powers.
pub fn reverse_pivots(a: &HermitianPD) -> Result<Vec<f64>> {
    let t = cholesky_with_tolerance(&a.as_matrix().reversed(), 0.0)?;
    let mut p: Vec<f64> = t.diagonal().iter().map(|d| d * d).collect();
    p.reverse();
    Ok(p)
}

/// log|A*·A| for a square invertible matrix, where |·| is the determinant of
/// a self-adjoint positive matrix (product of its pivots).
pub fn log_det_gram(a: &AlgMatrix) -> Result<f64> {
    let g = a.adjoint_mul(a)?;
    match HermitianPD::new(g) {
        Ok(h) => Ok(h.log_det()),
        Err(Error::NotPositiveDefinite { .. }) => Err(Error::SingularTransform),
        Err(e) => Err(e),
    }
}

/// Real (β·n)×(β·m) matrix of the left-multiplication representation.
///
/// The map is multiplicative and sends A* to the transpose.
pub fn real_representation(a: &AlgMatrix) -> Result<DMatrix<f64>> {
    a.algebra().require_full_matrix()?;
    let b = a.beta() as usize;
    let mut out = DMatrix::zeros(b * a.rows(), b * a.cols());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            let block = a[(r, c)].left_matrix();
            for i in 0..b {
                for j in 0..b {
                    out[(r * b + i, c * b + j)] = block[i][j];
                }
            }
        }
    }
    Ok(out)
}

/// Eigenvalues of a self-adjoint matrix over ℝ, ℂ or ℍ, sorted descending.
///
/// Computed from the real representation, where each eigenvalue appears with
/// multiplicity β.
pub fn hermitian_eigenvalues(a: &AlgMatrix) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::Shape("eigenvalues of a non-square matrix".into()));
    }
    let b = a.beta() as usize;
    let repr = real_representation(a)?;
    let sym = (&repr + repr.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev.chunks(b).map(|c| c.iter().sum::<f64>() / b as f64).collect())
}

/// Singular values of an n×m matrix (n ≥ m), descending.
pub fn singular_values(a: &AlgMatrix) -> Result<Vec<f64>> {
    let g = a.adjoint_mul(a)?;
    Ok(hermitian_eigenvalues(&g)?.into_iter().map(|e| e.max(0.0).sqrt()).collect())
}
