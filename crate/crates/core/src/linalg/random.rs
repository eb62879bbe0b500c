use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{Algebra, AlgMatrix};
use super::scalar::Quat;
use crate::error::{domain, Result};

/// n×m matrix whose β·n·m real coordinates are i.i.d. N(0, component_std²).
pub fn gaussian_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    algebra: Algebra,
    component_std: f64,
) -> Result<AlgMatrix> {
    if !(component_std > 0.0) {
        return Err(domain(format!("component_std must be positive, got {component_std}")));
    }
    let beta = algebra.beta() as usize;
    let mut out = AlgMatrix::zeros(n, m, algebra)?;
    for r in 0..n {
        for c in 0..m {
            let mut q = Quat::ZERO;
            for k in 0..beta {
                let z: f64 = rng.sample(StandardNormal);
                *q.coord_mut(k) = component_std * z;
            }
            out[(r, c)] = q;
        }
    }
    Ok(out)
}

/// Haar-distributed n×m matrix with orthonormal columns (H*·H = I_m).
///
/// Gram–Schmidt on a Gaussian matrix, which is the QR factorization with the
/// diagonal of R real and positive.
pub fn haar_stiefel<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    algebra: Algebra,
) -> Result<AlgMatrix> {
    algebra.require_full_matrix()?;
    if m > n {
        return Err(domain(format!("Stiefel manifold needs n >= m, got n={n}, m={m}")));
    }
    loop {
        let mut h = gaussian_matrix(rng, n, m, algebra, 1.0)?;
        if orthonormalize_columns(&mut h) {
            return Ok(h);
        }
    }
}

/// Modified Gram–Schmidt with one reorthogonalization pass. Returns false if a
/// column collapses numerically.
fn orthonormalize_columns(h: &mut AlgMatrix) -> bool {
    let (n, m) = h.shape();
    for j in 0..m {
        for _pass in 0..2 {
            for p in 0..j {
                // coefficient u_p* · v_j, removed as v_j -= u_p · coef
                let mut coef = Quat::ZERO;
                for r in 0..n {
                    coef += h[(r, p)].conj() * h[(r, j)];
                }
                for r in 0..n {
                    let u = h[(r, p)];
                    h[(r, j)] -= u * coef;
                }
            }
        }
        let norm = (0..n).map(|r| h[(r, j)].norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 1e-8) {
            return false;
        }
        for r in 0..n {
            let q = h[(r, j)];
            h[(r, j)] = Quat::new(q.re / norm, q.i / norm, q.j / norm, q.k / norm);
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn stiefel_columns_are_orthonormal() {
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion] {
            let mut rng = RngStream::new(1, 0);
            for (n, m) in [(3, 2), (5, 5), (4, 1)] {
                let h = haar_stiefel(&mut rng, n, m, alg).unwrap();
                let g = h.adjoint_mul(&h).unwrap();
                assert!(g.max_abs_diff(&AlgMatrix::identity(m, alg).unwrap()) < 1e-12);
            }
        }
    }

    #[test]
    fn zero_sphere_is_plus_minus_one() {
        let mut rng = RngStream::new(2, 0);
        let mut plus = 0usize;
        let n = 20_000;
        for _ in 0..n {
            let h = haar_stiefel(&mut rng, 1, 1, Algebra::Real).unwrap();
            let v = h[(0, 0)].re;
            assert!(v == 1.0 || v == -1.0);
            if v > 0.0 {
                plus += 1;
            }
        }
        let frac = plus as f64 / n as f64;
        let sigma = (0.25 / n as f64).sqrt();
        assert!((frac - 0.5).abs() < 3.0 * sigma);
    }

    #[test]
    fn uniform_sphere_second_moment() {
        let mut rng = RngStream::new(3, 0);
        let n = 100_000;
        let xs: Vec<f64> = (0..n)
            .map(|_| haar_stiefel(&mut rng, 3, 1, Algebra::Real).unwrap()[(0, 0)].re.powi(2))
            .collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 1.0 / 3.0).abs() < 3.0 * (var / n as f64).sqrt());
    }

    #[test]
    fn gaussian_coordinate_moments() {
        let mut rng = RngStream::new(4, 0);
        let std = 0.7;
        let x = gaussian_matrix(&mut rng, 500, 500, Algebra::Complex, std).unwrap();
        let c = x.coords();
        assert_eq!(c.len(), 2 * 500 * 500);
        let n = c.len() as f64;
        let mean = c.iter().sum::<f64>() / n;
        let var = c.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() < 3.0 * std / n.sqrt());
        // var of the sample variance ≈ 2σ⁴/n
        assert!((var - std * std).abs() < 3.0 * (2.0 * std.powi(4) / n).sqrt());
        assert!(gaussian_matrix(&mut rng, 1, 1, Algebra::Real, 0.0).is_err());
    }
}
