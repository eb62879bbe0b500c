//! Log-domain special functions on the cone of positive definite matrices:
//! multivariate gamma Γ_m^β[a], its weighted versions Γ_m^β[a, ±κ], the
//! generalized Pochhammer symbol and the volume of the Stiefel manifold.
//!
//! All quantities are positive under their preconditions, so only logs are
//! returned.

use std::f64::consts::{LN_2, PI};

use crate::error::{domain, Result};
use crate::hwv::WeightVector;
use crate::linalg::Algebra;

/// log Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

fn ln_pi() -> f64 {
    PI.ln()
}

/// Which weighted gamma: `Plus` is Γ_m^β[a, κ], `Minus` is Γ_m^β[a, −κ].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightSign {
    Plus,
    Minus,
}

/// log Γ_m^β[a] = m(m−1)β/4 · log π + Σ_i log Γ(a − (i−1)β/2), for a > (m−1)β/2.
pub fn lgamma_m(a: f64, algebra: Algebra, m: usize) -> Result<f64> {
    let beta = algebra.beta_f64();
    if m == 0 {
        return Err(domain("multivariate gamma needs m >= 1"));
    }
    let bound = (m as f64 - 1.0) * beta / 2.0;
    if !(a > bound) {
        return Err(domain(format!(
            "multivariate gamma requires a > (m-1)beta/2 = {bound}, got a = {a}"
        )));
    }
    let mut out = (m * (m - 1)) as f64 * beta / 4.0 * ln_pi();
    for i in 0..m {
        out += ln_gamma(a - i as f64 * beta / 2.0);
    }
    Ok(out)
}

/// log Γ_m^β[a, κ] (`Plus`) or log Γ_m^β[a, −κ] (`Minus`); m is the length of κ.
///
/// `Plus`: m(m−1)β/4 log π + Σ log Γ(a + k_i − (i−1)β/2), requires a + k_m > (m−1)β/2.
/// `Minus`: m(m−1)β/4 log π + Σ log Γ(a − k_i − (m−i)β/2), requires a − k_1 > (m−1)β/2.
pub fn lgamma_m_weighted(a: f64, kappa: &WeightVector, algebra: Algebra, sign: WeightSign) -> Result<f64> {
    let beta = algebra.beta_f64();
    let m = kappa.len();
    let mut out = (m * (m - 1)) as f64 * beta / 4.0 * ln_pi();
    for (i, &k) in kappa.entries().iter().enumerate() {
        let arg = match sign {
            WeightSign::Plus => a + k - i as f64 * beta / 2.0,
            WeightSign::Minus => a - k - (m - 1 - i) as f64 * beta / 2.0,
        };
        if !(arg > 0.0) {
            let cond = match sign {
                WeightSign::Plus => "a + k_m > (m-1)beta/2",
                WeightSign::Minus => "a - k_1 > (m-1)beta/2",
            };
            return Err(domain(format!(
                "weighted gamma factor {} has argument {arg} <= 0 (requires {cond})",
                i + 1
            )));
        }
        out += ln_gamma(arg);
    }
    Ok(out)
}

/// log [a]_κ^β = log Γ_m^β[a, κ] − log Γ_m^β[a].
pub fn log_gen_pochhammer(a: f64, kappa: &WeightVector, algebra: Algebra) -> Result<f64> {
    let m = kappa.len();
    let beta = algebra.beta_f64();
    let bound = (m as f64 - 1.0) * beta / 2.0;
    if !(a + kappa.last() > bound) || !(a > bound) {
        return Err(domain(format!(
            "generalized Pochhammer requires a > (m-1)beta/2 and a + k_m > (m-1)beta/2 = {bound}"
        )));
    }
    Ok(lgamma_m_weighted(a, kappa, algebra, WeightSign::Plus)? - lgamma_m(a, algebra, m)?)
}

/// [b]_κ^β = Π_i (b − (i−1)β/2)_{k_i} for integer parts, as (sign, log|value|).
///
/// Valid for any real b; the value may be negative or zero (log = −∞).
pub fn gen_pochhammer_product(b: f64, parts: &[u32], algebra: Algebra) -> (f64, f64) {
    let beta = algebra.beta_f64();
    let mut sign = 1.0;
    let mut log_abs = 0.0;
    for (i, &k) in parts.iter().enumerate() {
        let base = b - i as f64 * beta / 2.0;
        for j in 0..k {
            let f = base + j as f64;
            if f < 0.0 {
                sign = -sign;
            }
            log_abs += f.abs().ln();
        }
    }
    (sign, log_abs)
}

/// log Vol(V_{m,n}^β) = m log 2 + (mnβ/2) log π − log Γ_m^β[nβ/2].
pub fn log_stiefel_volume(n: usize, m: usize, algebra: Algebra) -> Result<f64> {
    if m == 0 || n < m {
        return Err(domain(format!("Stiefel volume needs n >= m >= 1, got n={n}, m={m}")));
    }
    let beta = algebra.beta_f64();
    Ok(m as f64 * LN_2 + (m * n) as f64 * beta / 2.0 * ln_pi()
        - lgamma_m(n as f64 * beta / 2.0, algebra, m)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [Algebra; 4] = [Algebra::Real, Algebra::Complex, Algebra::Quaternion, Algebra::Octonion];

    fn w(v: &[f64]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ln_gamma_reference_values() {
        assert!((ln_gamma(0.5) - 0.5 * PI.ln()).abs() < 1e-15);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-14);
        // Γ(30) = 29!
        let fact29: f64 = (1..=29).map(|i| (i as f64).ln()).sum();
        assert!((ln_gamma(30.0) - fact29).abs() / fact29 < 1e-14);
    }

    #[test]
    fn multivariate_gamma_examples() {
        assert_eq!(lgamma_m(3.7, Algebra::Real, 1).unwrap(), ln_gamma(3.7));
        assert!((lgamma_m(1.5, Algebra::Real, 2).unwrap() - (PI / 2.0).ln()).abs() < 1e-14);
        assert!((lgamma_m(2.0, Algebra::Complex, 2).unwrap() - PI.ln()).abs() < 1e-14);
        assert!(lgamma_m(0.5, Algebra::Real, 2).is_err());
        assert!(lgamma_m(1.0, Algebra::Complex, 2).is_err());
    }

    #[test]
    fn weighted_gamma_examples() {
        for alg in ALL {
            let z = WeightVector::zeros(3);
            let base = lgamma_m(9.0, alg, 3).unwrap();
            assert_eq!(lgamma_m_weighted(9.0, &z, alg, WeightSign::Plus).unwrap(), base);
            let minus = lgamma_m_weighted(9.0, &z, alg, WeightSign::Minus).unwrap();
            assert!((minus - base).abs() < 1e-12);
        }
        let v = lgamma_m_weighted(2.0, &w(&[1.5]), Algebra::Real, WeightSign::Plus).unwrap();
        assert_eq!(v, ln_gamma(3.5));
        // √π Γ(5) Γ(7/2) = 45π
        let v = lgamma_m_weighted(3.0, &w(&[2.0, 1.0]), Algebra::Real, WeightSign::Plus).unwrap();
        assert!((v - (45.0 * PI).ln()).abs() < 1e-13);
    }

    #[test]
    fn weighted_gamma_domain_errors_name_index() {
        let e = lgamma_m_weighted(1.0, &w(&[0.0, -0.6]), Algebra::Real, WeightSign::Plus).unwrap_err();
        assert!(e.to_string().contains("factor 2"), "{e}");
        let e = lgamma_m_weighted(1.0, &w(&[0.6, 0.0]), Algebra::Real, WeightSign::Minus).unwrap_err();
        assert!(e.to_string().contains("factor 1"), "{e}");
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(log_gen_pochhammer(4.0, &WeightVector::zeros(2), Algebra::Real).unwrap(), 0.0);
        assert!((log_gen_pochhammer(3.0, &w(&[2.0]), Algebra::Real).unwrap() - 12f64.ln()).abs() < 1e-14);
        assert!((log_gen_pochhammer(3.0, &w(&[1.0, 1.0]), Algebra::Real).unwrap() - 7.5f64.ln()).abs() < 1e-14);
        let (s, l) = gen_pochhammer_product(3.0, &[1, 1], Algebra::Real);
        assert_eq!(s, 1.0);
        assert!((l - 7.5f64.ln()).abs() < 1e-15);
        let (s, _) = gen_pochhammer_product(-2.5, &[2], Algebra::Real);
        assert_eq!(s, 1.0); // (-2.5)(-1.5)
    }

    #[test]
    fn stiefel_volume_spheres() {
        assert!((log_stiefel_volume(2, 1, Algebra::Real).unwrap() - (2.0 * PI).ln()).abs() < 1e-14);
        assert!((log_stiefel_volume(3, 1, Algebra::Real).unwrap() - (4.0 * PI).ln()).abs() < 1e-14);
        assert!((log_stiefel_volume(1, 1, Algebra::Complex).unwrap() - (2.0 * PI).ln()).abs() < 1e-14);
        assert!(log_stiefel_volume(1, 2, Algebra::Real).is_err());
    }
}
