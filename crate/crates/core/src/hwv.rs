//! Highest weight vectors (generalized powers) q_κ on the positive definite cone.
//!
//! With A = L*·diag(λ)·L (L unit upper triangular), q_κ(A) = Π λ_i^{k_i}, which
//! is the same as |A_m|^{k_m} Π_{i<m} |A_i|^{k_i − k_{i+1}} in leading principal
//! minors. The dual q*_κ uses the reversed frame: pivots μ_i built from
//! trailing principal minors, q*_κ(A) = Π μ_i^{k_{m−i+1}}. Everything is in the
//! log domain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ldl_pivots, reverse_pivots, HermitianPD};

/// Real weight κ = (k_1, ..., k_m) with k_1 ≥ ... ≥ k_m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        let ok = !entries.is_empty()
            && entries.iter().all(|k| k.is_finite())
            && entries.windows(2).all(|w| w[0] >= w[1]);
        if ok {
            Ok(Self(entries))
        } else {
            Err(Error::InvalidWeight(entries))
        }
    }

    pub fn zeros(m: usize) -> Self {
        Self(vec![0.0; m])
    }

    /// κ = (p, ..., p).
    pub fn constant(m: usize, p: f64) -> Self {
        Self(vec![p; m])
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.0[0]
    }

    pub fn last(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0.0)
    }

    /// κ + τ (weakly decreasing again).
    pub fn add(&self, other: &WeightVector) -> Result<WeightVector> {
        if self.len() != other.len() {
            return Err(Error::Shape(format!("weights of length {} and {}", self.len(), other.len())));
        }
        WeightVector::new(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// κ + (p, ..., p).
    pub fn shift(&self, p: f64) -> WeightVector {
        Self(self.0.iter().map(|k| k + p).collect())
    }

    /// −κ* = (−k_m, ..., −k_1).
    pub fn neg_reversed(&self) -> WeightVector {
        Self(self.0.iter().rev().map(|k| -k).collect())
    }

    /// −κ; as a weight this is only decreasing again after reversal, so it is
    /// returned as a plain vector.
    pub fn negated(&self) -> Vec<f64> {
        self.0.iter().map(|k| -k).collect()
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Vec<f64> {
        w.0
    }
}

/// Integer partition τ = (t_1 ≥ t_2 ≥ ... ≥ 0); trailing zeros are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::InvalidWeight(parts.iter().map(|&p| p as f64).collect()));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self(parts))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Nonzero parts.
    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.0.len()
    }

    /// |τ| = Σ t_i.
    pub fn weight(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    /// Part i (0-based), zero past the length.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// τ padded with zeros to a weight vector of length m.
    pub fn to_weight(&self, m: usize) -> Result<WeightVector> {
        if self.length() > m {
            return Err(Error::TooManyParts { parts: self.length(), m });
        }
        Ok(WeightVector((0..m).map(|i| self.part(i) as f64).collect()))
    }

    /// All partitions of `k`, in decreasing lexicographic order.
    pub fn all_of(k: usize) -> Vec<Partition> {
        fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(k as u32, k as u32, &mut Vec::new(), &mut out);
        out
    }

    /// Dominance order: self ≤ other iff every partial sum of self is at most
    /// that of other (same weight assumed).
    pub fn dominated_by(&self, other: &Partition) -> bool {
        let n = self.length().max(other.length());
        let (mut a, mut b) = (0u32, 0u32);
        for i in 0..n {
            a += self.part(i);
            b += other.part(i);
            if a > b {
                return false;
            }
        }
        true
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.0
    }
}

fn check_len(a: &HermitianPD, kappa: &WeightVector) -> Result<()> {
    if kappa.len() != a.dim() {
        return Err(Error::Shape(format!(
            "weight of length {} for a {}x{} matrix",
            kappa.len(),
            a.dim(),
            a.dim()
        )));
    }
    Ok(())
}

fn weighted_log_sum(weights: impl Iterator<Item = f64>, pivots: &[f64]) -> f64 {
    weights
        .zip(pivots)
        .filter(|(k, _)| *k != 0.0)
        .map(|(k, l)| k * l.ln())
        .sum()
}

/// log q_κ(A) = Σ k_i log λ_i.
pub fn log_q_kappa(a: &HermitianPD, kappa: &WeightVector) -> Result<f64> {
    check_len(a, kappa)?;
    Ok(weighted_log_sum(kappa.entries().iter().copied(), &ldl_pivots(a)))
}

/// log q*_κ(A) = Σ k_{m−i+1} log μ_i with μ the reversed-frame pivots.
pub fn log_q_star_kappa(a: &HermitianPD, kappa: &WeightVector) -> Result<f64> {
    check_len(a, kappa)?;
    let mu = reverse_pivots(a)?;
    Ok(weighted_log_sum(kappa.entries().iter().rev().copied(), &mu))
}

/// log q_κ(A⁻¹), evaluated as log q*_{−κ*}(A) without inverting A.
pub fn log_q_kappa_inv(a: &HermitianPD, kappa: &WeightVector) -> Result<f64> {
    log_q_star_kappa(a, &kappa.neg_reversed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gaussian_matrix, real_representation, Algebra, AlgMatrix, Quat};
    use crate::rng::RngStream;

    fn diag23() -> HermitianPD {
        HermitianPD::diag(&[2.0, 3.0], Algebra::Real).unwrap()
    }

    fn w(v: &[f64]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    /// Principal-minor form, with |A_p| = det(repr(A_p))^{1/β}.
    fn log_q_minors(a: &HermitianPD, kappa: &WeightVector) -> f64 {
        let m = a.dim();
        let beta = a.algebra().beta() as f64;
        let k = kappa.entries();
        let logdet = |p: usize| {
            real_representation(&a.as_matrix().leading_block(p)).unwrap().determinant().ln() / beta
        };
        let mut out = k[m - 1] * logdet(m);
        for i in 1..m {
            out += (k[i - 1] - k[i]) * logdet(i);
        }
        out
    }

    fn random_spd(rng: &mut RngStream, m: usize, alg: Algebra) -> HermitianPD {
        let x = gaussian_matrix(rng, m + 1, m, alg, 1.0).unwrap();
        HermitianPD::new(x.adjoint_mul(&x).unwrap()).unwrap()
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::new(vec![2.0, 1.0, 1.0]).is_ok());
        assert!(WeightVector::new(vec![1.0, 2.0]).is_err());
        assert!(WeightVector::new(vec![f64::NAN]).is_err());
        assert!(WeightVector::new(vec![]).is_err());
        assert_eq!(w(&[3.0, 1.0, -2.0]).neg_reversed(), w(&[2.0, -1.0, -3.0]));
    }

    #[test]
    fn partitions() {
        let p = Partition::new(vec![2, 1, 0, 0]).unwrap();
        assert_eq!(p.parts(), &[2, 1]);
        assert_eq!(p.weight(), 3);
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(Partition::all_of(4).len(), 5);
        assert_eq!(Partition::all_of(10).len(), 42);
        assert_eq!(Partition::all_of(4)[0].parts(), &[4]);
        assert!(Partition::new(vec![2, 2]).unwrap().dominated_by(&Partition::new(vec![3, 1]).unwrap()));
        assert!(!Partition::new(vec![3, 3]).unwrap().dominated_by(&Partition::new(vec![4, 1, 1]).unwrap()));
        assert!(matches!(p.to_weight(1), Err(Error::TooManyParts { parts: 2, m: 1 })));
    }

    #[test]
    fn identity_gives_zero() {
        let i = HermitianPD::identity(3, Algebra::Complex).unwrap();
        let k = w(&[2.5, 0.0, -1.0]);
        assert_eq!(log_q_kappa(&i, &k).unwrap(), 0.0);
        assert_eq!(log_q_star_kappa(&i, &k).unwrap(), 0.0);
        assert_eq!(log_q_kappa_inv(&i, &k).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_examples() {
        let k = w(&[2.0, 1.0]);
        assert!((log_q_kappa(&diag23(), &k).unwrap() - 12f64.ln()).abs() < 1e-14);
        assert!((log_q_minors(&diag23(), &k) - 12f64.ln()).abs() < 1e-14);
        assert!((log_q_star_kappa(&diag23(), &k).unwrap() - 18f64.ln()).abs() < 1e-14);
        // q_κ(diag(1/2, 1/3)) = (1/2)²(1/3)
        assert!((log_q_kappa_inv(&diag23(), &k).unwrap() + 12f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn constant_weight_is_power_of_determinant() {
        let mut rng = RngStream::new(21, 0);
        let a = random_spd(&mut rng, 4, Algebra::Quaternion);
        let k = WeightVector::constant(4, 1.7);
        let expected = 1.7 * a.log_det();
        assert!((log_q_kappa(&a, &k).unwrap() - expected).abs() < 1e-11);
        assert!((log_q_star_kappa(&a, &k).unwrap() - expected).abs() < 1e-11);
    }

    #[test]
    fn inverse_matches_explicit_inverse() {
        let mut rng = RngStream::new(22, 0);
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion] {
            for m in 1..=5 {
                let a = random_spd(&mut rng, m, alg);
                let k = WeightVector::new((0..m).map(|i| 2.0 - 0.7 * i as f64).collect()).unwrap();
                let direct = log_q_kappa(&a.inverse().unwrap(), &k).unwrap();
                assert!((log_q_kappa_inv(&a, &k).unwrap() - direct).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn minor_form_agrees() {
        let mut rng = RngStream::new(23, 0);
        for alg in [Algebra::Real, Algebra::Complex] {
            for m in 1..=5 {
                let a = random_spd(&mut rng, m, alg);
                let k = WeightVector::new((0..m).map(|i| 3.0 - 1.1 * i as f64).collect()).unwrap();
                let lhs = log_q_kappa(&a, &k).unwrap().exp();
                let rhs = log_q_minors(&a, &k).exp();
                assert!((lhs - rhs).abs() / rhs < 1e-11);
            }
        }
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(log_q_kappa(&diag23(), &w(&[1.0])), Err(Error::Shape(_))));
    }

    #[test]
    fn quaternion_congruence_with_triangular() {
        // q_κ(B*AB) = q_κ(B*B) q_κ(A), B upper triangular with real positive diagonal
        let mut rng = RngStream::new(24, 0);
        let a = random_spd(&mut rng, 3, Algebra::Quaternion);
        let b = AlgMatrix::from_fn(3, 3, Algebra::Quaternion, |r, c| match r.cmp(&c) {
            std::cmp::Ordering::Equal => Quat::real(1.0 + r as f64),
            std::cmp::Ordering::Less => Quat::new(0.3, -0.2, 0.5, 0.1 * c as f64),
            _ => Quat::ZERO,
        })
        .unwrap();
        let c = HermitianPD::new(b.adjoint_mul(&b).unwrap()).unwrap();
        let k = w(&[1.5, 0.5, -1.0]);
        let lhs = log_q_kappa(&a.congruence(&b).unwrap(), &k).unwrap();
        let rhs = log_q_kappa(&c, &k).unwrap() + log_q_kappa(&a, &k).unwrap();
        assert!((lhs - rhs).abs() < 1e-11);
    }
}
