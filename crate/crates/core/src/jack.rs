//! Zonal spherical polynomials C_τ^β, i.e. Jack polynomials with parameter
//! α = 2/β in the normalization where Σ_{|τ|=k} C_τ(x) = (x_1 + ... + x_m)^k.
//!
//! Monomial coefficients come from the triangular eigenproblem of the
//! Laplace–Beltrami operator
//! D = (α/2) Σ x_i² ∂_i² + Σ_{i≠j} x_i² / (x_i − x_j) ∂_i,
//! whose eigenfunctions are the Jack polynomials. Tables are built once per
//! (α, weight) and cached.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hwv::{log_q_kappa, Partition};
use crate::linalg::{haar_stiefel, HermitianPD};

pub const DEFAULT_K_MAX: usize = 10;

/// Monomial expansion of every C_τ of one weight: C_τ = Σ_μ coeffs[τ][μ] m_μ.
#[derive(Debug, Clone)]
pub struct JackTable {
    alpha: f64,
    weight: usize,
    partitions: Vec<Partition>,
    coeffs: Vec<Vec<f64>>,
}

impl JackTable {
    pub fn build(alpha: f64, weight: usize) -> JackTable {
        let parts = Partition::all_of(weight);
        let np = parts.len();
        let lb = laplace_beltrami_matrix(&parts, alpha, weight);
        let mut coeffs = vec![vec![0.0; np]; np];
        for (li, lambda) in parts.iter().enumerate() {
            // P_λ with unit leading coefficient; partitions are in decreasing
            // lexicographic order, a linear extension of dominance.
            let eig = lb[li][li];
            let mut c = vec![0.0; np];
            c[li] = 1.0;
            for ni in (li + 1)..np {
                if !parts[ni].dominated_by(lambda) {
                    continue;
                }
                let rhs: f64 = (li..ni).map(|mi| lb[ni][mi] * c[mi]).sum();
                c[ni] = rhs / (eig - lb[ni][ni]);
            }
            // J normalization: coefficient of m_{1^k} is k!; then C = α^k k! / j_λ · J.
            let k_fact: f64 = (1..=weight).map(|i| i as f64).product();
            let ones = c[np - 1];
            let scale = if weight == 0 {
                1.0
            } else {
                alpha.powi(weight as i32) * k_fact / hook_product(lambda, alpha) * k_fact / ones
            };
            coeffs[li] = c.iter().map(|v| v * scale).collect();
        }
        JackTable { alpha, weight, partitions: parts, coeffs }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    /// Coefficient of m_μ in C_τ.
    pub fn coefficient(&self, tau: &Partition, mu: &Partition) -> Option<f64> {
        let t = self.partitions.iter().position(|p| p == tau)?;
        let u = self.partitions.iter().position(|p| p == mu)?;
        Some(self.coeffs[t][u])
    }

    /// C_τ at the given arguments.
    pub fn eval(&self, tau: &Partition, x: &[f64]) -> Option<f64> {
        let t = self.partitions.iter().position(|p| p == tau)?;
        Some(
            self.partitions
                .iter()
                .zip(&self.coeffs[t])
                .filter(|(mu, c)| **c != 0.0 && mu.length() <= x.len())
                .map(|(mu, c)| c * monomial_symmetric(mu.parts(), x))
                .sum(),
        )
    }

    /// `{"alpha":..,"weight":..,"coeffs":{"2,1":{"2,1":..,"1,1,1":..}}}`.
    pub fn to_json(&self) -> Value {
        let key = |p: &Partition| {
            p.parts().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        };
        let mut coeffs = serde_json::Map::new();
        for (t, row) in self.partitions.iter().zip(&self.coeffs) {
            let mut inner = serde_json::Map::new();
            for (mu, c) in self.partitions.iter().zip(row) {
                if *c != 0.0 {
                    inner.insert(key(mu), json!(c));
                }
            }
            coeffs.insert(key(t), Value::Object(inner));
        }
        json!({"alpha": self.alpha, "weight": self.weight, "coeffs": coeffs})
    }
}

/// j_λ = Π_{s∈λ} (l(s) + α(a(s) + 1)) (l(s) + 1 + α a(s)).
fn hook_product(lambda: &Partition, alpha: f64) -> f64 {
    let parts = lambda.parts();
    let mut out = 1.0;
    for (i, &row) in parts.iter().enumerate() {
        for j in 0..row as usize {
            let arm = (row as usize - j - 1) as f64;
            let leg = parts.iter().skip(i + 1).filter(|&&p| p as usize > j).count() as f64;
            out *= (leg + alpha * (arm + 1.0)) * (leg + 1.0 + alpha * arm);
        }
    }
    out
}

/// Matrix of D on the monomial basis of weight-k symmetric polynomials in k
/// variables: `out[ν][μ]` is the coefficient of m_ν in D m_μ.
fn laplace_beltrami_matrix(parts: &[Partition], alpha: f64, k: usize) -> Vec<Vec<f64>> {
    let n = k.max(1);
    let padded: Vec<Vec<u32>> = parts.iter().map(|p| (0..n).map(|i| p.part(i)).collect()).collect();
    let sorted_key = |v: &[u32]| {
        let mut s = v.to_vec();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    };
    let index: HashMap<Vec<u32>, usize> =
        padded.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let np = parts.len();
    let mut out = vec![vec![0.0; np]; np];
    for (vi, nu) in padded.iter().enumerate() {
        out[vi][vi] += alpha / 2.0 * nu.iter().map(|&a| (a as f64) * (a as f64 - 1.0)).sum::<f64>();
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (nu[i], nu[j]);
                let s = a + b;
                let mut rest = nu.clone();
                for q in 0..=s / 2 {
                    let p = s - q;
                    rest[i] = p;
                    rest[j] = q;
                    let Some(&mi) = index.get(&sorted_key(&rest)) else { continue };
                    out[vi][mi] += pair_coefficient(p, q, a, b);
                }
            }
        }
    }
    out
}

/// Coefficient of u^a v^b produced by the pair operator
/// (u²∂_u − v²∂_v)/(u − v) acting on u^p v^q + u^q v^p (or u^p v^p when p = q).
fn pair_coefficient(p: u32, q: u32, a: u32, b: u32) -> f64 {
    debug_assert!(p >= q && a + b == p + q);
    if p == q {
        return if a == p { p as f64 } else { 0.0 };
    }
    let mut c = 0.0;
    if a == p && b == q {
        c += p as f64;
    }
    if a == q && b == p {
        c += q as f64;
    }
    // (p − q) Σ_{r=0}^{p−q−1} u^{q+r} v^{p−r}
    if a >= q && a < p {
        c += (p - q) as f64;
    }
    c
}

/// m_μ(x): sum over the distinct permutations of μ (zero padded) of Π x_i^{a_i}.
pub fn monomial_symmetric(mu: &[u32], x: &[f64]) -> f64 {
    let m = x.len();
    if mu.len() > m {
        return 0.0;
    }
    let mut counts: Vec<(u32, usize)> = Vec::new();
    for &p in mu.iter().chain(std::iter::repeat_n(&0, m - mu.len())) {
        match counts.iter_mut().find(|(v, _)| *v == p) {
            Some((_, c)) => *c += 1,
            None => counts.push((p, 1)),
        }
    }
    fn rec(pos: usize, x: &[f64], counts: &mut [(u32, usize)], acc: f64) -> f64 {
        if pos == x.len() {
            return acc;
        }
        let mut total = 0.0;
        for idx in 0..counts.len() {
            if counts[idx].1 == 0 {
                continue;
            }
            counts[idx].1 -= 1;
            let e = counts[idx].0;
            total += rec(pos + 1, x, counts, acc * x[pos].powi(e as i32));
            counts[idx].1 += 1;
        }
        total
    }
    rec(0, x, &mut counts, 1.0)
}

type Cache = RwLock<HashMap<(u64, usize), Arc<JackTable>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Shared table for (α, weight), built on first use.
pub fn jack_table(alpha: f64, weight: usize) -> Arc<JackTable> {
    let key = (alpha.to_bits(), weight);
    if let Some(t) = cache().read().expect("jack cache poisoned").get(&key) {
        return t.clone();
    }
    let table = Arc::new(JackTable::build(alpha, weight));
    cache().write().expect("jack cache poisoned").entry(key).or_insert(table).clone()
}

fn alpha_of(beta: f64) -> f64 {
    2.0 / beta
}

fn check_weight(tau: &Partition, k_max: usize) -> Result<()> {
    if tau.weight() > k_max {
        return Err(Error::WeightTooLarge { weight: tau.weight(), max: k_max });
    }
    Ok(())
}

/// C_τ^β at eigenvalues `x`, with the default weight cap.
pub fn jack_c(tau: &Partition, x: &[f64], beta: f64) -> Result<f64> {
    jack_c_bounded(tau, x, beta, DEFAULT_K_MAX)
}

pub fn jack_c_bounded(tau: &Partition, x: &[f64], beta: f64, k_max: usize) -> Result<f64> {
    check_weight(tau, k_max)?;
    if tau.length() > x.len() {
        return Err(Error::TooManyParts { parts: tau.length(), m: x.len() });
    }
    let table = jack_table(alpha_of(beta), tau.weight());
    Ok(table.eval(tau, x).expect("partition present in its own weight table"))
}

/// C_τ^β(I_m); zero when τ has more than m parts.
pub fn jack_c_identity(tau: &Partition, m: usize, beta: f64) -> Result<f64> {
    check_weight(tau, DEFAULT_K_MAX)?;
    if tau.length() > m {
        return Ok(0.0);
    }
    jack_c(tau, &vec![1.0; m], beta)
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl McEstimate {
    pub fn from_samples(xs: &[f64]) -> McEstimate {
        let n = xs.len();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        McEstimate { mean, std_error: (var / n as f64).sqrt(), samples: n }
    }
}

/// Monte Carlo estimate of ∫ q_τ(H L H*) dH over the Haar-distributed group of
/// unitary matrices of the algebra of `L`.
pub fn spherical_average_q<R: Rng + ?Sized>(
    rng: &mut R,
    tau: &Partition,
    l: &HermitianPD,
    samples: usize,
) -> Result<McEstimate> {
    let alg = l.algebra();
    alg.require_full_matrix()?;
    if samples == 0 {
        return Err(crate::error::domain("at least one sample is required"));
    }
    let m = l.dim();
    let weight = tau.to_weight(m)?;
    let mut values = Vec::with_capacity(samples);
    for _ in 0..samples {
        let h = haar_stiefel(rng, m, m, alg)?;
        let rotated = h.matmul(l.as_matrix())?.matmul(&h.adjoint())?;
        let rotated = HermitianPD::new(rotated)?;
        values.push(log_q_kappa(&rotated, &weight)?.exp());
    }
    Ok(McEstimate::from_samples(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Algebra;
    use crate::rng::RngStream;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn degree_one_is_trace() {
        for beta in [1.0, 2.0, 4.0, 8.0] {
            let x = [0.3, 1.7, 2.2];
            assert!((jack_c(&p(&[1]), &x, beta).unwrap() - 4.2).abs() < 1e-14);
        }
    }

    #[test]
    fn zonal_weight_two_table() {
        // C_(2) = m_2 + (2/3) m_11, C_(1,1) = (4/3) m_11 for β = 1
        let t = jack_table(2.0, 2);
        assert!((t.coefficient(&p(&[2]), &p(&[2])).unwrap() - 1.0).abs() < 1e-14);
        assert!((t.coefficient(&p(&[2]), &p(&[1, 1])).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        assert!((t.coefficient(&p(&[1, 1]), &p(&[1, 1])).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        assert!((jack_c_identity(&p(&[2]), 2, 1.0).unwrap() - 8.0 / 3.0).abs() < 1e-14);
        assert!((jack_c_identity(&p(&[1, 1]), 2, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn schur_case_at_beta_two() {
        // α = 1: C_λ = f^λ s_λ, and s_(2,1) = m_21 + 2 m_111, f^(2,1) = 2
        let t = jack_table(1.0, 3);
        assert!((t.coefficient(&p(&[2, 1]), &p(&[2, 1])).unwrap() - 2.0).abs() < 1e-13);
        assert!((t.coefficient(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap() - 4.0).abs() < 1e-13);
        assert_eq!(t.coefficient(&p(&[2, 1]), &p(&[3])).unwrap(), 0.0);
    }

    #[test]
    fn sum_rule_weight_three() {
        let x = [0.4, 1.3, 2.1];
        for beta in [1.0, 2.0, 4.0] {
            let total: f64 =
                Partition::all_of(3).iter().map(|t| jack_c(t, &x, beta).unwrap()).sum();
            assert!((total - 3.8f64.powi(3)).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_edge_cases() {
        assert_eq!(jack_c_identity(&p(&[1]), 3, 1.0).unwrap(), 3.0);
        assert_eq!(jack_c_identity(&p(&[1, 1, 1]), 2, 1.0).unwrap(), 0.0);
        let s: f64 = Partition::all_of(2).iter().map(|t| jack_c_identity(t, 2, 1.0).unwrap()).sum();
        assert!((s - 4.0).abs() < 1e-13);
        assert!(jack_c_identity(&p(&[2, 1]), 2, 2.0).unwrap() > 0.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(jack_c(&p(&[11]), &[1.0], 1.0), Err(Error::WeightTooLarge { .. })));
        assert!(matches!(jack_c(&p(&[1, 1]), &[1.0], 1.0), Err(Error::TooManyParts { .. })));
        assert!(jack_c_bounded(&p(&[11]), &[1.0], 1.0, 12).is_ok());
    }

    #[test]
    fn zero_argument_and_empty_partition() {
        assert_eq!(jack_c(&p(&[2, 1]), &[0.0, 0.0], 1.0).unwrap(), 0.0);
        assert_eq!(jack_c(&Partition::empty(), &[2.0, 3.0], 1.0).unwrap(), 1.0);
    }

    #[test]
    fn json_dump() {
        let v = jack_table(2.0, 2).to_json();
        assert_eq!(v["weight"], 2);
        assert!((v["coeffs"]["2"]["1,1"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn spherical_average_examples() {
        let mut rng = RngStream::new(5, 0);
        let id = HermitianPD::identity(2, Algebra::Real).unwrap();
        let est = spherical_average_q(&mut rng, &p(&[2, 1]), &id, 50).unwrap();
        assert!((est.mean - 1.0).abs() < 1e-12 && est.std_error < 1e-12);

        let l = HermitianPD::diag(&[2.0, 1.0, 0.5], Algebra::Complex).unwrap();
        let est = spherical_average_q(&mut rng, &p(&[1]), &l, 20_000).unwrap();
        assert!((est.mean - 3.5 / 3.0).abs() < 3.0 * est.std_error);
    }
}
