//! Identities of the highest weight vector, the generalized gamma function
//! and the zonal polynomials.

use rand::Rng;

use super::quad::{integrate, Domain, QuadConfig};
use super::CheckReport;
use crate::error::{Error, Result};
use crate::hwv::{log_q_kappa, log_q_kappa_inv, Partition, WeightVector};
use crate::jack::{jack_c, jack_c_identity, spherical_average_q, McEstimate};
use crate::linalg::{gaussian_matrix, hermitian_eigenvalues, Algebra, AlgMatrix, HermitianPD, Quat, UpperTriangular};
use crate::sampler::RieszSampler;
use crate::specfun::{gen_pochhammer_product, lgamma_m, lgamma_m_weighted, WeightSign};
use crate::dens::{RieszParams, Variant};

/// Log-scale residuals of the q_κ identities at one instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QkResiduals {
    /// q_κ(A⁻¹) = q*_{−κ*}(A), against an explicit inverse.
    pub qk2: f64,
    /// q_{(p,…,p)}(A) = |A|^p.
    pub qk3: f64,
    /// q_{κ+τ}(A) = q_κ(A)·q_τ(A).
    pub qk41: f64,
    /// q_{κ+p}(A) = |A|^p·q_κ(A).
    pub qk42: f64,
    /// q_κ(B*AB) = q_κ(B*B)·q_κ(A) for upper triangular B.
    pub qk5: f64,
    /// q_κ(B^{−*}AB^{−1}) = q_κ(A) / q_κ(B*B).
    pub qk6: f64,
}

impl QkResiduals {
    pub fn max(&self) -> f64 {
        [self.qk2, self.qk3, self.qk41, self.qk42, self.qk5, self.qk6].into_iter().fold(0.0, f64::max)
    }
}

/// Evaluates every identity at A with weights κ, τ (κ + τ must be weakly
/// decreasing, which holds when both are), shift p and triangular B.
pub fn qk_residuals(
    a: &HermitianPD,
    kappa: &WeightVector,
    tau: &WeightVector,
    p: f64,
    b: &UpperTriangular,
) -> Result<QkResiduals> {
    let m = a.dim();
    let lq = |x: &HermitianPD, k: &WeightVector| log_q_kappa(x, k);
    let qa = lq(a, kappa)?;
    let inv = a.inverse()?;
    let qk2 = (log_q_kappa_inv(a, kappa)? - lq(&inv, kappa)?).abs();
    let qk3 = (lq(a, &WeightVector::constant(m, p))? - p * a.log_det()).abs();
    let qk41 = (lq(a, &kappa.add(tau)?)? - qa - lq(a, tau)?).abs();
    let qk42 = (lq(a, &kappa.shift(p))? - p * a.log_det() - qa).abs();
    let c = HermitianPD::new(b.gram())?;
    let qc = lq(&c, kappa)?;
    let qk5 = (lq(&a.congruence(b.as_matrix())?, kappa)? - qc - qa).abs();
    let binv = b.inverse()?;
    let qk6 = (lq(&a.congruence(binv.as_matrix())?, kappa)? + qc - qa).abs();
    Ok(QkResiduals { qk2, qk3, qk41, qk42, qk5, qk6 })
}

fn random_weight<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Result<WeightVector> {
    let mut k: Vec<f64> = (0..m).map(|_| rng.gen_range(-3.0..3.0)).collect();
    k.sort_by(|x, y| y.total_cmp(x));
    WeightVector::new(k)
}

/// Random positive definite m×m matrix X*X with X Gaussian (m+1)×m.
pub(crate) fn random_pd<R: Rng + ?Sized>(rng: &mut R, m: usize, alg: Algebra) -> Result<HermitianPD> {
    let x = gaussian_matrix(rng, m + 1, m, alg, 1.0)?;
    HermitianPD::new(x.adjoint_mul(&x)?)
}

fn random_upper<R: Rng + ?Sized>(rng: &mut R, m: usize, alg: Algebra) -> Result<UpperTriangular> {
    let g = gaussian_matrix(rng, m, m, alg, 1.0)?;
    let mut t = AlgMatrix::zeros(m, m, alg)?;
    for r in 0..m {
        t[(r, r)] = Quat::real(rng.gen_range(0.5..2.0));
        for c in (r + 1)..m {
            t[(r, c)] = g[(r, c)];
        }
    }
    UpperTriangular::new(t)
}

/// Maximum residual of each q_κ identity over `instances` random inputs per
/// (m, β), with m in `dims`.
pub fn check_qk_identities<R: Rng + ?Sized>(
    rng: &mut R,
    instances: usize,
    dims: &[usize],
    algebras: &[Algebra],
    tol: f64,
) -> Result<Vec<CheckReport>> {
    let mut worst = [0.0f64; 6];
    let mut count = 0;
    for &alg in algebras {
        for &m in dims {
            for _ in 0..instances {
                let a = random_pd(rng, m, alg)?;
                let (k, t) = (random_weight(rng, m)?, random_weight(rng, m)?);
                let p = rng.gen_range(-2.0..2.0);
                let b = random_upper(rng, m, alg)?;
                let r = qk_residuals(&a, &k, &t, p, &b)?;
                for (w, v) in worst.iter_mut().zip([r.qk2, r.qk3, r.qk41, r.qk42, r.qk5, r.qk6]) {
                    *w = w.max(v);
                }
                count += 1;
            }
        }
    }
    let names = ["qk2 inverse", "qk3 constant weight", "qk41 additivity", "qk42 shift", "qk5 congruence", "qk6 inverse congruence"];
    Ok(names
        .iter()
        .zip(worst)
        .map(|(n, w)| {
            CheckReport::new(
                format!("hwv {n}"),
                w,
                0.0,
                tol,
                count,
                format!("largest log-scale residual over {count} random instances, m in {dims:?}"),
            )
        })
        .collect())
}

/// Γ_m^β[a, κ] = [a]_κ·Γ_m^β[a] with [a]_κ as a product of rising
/// factorials, over a grid of a, m and integer κ with k₁ ≤ `k_max`.
pub fn check_gamma_factorization(a_values: &[f64], m_max: usize, algebras: &[Algebra], k_max: u32, tol: f64) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    let mut count = 0;
    for &alg in algebras {
        for m in 1..=m_max {
            for parts in integer_weights(m, k_max) {
                let kappa = WeightVector::new(parts.iter().map(|&k| k as f64).collect())?;
                for &a in a_values {
                    if a <= (m as f64 - 1.0) * alg.beta_f64() / 2.0 {
                        continue;
                    }
                    let lhs = lgamma_m_weighted(a, &kappa, alg, WeightSign::Plus)?;
                    let (sign, log_poch) = gen_pochhammer_product(a, &parts, alg);
                    if sign < 0.0 {
                        return Err(crate::error::domain("negative Pochhammer product inside the gamma domain"));
                    }
                    worst = worst.max((lhs - log_poch - lgamma_m(a, alg, m)?).abs());
                    count += 1;
                }
            }
        }
    }
    Ok(CheckReport::new(
        "gamma factorization",
        worst,
        0.0,
        tol,
        count,
        format!("largest log-scale residual over {count} (a, m, beta, kappa) combinations"),
    ))
}

/// Weakly decreasing integer vectors of length m with entries in 0..=k_max.
fn integer_weights(m: usize, k_max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                let top = v.last().copied().unwrap_or(k_max);
                (0..=top).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

/// ∫_{A>0} etr(−A)|A|^{a−(m−1)β/2−1} q_κ(A)(dA) against Γ_m^β[a, κ]. For m = 1
/// by quadrature; otherwise by importance sampling from the κ = 0 law, whose
/// normalized density is that integrand without q_κ divided by Γ_m^β[a].
/// With `rel_tol = None` the Monte Carlo check passes within three standard
/// errors.
pub fn check_gamma_integral<R: Rng + ?Sized>(
    a: f64,
    kappa: &WeightVector,
    algebra: Algebra,
    rng: &mut R,
    samples: usize,
    rel_tol: Option<f64>,
) -> Result<CheckReport> {
    let m = kappa.len();
    let exact = lgamma_m_weighted(a, kappa, algebra, WeightSign::Plus)?;
    let name = format!("gamma-integral a={a} kappa={:?} beta={}", kappa.entries(), algebra.beta());
    if m == 1 {
        let p = a + kappa.first() - 1.0;
        let r = integrate(|x| Ok((p * x.ln() - x - exact).exp()), Domain::positive(a.max(1.0)), &QuadConfig::default())?;
        return Ok(CheckReport::new(
            name,
            r.value,
            1.0,
            rel_tol.unwrap_or(1e-10),
            r.nodes,
            "quadrature of the scalar integral divided by Gamma(a + k)",
        ));
    }
    if samples < 2 {
        return Err(Error::Domain("at least two samples are required".into()));
    }
    let xi = HermitianPD::identity(m, algebra)?;
    let xi = HermitianPD::new(xi.as_matrix().scale(algebra.beta_f64()))?;
    let sampler = RieszSampler::new(&RieszParams::new(a, WeightVector::zeros(m), xi, Variant::I)?)?;
    let log_base = lgamma_m(a, algebra, m)?;
    let values = (0..samples)
        .map(|_| Ok((log_q_kappa(&sampler.sample(rng)?, kappa)? + log_base - exact).exp()))
        .collect::<Result<Vec<f64>>>()?;
    let est = McEstimate::from_samples(&values);
    Ok(CheckReport::new(
        name,
        est.mean,
        1.0,
        rel_tol.unwrap_or(3.0 * est.std_error),
        samples,
        format!("Monte Carlo integral divided by Gamma_m[a, kappa], standard error {:.2e}", est.std_error),
    ))
}

/// Σ_{|τ|=k} C_τ(x) = (Σ x_i)^k, relative to (Σ x_i)^k.
pub fn check_jack_sum_rule(k: usize, x: &[f64], beta: f64, tol: f64) -> Result<CheckReport> {
    let total = Partition::all_of(k)
        .iter()
        .filter(|t| t.length() <= x.len())
        .map(|t| jack_c(t, x, beta))
        .sum::<Result<f64>>()?;
    let target = x.iter().sum::<f64>().powi(k as i32);
    Ok(CheckReport::new(
        format!("jack sum rule k={k} m={} beta={beta}", x.len()),
        total / target,
        1.0,
        tol,
        1,
        "sum of C_tau(x) over partitions of k, divided by (tr x)^k",
    ))
}

const ROUNDING_FLOOR: f64 = 1e-10;

/// ∫ q_τ(HLH*)(dH) over the Haar measure against C_τ(L)/C_τ(I); passes
/// within three standard errors. A relative rounding floor of 1e-10 covers
/// τ = (k, …, k), where q_τ is a power of the determinant and the sample
/// variance is roundoff only.
pub fn check_spherical_identity<R: Rng + ?Sized>(
    tau: &Partition,
    l: &HermitianPD,
    rng: &mut R,
    samples: usize,
) -> Result<CheckReport> {
    let beta = l.algebra().beta_f64();
    let m = l.dim();
    let eig = hermitian_eigenvalues(l.as_matrix())?;
    let target = jack_c(tau, &eig, beta)? / jack_c_identity(tau, m, beta)?;
    let est = spherical_average_q(rng, tau, l, samples)?;
    Ok(CheckReport::new(
        format!("spherical identity tau={:?} m={m} beta={beta}", tau.parts()),
        est.mean,
        target,
        3.0 * est.std_error + ROUNDING_FLOOR * target.abs(),
        samples,
        format!("Haar average of q_tau(HLH*) against C_tau(L)/C_tau(I), standard error {:.2e}", est.std_error),
    ))
}
