//! Log-densities of the Riesz, Kotz–Riesz, T-Riesz and beta-Riesz families and
//! of the singular values / eigenvalues of T-Riesz matrices.
//!
//! Each family has a prepared form (`*Density`) that caches the log
//! normalizing constant and the inverse Cholesky factors of the scales, and a
//! one-shot free function for single evaluations.

mod params;

pub use params::{BetaRieszParams, KotzRieszParams, MixingParams, RieszParams, SvParams, TRieszParams, Variant};

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::hwv::{log_q_kappa, log_q_kappa_inv, WeightVector};
use crate::jack::{jack_c, jack_c_identity};
use crate::linalg::{gram_pivots, Algebra, AlgMatrix, HermitianPD};
use crate::specfun::{lgamma_m, lgamma_m_weighted, ln_gamma, WeightSign};

fn weight_sign(v: Variant) -> WeightSign {
    match v {
        Variant::I => WeightSign::Plus,
        Variant::II => WeightSign::Minus,
    }
}

fn check_algebra(expected: Algebra, got: Algebra, what: &str) -> Result<()> {
    if expected != got {
        return Err(Error::Shape(format!("{what} is over {got} but the parameters are over {expected}")));
    }
    Ok(())
}

/// log q_κ(A) for type I, log q_κ(A⁻¹) for type II.
fn log_q_variant(a: &HermitianPD, kappa: &WeightVector, variant: Variant) -> Result<f64> {
    match variant {
        Variant::I => log_q_kappa(a, kappa),
        Variant::II => log_q_kappa_inv(a, kappa),
    }
}

/// log q of Z = X*X, from pivots of a QR factorization of X (of X·J for
/// type II, where q_κ(Z⁻¹) = Π μ_i^{−k_i} over the reversed-frame pivots μ).
/// A singular Z lies on a null set; it contributes 0 when the weight is zero
/// and −∞ otherwise.
fn log_q_gram(x: &AlgMatrix, kappa: &WeightVector, variant: Variant) -> Result<f64> {
    if kappa.is_zero() {
        return Ok(0.0);
    }
    let pivots = match variant {
        Variant::I => gram_pivots(x),
        Variant::II => gram_pivots(&x.reversed_cols()).map(|mut p| {
            p.reverse();
            p
        }),
    };
    match pivots {
        Ok(p) => Ok(variant.sign() * kappa.entries().iter().zip(&p).map(|(k, l)| k * l.ln()).sum::<f64>()),
        Err(Error::NotPositiveDefinite { .. }) => Ok(f64::NEG_INFINITY),
        Err(e) => Err(e),
    }
}

/// Whitening maps of a matrix-variate location-scale family:
/// X = u(Θ)^{−*}·(Y − μ)·u(Σ)^{−1}.
#[derive(Debug, Clone)]
struct Whitener {
    mu: AlgMatrix,
    left: AlgMatrix,
    right: AlgMatrix,
}

impl Whitener {
    fn new(mu: &AlgMatrix, theta: &HermitianPD, sigma: &HermitianPD) -> Result<Self> {
        Ok(Self {
            mu: mu.clone(),
            left: theta.cholesky().inverse()?.as_matrix().adjoint(),
            right: sigma.cholesky().inverse()?.into_matrix(),
        })
    }

    fn apply(&self, y: &AlgMatrix) -> Result<AlgMatrix> {
        if y.shape() != self.mu.shape() {
            let (n, m) = self.mu.shape();
            return Err(Error::Shape(format!("point must be {n}x{m}, got {}x{}", y.rows(), y.cols())));
        }
        check_algebra(self.mu.algebra(), y.algebra(), "point")?;
        self.left.matmul(&y.sub(&self.mu)?)?.matmul(&self.right)
    }
}

fn frobenius_sqr(x: &AlgMatrix) -> f64 {
    x.entries().iter().map(|q| q.norm_sqr()).sum()
}

/// Riesz type I/II density on the cone of positive definite matrices.
#[derive(Debug, Clone)]
pub struct RieszDensity {
    params: RieszParams,
    log_const: f64,
}

impl RieszDensity {
    pub fn new(params: RieszParams) -> Result<Self> {
        let p = &params;
        let alg = p.algebra();
        alg.require_full_matrix()?;
        let beta = alg.beta_f64();
        let m = p.dim() as f64;
        let s = p.variant.sign();
        let log_const = (p.a * m + s * p.kappa.sum()) * beta.ln()
            - lgamma_m_weighted(p.a, &p.kappa, alg, weight_sign(p.variant))?
            - p.a * p.xi.log_det()
            - log_q_variant(&p.xi, &p.kappa, p.variant)?;
        Ok(Self { params, log_const })
    }

    pub fn params(&self) -> &RieszParams {
        &self.params
    }

    pub fn log_constant(&self) -> f64 {
        self.log_const
    }

    pub fn log_pdf(&self, v: &HermitianPD) -> Result<f64> {
        let p = &self.params;
        if v.dim() != p.dim() {
            return Err(Error::Shape(format!("V must be {0}x{0}, got {1}x{1}", p.dim(), v.dim())));
        }
        check_algebra(p.algebra(), v.algebra(), "V")?;
        let beta = p.algebra().beta_f64();
        let m = p.dim() as f64;
        Ok(self.log_const - beta * p.xi.trace_inv_mul(v.as_matrix())?
            + (p.a - (m - 1.0) * beta / 2.0 - 1.0) * v.log_det()
            + log_q_variant(v, &p.kappa, p.variant)?)
    }
}

pub fn riesz_logpdf(v: &HermitianPD, params: &RieszParams) -> Result<f64> {
    RieszDensity::new(params.clone())?.log_pdf(v)
}

/// Kotz–Riesz type I/II density on n×m matrices.
#[derive(Debug, Clone)]
pub struct KotzRieszDensity {
    params: KotzRieszParams,
    whitener: Whitener,
    log_const: f64,
}

impl KotzRieszDensity {
    pub fn new(params: KotzRieszParams) -> Result<Self> {
        let p = &params;
        let alg = p.algebra();
        alg.require_full_matrix()?;
        let beta = alg.beta_f64();
        let (n, m) = p.shape();
        let half_n = n as f64 * beta / 2.0;
        let mn_half = (m * n) as f64 * beta / 2.0;
        let log_const = (mn_half + p.variant.sign() * p.kappa.sum()) * beta.ln() + lgamma_m(half_n, alg, m)?
            - mn_half * PI.ln()
            - lgamma_m_weighted(half_n, &p.kappa, alg, weight_sign(p.variant))?
            - half_n * p.sigma.log_det()
            - m as f64 * beta / 2.0 * p.theta.log_det();
        let whitener = Whitener::new(&p.mu, &p.theta, &p.sigma)?;
        Ok(Self { params, whitener, log_const })
    }

    pub fn params(&self) -> &KotzRieszParams {
        &self.params
    }

    pub fn log_constant(&self) -> f64 {
        self.log_const
    }

    pub fn log_pdf(&self, y: &AlgMatrix) -> Result<f64> {
        let p = &self.params;
        let x = self.whitener.apply(y)?;
        let beta = p.algebra().beta_f64();
        Ok(self.log_const - beta * frobenius_sqr(&x) + log_q_gram(&x, &p.kappa, p.variant)?)
    }
}

pub fn kotzriesz_logpdf(y: &AlgMatrix, params: &KotzRieszParams) -> Result<f64> {
    KotzRieszDensity::new(params.clone())?.log_pdf(y)
}

/// log of Γ_1[A]·ρ^{βmn/2 ± Σt} / (Γ_m[nβ/2, ±τ]·Γ_1[νβ/2 ± k]), the part of
/// the normalizing constant shared by the T-Riesz, beta-Riesz and
/// singular-value densities.
fn log_mixing_constant(mix: &MixingParams, tau: &WeightVector, n: usize, alg: Algebra) -> Result<f64> {
    let beta = alg.beta_f64();
    let m = tau.len();
    let s = mix.variant.sign();
    let tail = mix.tail_exponent(beta, n, m, tau.sum());
    Ok(ln_gamma(tail) + ((m * n) as f64 * beta / 2.0 + s * tau.sum()) * mix.rho.ln()
        - lgamma_m_weighted(n as f64 * beta / 2.0, tau, alg, weight_sign(mix.variant))?
        - ln_gamma(mix.mixing_shape(beta)))
}

/// T-Riesz type I/II density on n×m matrices.
#[derive(Debug, Clone)]
pub struct TRieszDensity {
    params: TRieszParams,
    whitener: Whitener,
    tail: f64,
    log_const: f64,
}

impl TRieszDensity {
    pub fn new(params: TRieszParams) -> Result<Self> {
        let p = &params;
        let alg = p.algebra();
        alg.require_full_matrix()?;
        let beta = alg.beta_f64();
        let (n, m) = p.shape();
        let log_const = lgamma_m(n as f64 * beta / 2.0, alg, m)? + log_mixing_constant(&p.mix, &p.tau, n, alg)?
            - (m * n) as f64 * beta / 2.0 * PI.ln()
            - n as f64 * beta / 2.0 * p.sigma.log_det()
            - m as f64 * beta / 2.0 * p.theta.log_det();
        let tail = p.mix.tail_exponent(beta, n, m, p.tau.sum());
        let whitener = Whitener::new(&p.mu, &p.theta, &p.sigma)?;
        Ok(Self { params, whitener, tail, log_const })
    }

    pub fn params(&self) -> &TRieszParams {
        &self.params
    }

    pub fn log_constant(&self) -> f64 {
        self.log_const
    }

    pub fn log_pdf(&self, t: &AlgMatrix) -> Result<f64> {
        let p = &self.params;
        let x = self.whitener.apply(t)?;
        Ok(self.log_const - self.tail * (p.mix.rho * frobenius_sqr(&x)).ln_1p()
            + log_q_gram(&x, &p.tau, p.mix.variant)?)
    }
}

pub fn triesz_logpdf(t: &AlgMatrix, params: &TRieszParams) -> Result<f64> {
    TRieszDensity::new(params.clone())?.log_pdf(t)
}

/// c-beta-Riesz (type I) / k-beta-Riesz (type II) density of F = T*T.
///
/// The weight enters through q_τ(Z) or q_τ(Z⁻¹) with Z = u(Σ)^{−*}·F·u(Σ)^{−1}.
/// For type I this equals q_τ(F)/q_τ(Σ) for every Σ; for type II it reduces to
/// q_τ(F⁻¹)/q_τ(Σ⁻¹) only when Σ is diagonal.
#[derive(Debug, Clone)]
pub struct BetaRieszDensity {
    params: BetaRieszParams,
    sigma_u_inv: AlgMatrix,
    tail: f64,
    log_const: f64,
}

impl BetaRieszDensity {
    pub fn new(params: BetaRieszParams) -> Result<Self> {
        let p = &params;
        let alg = p.algebra();
        alg.require_full_matrix()?;
        let beta = alg.beta_f64();
        let (n, m) = (p.n, p.dim());
        let log_const = log_mixing_constant(&p.mix, &p.tau, n, alg)? - n as f64 * beta / 2.0 * p.sigma.log_det();
        let tail = p.mix.tail_exponent(beta, n, m, p.tau.sum());
        let sigma_u_inv = p.sigma.cholesky().inverse()?.into_matrix();
        Ok(Self { params, sigma_u_inv, tail, log_const })
    }

    pub fn params(&self) -> &BetaRieszParams {
        &self.params
    }

    pub fn log_constant(&self) -> f64 {
        self.log_const
    }

    pub fn log_pdf(&self, f: &HermitianPD) -> Result<f64> {
        let p = &self.params;
        let m = p.dim();
        if f.dim() != m {
            return Err(Error::Shape(format!("F must be {m}x{m}, got {0}x{0}", f.dim())));
        }
        check_algebra(p.algebra(), f.algebra(), "F")?;
        let beta = p.algebra().beta_f64();
        let trace = p.sigma.trace_inv_mul(f.as_matrix())?;
        let mut out = self.log_const + ((p.n - m + 1) as f64 * beta / 2.0 - 1.0) * f.log_det()
            - self.tail * (p.mix.rho * trace).ln_1p();
        if !p.tau.is_zero() {
            let z = f.congruence(&self.sigma_u_inv)?;
            out += log_q_variant(&z, &p.tau, p.mix.variant)?;
        }
        Ok(out)
    }
}

pub fn beta_riesz_logpdf(f: &HermitianPD, params: &BetaRieszParams) -> Result<f64> {
    BetaRieszDensity::new(params.clone())?.log_pdf(f)
}

/// The exponent ϱ of π in the singular value decomposition Jacobian.
pub fn svd_rho(algebra: Algebra, m: usize) -> f64 {
    let m = m as f64;
    match algebra {
        Algebra::Real => 0.0,
        Algebra::Complex => -m,
        Algebra::Quaternion => -2.0 * m,
        Algebra::Octonion => -4.0 * m,
    }
}

/// Joint density of the ordered singular values α₁ > … > α_m > 0 of a
/// standard T-Riesz matrix, and of the eigenvalues γ_i = α_i² of F = T*T.
#[derive(Debug, Clone)]
pub struct SvDensity {
    params: SvParams,
    tail: f64,
    log_const: f64,
}

impl SvDensity {
    pub fn new(params: SvParams) -> Result<Self> {
        let p = &params;
        let (n, m, alg) = (p.n, p.m, p.algebra);
        let beta = alg.beta_f64();
        let tau = p.tau.to_weight(m)?;
        let log_const = m as f64 * LN_2 + (beta * (m * m) as f64 / 2.0 + svd_rho(alg, m)) * PI.ln()
            + log_mixing_constant(&p.mix, &tau, n, alg)?
            - lgamma_m(beta * m as f64 / 2.0, alg, m)?
            - jack_c_identity(&p.tau, m, beta)?.ln();
        let tail = p.mix.tail_exponent(beta, n, m, tau.sum());
        Ok(Self { params, tail, log_const })
    }

    pub fn params(&self) -> &SvParams {
        &self.params
    }

    pub fn log_constant(&self) -> f64 {
        self.log_const
    }

    /// Log-density of the singular values, given in decreasing order.
    pub fn log_pdf_sv(&self, alpha: &[f64]) -> Result<f64> {
        let p = &self.params;
        let sq: Vec<f64> = alpha.iter().map(|a| a * a).collect();
        if let Some(degenerate) = check_ordered(alpha, p.m)? {
            return Ok(degenerate);
        }
        let beta = p.algebra.beta_f64();
        let power = (p.n - p.m + 1) as f64 * beta - 1.0;
        let mut out = self.log_const - self.tail * (p.mix.rho * sq.iter().sum::<f64>()).ln_1p();
        out += alpha.iter().map(|a| power * a.ln()).sum::<f64>();
        for i in 0..p.m {
            for j in (i + 1)..p.m {
                out += beta * (sq[i] - sq[j]).ln();
            }
        }
        if p.tau.weight() > 0 {
            let args: Vec<f64> = match p.mix.variant {
                Variant::I => sq,
                Variant::II => sq.iter().map(|s| 1.0 / s).collect(),
            };
            out += jack_c(&p.tau, &args, beta)?.ln();
        }
        Ok(out)
    }

    /// Log-density of the eigenvalues γ of F, given in decreasing order.
    pub fn log_pdf_eig(&self, gamma: &[f64]) -> Result<f64> {
        if let Some(degenerate) = check_ordered(gamma, self.params.m)? {
            return Ok(degenerate);
        }
        let alpha: Vec<f64> = gamma.iter().map(|g| g.sqrt()).collect();
        let jac: f64 = gamma.iter().map(|g| -0.5 * g.ln() - LN_2).sum();
        Ok(self.log_pdf_sv(&alpha)? + jac)
    }
}

/// Validates a decreasing positive vector. Ties and a zero last entry are
/// boundary points and yield `Some(−∞)`.
fn check_ordered(v: &[f64], m: usize) -> Result<Option<f64>> {
    if v.len() != m {
        return Err(Error::Shape(format!("expected {m} values, got {}", v.len())));
    }
    if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::UnorderedInput);
    }
    let mut degenerate = v[m - 1] == 0.0;
    for w in v.windows(2) {
        if w[0] < w[1] {
            return Err(Error::UnorderedInput);
        }
        degenerate |= w[0] == w[1];
    }
    Ok(degenerate.then_some(f64::NEG_INFINITY))
}

pub fn sv_triesz_logpdf(alpha: &[f64], params: &SvParams) -> Result<f64> {
    SvDensity::new(params.clone())?.log_pdf_sv(alpha)
}

pub fn eig_beta_riesz_logpdf(gamma: &[f64], params: &SvParams) -> Result<f64> {
    SvDensity::new(params.clone())?.log_pdf_eig(gamma)
}
