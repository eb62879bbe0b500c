use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::hwv::{Partition, WeightVector};
use crate::linalg::{Algebra, AlgMatrix, HermitianPD};

/// Type I uses q_κ(·), type II uses q_κ((·)⁻¹).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    I,
    II,
}

impl Variant {
    /// +1 for type I, −1 for type II: the sign the weights enter exponents with.
    pub fn sign(self) -> f64 {
        match self {
            Variant::I => 1.0,
            Variant::II => -1.0,
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Variant::I => write!(f, "I"),
            Variant::II => write!(f, "II"),
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" | "1" => Ok(Variant::I),
            "II" | "ii" | "2" => Ok(Variant::II),
            other => Err(Error::Parse(format!("unknown variant '{other}', expected I or II"))),
        }
    }
}

/// Checks the existence condition of Γ_m^β[a, ±κ]:
/// type I a > (m−1)β/2 − k_m, type II a > (m−1)β/2 + k_1.
pub(crate) fn check_weighted_gamma(
    what: &str,
    a_name: &str,
    a: f64,
    kappa: &WeightVector,
    beta: f64,
    variant: Variant,
    k_name: &str,
) -> Result<()> {
    let m = kappa.len();
    let bound = (m as f64 - 1.0) * beta / 2.0;
    let ok = match variant {
        Variant::I => a > bound - kappa.last(),
        Variant::II => a > bound + kappa.first(),
    };
    if ok {
        return Ok(());
    }
    let cond = match variant {
        Variant::I => format!("{a_name} > (m-1)beta/2 - {k_name}_m"),
        Variant::II => format!("{a_name} > (m-1)beta/2 + {k_name}_1"),
    };
    Err(domain(format!("{what} type {variant} requires {cond} (got {a_name} = {a}, m = {m}, beta = {beta})")))
}

fn check_same_algebra(alg: Algebra, mats: &[(&str, Algebra)]) -> Result<()> {
    for (name, a) in mats {
        if *a != alg {
            return Err(Error::Shape(format!("{name} is over {a} but expected {alg}")));
        }
    }
    Ok(())
}

/// Riesz distribution R_m^{β,I/II}(a, κ, Ξ).
#[derive(Debug, Clone)]
pub struct RieszParams {
    pub a: f64,
    pub kappa: WeightVector,
    pub xi: HermitianPD,
    pub variant: Variant,
}

impl RieszParams {
    pub fn new(a: f64, kappa: WeightVector, xi: HermitianPD, variant: Variant) -> Result<Self> {
        if kappa.len() != xi.dim() {
            return Err(Error::Shape(format!("kappa has length {} but Xi is {}x{}", kappa.len(), xi.dim(), xi.dim())));
        }
        check_weighted_gamma("Riesz", "a", a, &kappa, xi.algebra().beta_f64(), variant, "k")?;
        Ok(Self { a, kappa, xi, variant })
    }

    pub fn dim(&self) -> usize {
        self.xi.dim()
    }

    pub fn algebra(&self) -> Algebra {
        self.xi.algebra()
    }
}

/// Kotz–Riesz distribution KR_{n×m}^{β,I/II}(κ, μ, Θ, Σ): Θ is the n×n row
/// scale, Σ the m×m column scale.
#[derive(Debug, Clone)]
pub struct KotzRieszParams {
    pub kappa: WeightVector,
    pub mu: AlgMatrix,
    pub theta: HermitianPD,
    pub sigma: HermitianPD,
    pub variant: Variant,
}

impl KotzRieszParams {
    pub fn new(
        kappa: WeightVector,
        mu: AlgMatrix,
        theta: HermitianPD,
        sigma: HermitianPD,
        variant: Variant,
    ) -> Result<Self> {
        let (n, m) = mu.shape();
        check_location(n, m, &theta, &sigma, kappa.len(), "kappa")?;
        check_same_algebra(mu.algebra(), &[("Theta", theta.algebra()), ("Sigma", sigma.algebra())])?;
        let beta = mu.algebra().beta_f64();
        check_weighted_gamma("Kotz-Riesz", "n*beta/2", n as f64 * beta / 2.0, &kappa, beta, variant, "k")?;
        Ok(Self { kappa, mu, theta, sigma, variant })
    }

    /// Zero location, identity scales.
    pub fn standard(kappa: WeightVector, n: usize, algebra: Algebra, variant: Variant) -> Result<Self> {
        let m = kappa.len();
        Self::new(
            kappa,
            AlgMatrix::zeros(n, m, algebra)?,
            HermitianPD::identity(n, algebra)?,
            HermitianPD::identity(m, algebra)?,
            variant,
        )
    }

    pub fn shape(&self) -> (usize, usize) {
        self.mu.shape()
    }

    pub fn algebra(&self) -> Algebra {
        self.mu.algebra()
    }
}

fn check_location(n: usize, m: usize, theta: &HermitianPD, sigma: &HermitianPD, klen: usize, kname: &str) -> Result<()> {
    if n < m {
        return Err(Error::Shape(format!("location is {n}x{m}; rank m requires n >= m")));
    }
    if theta.dim() != n {
        return Err(Error::Shape(format!("Theta must be {n}x{n}, got {}x{}", theta.dim(), theta.dim())));
    }
    if sigma.dim() != m {
        return Err(Error::Shape(format!("Sigma must be {m}x{m}, got {}x{}", sigma.dim(), sigma.dim())));
    }
    if klen != m {
        return Err(Error::Shape(format!("{kname} must have length m = {m}, got {klen}")));
    }
    Ok(())
}

/// Shared scalar part of the T-Riesz family: ν, k, τ, ρ and the variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingParams {
    pub nu: f64,
    pub k: f64,
    pub rho: f64,
    pub variant: Variant,
}

impl MixingParams {
    /// νβ/2 ± k, the shape of the scalar Riesz mixing variable.
    pub fn mixing_shape(&self, beta: f64) -> f64 {
        self.nu * beta / 2.0 + self.variant.sign() * self.k
    }

    /// (ν + mn)β/2 ± (k + Σt_i), the exponent of 1 + ρ·tr(..).
    pub fn tail_exponent(&self, beta: f64, n: usize, m: usize, tau_sum: f64) -> f64 {
        (self.nu + (m * n) as f64) * beta / 2.0 + self.variant.sign() * (self.k + tau_sum)
    }

    pub(crate) fn validate(&self, beta: f64, n: usize, tau: &WeightVector) -> Result<()> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(domain(format!("rho must be positive, got {}", self.rho)));
        }
        if !(self.mixing_shape(beta) > 0.0) {
            let cond = match self.variant {
                Variant::I => "nu*beta/2 + k > 0",
                Variant::II => "nu*beta/2 - k > 0",
            };
            return Err(domain(format!(
                "T-Riesz type {} requires {cond} (got nu = {}, k = {}, beta = {beta})",
                self.variant, self.nu, self.k
            )));
        }
        check_weighted_gamma("T-Riesz", "n*beta/2", n as f64 * beta / 2.0, tau, beta, self.variant, "t")
    }
}

/// Matrix multivariate T-Riesz distribution MTR^{β,I/II}(ν, k, τ, ρ, μ, Θ, Σ).
#[derive(Debug, Clone)]
pub struct TRieszParams {
    pub mix: MixingParams,
    pub tau: WeightVector,
    pub mu: AlgMatrix,
    pub theta: HermitianPD,
    pub sigma: HermitianPD,
}

impl TRieszParams {
    pub fn new(
        mix: MixingParams,
        tau: WeightVector,
        mu: AlgMatrix,
        theta: HermitianPD,
        sigma: HermitianPD,
    ) -> Result<Self> {
        let (n, m) = mu.shape();
        check_location(n, m, &theta, &sigma, tau.len(), "tau")?;
        check_same_algebra(mu.algebra(), &[("Theta", theta.algebra()), ("Sigma", sigma.algebra())])?;
        mix.validate(mu.algebra().beta_f64(), n, &tau)?;
        Ok(Self { mix, tau, mu, theta, sigma })
    }

    pub fn standard(mix: MixingParams, tau: WeightVector, n: usize, algebra: Algebra) -> Result<Self> {
        let m = tau.len();
        Self::new(
            mix,
            tau,
            AlgMatrix::zeros(n, m, algebra)?,
            HermitianPD::identity(n, algebra)?,
            HermitianPD::identity(m, algebra)?,
        )
    }

    pub fn shape(&self) -> (usize, usize) {
        self.mu.shape()
    }

    pub fn algebra(&self) -> Algebra {
        self.mu.algebra()
    }

    pub fn variant(&self) -> Variant {
        self.mix.variant
    }

    /// The Kotz–Riesz factor Y of T = S^{-1/2} Y + μ (zero location).
    pub fn kotz_riesz_factor(&self) -> Result<KotzRieszParams> {
        let (n, m) = self.shape();
        KotzRieszParams::new(
            self.tau.clone(),
            AlgMatrix::zeros(n, m, self.algebra())?,
            self.theta.clone(),
            self.sigma.clone(),
            self.mix.variant,
        )
    }
}

/// Law of F = T*·T for T ~ MTR(ν, k, τ, ρ, 0, I_n, Σ): c-beta-Riesz (type I)
/// or k-beta-Riesz (type II) of the second kind.
#[derive(Debug, Clone)]
pub struct BetaRieszParams {
    pub n: usize,
    pub mix: MixingParams,
    pub tau: WeightVector,
    pub sigma: HermitianPD,
}

impl BetaRieszParams {
    pub fn new(n: usize, mix: MixingParams, tau: WeightVector, sigma: HermitianPD) -> Result<Self> {
        let m = sigma.dim();
        if n < m {
            return Err(Error::Shape(format!("beta-Riesz needs n >= m, got n = {n}, m = {m}")));
        }
        if tau.len() != m {
            return Err(Error::Shape(format!("tau must have length m = {m}, got {}", tau.len())));
        }
        mix.validate(sigma.algebra().beta_f64(), n, &tau)?;
        Ok(Self { n, mix, tau, sigma })
    }

    pub fn dim(&self) -> usize {
        self.sigma.dim()
    }

    pub fn algebra(&self) -> Algebra {
        self.sigma.algebra()
    }

    pub fn variant(&self) -> Variant {
        self.mix.variant
    }

    pub fn t_riesz(&self) -> Result<TRieszParams> {
        let alg = self.algebra();
        TRieszParams::new(
            self.mix.clone(),
            self.tau.clone(),
            AlgMatrix::zeros(self.n, self.dim(), alg)?,
            HermitianPD::identity(self.n, alg)?,
            self.sigma.clone(),
        )
    }
}

/// Parameters of the joint singular-value (and eigenvalue) densities of
/// T ~ MTR(ν, k, τ, ρ, 0, I_n, I_m). Any β ∈ {1, 2, 4, 8} is accepted.
#[derive(Debug, Clone)]
pub struct SvParams {
    pub n: usize,
    pub m: usize,
    pub mix: MixingParams,
    pub tau: Partition,
    pub algebra: Algebra,
}

impl SvParams {
    pub fn new(n: usize, m: usize, mix: MixingParams, tau: Partition, algebra: Algebra) -> Result<Self> {
        if m == 0 || n < m {
            return Err(Error::Shape(format!("singular values need n >= m >= 1, got n = {n}, m = {m}")));
        }
        let weight = tau.to_weight(m)?;
        mix.validate(algebra.beta_f64(), n, &weight)?;
        Ok(Self { n, m, mix, tau, algebra })
    }

    pub fn variant(&self) -> Variant {
        self.mix.variant
    }
}
