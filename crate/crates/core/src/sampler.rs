//! Constructive samplers: Bartlett-type triangular factors for the Riesz
//! family, Stiefel factorization for Kotz–Riesz, and the scale mixture
//! T = S^{−1/2}·Y + μ for T-Riesz.
//!
//! Every sampler consumes randomness only through the supplied generator, so a
//! fixed (seed, stream) pair reproduces its output bit for bit.

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::dens::{BetaRieszParams, KotzRieszParams, RieszParams, TRieszParams, Variant};
use crate::error::{domain, Result};
use crate::hwv::WeightVector;
use crate::linalg::{haar_stiefel, Algebra, AlgMatrix, HermitianPD, Quat, UpperTriangular};

fn gamma_variate<R: Rng + ?Sized>(rng: &mut R, shape: f64, rate: f64) -> Result<f64> {
    let g = Gamma::new(shape, 1.0 / rate)
        .map_err(|e| domain(format!("gamma(shape = {shape}, rate = {rate}): {e}")))?;
    Ok(g.sample(rng))
}

/// S ~ R_1^{β,I/II}(νβ/2, k, ρ): gamma with shape νβ/2 ± k and rate β/ρ.
pub fn sample_riesz_scalar<R: Rng + ?Sized>(
    rng: &mut R,
    nu: f64,
    k: f64,
    rho: f64,
    algebra: Algebra,
    variant: Variant,
) -> Result<f64> {
    let beta = algebra.beta_f64();
    let shape = nu * beta / 2.0 + variant.sign() * k;
    if !(shape > 0.0) {
        return Err(domain(format!(
            "scalar Riesz type {variant} needs nu*beta/2 {} k > 0, got shape {shape}",
            if variant == Variant::I { "+" } else { "-" }
        )));
    }
    if !(rho > 0.0) {
        return Err(domain(format!("rho must be positive, got {rho}")));
    }
    gamma_variate(rng, shape, beta / rho)
}

/// Upper triangular Bartlett factor T with T*T ~ R_m^{β,I}(a, κ, I):
/// t_ii² ~ Gamma(a + k_i − (i−1)β/2, rate β), off-diagonal coordinates N(0, 1/(2β)).
fn bartlett<R: Rng + ?Sized>(rng: &mut R, a: f64, kappa: &WeightVector, algebra: Algebra) -> Result<AlgMatrix> {
    let m = kappa.len();
    let beta = algebra.beta_f64();
    let b = algebra.beta() as usize;
    let sd = (0.5 / beta).sqrt();
    let mut t = AlgMatrix::zeros(m, m, algebra)?;
    for i in 0..m {
        let shape = a + kappa.entries()[i] - i as f64 * beta / 2.0;
        t[(i, i)] = Quat::real(gamma_variate(rng, shape, beta)?.sqrt());
        for j in (i + 1)..m {
            let mut q = Quat::ZERO;
            for c in 0..b {
                let z: f64 = rng.sample(StandardNormal);
                *q.coord_mut(c) = sd * z;
            }
            t[(i, j)] = q;
        }
    }
    Ok(t)
}

/// Prepared Riesz sampler. Type II draws U ~ R^I(a, −κ*, JΞJ) in the reversed
/// frame and returns J·U·J.
#[derive(Debug, Clone)]
pub struct RieszSampler {
    a: f64,
    weight: WeightVector,
    scale_factor: AlgMatrix,
    variant: Variant,
}

impl RieszSampler {
    pub fn new(params: &RieszParams) -> Result<Self> {
        params.algebra().require_full_matrix()?;
        let (weight, frame) = match params.variant {
            Variant::I => (params.kappa.clone(), params.xi.clone()),
            Variant::II => (params.kappa.neg_reversed(), HermitianPD::new_unscreened(params.xi.as_matrix().reversed())?),
        };
        Ok(Self {
            a: params.a,
            weight,
            scale_factor: frame.cholesky().as_matrix().clone(),
            variant: params.variant,
        })
    }

    /// Upper triangular R with R*R distributed as the frame-adjusted draw.
    fn factor<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<UpperTriangular> {
        let t = bartlett(rng, self.a, &self.weight, self.scale_factor.algebra())?;
        UpperTriangular::new(t.matmul(&self.scale_factor)?)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<HermitianPD> {
        let r = self.factor(rng)?.into_matrix();
        let w = r.adjoint_mul(&r)?;
        HermitianPD::new_unscreened(match self.variant {
            Variant::I => w,
            Variant::II => w.reversed(),
        })
    }
}

pub fn sample_riesz_matrix<R: Rng + ?Sized>(rng: &mut R, params: &RieszParams) -> Result<HermitianPD> {
    RieszSampler::new(params)?.sample(rng)
}

/// Prepared Kotz–Riesz sampler: Y = u(Θ)*·H₁·T·u(Σ) + μ with H₁ Haar on the
/// Stiefel manifold and T the upper Cholesky factor of W ~ R_m(nβ/2, κ, I).
#[derive(Debug, Clone)]
pub struct KotzRieszSampler {
    gram: RieszSampler,
    mu: AlgMatrix,
    left: AlgMatrix,
    right: AlgMatrix,
}

impl KotzRieszSampler {
    pub fn new(params: &KotzRieszParams) -> Result<Self> {
        let alg = params.algebra();
        let (n, m) = params.shape();
        let gram = RieszParams::new(
            n as f64 * alg.beta_f64() / 2.0,
            params.kappa.clone(),
            HermitianPD::identity(m, alg)?,
            params.variant,
        )?;
        Ok(Self {
            gram: RieszSampler::new(&gram)?,
            mu: params.mu.clone(),
            left: params.theta.cholesky().as_matrix().adjoint(),
            right: params.sigma.cholesky().as_matrix().clone(),
        })
    }

    /// Y − μ.
    fn centered<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<AlgMatrix> {
        let (n, m) = self.mu.shape();
        let t = match self.gram.variant {
            Variant::I => self.gram.factor(rng)?.into_matrix(),
            // (R·J)*(R·J) = J·R*R·J, and H·R·J has the law of H·T since H is Haar.
            Variant::II => self.gram.factor(rng)?.into_matrix().reversed_cols(),
        };
        let h = haar_stiefel(rng, n, m, self.mu.algebra())?;
        self.left.matmul(&h.matmul(&t)?)?.matmul(&self.right)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<AlgMatrix> {
        self.centered(rng)?.add(&self.mu)
    }
}

pub fn sample_kotzriesz<R: Rng + ?Sized>(rng: &mut R, params: &KotzRieszParams) -> Result<AlgMatrix> {
    KotzRieszSampler::new(params)?.sample(rng)
}

/// Prepared T-Riesz sampler: T = S^{−1/2}·Y + μ.
#[derive(Debug, Clone)]
pub struct TRieszSampler {
    params: TRieszParams,
    kotz: KotzRieszSampler,
}

impl TRieszSampler {
    pub fn new(params: &TRieszParams) -> Result<Self> {
        Ok(Self { params: params.clone(), kotz: KotzRieszSampler::new(&params.kotz_riesz_factor()?)? })
    }

    /// Draws (S, Y) and returns T along with them.
    pub fn sample_parts<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(AlgMatrix, f64, AlgMatrix)> {
        let p = &self.params;
        let s = sample_riesz_scalar(rng, p.mix.nu, p.mix.k, p.mix.rho, p.algebra(), p.mix.variant)?;
        let y = self.kotz.centered(rng)?;
        let t = y.scale(s.sqrt().recip()).add(&p.mu)?;
        Ok((t, s, y))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<AlgMatrix> {
        Ok(self.sample_parts(rng)?.0)
    }
}

pub fn sample_triesz<R: Rng + ?Sized>(rng: &mut R, params: &TRieszParams) -> Result<AlgMatrix> {
    TRieszSampler::new(params)?.sample(rng)
}

/// Prepared beta-Riesz sampler: F = T*·T for T ~ MTR(ν, k, τ, ρ, 0, I_n, Σ).
#[derive(Debug, Clone)]
pub struct BetaRieszSampler {
    inner: TRieszSampler,
}

impl BetaRieszSampler {
    pub fn new(params: &BetaRieszParams) -> Result<Self> {
        Ok(Self { inner: TRieszSampler::new(&params.t_riesz()?)? })
    }

    /// The underlying T-Riesz draw, for pipelines that need T itself.
    pub fn sample_t<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<AlgMatrix> {
        self.inner.sample(rng)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<HermitianPD> {
        let t = self.sample_t(rng)?;
        HermitianPD::new_unscreened(t.adjoint_mul(&t)?)
    }
}

pub fn sample_beta_riesz<R: Rng + ?Sized>(rng: &mut R, params: &BetaRieszParams) -> Result<HermitianPD> {
    BetaRieszSampler::new(params)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dens::MixingParams;
    use crate::hwv::log_q_kappa;
    use crate::jack::McEstimate;
    use crate::rng::RngStream;

    fn w(v: &[f64]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    fn within(est: McEstimate, truth: f64, sigmas: f64) -> bool {
        (est.mean - truth).abs() <= sigmas * est.std_error
    }

    #[test]
    fn scalar_gamma_moments() {
        let mut rng = RngStream::new(1, 0);
        let n = 200_000;
        let xs: Vec<f64> = (0..n)
            .map(|_| sample_riesz_scalar(&mut rng, 4.0, 0.0, 1.0, Algebra::Real, Variant::I).unwrap())
            .collect();
        let est = McEstimate::from_samples(&xs);
        assert!(within(est, 2.0, 4.0), "{est:?}");
        let xs: Vec<f64> = (0..n)
            .map(|_| sample_riesz_scalar(&mut rng, 2.0, 1.0, 2.0, Algebra::Real, Variant::I).unwrap())
            .collect();
        assert!(within(McEstimate::from_samples(&xs), 4.0, 4.0));
    }

    #[test]
    fn scalar_type_two_boundary_is_rejected() {
        let mut rng = RngStream::new(1, 0);
        assert!(sample_riesz_scalar(&mut rng, 2.0, 1.0, 1.0, Algebra::Real, Variant::II).is_err());
    }

    #[test]
    fn wishart_mean() {
        let mut rng = RngStream::new(2, 0);
        let a = 2.5;
        let xi = HermitianPD::new(AlgMatrix::identity(2, Algebra::Real).unwrap().scale(2.0)).unwrap();
        let p = RieszParams::new(a, WeightVector::zeros(2), xi, Variant::I).unwrap();
        let s = RieszSampler::new(&p).unwrap();
        let draws: Vec<HermitianPD> = (0..100_000).map(|_| s.sample(&mut rng).unwrap()).collect();
        for (r, c, want) in [(0, 0, 2.0 * a), (1, 1, 2.0 * a), (0, 1, 0.0)] {
            let xs: Vec<f64> = draws.iter().map(|d| d.as_matrix()[(r, c)].re).collect();
            let est = McEstimate::from_samples(&xs);
            assert!(within(est, want, 4.0), "({r},{c}) {est:?}");
        }
    }

    #[test]
    fn expected_log_q_is_digamma() {
        // E log q_(1,0)(W) = ψ(a + 1) − log β for W ~ R^I(a, (1,0), I).
        let mut rng = RngStream::new(4, 0);
        for alg in [Algebra::Real, Algebra::Complex] {
            let kappa = w(&[1.0, 0.0]);
            let p = RieszParams::new(2.0, kappa.clone(), HermitianPD::identity(2, alg).unwrap(), Variant::I).unwrap();
            let s = RieszSampler::new(&p).unwrap();
            let xs: Vec<f64> = (0..50_000).map(|_| log_q_kappa(&s.sample(&mut rng).unwrap(), &kappa).unwrap()).collect();
            let digamma_3 = 1.5 - 0.577_215_664_901_532_9;
            assert!(within(McEstimate::from_samples(&xs), digamma_3 - alg.beta_f64().ln(), 4.0), "{alg}");
        }
    }

    #[test]
    fn type_two_mean_on_scalar() {
        // m = 1: R^II(a, k, ξ) is gamma(a − k, rate β/ξ).
        let mut rng = RngStream::new(5, 0);
        let p = RieszParams::new(3.0, w(&[1.0]), HermitianPD::diag(&[2.0], Algebra::Real).unwrap(), Variant::II).unwrap();
        let xs: Vec<f64> = (0..100_000).map(|_| sample_riesz_matrix(&mut rng, &p).unwrap().as_matrix()[(0, 0)].re).collect();
        assert!(within(McEstimate::from_samples(&xs), 4.0, 4.0));
    }

    #[test]
    fn kotz_riesz_location_and_gaussian_variance() {
        let mut rng = RngStream::new(6, 0);
        let mu = AlgMatrix::from_real(3, 2, &[1.0, -2.0, 0.5, 0.0, 3.0, 1.5]).unwrap();
        let p = KotzRieszParams::new(
            WeightVector::zeros(2),
            mu.clone(),
            HermitianPD::identity(3, Algebra::Real).unwrap(),
            HermitianPD::identity(2, Algebra::Real).unwrap(),
            Variant::I,
        )
        .unwrap();
        let s = KotzRieszSampler::new(&p).unwrap();
        let draws: Vec<AlgMatrix> = (0..50_000).map(|_| s.sample(&mut rng).unwrap()).collect();
        for (r, c) in [(0, 0), (2, 1)] {
            let xs: Vec<f64> = draws.iter().map(|d| d[(r, c)].re).collect();
            assert!(within(McEstimate::from_samples(&xs), mu[(r, c)].re, 4.0));
            let sq: Vec<f64> = xs.iter().map(|x| (x - mu[(r, c)].re).powi(2)).collect();
            assert!(within(McEstimate::from_samples(&sq), 0.5, 4.0));
        }
    }

    #[test]
    fn mixing_variable_is_independent_of_y() {
        let mut rng = RngStream::new(7, 0);
        let mix = MixingParams { nu: 5.0, k: 0.5, rho: 1.0, variant: Variant::I };
        let p = TRieszParams::standard(mix, w(&[1.0, 0.0]), 3, Algebra::Real).unwrap();
        let s = TRieszSampler::new(&p).unwrap();
        let n = 50_000;
        let (mut ss, mut ys) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for _ in 0..n {
            let (_, sv, y) = s.sample_parts(&mut rng).unwrap();
            ss.push(sv);
            ys.push(y.frobenius().powi(2));
        }
        let (ms, my) = (ss.iter().sum::<f64>() / n as f64, ys.iter().sum::<f64>() / n as f64);
        let cov = ss.iter().zip(&ys).map(|(a, b)| (a - ms) * (b - my)).sum::<f64>();
        let vs = ss.iter().map(|a| (a - ms).powi(2)).sum::<f64>();
        let vy = ys.iter().map(|b| (b - my).powi(2)).sum::<f64>();
        let corr = cov / (vs * vy).sqrt();
        assert!(corr.abs() < 3.0 / (n as f64).sqrt(), "corr {corr}");
    }

    #[test]
    fn beta_riesz_draws_are_positive_definite_and_reproducible() {
        let mix = MixingParams { nu: 3.0, k: 0.0, rho: 1.0, variant: Variant::II };
        let p = BetaRieszParams::new(4, mix, w(&[0.5, 0.0]), HermitianPD::identity(2, Algebra::Complex).unwrap()).unwrap();
        let s = BetaRieszSampler::new(&p).unwrap();
        let mut a = RngStream::new(99, 3);
        let mut b = RngStream::new(99, 3);
        for _ in 0..100 {
            let fa = s.sample(&mut a).unwrap();
            let fb = s.sample(&mut b).unwrap();
            assert_eq!(fa, fb);
        }
    }
}
