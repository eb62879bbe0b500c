//! Checks of densities against quadrature and of samplers against densities.

use rand::Rng;

use super::ks::{ks_critical_value, ks_one_sample, MarginalCdf};
use super::quad::{integrate_box, QuadConfig};
use super::support::Support;
use super::CheckReport;
use crate::dens::{svd_rho, BetaRieszParams, KotzRieszParams, RieszParams, SvParams, TRieszParams};
use crate::error::{Error, Result};
use crate::linalg::{gaussian_matrix, hermitian_eigenvalues, singular_values, Algebra, HermitianPD};
use crate::model::{Model, Point};
use crate::sampler::TRieszSampler;
use crate::specfun::log_stiefel_volume;

/// Significance level of every KS check.
pub const KS_ALPHA: f64 = 1e-3;

const MAX_QUAD_DIMS: usize = 4;
const KS_PANELS: usize = 8;
const KS_ORDER: usize = 8;

fn describe(model: &Model) -> String {
    let (r, c) = model.shape();
    match model {
        Model::SingularValues(d, _) | Model::Eigenvalues(d, _) => {
            let p = d.params();
            format!("{} n={} m={} beta={}", model.name(), p.n, p.m, p.algebra.beta())
        }
        _ => format!("{} {r}x{c} beta={}", model.name(), model.algebra().beta()),
    }
}

fn require_quad_dims(d: usize) -> Result<()> {
    if d > MAX_QUAD_DIMS {
        return Err(Error::Shape(format!(
            "quadrature checks need at most {MAX_QUAD_DIMS} real coordinates, got {d}"
        )));
    }
    Ok(())
}

/// Integral of the density over its support by nested adaptive quadrature.
pub fn check_normalization(model: &Model, tol: f64, cfg: &QuadConfig) -> Result<CheckReport> {
    let d = model.real_dim();
    require_quad_dims(d)?;
    let support = Support::for_model(model)?;
    let density = support.density(model);
    let layout = support.layout(0);
    let (lo, hi) = layout.bounds();
    let r = integrate_box(&layout.pull_back(&density), &lo, &hi, cfg)?;
    Ok(CheckReport::new(
        format!("normalization {}", describe(model)),
        r.value,
        1.0,
        tol,
        r.nodes,
        format!("integral over {d} real coordinates, target 1, quadrature error estimate {:.1e}", r.error),
    ))
}

/// `samples` independent draws from the model's sampler.
pub fn draw_points<R: Rng + ?Sized>(model: &Model, rng: &mut R, samples: usize) -> Result<Vec<Point>> {
    (0..samples).map(|_| model.sample(rng)).collect()
}

/// KS test of each coordinate of `draws` against the marginal of `density`
/// on `support`; both use canonical coordinates.
fn ks_marginals(
    label: &str,
    names: &[String],
    support: &Support,
    density: &dyn Fn(&[f64]) -> Result<f64>,
    draws: &[Vec<f64>],
    cfg: &QuadConfig,
) -> Result<Vec<CheckReport>> {
    let d = support.dims();
    require_quad_dims(d)?;
    let crit = ks_critical_value(draws.len(), KS_ALPHA);
    let mut out = Vec::with_capacity(d);
    for c in 0..d {
        let layout = support.layout(c);
        let marginal = MarginalCdf::build(density, &layout, KS_PANELS, KS_ORDER, cfg)?;
        let mut xs: Vec<f64> = draws.iter().map(|v| v[c]).collect();
        let ks = ks_one_sample(&mut xs, |x| marginal.cdf(x));
        out.push(CheckReport::new(
            format!("{label} {}", names[c]),
            ks.statistic,
            0.0,
            crit,
            draws.len(),
            format!(
                "KS distance of the sampled marginal, p = {:.4} (critical distance at alpha = {KS_ALPHA}), marginal mass {:.6}",
                ks.p_value,
                marginal.total()
            ),
        ));
    }
    Ok(out)
}

/// Coordinate-marginal KS tests of sampled points against the density.
pub fn check_sampler_marginals(model: &Model, points: &[Point], cfg: &QuadConfig) -> Result<Vec<CheckReport>> {
    let support = Support::for_model(model)?;
    let draws = points.iter().map(|p| support.coordinates(model, p)).collect::<Result<Vec<_>>>()?;
    let density = support.density(model);
    ks_marginals(&format!("sampler-ks {}", describe(model)), &support.coordinate_names(model), &support, &density, &draws, cfg)
}

/// The same family with its scale shrunk by `c` (Ξ or Σ ↦ cΣ, or ρ ↦ ρ/c
/// for value densities), so that its ratio to the original stays bounded.
pub fn shrunk_model(model: &Model, c: f64) -> Result<Model> {
    if !(c > 0.0) {
        return Err(crate::error::domain(format!("shrink factor must be positive, got {c}")));
    }
    let scale = |a: &HermitianPD| HermitianPD::new(a.as_matrix().scale(c));
    match model {
        Model::Riesz(d, _) => {
            let p = d.params();
            Model::riesz(RieszParams::new(p.a, p.kappa.clone(), scale(&p.xi)?, p.variant)?)
        }
        Model::KotzRiesz(d, _) => {
            let p = d.params();
            Model::kotz_riesz(KotzRieszParams::new(
                p.kappa.clone(),
                p.mu.clone(),
                p.theta.clone(),
                scale(&p.sigma)?,
                p.variant,
            )?)
        }
        Model::TRiesz(d, _) => {
            let p = d.params();
            Model::t_riesz(TRieszParams::new(
                p.mix.clone(),
                p.tau.clone(),
                p.mu.clone(),
                p.theta.clone(),
                scale(&p.sigma)?,
            )?)
        }
        Model::BetaRiesz(d, _) => {
            let p = d.params();
            Model::beta_riesz(BetaRieszParams::new(p.n, p.mix.clone(), p.tau.clone(), scale(&p.sigma)?)?)
        }
        Model::SingularValues(d, _) | Model::Eigenvalues(d, _) => {
            let mut p = d.params().clone();
            p.mix.rho /= c;
            let p = SvParams::new(p.n, p.m, p.mix, p.tau, p.algebra)?;
            if matches!(model, Model::SingularValues(..)) {
                Model::singular_values(p)
            } else {
                Model::eigenvalues(p)
            }
        }
    }
}

/// Importance-weight identity E_p[p_c(X)/p(X)] = 1 for X drawn from p,
/// where p_c is [`shrunk_model`]. Passes within three standard errors.
pub fn check_importance(model: &Model, points: &[Point], c: f64) -> Result<CheckReport> {
    let alt = shrunk_model(model, c)?;
    let weights = points
        .iter()
        .map(|x| Ok((alt.log_pdf(x)? - model.log_pdf(x)?).exp()))
        .collect::<Result<Vec<f64>>>()?;
    let est = crate::jack::McEstimate::from_samples(&weights);
    Ok(CheckReport::new(
        format!("sampler-importance {} c={c}", describe(model)),
        est.mean,
        1.0,
        3.0 * est.std_error,
        points.len(),
        format!("mean density ratio of the scale-{c} law to the sampled law, target 1, standard error {:.2e}", est.std_error),
    ))
}

/// T → F = T*T → eigenvalues, sampled through the T-Riesz sampler and tested
/// coordinate-wise against the eigenvalue density.
pub fn check_eig_pipeline<R: Rng + ?Sized>(
    params: &SvParams,
    rng: &mut R,
    samples: usize,
    cfg: &QuadConfig,
) -> Result<Vec<CheckReport>> {
    let t = TRieszParams::standard(params.mix.clone(), params.tau.to_weight(params.m)?, params.n, params.algebra)?;
    let sampler = TRieszSampler::new(&t)?;
    let model = Model::eigenvalues(params.clone())?;
    let draws = (0..samples)
        .map(|_| {
            let t = sampler.sample(rng)?;
            hermitian_eigenvalues(&t.adjoint_mul(&t)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let support = Support::for_model(&model)?;
    let density = support.density(&model);
    ks_marginals(&format!("eig-pipeline {}", describe(&model)), &model.coordinate_names(), &support, &density, &draws, cfg)
}

/// Joint density of the ordered singular values of an n×m Gaussian matrix
/// with density (β/π)^{βnm/2} etr(−βX*X), built from the SVD Jacobian and
/// the Stiefel volumes.
#[derive(Debug, Clone, Copy)]
pub struct GaussianSv {
    n: usize,
    m: usize,
    algebra: Algebra,
    log_const: f64,
}

impl GaussianSv {
    pub fn new(n: usize, m: usize, algebra: Algebra) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::Shape(format!("need 1 <= m <= n, got n = {n}, m = {m}")));
        }
        let beta = algebra.beta_f64();
        let nm = (n * m) as f64;
        let log_const = beta * nm / 2.0 * (beta.ln() - std::f64::consts::PI.ln())
            - m as f64 * std::f64::consts::LN_2
            + svd_rho(algebra, m) * std::f64::consts::PI.ln()
            + log_stiefel_volume(n, m, algebra)?
            + log_stiefel_volume(m, m, algebra)?;
        Ok(Self { n, m, algebra, log_const })
    }

    pub fn log_pdf(&self, alpha: &[f64]) -> f64 {
        if alpha.len() != self.m || alpha.windows(2).any(|w| w[0] <= w[1]) || alpha[self.m - 1] <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let beta = self.algebra.beta_f64();
        let mut out = self.log_const;
        let p = beta * (self.n - self.m + 1) as f64 - 1.0;
        for (i, &a) in alpha.iter().enumerate() {
            out += p * a.ln() - beta * a * a;
            for &b in &alpha[i + 1..] {
                out += beta * (a * a - b * b).ln();
            }
        }
        out
    }
}

/// Singular values of Gaussian matrices against the density implied by the
/// SVD Jacobian: its normalization (m ≤ 2) and coordinate-marginal KS tests.
pub fn check_svd_measure<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    algebra: Algebra,
    rng: &mut R,
    samples: usize,
    norm_tol: f64,
    cfg: &QuadConfig,
) -> Result<Vec<CheckReport>> {
    let g = GaussianSv::new(n, m, algebra)?;
    let label = format!("svd-measure n={n} m={m} beta={}", algebra.beta());
    let support = Support::Ordered { m, scale: (n as f64 / 2.0).sqrt() };
    let density = |x: &[f64]| Ok(g.log_pdf(x).exp());
    let mut out = Vec::new();
    let layout = support.layout(0);
    let (lo, hi) = layout.bounds();
    let r = integrate_box(&layout.pull_back(&density), &lo, &hi, cfg)?;
    out.push(CheckReport::new(
        format!("{label} normalization"),
        r.value,
        1.0,
        norm_tol,
        r.nodes,
        format!("integral of the implied singular-value density, target 1, rho = {}", svd_rho(algebra, m)),
    ));
    let std = 1.0 / (2.0 * algebra.beta_f64()).sqrt();
    let draws = (0..samples)
        .map(|_| singular_values(&gaussian_matrix(rng, n, m, algebra, std)?))
        .collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = (1..=m).map(|i| format!("alpha{i}")).collect();
    out.extend(ks_marginals(&label, &names, &support, &density, &draws, cfg)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dens::{MixingParams, Variant};
    use crate::hwv::{Partition, WeightVector};
    use crate::rng::RngStream;

    fn cfg() -> QuadConfig {
        QuadConfig::with_tol(1e-9, 1e-13)
    }

    fn scalar_riesz(a: f64, k: f64, variant: Variant) -> Model {
        let xi = HermitianPD::identity(1, Algebra::Real).unwrap();
        Model::riesz(RieszParams::new(a, WeightVector::new(vec![k]).unwrap(), xi, variant).unwrap()).unwrap()
    }

    #[test]
    fn scalar_normalizations() {
        let r = check_normalization(&scalar_riesz(2.0, 0.0, Variant::I), 1e-8, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
        let mix = MixingParams { nu: 3.0, k: 0.0, rho: 1.0 / 3.0, variant: Variant::I };
        let w = WeightVector::zeros(1);
        let t = TRieszParams::standard(mix, w, 1, Algebra::Real).unwrap();
        let r = check_normalization(&Model::t_riesz(t).unwrap(), 1e-8, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn sv_density_normalizes_on_ordered_domain() {
        let mix = MixingParams { nu: 4.0, k: 0.0, rho: 0.25, variant: Variant::I };
        let p = SvParams::new(3, 2, mix, Partition::new(vec![1, 0]).unwrap(), Algebra::Real).unwrap();
        let r = check_normalization(&Model::singular_values(p).unwrap(), 1e-5, &QuadConfig::with_tol(1e-8, 1e-13))
            .unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn too_many_coordinates_are_rejected() {
        let p = KotzRieszParams::standard(WeightVector::zeros(2), 3, Algebra::Real, Variant::I).unwrap();
        let m = Model::kotz_riesz(p).unwrap();
        assert!(matches!(check_normalization(&m, 1e-5, &cfg()), Err(Error::Shape(_))));
    }

    #[test]
    fn importance_detects_a_wrong_sampler() {
        let model = scalar_riesz(3.0, 0.0, Variant::I);
        let wrong = scalar_riesz(3.3, 0.0, Variant::I);
        let mut rng = RngStream::new(5, 0);
        let good = draw_points(&model, &mut rng, 20_000).unwrap();
        assert!(check_importance(&model, &good, 0.8).unwrap().passed);
        let bad = draw_points(&wrong, &mut rng, 20_000).unwrap();
        assert!(!check_importance(&model, &bad, 0.8).unwrap().passed);
    }

    #[test]
    fn scalar_sampler_ks() {
        let model = scalar_riesz(2.5, 1.0, Variant::II);
        let mut rng = RngStream::new(6, 0);
        let pts = draw_points(&model, &mut rng, 20_000).unwrap();
        let r = check_sampler_marginals(&model, &pts, &QuadConfig::with_tol(1e-7, 1e-12)).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].passed, "{:?}", r[0]);
    }

    #[test]
    fn gaussian_sv_reduces_to_chi() {
        // m = 1: |x| for x ∈ ℝ^{βn} with N(0, 1/(2β)) coordinates.
        use statrs::distribution::{Continuous, Gamma};
        for alg in [Algebra::Real, Algebra::Complex] {
            let g = GaussianSv::new(3, 1, alg).unwrap();
            let beta = alg.beta_f64();
            // β·α² ~ Gamma(βn/2, 1), so the density of α is 2βα·f(βα²).
            let gamma = Gamma::new(beta * 1.5, 1.0).unwrap();
            for a in [0.2, 0.7, 1.3] {
                let expect = (2.0 * beta * a * gamma.pdf(beta * a * a)).ln();
                assert!((g.log_pdf(&[a]) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn svd_measure_small() {
        let mut rng = RngStream::new(8, 0);
        let r = check_svd_measure(3, 2, Algebra::Real, &mut rng, 5_000, 1e-5, &QuadConfig::with_tol(1e-8, 1e-13))
            .unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|c| c.passed), "{r:?}");
    }
}
