//! Uniform access to every distribution: name parsing, JSON parameter bundles,
//! points, log-density evaluation and sampling. The CLI and the verification
//! suite both work through [`Model`].

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Deserialize;
use serde_json::Value;

use crate::dens::{
    BetaRieszDensity, BetaRieszParams, KotzRieszDensity, KotzRieszParams, MixingParams, RieszDensity, RieszParams,
    SvDensity, SvParams, TRieszDensity, TRieszParams, Variant,
};
use crate::error::{Error, Result};
use crate::hwv::{Partition, WeightVector};
use crate::linalg::{hermitian_eigenvalues, singular_values, Algebra, AlgMatrix, HermitianPD, MatrixLiteral};
use crate::sampler::{BetaRieszSampler, KotzRieszSampler, RieszSampler, TRieszSampler};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Riesz,
    KotzRiesz,
    TRiesz,
    BetaRiesz,
    SingularValues,
    Eigenvalues,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Riesz,
        Family::KotzRiesz,
        Family::TRiesz,
        Family::BetaRiesz,
        Family::SingularValues,
        Family::Eigenvalues,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            Family::Riesz => "riesz",
            Family::KotzRiesz => "kotzriesz",
            Family::TRiesz => "triesz",
            Family::BetaRiesz => "beta-riesz",
            Family::SingularValues => "sv-triesz",
            Family::Eigenvalues => "eig-beta-riesz",
        }
    }
}

/// A family together with its variant, written `triesz-I`, `riesz-II`, ….
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DistName {
    pub family: Family,
    pub variant: Variant,
}

impl fmt::Display for DistName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.family.slug(), self.variant)
    }
}

impl DistName {
    /// Parses `family[-variant]`; `default_variant` fills in a missing suffix.
    pub fn parse(s: &str, default_variant: Option<Variant>) -> Result<Self> {
        let (base, variant) = match s.rsplit_once('-') {
            Some((b, v)) if v == "I" || v == "II" => (b, Some(v.parse::<Variant>()?)),
            _ => (s, None),
        };
        let family = match base {
            "riesz" => Family::Riesz,
            "kotzriesz" | "kotz-riesz" => Family::KotzRiesz,
            "triesz" | "t-riesz" => Family::TRiesz,
            "beta-riesz" | "c-beta-riesz" | "k-beta-riesz" => Family::BetaRiesz,
            "sv-triesz" | "sv" => Family::SingularValues,
            "eig-beta-riesz" | "eig" => Family::Eigenvalues,
            other => return Err(Error::Parse(format!("unknown distribution '{other}'"))),
        };
        let variant = match (variant, default_variant) {
            (Some(v), Some(d)) if v != d => {
                return Err(Error::Parse(format!("'{s}' conflicts with variant {d}")));
            }
            (Some(v), _) | (None, Some(v)) => v,
            (None, None) => Variant::I,
        };
        Ok(Self { family, variant })
    }
}

impl FromStr for DistName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DistName::parse(s, None)
    }
}

/// A point of a distribution's support.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Matrix(AlgMatrix),
    Values(Vec<f64>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RieszJson {
    a: f64,
    kappa: Vec<f64>,
    #[serde(default)]
    beta: Option<u32>,
    #[serde(default)]
    xi: Option<MatrixLiteral>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KotzRieszJson {
    n: usize,
    kappa: Vec<f64>,
    #[serde(default)]
    beta: Option<u32>,
    #[serde(default)]
    mu: Option<MatrixLiteral>,
    #[serde(default)]
    theta: Option<MatrixLiteral>,
    #[serde(default)]
    sigma: Option<MatrixLiteral>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TRieszJson {
    n: usize,
    nu: f64,
    #[serde(default)]
    k: f64,
    tau: Vec<f64>,
    rho: f64,
    #[serde(default)]
    beta: Option<u32>,
    #[serde(default)]
    mu: Option<MatrixLiteral>,
    #[serde(default)]
    theta: Option<MatrixLiteral>,
    #[serde(default)]
    sigma: Option<MatrixLiteral>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BetaRieszJson {
    n: usize,
    nu: f64,
    #[serde(default)]
    k: f64,
    tau: Vec<f64>,
    rho: f64,
    #[serde(default)]
    beta: Option<u32>,
    #[serde(default)]
    sigma: Option<MatrixLiteral>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SvJson {
    n: usize,
    m: usize,
    nu: f64,
    #[serde(default)]
    k: f64,
    #[serde(default)]
    tau: Vec<u32>,
    rho: f64,
    #[serde(default)]
    beta: Option<u32>,
}

fn parse_json<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Parse(e.to_string()))
}

/// Resolves the algebra from an optional `beta` field and the matrices given.
fn resolve_algebra(beta: Option<u32>, mats: &[Option<&MatrixLiteral>]) -> Result<Algebra> {
    let mut found = beta;
    for lit in mats.iter().flatten() {
        match found {
            Some(b) if b != lit.beta => {
                return Err(Error::Parse(format!("matrix has beta = {} but beta = {b} was given", lit.beta)));
            }
            _ => found = Some(lit.beta),
        }
    }
    Algebra::from_beta(found.unwrap_or(1))
}

fn pd_or_identity(lit: Option<&MatrixLiteral>, dim: usize, alg: Algebra) -> Result<HermitianPD> {
    match lit {
        Some(l) => HermitianPD::new(l.to_matrix()?),
        None => HermitianPD::identity(dim, alg),
    }
}

fn matrix_or_zero(lit: Option<&MatrixLiteral>, n: usize, m: usize, alg: Algebra) -> Result<AlgMatrix> {
    match lit {
        Some(l) => l.to_matrix(),
        None => AlgMatrix::zeros(n, m, alg),
    }
}

/// A distribution with its prepared density and (when the algebra supports
/// matrices) its sampler.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Model {
    Riesz(RieszDensity, RieszSampler),
    KotzRiesz(KotzRieszDensity, KotzRieszSampler),
    TRiesz(TRieszDensity, TRieszSampler),
    BetaRiesz(BetaRieszDensity, BetaRieszSampler),
    SingularValues(SvDensity, Option<TRieszSampler>),
    Eigenvalues(SvDensity, Option<TRieszSampler>),
}

impl Model {
    pub fn riesz(p: RieszParams) -> Result<Self> {
        Ok(Model::Riesz(RieszDensity::new(p.clone())?, RieszSampler::new(&p)?))
    }

    pub fn kotz_riesz(p: KotzRieszParams) -> Result<Self> {
        Ok(Model::KotzRiesz(KotzRieszDensity::new(p.clone())?, KotzRieszSampler::new(&p)?))
    }

    pub fn t_riesz(p: TRieszParams) -> Result<Self> {
        Ok(Model::TRiesz(TRieszDensity::new(p.clone())?, TRieszSampler::new(&p)?))
    }

    pub fn beta_riesz(p: BetaRieszParams) -> Result<Self> {
        Ok(Model::BetaRiesz(BetaRieszDensity::new(p.clone())?, BetaRieszSampler::new(&p)?))
    }

    fn sv_sampler(p: &SvParams) -> Result<Option<TRieszSampler>> {
        if p.algebra.require_full_matrix().is_err() {
            return Ok(None);
        }
        let t = TRieszParams::standard(p.mix.clone(), p.tau.to_weight(p.m)?, p.n, p.algebra)?;
        Ok(Some(TRieszSampler::new(&t)?))
    }

    pub fn singular_values(p: SvParams) -> Result<Self> {
        let s = Self::sv_sampler(&p)?;
        Ok(Model::SingularValues(SvDensity::new(p)?, s))
    }

    pub fn eigenvalues(p: SvParams) -> Result<Self> {
        let s = Self::sv_sampler(&p)?;
        Ok(Model::Eigenvalues(SvDensity::new(p)?, s))
    }

    /// Builds a model from a JSON parameter bundle.
    pub fn from_json(name: DistName, params: &Value) -> Result<Self> {
        let variant = name.variant;
        match name.family {
            Family::Riesz => {
                let j: RieszJson = parse_json(params)?;
                let alg = resolve_algebra(j.beta, &[j.xi.as_ref()])?;
                let xi = pd_or_identity(j.xi.as_ref(), j.kappa.len(), alg)?;
                Self::riesz(RieszParams::new(j.a, WeightVector::new(j.kappa)?, xi, variant)?)
            }
            Family::KotzRiesz => {
                let j: KotzRieszJson = parse_json(params)?;
                let alg = resolve_algebra(j.beta, &[j.mu.as_ref(), j.theta.as_ref(), j.sigma.as_ref()])?;
                let m = j.kappa.len();
                Self::kotz_riesz(KotzRieszParams::new(
                    WeightVector::new(j.kappa)?,
                    matrix_or_zero(j.mu.as_ref(), j.n, m, alg)?,
                    pd_or_identity(j.theta.as_ref(), j.n, alg)?,
                    pd_or_identity(j.sigma.as_ref(), m, alg)?,
                    variant,
                )?)
            }
            Family::TRiesz => {
                let j: TRieszJson = parse_json(params)?;
                let alg = resolve_algebra(j.beta, &[j.mu.as_ref(), j.theta.as_ref(), j.sigma.as_ref()])?;
                let m = j.tau.len();
                Self::t_riesz(TRieszParams::new(
                    MixingParams { nu: j.nu, k: j.k, rho: j.rho, variant },
                    WeightVector::new(j.tau)?,
                    matrix_or_zero(j.mu.as_ref(), j.n, m, alg)?,
                    pd_or_identity(j.theta.as_ref(), j.n, alg)?,
                    pd_or_identity(j.sigma.as_ref(), m, alg)?,
                )?)
            }
            Family::BetaRiesz => {
                let j: BetaRieszJson = parse_json(params)?;
                let alg = resolve_algebra(j.beta, &[j.sigma.as_ref()])?;
                let m = j.tau.len();
                Self::beta_riesz(BetaRieszParams::new(
                    j.n,
                    MixingParams { nu: j.nu, k: j.k, rho: j.rho, variant },
                    WeightVector::new(j.tau)?,
                    pd_or_identity(j.sigma.as_ref(), m, alg)?,
                )?)
            }
            Family::SingularValues | Family::Eigenvalues => {
                let j: SvJson = parse_json(params)?;
                let alg = Algebra::from_beta(j.beta.unwrap_or(1))?;
                let p = SvParams::new(
                    j.n,
                    j.m,
                    MixingParams { nu: j.nu, k: j.k, rho: j.rho, variant },
                    Partition::new(j.tau)?,
                    alg,
                )?;
                if name.family == Family::SingularValues {
                    Self::singular_values(p)
                } else {
                    Self::eigenvalues(p)
                }
            }
        }
    }

    pub fn name(&self) -> DistName {
        let (family, variant) = match self {
            Model::Riesz(d, _) => (Family::Riesz, d.params().variant),
            Model::KotzRiesz(d, _) => (Family::KotzRiesz, d.params().variant),
            Model::TRiesz(d, _) => (Family::TRiesz, d.params().variant()),
            Model::BetaRiesz(d, _) => (Family::BetaRiesz, d.params().variant()),
            Model::SingularValues(d, _) => (Family::SingularValues, d.params().variant()),
            Model::Eigenvalues(d, _) => (Family::Eigenvalues, d.params().variant()),
        };
        DistName { family, variant }
    }

    pub fn algebra(&self) -> Algebra {
        match self {
            Model::Riesz(d, _) => d.params().algebra(),
            Model::KotzRiesz(d, _) => d.params().algebra(),
            Model::TRiesz(d, _) => d.params().algebra(),
            Model::BetaRiesz(d, _) => d.params().algebra(),
            Model::SingularValues(d, _) | Model::Eigenvalues(d, _) => d.params().algebra,
        }
    }

    /// Shape of a support point: (rows, cols) for matrices, (m, 1) for value vectors.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Model::Riesz(d, _) => (d.params().dim(), d.params().dim()),
            Model::KotzRiesz(d, _) => d.params().shape(),
            Model::TRiesz(d, _) => d.params().shape(),
            Model::BetaRiesz(d, _) => (d.params().dim(), d.params().dim()),
            Model::SingularValues(d, _) | Model::Eigenvalues(d, _) => (d.params().m, 1),
        }
    }

    /// True for densities on the cone of positive definite matrices.
    pub fn is_cone(&self) -> bool {
        matches!(self, Model::Riesz(..) | Model::BetaRiesz(..))
    }

    pub fn log_pdf(&self, x: &Point) -> Result<f64> {
        match (self, x) {
            (Model::SingularValues(d, _), Point::Values(v)) => d.log_pdf_sv(v),
            (Model::Eigenvalues(d, _), Point::Values(v)) => d.log_pdf_eig(v),
            (Model::KotzRiesz(d, _), Point::Matrix(y)) => d.log_pdf(y),
            (Model::TRiesz(d, _), Point::Matrix(t)) => d.log_pdf(t),
            (Model::Riesz(..) | Model::BetaRiesz(..), Point::Matrix(v)) => {
                let value = HermitianPD::new_unscreened(v.clone()).and_then(|v| match self {
                    Model::Riesz(d, _) => d.log_pdf(&v),
                    Model::BetaRiesz(d, _) => d.log_pdf(&v),
                    _ => unreachable!(),
                });
                // Points that fail a pivot test anywhere lie on the cone boundary.
                match value {
                    Err(Error::NotPositiveDefinite { .. }) => Ok(f64::NEG_INFINITY),
                    other => other,
                }
            }
            _ => Err(Error::Shape(format!("point type does not match distribution {}", self.name()))),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Point> {
        Ok(match self {
            Model::Riesz(_, s) => Point::Matrix(s.sample(rng)?.as_matrix().clone()),
            Model::KotzRiesz(_, s) => Point::Matrix(s.sample(rng)?),
            Model::TRiesz(_, s) => Point::Matrix(s.sample(rng)?),
            Model::BetaRiesz(_, s) => Point::Matrix(s.sample(rng)?.as_matrix().clone()),
            Model::SingularValues(_, s) => {
                let t = Self::require_sampler(s)?.sample(rng)?;
                Point::Values(singular_values(&t)?)
            }
            Model::Eigenvalues(_, s) => {
                let t = Self::require_sampler(s)?.sample(rng)?;
                Point::Values(hermitian_eigenvalues(&t.adjoint_mul(&t)?)?)
            }
        })
    }

    fn require_sampler(s: &Option<TRieszSampler>) -> Result<&TRieszSampler> {
        s.as_ref().ok_or(Error::UnsupportedAlgebra(8))
    }

    /// Reads a point: a matrix literal, or an array of numbers for value densities.
    pub fn point_from_json(&self, v: &Value) -> Result<Point> {
        match self {
            Model::SingularValues(..) | Model::Eigenvalues(..) => {
                let vals: Vec<f64> = parse_json(v)?;
                Ok(Point::Values(vals))
            }
            _ => {
                let lit: MatrixLiteral = parse_json(v)?;
                let mat = lit.to_matrix()?;
                if mat.shape() != self.shape() || mat.algebra() != self.algebra() {
                    let (r, c) = self.shape();
                    return Err(Error::Shape(format!(
                        "point must be a {r}x{c} matrix over {}, got {}x{} over {}",
                        self.algebra(),
                        mat.rows(),
                        mat.cols(),
                        mat.algebra()
                    )));
                }
                Ok(Point::Matrix(mat))
            }
        }
    }

    /// Number of free real coordinates of the support.
    pub fn real_dim(&self) -> usize {
        let b = self.algebra().beta() as usize;
        let (r, c) = self.shape();
        if self.is_cone() {
            r + b * r * (r - 1) / 2
        } else if matches!(self, Model::SingularValues(..) | Model::Eigenvalues(..)) {
            r
        } else {
            b * r * c
        }
    }

    /// Names of the free coordinates, in the order of [`Model::coordinates`].
    pub fn coordinate_names(&self) -> Vec<String> {
        const PART: [&str; 4] = ["re", "i", "j", "k"];
        let b = self.algebra().beta() as usize;
        let (r, c) = self.shape();
        let entry = |prefix: &str, i: usize, j: usize, out: &mut Vec<String>| {
            if b == 1 {
                out.push(format!("{prefix}{}{}", i + 1, j + 1));
            } else {
                for part in PART.iter().take(b) {
                    out.push(format!("{prefix}{}{}.{part}", i + 1, j + 1));
                }
            }
        };
        let mut out = Vec::new();
        match self {
            Model::SingularValues(..) => out.extend((1..=r).map(|i| format!("alpha{i}"))),
            Model::Eigenvalues(..) => out.extend((1..=r).map(|i| format!("gamma{i}"))),
            _ if self.is_cone() => {
                let prefix = if matches!(self, Model::Riesz(..)) { "v" } else { "f" };
                out.extend((1..=r).map(|i| format!("{prefix}{i}{i}")));
                for i in 0..r {
                    for j in (i + 1)..r {
                        entry(prefix, i, j, &mut out);
                    }
                }
            }
            _ => {
                let prefix = if matches!(self, Model::KotzRiesz(..)) { "y" } else { "t" };
                for i in 0..r {
                    for j in 0..c {
                        entry(prefix, i, j, &mut out);
                    }
                }
            }
        }
        out
    }

    /// Free coordinates of a point: diagonal then upper off-diagonal entries
    /// for cone points, all entries row-major for rectangular matrices.
    pub fn coordinates(&self, x: &Point) -> Vec<f64> {
        match x {
            Point::Values(v) => v.clone(),
            Point::Matrix(a) if self.is_cone() => hermitian_coordinates(a),
            Point::Matrix(a) => a.coords(),
        }
    }

    /// Inverse of [`Model::coordinates`].
    pub fn point_from_coordinates(&self, coords: &[f64]) -> Result<Point> {
        let (r, c) = self.shape();
        let alg = self.algebra();
        match self {
            Model::SingularValues(..) | Model::Eigenvalues(..) => Ok(Point::Values(coords.to_vec())),
            _ if self.is_cone() => Ok(Point::Matrix(hermitian_from_coordinates(r, alg, coords)?)),
            _ => Ok(Point::Matrix(AlgMatrix::from_coords(r, c, alg, coords)?)),
        }
    }
}

/// Diagonal entries, then the β coordinates of each upper off-diagonal entry.
pub fn hermitian_coordinates(a: &AlgMatrix) -> Vec<f64> {
    let m = a.rows();
    let b = a.beta() as usize;
    let mut out: Vec<f64> = (0..m).map(|i| a[(i, i)].re).collect();
    for i in 0..m {
        for j in (i + 1)..m {
            out.extend((0..b).map(|c| a[(i, j)].coord(c)));
        }
    }
    out
}

pub fn hermitian_from_coordinates(m: usize, alg: Algebra, coords: &[f64]) -> Result<AlgMatrix> {
    let b = alg.beta() as usize;
    let want = m + b * m * (m - 1) / 2;
    if coords.len() != want {
        return Err(Error::Shape(format!("expected {want} coordinates, got {}", coords.len())));
    }
    let mut out = AlgMatrix::zeros(m, m, alg)?;
    for i in 0..m {
        out[(i, i)].re = coords[i];
    }
    let mut pos = m;
    for i in 0..m {
        for j in (i + 1)..m {
            for c in 0..b {
                *out[(i, j)].coord_mut(c) = coords[pos];
                pos += 1;
            }
            out[(j, i)] = out[(i, j)].conj();
        }
    }
    Ok(out)
}
