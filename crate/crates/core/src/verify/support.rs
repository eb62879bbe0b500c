//! Box parameterizations of the supports of the implemented densities.
//!
//! Every support is integrated over a box of mapped coordinates. The
//! coordinates tested by the sampler checks are the "support coordinates":
//! matrix entries or frame coordinates for rectangular matrices, upper
//! Cholesky entries for the positive definite cone (a bijection, with
//! V = T*T), and the ordered values themselves for singular values and
//! eigenvalues.

use super::quad::Domain;
use crate::dens::Variant;
use crate::error::{Error, Result};
use crate::linalg::{Algebra, AlgMatrix, HermitianPD, Quat};
use crate::model::{hermitian_coordinates, Model, Point};

#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    /// ℝ^d with per-coordinate centers and scales.
    Euclid { center: Vec<f64>, scale: Vec<f64> },
    /// Positive definite m×m over the algebra in Cholesky coordinates: the
    /// diagonal t_ii > 0 first, then the β coordinates of each t_ij, i < j.
    /// `scale` holds rough magnitudes of the diagonal entries of V.
    Cone { m: usize, algebra: Algebra, scale: Vec<f64> },
    /// x₁ > x₂ > … > x_m > 0.
    Ordered { m: usize, scale: f64 },
    /// n×m matrices Y = μ + u(Θ)*·X·u(Σ) with the whitened X = Q·T written in
    /// frame coordinates. For m = 1 these are the radius and hyperspherical
    /// angles of X; for real 2×2 they are t₁₁, t₂₂, t₁₂ and the angle of Q,
    /// with both orientations of Q summed. Reversed frames factor X·P = Q·T
    /// with P the column reversal, so that type II weights act on the pivots
    /// of T. `scale` is the spread of one whitened entry.
    Frame(Box<Frame>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    n: usize,
    m: usize,
    algebra: Algebra,
    mu: AlgMatrix,
    left: AlgMatrix,
    right: AlgMatrix,
    left_inv: AlgMatrix,
    right_inv: AlgMatrix,
    log_jac: f64,
    scale: f64,
    reversed: bool,
}

impl Frame {
    /// Frame coordinates exist for column vectors and for real 2×2 matrices.
    fn new(
        mu: &AlgMatrix,
        theta: &HermitianPD,
        sigma: &HermitianPD,
        scale: f64,
        variant: Variant,
    ) -> Result<Option<Self>> {
        let (n, m) = mu.shape();
        let algebra = mu.algebra();
        if !(m == 1 || (n == 2 && m == 2 && algebra == Algebra::Real)) {
            return Ok(None);
        }
        let beta = algebra.beta_f64();
        let lt = theta.cholesky();
        let ls = sigma.cholesky();
        Ok(Some(Self {
            n,
            m,
            algebra,
            mu: mu.clone(),
            left: lt.as_matrix().adjoint(),
            right: ls.as_matrix().clone(),
            left_inv: lt.inverse()?.as_matrix().adjoint(),
            right_inv: ls.inverse()?.into_matrix(),
            // |∂Y/∂X| = |Θ|^{mβ/2}·|Σ|^{nβ/2}.
            log_jac: 0.5 * beta * (m as f64 * theta.log_det() + n as f64 * sigma.log_det()),
            scale,
            reversed: variant == Variant::II,
        }))
    }

    fn dims(&self) -> usize {
        self.n * self.m * self.algebra.beta() as usize
    }

    fn domain(&self, c: usize) -> Domain {
        let d = self.dims();
        let s = self.scale;
        if self.m == 1 {
            match c {
                0 => Domain::SquaredHalfLine { scale: s * (d as f64).sqrt() },
                _ if c + 1 < d => Domain::Finite { lo: 0.0, hi: std::f64::consts::PI },
                _ => Domain::Finite { lo: 0.0, hi: std::f64::consts::TAU },
            }
        } else {
            match c {
                0 | 1 => Domain::SquaredHalfLine { scale: s },
                2 => Domain::real_line(s),
                _ => Domain::Finite { lo: 0.0, hi: std::f64::consts::TAU },
            }
        }
    }

    fn names(&self) -> Vec<String> {
        if self.m == 1 {
            std::iter::once("r".to_string()).chain((1..self.dims()).map(|k| format!("phi{k}"))).collect()
        } else {
            ["t11", "t22", "t12", "theta"].map(String::from).to_vec()
        }
    }

    /// Whitened matrices X at a frame point with log (dX)/(d frame).
    fn whitened(&self, x: &[f64]) -> Result<Vec<(AlgMatrix, f64)>> {
        let d = self.dims();
        if self.m == 1 {
            let r = x[0];
            let mut u = vec![0.0; d];
            let mut sines = 1.0;
            let mut log_jac = (d as f64 - 1.0) * r.ln();
            for k in 0..d.saturating_sub(1) {
                let phi = x[k + 1];
                u[k] = sines * phi.cos();
                sines *= phi.sin();
                if k + 2 < d {
                    log_jac += (d - 2 - k) as f64 * phi.sin().ln();
                }
            }
            u[d - 1] = sines;
            let v: Vec<f64> = u.iter().map(|c| r * c).collect();
            let mut out = vec![(AlgMatrix::from_coords(self.n, 1, self.algebra, &v)?, log_jac)];
            if d == 1 {
                out.push((AlgMatrix::from_coords(self.n, 1, self.algebra, &[-r])?, log_jac));
            }
            Ok(out)
        } else {
            // (dX) = Π t_ii^{β(n−i+1)−1} (dT)(Q*dQ) = t₁₁ (dT) dθ here.
            let (t11, t22, t12, th) = (x[0], x[1], x[2], x[3]);
            let (sn, cs) = th.sin_cos();
            [1.0, -1.0]
                .iter()
                .map(|&o| {
                    let q = AlgMatrix::from_real(2, 2, &[cs, -o * sn, sn, o * cs])?;
                    let t = AlgMatrix::from_real(2, 2, &[t11, t12, 0.0, t22])?;
                    let x = q.matmul(&t)?;
                    Ok((if self.reversed { x.reversed_cols() } else { x }, t11.ln()))
                })
                .collect()
        }
    }

    fn unwhiten(&self, x: &AlgMatrix) -> Result<AlgMatrix> {
        self.mu.add(&self.left.matmul(x)?.matmul(&self.right)?)
    }

    fn coordinates(&self, y: &AlgMatrix) -> Result<Vec<f64>> {
        let x = self.left_inv.matmul(&y.sub(&self.mu)?)?.matmul(&self.right_inv)?;
        if self.m == 1 {
            let v = x.coords();
            let d = v.len();
            let r = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            let mut out = vec![r];
            for k in 0..d.saturating_sub(1) {
                let tail = v[k + 1..].iter().map(|c| c * c).sum::<f64>().sqrt();
                if k + 2 < d {
                    out.push(tail.atan2(v[k]));
                } else {
                    out.push(v[k + 1].atan2(v[k]).rem_euclid(std::f64::consts::TAU));
                }
            }
            Ok(out)
        } else {
            let x = if self.reversed { x.reversed_cols() } else { x };
            // Gram–Schmidt on the real 2×2 frame, stable for nearly singular x.
            let (a, b) = ([x[(0, 0)].re, x[(1, 0)].re], [x[(0, 1)].re, x[(1, 1)].re]);
            let t11 = a[0].hypot(a[1]);
            let q = [a[0] / t11, a[1] / t11];
            let t12 = q[0] * b[0] + q[1] * b[1];
            let t22 = (b[0] - t12 * q[0]).hypot(b[1] - t12 * q[1]);
            let theta = q[1].atan2(q[0]).rem_euclid(std::f64::consts::TAU);
            Ok(vec![t11, t22, t12, theta])
        }
    }
}

impl Support {
    pub fn euclid(center: Vec<f64>, scale: Vec<f64>) -> Self {
        Support::Euclid { center, scale }
    }

    pub fn dims(&self) -> usize {
        match self {
            Support::Euclid { center, .. } => center.len(),
            Support::Cone { m, algebra, .. } => algebra.hermitian_dim(*m),
            Support::Ordered { m, .. } => *m,
            Support::Frame(f) => f.dims(),
        }
    }

    /// Names of the support coordinates.
    pub fn coordinate_names(&self, model: &Model) -> Vec<String> {
        match self {
            Support::Cone { .. } => model.coordinate_names().into_iter().map(|n| format!("chol-{n}")).collect(),
            Support::Frame(f) => f.names(),
            _ => model.coordinate_names(),
        }
    }

    /// Box layout whose first box coordinate maps to support coordinate `outer`
    /// alone.
    pub fn layout(&self, outer: usize) -> Layout {
        let d = self.dims();
        assert!(outer < d, "coordinate {outer} out of range for {d} dimensions");
        let mut order = vec![outer];
        order.extend((0..d).filter(|&c| c != outer));
        let domains = order.iter().map(|&c| self.coordinate_domain(c, outer)).collect();
        Layout { support: self.clone(), outer, order, domains }
    }

    fn coordinate_domain(&self, c: usize, outer: usize) -> Domain {
        match self {
            Support::Euclid { center, scale } => Domain::Line { center: center[c], scale: scale[c] },
            Support::Cone { m, scale, .. } => {
                if c < *m {
                    Domain::positive(scale[c].sqrt())
                } else {
                    let s = scale.iter().copied().fold(0.0, f64::max).sqrt();
                    Domain::real_line(0.5 * s)
                }
            }
            Support::Ordered { scale, .. } => {
                if c == outer {
                    Domain::SquaredHalfLine { scale: *scale }
                } else if c < outer {
                    // x_c = x_{c+1} + s.
                    Domain::positive(*scale)
                } else {
                    // x_c = x_{c−1}·u.
                    Domain::SquaredUnit
                }
            }
            Support::Frame(f) => f.domain(c),
        }
    }

    /// Support and coordinate scales for a model.
    pub fn for_model(model: &Model) -> Result<Self> {
        let alg = model.algebra();
        let beta = alg.beta_f64();
        let b = alg.beta() as usize;
        let (r, c) = model.shape();
        let diag = |a: &HermitianPD, i: usize| a.as_matrix()[(i, i)].re;
        let max_diag = |a: &HermitianPD| (0..a.dim()).map(|i| diag(a, i)).fold(0.0, f64::max);
        match model {
            Model::Riesz(d, _) => {
                let p = d.params();
                let scale = (0..r).map(|i| (p.a * diag(&p.xi, i) / beta).max(1e-3)).collect();
                Ok(Support::Cone { m: r, algebra: alg, scale })
            }
            Model::BetaRiesz(d, _) => {
                let p = d.params();
                let shape = p.mix.mixing_shape(beta);
                let scale = (0..r)
                    .map(|i| (p.n as f64 * diag(&p.sigma, i) * beta / (2.0 * p.mix.rho * shape)).max(1e-3))
                    .collect();
                Ok(Support::Cone { m: r, algebra: alg, scale })
            }
            Model::KotzRiesz(d, _) => {
                let p = d.params();
                let w = (1.0 / (2.0 * beta)).sqrt();
                if let Some(f) = Frame::new(&p.mu, &p.theta, &p.sigma, w, p.variant)? {
                    return Ok(Support::Frame(Box::new(f)));
                }
                let s = w * (max_diag(&p.theta) * max_diag(&p.sigma)).sqrt();
                Ok(Support::Euclid { center: p.mu.coords(), scale: vec![s; b * r * c] })
            }
            Model::TRiesz(d, _) => {
                let p = d.params();
                let w = (1.0 / (2.0 * p.mix.rho * p.mix.mixing_shape(beta))).sqrt();
                if let Some(f) = Frame::new(&p.mu, &p.theta, &p.sigma, w, p.variant())? {
                    return Ok(Support::Frame(Box::new(f)));
                }
                let s = w * (max_diag(&p.theta) * max_diag(&p.sigma)).sqrt();
                Ok(Support::Euclid { center: p.mu.coords(), scale: vec![s; b * r * c] })
            }
            Model::SingularValues(d, _) | Model::Eigenvalues(d, _) => {
                let p = d.params();
                let shape = p.mix.mixing_shape(beta);
                let s2 = p.n as f64 * beta / (2.0 * p.mix.rho * shape);
                let scale = if matches!(model, Model::Eigenvalues(..)) { s2 } else { s2.sqrt() };
                Ok(Support::Ordered { m: p.m, scale })
            }
        }
    }

    /// Support coordinates of a model point.
    pub fn coordinates(&self, model: &Model, x: &Point) -> Result<Vec<f64>> {
        match (self, x) {
            (Support::Cone { .. }, Point::Matrix(v)) => {
                let t = HermitianPD::new_unscreened(v.clone())?.cholesky().as_matrix().clone();
                Ok(hermitian_coordinates(&t))
            }
            (Support::Frame(f), Point::Matrix(y)) => f.coordinates(y),
            _ => Ok(model.coordinates(x)),
        }
    }

    /// Model coordinates of a support point and log |Jacobian| of the map.
    fn to_model(&self, x: &[f64]) -> Result<(Vec<f64>, f64)> {
        match self {
            Support::Cone { m, algebra, .. } => {
                let t = upper_from_coordinates(*m, *algebra, x)?;
                // (dV) = 2^m Π t_ii^{β(m−i)+1} (dT), i = 1..m.
                let beta = algebra.beta_f64();
                let mut log_jac = *m as f64 * std::f64::consts::LN_2;
                for (i, &tii) in x[..*m].iter().enumerate() {
                    log_jac += (beta * (m - 1 - i) as f64 + 1.0) * tii.ln();
                }
                Ok((hermitian_coordinates(&t.adjoint_mul(&t)?), log_jac))
            }
            _ => Ok((x.to_vec(), 0.0)),
        }
    }

    /// Density of a model as a function of support coordinates.
    pub fn density<'a>(&'a self, model: &'a Model) -> impl Fn(&[f64]) -> Result<f64> + 'a {
        move |x: &[f64]| {
            if let Support::Frame(f) = self {
                let mut total = 0.0;
                for (w, log_jac) in f.whitened(x)? {
                    let y = Point::Matrix(f.unwhiten(&w)?);
                    total += (model.log_pdf(&y)? + log_jac + f.log_jac).exp();
                }
                return Ok(total);
            }
            let (coords, log_jac) = self.to_model(x)?;
            Ok((model.log_pdf(&model.point_from_coordinates(&coords)?)? + log_jac).exp())
        }
    }
}

fn upper_from_coordinates(m: usize, alg: Algebra, x: &[f64]) -> Result<AlgMatrix> {
    let b = alg.beta() as usize;
    if x.len() != alg.hermitian_dim(m) {
        return Err(Error::Shape(format!("expected {} Cholesky coordinates, got {}", alg.hermitian_dim(m), x.len())));
    }
    let mut t = AlgMatrix::zeros(m, m, alg)?;
    for i in 0..m {
        t[(i, i)] = Quat::real(x[i]);
    }
    let mut pos = m;
    for i in 0..m {
        for j in (i + 1)..m {
            for c in 0..b {
                *t[(i, j)].coord_mut(c) = x[pos];
                pos += 1;
            }
        }
    }
    Ok(t)
}

/// A support with a box parameterization whose first box coordinate drives
/// support coordinate `outer` alone.
#[derive(Debug, Clone)]
pub struct Layout {
    support: Support,
    outer: usize,
    order: Vec<usize>,
    domains: Vec<Domain>,
}

impl Layout {
    pub fn dims(&self) -> usize {
        self.order.len()
    }

    /// The map of box coordinate 0 onto support coordinate `outer`.
    pub fn outer_domain(&self) -> Domain {
        self.domains[0]
    }

    /// Lower and upper corners of the box.
    pub fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        self.domains.iter().map(|d| d.t_range()).unzip()
    }

    /// Support coordinates of a box point, and the Jacobian of the map.
    pub fn map(&self, u: &[f64], out: &mut [f64]) -> f64 {
        let mut jac = 1.0;
        for (k, (&c, d)) in self.order.iter().zip(&self.domains).enumerate() {
            let (y, dy) = d.map(u[k]);
            jac *= dy;
            out[c] = y;
        }
        if let Support::Ordered { m, .. } = self.support {
            let j = self.outer;
            for c in (0..j).rev() {
                out[c] += out[c + 1];
            }
            for c in (j + 1)..m {
                jac *= out[c - 1];
                out[c] *= out[c - 1];
            }
        }
        jac
    }

    /// `density` (of support coordinates) pulled back to the box.
    pub fn pull_back<'a>(&'a self, density: &'a dyn Fn(&[f64]) -> Result<f64>) -> impl Fn(&[f64]) -> Result<f64> + 'a {
        move |u: &[f64]| {
            let mut x = vec![0.0; u.len()];
            let jac = self.map(u, &mut x);
            if jac == 0.0 || !jac.is_finite() || x.iter().any(|v| !v.is_finite()) {
                return Ok(0.0);
            }
            let v = density(&x)?;
            Ok(if v == 0.0 { 0.0 } else { v * jac })
        }
    }
}
