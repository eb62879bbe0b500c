use std::fmt;

use serde::{Deserialize, Serialize};

use super::scalar::Quat;
use crate::error::{Error, Result};

/// Capability level of an algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Capability {
    FullMatrix,
    ScalarFormulaOnly,
}

/// One of the four real normed division algebras, tagged by its real dimension β.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algebra {
    Real,
    Complex,
    Quaternion,
    Octonion,
}

impl Algebra {
    pub fn from_beta(beta: u32) -> Result<Self> {
        match beta {
            1 => Ok(Algebra::Real),
            2 => Ok(Algebra::Complex),
            4 => Ok(Algebra::Quaternion),
            8 => Ok(Algebra::Octonion),
            b => Err(Error::InvalidBeta(b)),
        }
    }

    pub fn beta(self) -> u8 {
        match self {
            Algebra::Real => 1,
            Algebra::Complex => 2,
            Algebra::Quaternion => 4,
            Algebra::Octonion => 8,
        }
    }

    pub fn beta_f64(self) -> f64 {
        self.beta() as f64
    }

    pub fn capability(self) -> Capability {
        match self {
            Algebra::Octonion => Capability::ScalarFormulaOnly,
            _ => Capability::FullMatrix,
        }
    }

    /// Errors unless matrices over this algebra are supported.
    pub fn require_full_matrix(self) -> Result<()> {
        match self.capability() {
            Capability::FullMatrix => Ok(()),
            Capability::ScalarFormulaOnly => Err(Error::UnsupportedAlgebra(self.beta())),
        }
    }

    /// The number of real coordinates of the free entries of an m×m self-adjoint matrix.
    pub fn hermitian_dim(self, m: usize) -> usize {
        m + self.beta() as usize * m * (m - 1) / 2
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Algebra::Real => "real",
            Algebra::Complex => "complex",
            Algebra::Quaternion => "quaternion",
            Algebra::Octonion => "octonion",
        };
        write!(f, "{name} (beta = {})", self.beta())
    }
}

/// Dense n×m matrix over ℝ, ℂ or ℍ, row-major.
///
/// Coordinates beyond the algebra's β are kept at zero, so the storage
/// holds exactly β·n·m meaningful real coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgMatrix {
    rows: usize,
    cols: usize,
    algebra: Algebra,
    data: Vec<Quat>,
}

impl AlgMatrix {
    pub fn zeros(rows: usize, cols: usize, algebra: Algebra) -> Result<Self> {
        algebra.require_full_matrix()?;
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty matrix {rows}x{cols}")));
        }
        Ok(Self { rows, cols, algebra, data: vec![Quat::ZERO; rows * cols] })
    }

    pub fn identity(m: usize, algebra: Algebra) -> Result<Self> {
        let mut out = Self::zeros(m, m, algebra)?;
        for i in 0..m {
            out[(i, i)] = Quat::ONE;
        }
        Ok(out)
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        algebra: Algebra,
        mut f: impl FnMut(usize, usize) -> Quat,
    ) -> Result<Self> {
        let mut out = Self::zeros(rows, cols, algebra)?;
        for r in 0..rows {
            for c in 0..cols {
                out[(r, c)] = f(r, c);
            }
        }
        out.project();
        Ok(out)
    }

    /// Real matrix from row-major values.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} values for a {rows}x{cols} matrix, got {}",
                rows * cols,
                values.len()
            )));
        }
        Self::from_fn(rows, cols, Algebra::Real, |r, c| Quat::real(values[r * cols + c]))
    }

    pub fn diag(values: &[f64], algebra: Algebra) -> Result<Self> {
        let m = values.len();
        Self::from_fn(m, m, algebra, |r, c| if r == c { Quat::real(values[r]) } else { Quat::ZERO })
    }

    /// Zeroes coordinates that do not belong to the algebra.
    fn project(&mut self) {
        let beta = self.algebra.beta() as usize;
        for q in &mut self.data {
            for c in beta..4 {
                *q.coord_mut(c) = 0.0;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn beta(&self) -> u8 {
        self.algebra.beta()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Quat] {
        &self.data
    }

    /// The β·n·m real coordinates, row-major, coordinate index fastest.
    pub fn coords(&self) -> Vec<f64> {
        let beta = self.beta() as usize;
        let mut out = Vec::with_capacity(beta * self.data.len());
        for q in &self.data {
            for c in 0..beta {
                out.push(q.coord(c));
            }
        }
        out
    }

    pub fn from_coords(rows: usize, cols: usize, algebra: Algebra, coords: &[f64]) -> Result<Self> {
        let beta = algebra.beta() as usize;
        if coords.len() != beta * rows * cols {
            return Err(Error::Shape(format!(
                "expected {} coordinates, got {}",
                beta * rows * cols,
                coords.len()
            )));
        }
        let mut out = Self::zeros(rows, cols, algebra)?;
        for (e, q) in out.data.iter_mut().enumerate() {
            for c in 0..beta {
                *q.coord_mut(c) = coords[e * beta + c];
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> AlgMatrix {
        let mut out = AlgMatrix {
            rows: self.cols,
            cols: self.rows,
            algebra: self.algebra,
            data: vec![Quat::ZERO; self.data.len()],
        };
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    fn check_same_algebra(&self, other: &AlgMatrix) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::Shape(format!(
                "algebra mismatch: {} vs {}",
                self.algebra, other.algebra
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &AlgMatrix) -> Result<AlgMatrix> {
        self.check_same_algebra(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = AlgMatrix {
            rows: self.rows,
            cols: other.cols,
            algebra: self.algebra,
            data: vec![Quat::ZERO; self.rows * other.cols],
        };
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Quat::ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] += a * other[(k, c)];
                }
            }
        }
        Ok(out)
    }

    /// `self* · other` without materializing the adjoint.
    pub fn adjoint_mul(&self, other: &AlgMatrix) -> Result<AlgMatrix> {
        self.adjoint().matmul(other)
    }

    pub fn add(&self, other: &AlgMatrix) -> Result<AlgMatrix> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &AlgMatrix) -> Result<AlgMatrix> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &AlgMatrix, f: impl Fn(Quat, Quat) -> Quat) -> Result<AlgMatrix> {
        self.check_same_algebra(other)?;
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "shape {:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(AlgMatrix {
            rows: self.rows,
            cols: self.cols,
            algebra: self.algebra,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, s: f64) -> AlgMatrix {
        AlgMatrix { data: self.data.iter().map(|q| q.scale(s)).collect(), ..self.clone() }
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].re).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from self-adjointness.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0_f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).abs());
            }
        }
        worst
    }

    /// Reverses row and column order: J·A·J with J the exchange matrix.
    pub fn reversed(&self) -> AlgMatrix {
        let mut out = self.clone();
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(self.rows - 1 - r, self.cols - 1 - c)];
            }
        }
        out
    }

    /// Reverses column order only: A·J.
    pub fn reversed_cols(&self) -> AlgMatrix {
        let mut out = self.clone();
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, self.cols - 1 - c)];
            }
        }
        out
    }

    /// Leading principal p×p block.
    pub fn leading_block(&self, p: usize) -> AlgMatrix {
        let mut out = AlgMatrix {
            rows: p,
            cols: p,
            algebra: self.algebra,
            data: vec![Quat::ZERO; p * p],
        };
        for r in 0..p {
            for c in 0..p {
                out[(r, c)] = self[(r, c)];
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &AlgMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for AlgMatrix {
    type Output = Quat;
    fn index(&self, (r, c): (usize, usize)) -> &Quat {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for AlgMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Quat {
        &mut self.data[r * self.cols + c]
    }
}

/// Upper triangular factor; for Cholesky output the diagonal is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperTriangular(AlgMatrix);

impl UpperTriangular {
    /// Wraps a matrix after checking that nothing lies below the diagonal.
    pub fn new(mat: AlgMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::Shape("triangular factor must be square".into()));
        }
        for r in 0..mat.rows() {
            for c in 0..r {
                if mat[(r, c)] != Quat::ZERO {
                    return Err(Error::Shape(format!("entry ({r},{c}) below the diagonal is nonzero")));
                }
            }
        }
        Ok(Self(mat))
    }

    pub(crate) fn new_unchecked(mat: AlgMatrix) -> Self {
        Self(mat)
    }

    pub fn as_matrix(&self) -> &AlgMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> AlgMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    /// Inverse, again upper triangular; the diagonal must be real and nonzero.
    pub fn inverse(&self) -> Result<UpperTriangular> {
        let t = &self.0;
        let m = t.rows();
        let mut u = AlgMatrix::zeros(m, m, t.algebra())?;
        for j in 0..m {
            let d = t[(j, j)];
            if d.abs() == 0.0 {
                return Err(Error::SingularTransform);
            }
            u[(j, j)] = d.inv();
            for i in (0..j).rev() {
                let mut acc = Quat::ZERO;
                for k in (i + 1)..=j {
                    acc += t[(i, k)] * u[(k, j)];
                }
                u[(i, j)] = -(t[(i, i)].inv() * acc);
            }
        }
        Ok(UpperTriangular(u))
    }

    /// T*·T.
    pub fn gram(&self) -> AlgMatrix {
        self.0.adjoint_mul(&self.0).expect("square factor")
    }
}

/// Relative pivot tolerance for the positive-definiteness test.
pub const PIVOT_TOLERANCE: f64 = 1e-10;

/// Self-adjoint positive definite matrix, carrying its upper Cholesky factor.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianPD {
    mat: AlgMatrix,
    chol: UpperTriangular,
}

impl HermitianPD {
    /// Accepts `a` if it is self-adjoint to within 1e-10 relative and positive
    /// definite; the stored matrix is exactly self-adjoint.
    pub fn new(a: AlgMatrix) -> Result<Self> {
        Self::with_tolerance(a, PIVOT_TOLERANCE)
    }

    /// Accepts any positive definite `a`, however ill-conditioned. Used for
    /// evaluation points and for matrices derived from validated ones, where
    /// the pivot tolerance of [`HermitianPD::new`] would cut off valid mass.
    pub fn new_unscreened(a: AlgMatrix) -> Result<Self> {
        Self::with_tolerance(a, 0.0)
    }

    fn with_tolerance(a: AlgMatrix, rel_tol: f64) -> Result<Self> {
        a.algebra().require_full_matrix()?;
        if !a.is_square() {
            return Err(Error::Shape(format!("{}x{} matrix is not square", a.rows(), a.cols())));
        }
        let defect = a.hermitian_defect();
        let scale = a.frobenius().max(f64::MIN_POSITIVE);
        if !(defect <= 1e-10 * scale) {
            return Err(Error::NotHermitian(defect));
        }
        let sym = symmetrize(&a);
        let chol = super::factor::cholesky_with_tolerance(&sym, rel_tol)?;
        Ok(Self { mat: sym, chol })
    }

    pub fn identity(m: usize, algebra: Algebra) -> Result<Self> {
        Self::new(AlgMatrix::identity(m, algebra)?)
    }

    pub fn diag(values: &[f64], algebra: Algebra) -> Result<Self> {
        Self::new(AlgMatrix::diag(values, algebra)?)
    }

    /// `T*·T` for a triangular factor with positive real diagonal.
    pub fn from_upper(t: &UpperTriangular) -> Result<Self> {
        Self::new(t.gram())
    }

    pub fn as_matrix(&self) -> &AlgMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn algebra(&self) -> Algebra {
        self.mat.algebra()
    }

    pub fn cholesky(&self) -> &UpperTriangular {
        &self.chol
    }

    /// log|A| from the Cholesky diagonal.
    pub fn log_det(&self) -> f64 {
        2.0 * self.chol.diagonal().iter().map(|d| d.ln()).sum::<f64>()
    }

    pub fn inverse(&self) -> Result<HermitianPD> {
        let u = self.chol.inverse()?;
        // A⁻¹ = T⁻¹·T⁻*
        let inv = u.as_matrix().matmul(&u.as_matrix().adjoint())?;
        Self::new_unscreened(inv)
    }

    /// Lower Cholesky factor L (A = L*·L with L lower triangular), built from the
    /// upper factor of J·A·J.
    pub fn cholesky_lower(&self) -> Result<AlgMatrix> {
        let t = super::factor::cholesky_with_tolerance(&self.mat.reversed(), 0.0)?;
        Ok(t.as_matrix().reversed())
    }

    /// B*·A·B.
    pub fn congruence(&self, b: &AlgMatrix) -> Result<HermitianPD> {
        let inner = self.mat.matmul(b)?;
        Self::new_unscreened(b.adjoint().matmul(&inner)?)
    }

    /// tr(self⁻¹·other).
    pub fn trace_inv_mul(&self, other: &AlgMatrix) -> Result<f64> {
        let u = self.chol.inverse()?;
        // tr(T⁻¹T⁻* X) = tr(T⁻* X T⁻¹)
        let inner = other.matmul(u.as_matrix())?;
        Ok(u.as_matrix().adjoint().matmul(&inner)?.trace())
    }
}

pub(crate) fn symmetrize(a: &AlgMatrix) -> AlgMatrix {
    let m = a.rows();
    let mut out = a.clone();
    for r in 0..m {
        out[(r, r)] = Quat::real(a[(r, r)].re);
        for c in (r + 1)..m {
            let avg = (a[(r, c)] + a[(c, r)].conj()).scale(0.5);
            out[(r, c)] = avg;
            out[(c, r)] = avg.conj();
        }
    }
    out
}
