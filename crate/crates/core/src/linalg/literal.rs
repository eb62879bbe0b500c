//! JSON matrix literals: `{"n":2,"m":2,"beta":2,"re":[[..],[..]],"im":[[..],[..]]}`.
//!
//! One row-major coordinate plane per algebra coordinate: `re`, `im` (β ≥ 2),
//! `j` and `k` (β = 4). Missing imaginary planes are read as zero. A bare
//! array of rows is read as a real matrix.

use serde::{Deserialize, Serialize};

use super::matrix::{Algebra, AlgMatrix};
use super::scalar::Quat;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "serde_json::Value")]
pub struct MatrixLiteral {
    pub n: usize,
    pub m: usize,
    pub beta: u32,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<Vec<f64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FullLiteral {
    n: usize,
    m: usize,
    beta: u32,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    j: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    k: Option<Vec<Vec<f64>>>,
}

impl TryFrom<serde_json::Value> for MatrixLiteral {
    type Error = String;

    fn try_from(v: serde_json::Value) -> std::result::Result<Self, String> {
        if v.is_array() {
            let re: Vec<Vec<f64>> = serde_json::from_value(v).map_err(|e| e.to_string())?;
            let m = re.first().map_or(0, Vec::len);
            if m == 0 {
                return Err("matrix literal has no entries".into());
            }
            return Ok(MatrixLiteral { n: re.len(), m, beta: 1, re, im: None, j: None, k: None });
        }
        let FullLiteral { n, m, beta, re, im, j, k } = serde_json::from_value(v).map_err(|e| e.to_string())?;
        Ok(MatrixLiteral { n, m, beta, re, im, j, k })
    }
}

const PLANES: [&str; 4] = ["re", "im", "j", "k"];

impl MatrixLiteral {
    pub fn to_matrix(&self) -> Result<AlgMatrix> {
        let algebra = Algebra::from_beta(self.beta)?;
        let beta = algebra.beta() as usize;
        let planes = [Some(&self.re), self.im.as_ref(), self.j.as_ref(), self.k.as_ref()];
        for (c, plane) in planes.iter().enumerate() {
            match plane {
                Some(p) if c >= beta => {
                    return Err(Error::Parse(format!(
                        "plane '{}' is not allowed for beta = {}",
                        PLANES[c], self.beta
                    )))
                }
                Some(p) => check_plane(PLANES[c], p, self.n, self.m)?,
                None => {}
            }
        }
        AlgMatrix::from_fn(self.n, self.m, algebra, |r, col| {
            let mut q = Quat::ZERO;
            for (c, plane) in planes.iter().enumerate().take(beta) {
                if let Some(p) = plane {
                    *q.coord_mut(c) = p[r][col];
                }
            }
            q
        })
    }

    pub fn from_matrix(a: &AlgMatrix) -> Self {
        let plane = |c: usize| -> Vec<Vec<f64>> {
            (0..a.rows()).map(|r| (0..a.cols()).map(|col| a[(r, col)].coord(c)).collect()).collect()
        };
        let beta = a.beta() as usize;
        MatrixLiteral {
            n: a.rows(),
            m: a.cols(),
            beta: a.beta() as u32,
            re: plane(0),
            im: (beta >= 2).then(|| plane(1)),
            j: (beta >= 4).then(|| plane(2)),
            k: (beta >= 4).then(|| plane(3)),
        }
    }
}

fn check_plane(name: &str, p: &[Vec<f64>], n: usize, m: usize) -> Result<()> {
    if p.len() != n || p.iter().any(|row| row.len() != m) {
        return Err(Error::Parse(format!("plane '{name}' must be {n}x{m}")));
    }
    Ok(())
}
