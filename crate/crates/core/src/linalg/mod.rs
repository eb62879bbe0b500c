//! Dense matrices over ℝ, ℂ and ℍ: factorizations, real representation and
//! Haar/Gaussian random factors.
//!
//! Octonion (β = 8) matrices are rejected by every matrix operation; β = 8 is
//! accepted only by the scalar β-parameterized formulas elsewhere in the crate.

mod factor;
mod literal;
mod matrix;
mod random;
mod scalar;

pub use factor::{
    cholesky_upper, gram_pivots, hermitian_eigenvalues, ldl_pivots, log_det_gram, real_representation,
    reverse_pivots, singular_values,
};
pub use literal::MatrixLiteral;
pub use matrix::{Algebra, AlgMatrix, Capability, HermitianPD, UpperTriangular, PIVOT_TOLERANCE};
pub use random::{gaussian_matrix, haar_stiefel};
pub use scalar::Quat;
