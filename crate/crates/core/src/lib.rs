//! Densities, samplers, special functions and verification checks for the
//! matrix multivariate Riesz family over the real normed division algebras.

// `!(x > 0.0)` is used on purpose so that NaN fails range checks too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dens;
pub mod error;
pub mod hwv;
pub mod jack;
pub mod linalg;
pub mod model;
pub mod rng;
pub mod sampler;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
