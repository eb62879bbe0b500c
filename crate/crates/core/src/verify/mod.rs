//! Verification harness: quadrature normalization, Jacobian determinants,
//! sampler/density agreement and Monte Carlo identity checks. Each check
//! returns a [`CheckReport`]; [`suite`] bundles them into runnable suites.

mod checks;
mod identities;
mod jacobian;
pub mod ks;
pub mod quad;
pub mod suite;
pub mod support;

use serde::{Serialize, Serializer};

use crate::error::Error;

pub use checks::{
    check_eig_pipeline, check_importance, check_normalization, check_sampler_marginals, check_svd_measure, draw_points,
    shrunk_model, GaussianSv, KS_ALPHA,
};
pub use identities::{
    check_gamma_factorization, check_gamma_integral, check_jack_sum_rule, check_qk_identities,
    check_spherical_identity, qk_residuals, QkResiduals,
};
pub use jacobian::{
    check_jacobian_linear, check_jacobian_symmetric, check_stiefel_sphere, linear_jacobian, symmetric_jacobian,
};
pub use suite::{run_suite, suite_names, thread_limit, THREADS_ENV};

/// Outcome of one check: `passed` holds exactly when
/// |statistic − target| ≤ tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    #[serde(serialize_with = "serialize_token")]
    pub statistic: f64,
    #[serde(serialize_with = "serialize_token")]
    pub target: f64,
    #[serde(serialize_with = "serialize_token")]
    pub tolerance: f64,
    /// Samples drawn or integrand nodes evaluated.
    pub samples: usize,
    pub passed: bool,
    pub detail: String,
}

impl CheckReport {
    pub fn new(
        name: impl Into<String>,
        statistic: f64,
        target: f64,
        tolerance: f64,
        samples: usize,
        detail: impl Into<String>,
    ) -> Self {
        let passed = (statistic - target).abs() <= tolerance;
        Self { name: name.into(), statistic, target, tolerance, samples, passed, detail: detail.into() }
    }

    /// A failed report for a check that could not be carried out.
    pub fn errored(name: impl Into<String>, err: &Error) -> Self {
        Self {
            name: name.into(),
            statistic: f64::NAN,
            target: f64::NAN,
            tolerance: 0.0,
            samples: 0,
            passed: false,
            detail: format!("error: {err}"),
        }
    }
}

/// Text form of a number as written by the CLI: finite values use the
/// shortest round-trip representation, non-finite ones the tokens
/// `-inf`, `inf` and `nan`.
pub fn number_token(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x:?}")
    }
}

/// JSON value of a number: finite values as numbers, non-finite ones as
/// their string token.
pub fn number_json(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::Value::from(x)
    } else {
        serde_json::Value::from(number_token(x))
    }
}

fn serialize_token<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(&number_token(*x))
    }
}
