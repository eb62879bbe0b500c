//! Grid tabulation of special functions and of the ordered-value densities.

use std::io::Write;

use riesz_core::hwv::{Partition, WeightVector};
use riesz_core::jack::jack_c;
use riesz_core::linalg::Algebra;
use riesz_core::model::{Model, Point};
use riesz_core::specfun::{lgamma_m, lgamma_m_weighted, ln_gamma, log_gen_pochhammer, WeightSign};
use riesz_core::verify::number_token;
use serde::Deserialize;
use serde_json::Value;

use crate::args::CliError;
use crate::sample::column_names;

#[derive(Deserialize, Debug)]
#[serde(tag = "function", rename_all = "snake_case", deny_unknown_fields)]
enum TableSpec {
    LnGamma,
    LgammaM {
        beta: u32,
        m: usize,
    },
    LgammaMWeighted {
        beta: u32,
        kappa: Vec<f64>,
        #[serde(default)]
        sign: SignArg,
    },
    LogGenPochhammer {
        beta: u32,
        kappa: Vec<f64>,
    },
    JackC {
        beta: u32,
        tau: Vec<u32>,
    },
}

#[derive(Deserialize, Debug, Default, Clone, Copy)]
enum SignArg {
    #[default]
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

type Evaluator = Box<dyn Fn(&[f64]) -> riesz_core::Result<f64>>;

/// Writes `x…,value` rows. Grid points outside the function's domain give
/// the token `nan`.
pub fn write_table(params: &Value, grid: &[Vec<f64>], out: &mut impl Write) -> Result<(), CliError> {
    let spec: TableSpec = serde_json::from_value(params.clone())?;
    let (name, arity): (&str, usize) = match &spec {
        TableSpec::LnGamma => ("ln_gamma", 1),
        TableSpec::LgammaM { .. } => ("lgamma_m", 1),
        TableSpec::LgammaMWeighted { .. } => ("lgamma_m_weighted", 1),
        TableSpec::LogGenPochhammer { .. } => ("log_gen_pochhammer", 1),
        TableSpec::JackC { .. } => ("jack_c", grid.first().map_or(1, Vec::len)),
    };
    let eval: Evaluator = match spec {
        TableSpec::LnGamma => Box::new(|x| Ok(ln_gamma(x[0]))),
        TableSpec::LgammaM { beta, m } => {
            let alg = Algebra::from_beta(beta)?;
            Box::new(move |x| lgamma_m(x[0], alg, m))
        }
        TableSpec::LgammaMWeighted { beta, kappa, sign } => {
            let alg = Algebra::from_beta(beta)?;
            let kappa = WeightVector::new(kappa)?;
            let sign = match sign {
                SignArg::Plus => WeightSign::Plus,
                SignArg::Minus => WeightSign::Minus,
            };
            Box::new(move |x| lgamma_m_weighted(x[0], &kappa, alg, sign))
        }
        TableSpec::LogGenPochhammer { beta, kappa } => {
            let alg = Algebra::from_beta(beta)?;
            let kappa = WeightVector::new(kappa)?;
            Box::new(move |x| log_gen_pochhammer(x[0], &kappa, alg))
        }
        TableSpec::JackC { beta, tau } => {
            let alg = Algebra::from_beta(beta)?;
            let tau = Partition::new(tau)?;
            Box::new(move |x| jack_c(&tau, x, alg.beta_f64()))
        }
    };
    let header: Vec<String> = if arity == 1 {
        vec!["a".into()]
    } else {
        (1..=arity).map(|i| format!("x_{i}")).collect()
    };
    writeln!(out, "{},{name}", header.join(","))?;
    for point in grid {
        if point.len() != arity {
            return Err(CliError::Usage(format!("grid point {point:?} must have {arity} coordinates")));
        }
        let value = match eval(point) {
            Ok(v) => v,
            Err(riesz_core::Error::Domain(_)) => f64::NAN,
            Err(e) => return Err(e.into()),
        };
        let mut row: Vec<String> = point.iter().map(|x| number_token(*x)).collect();
        row.push(number_token(value));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Writes `alpha_1..alpha_m,logpdf` (or gamma_…) rows for an ordered-value density.
/// Grid points that are not strictly decreasing give `nan`; other errors abort.
pub fn write_value_density(model: &Model, grid: &[Vec<f64>], out: &mut impl Write) -> Result<(), CliError> {
    writeln!(out, "# riesz-lab sv-density dist={}", model.name())?;
    writeln!(out, "{},logpdf", column_names(model).join(","))?;
    for point in grid {
        let value = match model.log_pdf(&Point::Values(point.clone())) {
            Err(riesz_core::Error::UnorderedInput) => f64::NAN,
            other => other?,
        };
        let mut row: Vec<String> = point.iter().map(|x| number_token(*x)).collect();
        row.push(number_token(value));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
