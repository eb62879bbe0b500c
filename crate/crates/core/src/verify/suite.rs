//! Named check suites, run as independent jobs on disjoint random streams.
//!
//! Job i of a suite draws from stream i of the suite seed, so reports are
//! deterministic given the seed regardless of how many threads run them.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::Rng;
use serde_json::{json, Value};

use super::checks::{
    check_eig_pipeline, check_importance, check_normalization, check_sampler_marginals, check_svd_measure, draw_points,
};
use super::identities::{
    check_gamma_factorization, check_gamma_integral, check_jack_sum_rule, check_qk_identities,
    check_spherical_identity, random_pd,
};
use super::jacobian::{check_jacobian_linear, check_jacobian_symmetric, check_stiefel_sphere};
use super::quad::QuadConfig;
use super::CheckReport;
use crate::dens::{MixingParams, SvParams, Variant};
use crate::error::{Error, Result};
use crate::hwv::{Partition, WeightVector};
use crate::linalg::{gaussian_matrix, Algebra};
use crate::model::{DistName, Model};
use crate::rng::RngStream;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "RIESZ_LAB_THREADS";

/// Worker threads: `RIESZ_LAB_THREADS` when set to a positive integer,
/// otherwise the available parallelism.
pub fn thread_limit() -> usize {
    let avail = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(n) if n > 0 => n,
        _ => avail,
    }
}

type JobFn = Box<dyn Fn(&mut RngStream) -> Result<Vec<CheckReport>> + Send + Sync>;

struct Job {
    name: String,
    run: JobFn,
}

fn job(name: impl Into<String>, run: impl Fn(&mut RngStream) -> Result<Vec<CheckReport>> + Send + Sync + 'static) -> Job {
    Job { name: name.into(), run: Box::new(run) }
}

const SUITES: [&str; 7] = ["quick", "default", "hwv", "normalization", "sampler", "jacobian", "zonal"];

pub fn suite_names() -> &'static [&'static str] {
    &SUITES
}

fn model(name: &str, params: Value) -> Result<Model> {
    Model::from_json(name.parse::<DistName>()?, &params)
}

fn norm_cfg() -> QuadConfig {
    QuadConfig::with_tol(1e-10, 1e-14)
}

fn matrix_norm_cfg() -> QuadConfig {
    QuadConfig { max_nodes: 40_000_000, ..QuadConfig::with_tol(1e-5, 1e-8) }
}

fn ks_cfg() -> QuadConfig {
    QuadConfig::with_tol(1e-3, 1e-4)
}

fn normalization_job(name: &'static str, params: Value, tol: f64) -> Job {
    let cfg = if tol < 1e-6 { norm_cfg() } else { matrix_norm_cfg() };
    job(format!("normalization {name} {params}"), move |_| {
        Ok(vec![check_normalization(&model(name, params.clone())?, tol, &cfg)?])
    })
}

/// Sampler agreement: marginal KS tests when the support has at most four
/// real coordinates, importance-weight identities otherwise.
fn sampler_job(name: &'static str, params: Value, samples: usize) -> Job {
    job(format!("sampler {name} {params}"), move |rng| {
        let m = model(name, params.clone())?;
        let points = draw_points(&m, rng, samples)?;
        if m.real_dim() <= 4 {
            check_sampler_marginals(&m, &points, &ks_cfg())
        } else {
            [0.8, 0.95].iter().map(|&c| check_importance(&m, &points, c)).collect()
        }
    })
}

fn normalization_jobs(quick: bool) -> Vec<Job> {
    let mut jobs = vec![
        normalization_job("riesz-I", json!({"a": 2.0, "kappa": [0.0]}), 1e-8),
        normalization_job("riesz-II", json!({"a": 2.5, "kappa": [1.0]}), 1e-8),
        normalization_job("triesz-I", json!({"n": 1, "nu": 3.0, "tau": [0.0], "rho": 1.0 / 3.0}), 1e-8),
        normalization_job("triesz-II", json!({"n": 1, "nu": 4.0, "k": 0.5, "tau": [0.25], "rho": 0.5}), 1e-8),
        normalization_job("kotzriesz-I", json!({"n": 1, "kappa": [1.0], "beta": 2}), 1e-8),
        normalization_job("beta-riesz-I", json!({"n": 3, "nu": 5.0, "k": 1.0, "tau": [1.0], "rho": 1.0}), 1e-8),
        normalization_job("sv-triesz-II", json!({"n": 3, "m": 1, "nu": 3.0, "k": 0.0, "tau": [1], "rho": 1.0}), 1e-8),
        normalization_job("sv-triesz-I", json!({"n": 3, "m": 2, "nu": 4.0, "k": 0.0, "tau": [1, 0], "rho": 0.25}), 1e-5),
    ];
    if quick {
        return jobs;
    }
    jobs.extend([
        normalization_job("riesz-I", json!({"a": 3.0, "kappa": [2.0, 1.0]}), 1e-5),
        normalization_job("riesz-II", json!({"a": 3.5, "kappa": [1.0, -0.5], "beta": 2}), 1e-5),
        normalization_job("kotzriesz-I", json!({"n": 2, "kappa": [1.0, 0.5]}), 1e-5),
        normalization_job("kotzriesz-II", json!({"n": 2, "kappa": [0.25, -0.5]}), 1e-5),
        normalization_job("kotzriesz-II", json!({"n": 2, "kappa": [0.5], "beta": 2}), 1e-5),
        normalization_job("triesz-I", json!({"n": 2, "nu": 5.0, "k": 1.0, "tau": [1.0, 0.0], "rho": 0.5}), 1e-5),
        normalization_job("triesz-II", json!({"n": 2, "nu": 6.0, "k": 1.0, "tau": [1.0], "rho": 1.0, "beta": 2}), 1e-5),
        normalization_job("beta-riesz-I", json!({"n": 4, "nu": 5.0, "k": 0.5, "tau": [1.0, 0.0], "rho": 1.0}), 1e-5),
        normalization_job("beta-riesz-II", json!({"n": 3, "nu": 6.0, "k": 1.0, "tau": [1.0, 0.0], "rho": 1.0, "beta": 2}), 1e-5),
        normalization_job("sv-triesz-II", json!({"n": 3, "m": 2, "nu": 5.0, "k": 1.0, "tau": [1, 0], "rho": 1.0, "beta": 2}), 1e-5),
        normalization_job("sv-triesz-I", json!({"n": 2, "m": 2, "nu": 6.0, "k": 0.0, "tau": [1], "rho": 1.0, "beta": 4}), 1e-5),
        normalization_job("eig-beta-riesz-I", json!({"n": 3, "m": 2, "nu": 4.0, "k": 0.0, "tau": [2, 0], "rho": 0.5}), 1e-5),
        normalization_job("eig-beta-riesz-II", json!({"n": 4, "m": 2, "nu": 6.0, "k": 1.0, "tau": [1, 1], "rho": 1.0, "beta": 2}), 1e-5),
    ]);
    jobs
}

fn sampler_jobs(quick: bool, samples: usize) -> Vec<Job> {
    let mut jobs = vec![
        sampler_job("riesz-I", json!({"a": 2.0, "kappa": [1.0]}), samples),
        sampler_job("triesz-II", json!({"n": 2, "nu": 4.0, "k": 0.5, "tau": [0.5], "rho": 0.5}), samples),
    ];
    if quick {
        return jobs;
    }
    let xi2 = json!({"n": 2, "m": 2, "beta": 2, "re": [[1.0, 0.3], [0.3, 2.0]], "im": [[0.0, 0.2], [-0.2, 0.0]]});
    let sigma1 = json!({"n": 2, "m": 2, "beta": 1, "re": [[2.0, 0.5], [0.5, 1.0]]});
    jobs.extend([
        sampler_job("riesz-I", json!({"a": 3.0, "kappa": [2.0, 1.0]}), samples),
        sampler_job("riesz-II", json!({"a": 3.0, "kappa": [2.0, 1.0]}), samples),
        sampler_job("riesz-I", json!({"a": 3.5, "kappa": [1.0, -0.5], "beta": 2, "xi": xi2.clone()}), samples),
        sampler_job("riesz-II", json!({"a": 3.5, "kappa": [1.0, -0.5], "beta": 2, "xi": xi2}), samples),
        sampler_job("kotzriesz-I", json!({"n": 2, "kappa": [1.5, 0.5], "sigma": sigma1.clone()}), samples),
        sampler_job("kotzriesz-II", json!({"n": 2, "kappa": [0.25, -0.5], "sigma": sigma1.clone()}), samples),
        sampler_job("kotzriesz-I", json!({"n": 2, "kappa": [1.0], "beta": 2}), samples),
        sampler_job("kotzriesz-II", json!({"n": 2, "kappa": [0.5], "beta": 2}), samples),
        sampler_job("kotzriesz-I", json!({"n": 4, "kappa": [2.0, 1.0], "beta": 2}), samples),
        sampler_job("kotzriesz-II", json!({"n": 4, "kappa": [1.0, -1.0], "beta": 2}), samples),
        sampler_job("triesz-I", json!({"n": 2, "nu": 5.0, "k": 1.0, "tau": [1.0, 0.0], "rho": 0.5}), samples),
        sampler_job("triesz-II", json!({"n": 2, "nu": 5.0, "k": 1.0, "tau": [0.25, -0.5], "rho": 0.5}), samples),
        sampler_job("triesz-I", json!({"n": 2, "nu": 6.0, "k": 1.0, "tau": [1.0], "rho": 1.0, "beta": 2}), samples),
        sampler_job("triesz-II", json!({"n": 2, "nu": 6.0, "k": 1.0, "tau": [1.0], "rho": 1.0, "beta": 2}), samples),
        sampler_job("triesz-I", json!({"n": 3, "nu": 6.0, "k": 1.0, "tau": [1.0, 0.0], "rho": 1.0, "beta": 2}), samples),
        sampler_job("triesz-II", json!({"n": 4, "nu": 6.0, "k": -1.0, "tau": [1.0, 0.0], "rho": 1.0, "beta": 2}), samples),
        sampler_job("beta-riesz-I", json!({"n": 3, "nu": 5.0, "k": 1.0, "tau": [1.0], "rho": 1.0}), samples),
        sampler_job("beta-riesz-II", json!({"n": 3, "nu": 5.0, "k": 1.0, "tau": [1.0], "rho": 1.0}), samples),
        sampler_job("beta-riesz-I", json!({"n": 4, "nu": 5.0, "k": 0.5, "tau": [1.0, 0.0], "rho": 1.0}), samples),
        sampler_job("beta-riesz-II", json!({"n": 4, "nu": 5.0, "k": 0.5, "tau": [1.0, 0.0], "rho": 1.0}), samples),
        sampler_job("beta-riesz-I", json!({"n": 3, "nu": 6.0, "k": 1.0, "tau": [1.0, 0.0], "rho": 1.0, "beta": 2}), samples),
        sampler_job("beta-riesz-II", json!({"n": 3, "nu": 6.0, "k": 1.0, "tau": [1.0, 0.0], "rho": 1.0, "beta": 2}), samples),
    ]);
    for (variant, beta, n) in [(Variant::I, 1, 3), (Variant::II, 1, 4), (Variant::I, 2, 4), (Variant::II, 2, 4)] {
        jobs.push(job(format!("eig pipeline {variant} beta={beta} n={n}"), move |rng| {
            let alg = Algebra::from_beta(beta)?;
            let mix = MixingParams { nu: 6.0, k: 1.0, rho: 1.0, variant };
            let p = SvParams::new(n, 2, mix, Partition::new(vec![1, 0])?, alg)?;
            check_eig_pipeline(&p, rng, samples, &ks_cfg())
        }));
    }
    for (n, m, beta) in [(3, 1, 1), (3, 2, 1), (2, 2, 2)] {
        jobs.push(job(format!("svd measure n={n} m={m} beta={beta}"), move |rng| {
            check_svd_measure(n, m, Algebra::from_beta(beta)?, rng, samples, 1e-5, &ks_cfg())
        }));
    }
    jobs
}

fn jacobian_jobs(transforms: usize) -> Vec<Job> {
    let mut jobs = Vec::new();
    for beta in [1u32, 2] {
        jobs.push(job(format!("jacobian linear beta={beta}"), move |rng| {
            let alg = Algebra::from_beta(beta)?;
            (0..transforms)
                .map(|_| {
                    let (n, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
                    let a = gaussian_matrix(rng, n, n, alg, 1.0)?;
                    let b = gaussian_matrix(rng, m, m, alg, 1.0)?;
                    check_jacobian_linear(&a, &b, 1e-9)
                })
                .collect()
        }));
        jobs.push(job(format!("jacobian symmetric beta={beta}"), move |rng| {
            let alg = Algebra::from_beta(beta)?;
            (0..transforms)
                .map(|_| {
                    let m = rng.gen_range(1..=4);
                    check_jacobian_symmetric(&gaussian_matrix(rng, m, m, alg, 1.0)?, 1e-9)
                })
                .collect()
        }));
    }
    jobs.push(job("stiefel volume", |_| {
        let mut out = Vec::new();
        for alg in [Algebra::Real, Algebra::Complex, Algebra::Quaternion] {
            for n in 1..=5 {
                out.push(check_stiefel_sphere(n, alg, 1e-12)?);
            }
        }
        Ok(out)
    }));
    jobs
}

fn hwv_jobs(instances: usize) -> Vec<Job> {
    let mut jobs = vec![job("qk identities", move |rng| {
        check_qk_identities(rng, instances, &[1, 2, 3, 4, 5], &[Algebra::Real, Algebra::Complex], 1e-10)
    })];
    jobs.push(job("gamma factorization", |_| {
        let a: Vec<f64> = (2..=8).map(f64::from).collect();
        Ok(vec![check_gamma_factorization(
            &a,
            4,
            &[Algebra::Real, Algebra::Complex, Algebra::Quaternion],
            4,
            1e-12,
        )?])
    }));
    jobs.push(job("gamma integral", move |rng| {
        let k1 = WeightVector::new(vec![2.0])?;
        let k2 = WeightVector::new(vec![1.0, 0.0])?;
        let k3 = WeightVector::new(vec![2.0, 1.0])?;
        Ok(vec![
            check_gamma_integral(3.0, &k1, Algebra::Real, rng, 0, None)?,
            check_gamma_integral(3.0, &k2, Algebra::Real, rng, instances * 500, None)?,
            check_gamma_integral(4.0, &k3, Algebra::Complex, rng, instances * 500, None)?,
        ])
    }));
    jobs
}

fn zonal_jobs(samples: usize) -> Vec<Job> {
    let mut jobs = vec![job("jack sum rule", |_| {
        let mut out = Vec::new();
        for beta in [1.0, 2.0, 4.0] {
            for k in 1..=5 {
                out.push(check_jack_sum_rule(k, &[0.4, 1.3, 2.2], beta, 1e-9)?);
            }
        }
        Ok(out)
    })];
    for beta in [1u32, 2] {
        jobs.push(job(format!("spherical identity beta={beta}"), move |rng| {
            let alg = Algebra::from_beta(beta)?;
            let mut out = Vec::new();
            for (m, parts) in [(2, vec![1]), (2, vec![2, 1]), (3, vec![2]), (3, vec![1, 1, 1]), (3, vec![3, 1])] {
                let l = random_pd(rng, m, alg)?;
                out.push(check_spherical_identity(&Partition::new(parts)?, &l, rng, samples)?);
            }
            Ok(out)
        }));
    }
    jobs
}

fn jobs_for(suite: &str) -> Result<Vec<Job>> {
    Ok(match suite {
        "quick" => {
            let mut j = hwv_jobs(20);
            j.extend(normalization_jobs(true));
            j.extend(sampler_jobs(true, 20_000));
            j.extend(jacobian_jobs(5));
            j.extend(zonal_jobs(2_000));
            j
        }
        "default" => {
            let mut j = hwv_jobs(200);
            j.extend(normalization_jobs(false));
            j.extend(sampler_jobs(false, 100_000));
            j.extend(jacobian_jobs(50));
            j.extend(zonal_jobs(100_000));
            j
        }
        "hwv" => hwv_jobs(200),
        "normalization" => normalization_jobs(false),
        "sampler" => sampler_jobs(false, 100_000),
        "jacobian" => jacobian_jobs(50),
        "zonal" => zonal_jobs(100_000),
        other => {
            return Err(Error::Parse(format!("unknown suite '{other}' (expected one of {})", SUITES.join(", "))));
        }
    })
}

/// Runs a suite on up to `threads` worker threads. Reports come back in job
/// order; a job that errors contributes one failed report.
pub fn run_suite(suite: &str, seed: u64, threads: usize) -> Result<Vec<CheckReport>> {
    let jobs = jobs_for(suite)?;
    let results: Vec<Mutex<Option<Vec<CheckReport>>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = threads.clamp(1, jobs.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(j) = jobs.get(i) else { break };
                let mut rng = RngStream::new(seed, i as u64);
                let reports = (j.run)(&mut rng).unwrap_or_else(|e| vec![CheckReport::errored(j.name.clone(), &e)]);
                *results[i].lock().expect("result slot") = Some(reports);
            });
        }
    });
    Ok(results
        .into_iter()
        .flat_map(|r| r.into_inner().expect("result slot").expect("every job ran"))
        .collect())
}
