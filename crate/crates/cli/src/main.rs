//! `riesz-lab`: evaluate densities, draw samples, run verification suites and
//! tabulate special functions.

mod args;
mod output;
mod sample;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use riesz_core::dens::Variant;
use riesz_core::model::{DistName, Family, Model, Point};
use riesz_core::verify::{number_json, run_suite, suite_names, thread_limit, CheckReport};
use serde_json::json;

use crate::args::{read_json, CliError};
use crate::output::Sink;

#[derive(Parser, Debug)]
#[command(name = "riesz-lab", version, about = "Matrix multivariate T-Riesz distributions: densities, samplers and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Log-density at one point, printed as {"logpdf": ...}.
    Eval {
        #[command(flatten)]
        dist: DistArgs,
        /// Point as a matrix literal (or an array of values), inline JSON or a file.
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        output: Option<String>,
    },
    /// Independent draws as CSV or JSON lines.
    Sample {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<String>,
    },
    /// Runs a verification suite; exits with 1 when any check fails.
    Check {
        #[arg(long, default_value = "default")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// File for the JSON report; the table then goes to stdout.
        #[arg(long)]
        output: Option<String>,
    },
    /// Special function on a grid, as CSV.
    Table {
        /// Function and its fixed arguments, e.g. {"function":"lgamma_m","beta":1,"m":3}.
        #[arg(long)]
        params: String,
        /// Grid: JSON array, {"start":..,"stop":..,"num":..}, or start:stop:num.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        output: Option<String>,
    },
    /// Singular-value (or eigenvalue) density on a grid of ordered points, as CSV.
    SvDensity {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long)]
        grid: String,
        #[arg(long)]
        output: Option<String>,
    },
}

#[derive(clap::Args, Debug)]
struct DistArgs {
    /// Distribution, e.g. triesz-I, riesz-II, kotzriesz, beta-riesz, sv-triesz, eig-beta-riesz.
    #[arg(long)]
    dist: Option<String>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// Parameter bundle: inline JSON or a file.
    #[arg(long)]
    params: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VariantArg {
    #[value(name = "I", alias = "i")]
    I,
    #[value(name = "II", alias = "ii")]
    II,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::I => Variant::I,
            VariantArg::II => Variant::II,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("riesz-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Eval { dist, point, output } => eval(&dist, point.as_deref(), output.as_deref()),
        Command::Sample { dist, n, seed, stream, format, output } => {
            let model = build_model(&dist, None)?;
            let mut sink = Sink::open(output.as_deref())?;
            sample::write_samples(&model, n, seed, stream, format, thread_limit(), &mut sink)?;
            sink.finish()
        }
        Command::Check { suite, seed, output } => check(&suite, seed, output.as_deref()),
        Command::Table { params, grid, output } => {
            let mut sink = Sink::open(output.as_deref())?;
            table::write_table(&read_json(&params)?, &args::read_grid(&grid)?, &mut sink)?;
            sink.finish()
        }
        Command::SvDensity { dist, grid, output } => {
            let model = build_model(&dist, Some(Family::SingularValues))?;
            if !matches!(model, Model::SingularValues(..) | Model::Eigenvalues(..)) {
                return Err(CliError::Usage(format!("sv-density needs sv-triesz or eig-beta-riesz, got {}", model.name())));
            }
            let mut sink = Sink::open(output.as_deref())?;
            table::write_value_density(&model, &args::read_grid(&grid)?, &mut sink)?;
            sink.finish()
        }
    }
}

fn build_model(dist: &DistArgs, default_family: Option<Family>) -> Result<Model, CliError> {
    let variant = dist.variant.map(Variant::from);
    let name = match (&dist.dist, default_family) {
        (Some(d), _) => DistName::parse(d, variant)?,
        (None, Some(family)) => DistName { family, variant: variant.unwrap_or(Variant::I) },
        (None, None) => return Err(CliError::Usage("--dist is required".into())),
    };
    let params = match &dist.params {
        Some(p) => read_json(p)?,
        None => return Err(CliError::Usage("--params is required".into())),
    };
    Ok(Model::from_json(name, &params)?)
}

/// `eval` with --dist/--params/--point, or a single query document
/// {"dist": .., "params": {..}, "point": ..} passed through --params.
fn eval(dist: &DistArgs, point: Option<&str>, output: Option<&str>) -> Result<(), CliError> {
    let (model, point_json) = match (&dist.dist, &dist.params) {
        (None, Some(p)) => {
            let query = read_json(p)?;
            let field = |k: &str| query.get(k).ok_or_else(|| CliError::Usage(format!("query is missing \"{k}\"")));
            let name = field("dist")?.as_str().ok_or_else(|| CliError::Usage("\"dist\" must be a string".into()))?;
            let name = DistName::parse(name, dist.variant.map(Variant::from))?;
            (Model::from_json(name, field("params")?)?, field("point")?.clone())
        }
        _ => {
            let model = build_model(dist, None)?;
            let p = point.ok_or_else(|| CliError::Usage("--point is required".into()))?;
            (model, read_json(p)?)
        }
    };
    let x: Point = model.point_from_json(&point_json)?;
    let logpdf = model.log_pdf(&x)?;
    let mut sink = Sink::open(output)?;
    writeln!(sink, "{}", json!({ "logpdf": number_json(logpdf) }))?;
    sink.finish()
}

fn check(suite: &str, seed: u64, output: Option<&str>) -> Result<(), CliError> {
    if !suite_names().contains(&suite) {
        return Err(CliError::Usage(format!("unknown suite '{suite}'; available: {}", suite_names().join(", "))));
    }
    let reports = run_suite(suite, seed, thread_limit())?;
    let report_json = serde_json::to_string_pretty(&reports)?;
    let table = output::report_table(&reports, suite, seed);
    match output {
        Some(path) => {
            let mut sink = Sink::open(Some(path))?;
            writeln!(sink, "{report_json}")?;
            sink.finish()?;
            print!("{table}");
        }
        None => {
            println!("{report_json}");
            eprint!("{table}");
        }
    }
    let failed = reports.iter().filter(|r: &&CheckReport| !r.passed).count();
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed, reports.len()));
    }
    Ok(())
}
