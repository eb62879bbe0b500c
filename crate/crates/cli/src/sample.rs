//! Chunked, reproducible sampling.
//!
//! Draws are produced in chunks of `CHUNK`; chunk c uses random stream
//! (stream·2³² + c) of the seed, so the output depends only on the seed, the
//! stream id and n, never on the thread count.

use std::io::Write;

use riesz_core::linalg::MatrixLiteral;
use riesz_core::model::{Model, Point};
use riesz_core::rng::RngStream;
use riesz_core::verify::{number_json, number_token};
use serde_json::json;

use crate::args::CliError;
use crate::Format;

const CHUNK: usize = 4096;
const PLANES: [&str; 4] = ["re", "im", "j", "k"];

pub fn write_samples(
    model: &Model,
    n: usize,
    seed: u64,
    stream: u64,
    format: Format,
    threads: usize,
    out: &mut impl Write,
) -> Result<(), CliError> {
    if stream >= 1 << 32 {
        return Err(CliError::Usage(format!("--stream must be below 2^32, got {stream}")));
    }
    let columns = column_names(model);
    match format {
        Format::Csv => {
            writeln!(out, "# riesz-lab sample dist={} seed={seed} stream={stream} n={n}", model.name())?;
            writeln!(out, "{}", columns.join(","))?;
        }
        Format::Jsonl => {
            let header = json!({"dist": model.name().to_string(), "seed": seed, "stream": stream, "n": n, "columns": columns});
            writeln!(out, "{}", json!({ "header": header }))?;
        }
    }
    let chunks = n.div_ceil(CHUNK);
    let threads = threads.max(1);
    for wave in (0..chunks).step_by(threads) {
        let ids: Vec<usize> = (wave..chunks.min(wave + threads)).collect();
        let texts: Vec<Result<String, CliError>> = std::thread::scope(|s| {
            let handles: Vec<_> = ids
                .iter()
                .map(|&c| {
                    let len = CHUNK.min(n - c * CHUNK);
                    s.spawn(move || draw_chunk(model, seed, (stream << 32) | c as u64, len, format))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("sampling thread panicked")).collect()
        });
        for text in texts {
            out.write_all(text?.as_bytes())?;
        }
    }
    Ok(())
}

fn draw_chunk(model: &Model, seed: u64, stream: u64, len: usize, format: Format) -> Result<String, CliError> {
    let mut rng = RngStream::new(seed, stream);
    let mut text = String::new();
    for _ in 0..len {
        let point = model.sample(&mut rng)?;
        match format {
            Format::Csv => {
                let row: Vec<String> = flat_values(&point).into_iter().map(number_token).collect();
                text += &row.join(",");
            }
            Format::Jsonl => {
                let line = match &point {
                    Point::Matrix(a) => serde_json::to_string(&MatrixLiteral::from_matrix(a))?,
                    Point::Values(v) => serde_json::to_string(&v.iter().map(|x| number_json(*x)).collect::<Vec<_>>())?,
                };
                text += &line;
            }
        }
        text.push('\n');
    }
    Ok(text)
}

/// CSV column names: y_i_j_plane for every matrix entry, row-major, or
/// alpha_i / gamma_i for ordered values.
pub fn column_names(model: &Model) -> Vec<String> {
    let (r, c) = model.shape();
    match model {
        Model::SingularValues(..) => (1..=r).map(|i| format!("alpha_{i}")).collect(),
        Model::Eigenvalues(..) => (1..=r).map(|i| format!("gamma_{i}")).collect(),
        _ => {
            let b = model.algebra().beta() as usize;
            let mut out = Vec::with_capacity(r * c * b);
            for i in 1..=r {
                for j in 1..=c {
                    out.extend(PLANES.iter().take(b).map(|p| format!("y_{i}_{j}_{p}")));
                }
            }
            out
        }
    }
}

fn flat_values(point: &Point) -> Vec<f64> {
    match point {
        Point::Matrix(a) => a.coords(),
        Point::Values(v) => v.clone(),
    }
}
