//! Argument values that may be inline JSON or file paths, grids, and the CLI
//! error type.

use std::path::Path;

use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] riesz_core::Error),
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0} of {1} checks failed")]
    ChecksFailed(usize, usize),
}

impl CliError {
    /// 1 for failed checks, 2 for anything rejected before or during validation.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ChecksFailed(..) => 1,
            _ => 2,
        }
    }
}

/// Inline JSON when the argument starts with `{` or `[`, otherwise the
/// contents of the named file.
pub fn read_json(arg: &str) -> Result<Value, CliError> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg))
            .map_err(|e| CliError::Usage(format!("cannot read '{arg}': {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

/// Grid points: each a vector of coordinates (length 1 for scalar grids).
///
/// Accepted forms are `start:stop:num`, a JSON array of numbers or of
/// arrays, and {"start":..,"stop":..,"num":..}, inline or from a file.
pub fn read_grid(arg: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let parts: Vec<&str> = arg.split(':').collect();
    if parts.len() == 3 && !Path::new(arg).exists() {
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad grid '{arg}'")));
        let count = parts[2].trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad grid count in '{arg}'")))?;
        return linspace(num(parts[0])?, num(parts[1])?, count);
    }
    let v = read_json(arg)?;
    match &v {
        Value::Array(items) => items
            .iter()
            .map(|item| match item {
                Value::Number(x) => Ok(vec![x.as_f64().unwrap_or(f64::NAN)]),
                Value::Array(xs) => xs
                    .iter()
                    .map(|x| x.as_f64().ok_or_else(|| CliError::Usage(format!("grid entry {x} is not a number"))))
                    .collect(),
                other => Err(CliError::Usage(format!("grid entry {other} is neither a number nor an array"))),
            })
            .collect(),
        Value::Object(o) => {
            let get = |k: &str| o.get(k).and_then(Value::as_f64).ok_or_else(|| CliError::Usage(format!("grid needs numeric \"{k}\"")));
            linspace(get("start")?, get("stop")?, get("num")? as usize)
        }
        _ => Err(CliError::Usage("grid must be an array or a {start, stop, num} object".into())),
    }
}

fn linspace(start: f64, stop: f64, num: usize) -> Result<Vec<Vec<f64>>, CliError> {
    if num == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(CliError::Usage("grid needs finite bounds and at least one point".into()));
    }
    if num == 1 {
        return Ok(vec![vec![start]]);
    }
    let step = (stop - start) / (num - 1) as f64;
    Ok((0..num).map(|i| vec![start + step * i as f64]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!(read_grid("1:2:3").unwrap(), vec![vec![1.0], vec![1.5], vec![2.0]]);
        assert_eq!(read_grid("[0.5, [2, 1]]").unwrap(), vec![vec![0.5], vec![2.0, 1.0]]);
        assert_eq!(read_grid(r#"{"start": 0, "stop": 1, "num": 2}"#).unwrap(), vec![vec![0.0], vec![1.0]]);
        assert!(read_grid("1:2:x").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::ChecksFailed(1, 2).exit_code(), 1);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
    }
}
