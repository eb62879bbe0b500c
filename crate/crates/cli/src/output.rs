//! Output destinations and the human-readable check table.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use riesz_core::verify::{number_token, CheckReport};

use crate::args::CliError;

/// Buffered stdout or file writer.
pub struct Sink(Box<dyn Write>);

impl Sink {
    pub fn open(path: Option<&str>) -> Result<Self, CliError> {
        Ok(Sink(match path {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| CliError::Usage(format!("cannot create '{p}': {e}")))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        }))
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.0.flush()?;
        Ok(())
    }
}

impl Write for Sink {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.0.write(buf)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.0.flush()
    }
}

pub fn report_table(reports: &[CheckReport], suite: &str, seed: u64) -> String {
    let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let mut out = format!("suite {suite}, seed {seed}\n");
    out += &format!("{:<6} {:<width$} {:>14} {:>14} {:>10}\n", "result", "name", "statistic", "target", "tolerance");
    for r in reports {
        out += &format!(
            "{:<6} {:<width$} {:>14} {:>14} {:>10}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            short(r.statistic),
            short(r.target),
            short(r.tolerance),
        );
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    out += &format!("{passed}/{} checks passed\n", reports.len());
    out
}

fn short(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.6e}")
    } else {
        number_token(x)
    }
}
