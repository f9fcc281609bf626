//! Tabular output: CSV with fixed 12-significant-digit numbers, or JSON.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::config::Format;
use crate::error::{CliError, CliResult};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `v` with 12 significant digits, `%g` style: plain decimals for
/// exponents in `[-4, 12)`, scientific notation otherwise, trailing zeros trimmed.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, v))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// A row of one of the output tables.
pub trait Record: Serialize {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub fn write_records<R: Record, W: Write>(
    records: &[R],
    format: Format,
    mut out: W,
) -> CliResult<()> {
    match format {
        Format::Csv => {
            writeln!(out, "{}", R::HEADER.join(","))?;
            for r in records {
                writeln!(out, "{}", r.fields().join(","))?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, records)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit<R: Record>(records: &[R], format: Format, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            write_records(records, format, BufWriter::new(file)).map_err(|e| match e {
                CliError::Output(io) => CliError::io(p, io),
                other => other,
            })
        }
        None => write_records(records, format, io::stdout().lock()),
    }
}
