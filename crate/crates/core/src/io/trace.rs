//! Convergence traces as CSV with header `k,gap,dist,step_residual,rate_estimate`.
//!
//! Reals are written with 17 significant digits, which reproduces every
//! finite `f64` exactly on re-parsing. Missing optional values are empty
//! fields.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::solvers::{ConvergenceTrace, TraceRecord};

pub const TRACE_HEADER: &str = "k,gap,dist,step_residual,rate_estimate";

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn optional(v: Option<f64>) -> String {
    v.map(real).unwrap_or_default()
}

pub fn format_trace(records: &[TraceRecord]) -> String {
    let mut out = String::with_capacity(96 * (records.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.k,
            real(r.gap),
            optional(r.dist),
            real(r.step_residual),
            optional(r.rate_estimate)
        );
    }
    out
}

/// Writes one row per recorded iteration. An empty trace is rejected.
pub fn write_trace(trace: &ConvergenceTrace, path: impl AsRef<Path>) -> Result<()> {
    if trace.records.is_empty() {
        return Err(Error::InvalidArgument("cannot write an empty trace".into()));
    }
    std::fs::write(path, format_trace(&trace.records))?;
    Ok(())
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<Vec<TraceRecord>> {
    let path = path.as_ref();
    parse_trace(&std::fs::read_to_string(path)?, path)
}

pub fn parse_trace(text: &str, origin: &Path) -> Result<Vec<TraceRecord>> {
    let err = |line: usize, message: String| Error::Parse {
        path: PathBuf::from(origin),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, h)) if h.trim() == TRACE_HEADER => {}
        _ => return Err(err(1, format!("expected header '{TRACE_HEADER}'"))),
    }
    let mut records = Vec::new();
    for (line_no, line) in lines.filter(|(_, l)| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(err(line_no, format!("expected 5 fields, found {}", fields.len())));
        }
        let real = |s: &str| s.trim().parse::<f64>().map_err(|_| err(line_no, format!("bad number '{s}'")));
        let optional = |s: &str| if s.trim().is_empty() { Ok(None) } else { real(s).map(Some) };
        records.push(TraceRecord {
            k: fields[0]
                .trim()
                .parse()
                .map_err(|_| err(line_no, format!("bad iteration index '{}'", fields[0])))?,
            gap: real(fields[1])?,
            dist: optional(fields[2])?,
            step_residual: real(fields[3])?,
            rate_estimate: optional(fields[4])?,
        });
    }
    Ok(records)
}
