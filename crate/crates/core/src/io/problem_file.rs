//! Plain-text problem files.
//!
//! ```text
//! # d n m lambda
//! a11,a12,...,a1N
//! ...
//! ad1,ad2,...,adN
//! y1,y2,...,yN
//! ```
//!
//! `N = n·m`. Numbers are written in shortest round-trip form, so saving and
//! reloading reproduces every entry bit for bit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::RidgeProblem;

/// Dimensions and regularizer declared on a problem file's first line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemFileHeader {
    pub d: usize,
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<RidgeProblem> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_problem(&text, path)
}

/// Parses problem text; `origin` is only used in error messages.
pub fn parse_problem(text: &str, origin: &Path) -> Result<RidgeProblem> {
    let err = |line: usize, message: String| Error::Parse {
        path: PathBuf::from(origin),
        line,
        message,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header_text) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let header = parse_header(header_text).map_err(|m| err(header_line, m))?;
    let big_n = header.n * header.m;

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(header.d + 1);
    let mut last_line = header_line;
    for (line_no, line) in lines {
        last_line = line_no;
        if rows.len() == header.d + 1 {
            return Err(err(
                line_no,
                format!("expected {} data rows (d = {} rows of A plus y), found more", header.d + 1, header.d),
            ));
        }
        let row = parse_row(line).map_err(|m| err(line_no, m))?;
        if row.len() != big_n {
            return Err(err(
                line_no,
                format!("expected {big_n} entries (n*m), found {}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != header.d + 1 {
        return Err(err(
            last_line,
            format!(
                "expected {} data rows (d = {} rows of A plus y), found {}",
                header.d + 1,
                header.d,
                rows.len()
            ),
        ));
    }
    let y = rows.pop().expect("d + 1 >= 1 rows");
    let data: Vec<f64> = rows.into_iter().flatten().collect();
    let a = Matrix::new(header.d, big_n, data)?;
    RidgeProblem::new(a, y, header.lambda, header.n, header.m)
}

fn parse_header(line: &str) -> std::result::Result<ProblemFileHeader, String> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| "header must start with '#' followed by: d n m lambda".to_string())?;
    let fields: Vec<&str> = body.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(format!("header needs 4 fields (d n m lambda), found {}", fields.len()));
    }
    let count = |name: &str, s: &str| -> std::result::Result<usize, String> {
        match s.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(format!("{name} must be a positive integer, got '{s}'")),
        }
    };
    let d = count("d", fields[0])?;
    let n = count("n", fields[1])?;
    let m = count("m", fields[2])?;
    let lambda = parse_number(fields[3])?;
    if lambda <= 0.0 {
        return Err(format!("lambda must be positive, got {lambda}"));
    }
    Ok(ProblemFileHeader { d, n, m, lambda })
}

fn parse_number(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse '{}' as a number", s.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("non-finite value '{}'", s.trim()))
    }
}

fn parse_row(line: &str) -> std::result::Result<Vec<f64>, String> {
    line.split(',').map(parse_number).collect()
}

/// Serializes a problem in the file format above.
pub fn format_problem(p: &RidgeProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} {} {} {}", p.d(), p.n(), p.m(), p.lambda());
    let mut push_row = |row: &[f64]| {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    };
    for i in 0..p.d() {
        push_row(p.a().row(i));
    }
    push_row(p.y());
    out
}

pub fn write_problem(p: &RidgeProblem, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_problem(p))?;
    Ok(())
}
