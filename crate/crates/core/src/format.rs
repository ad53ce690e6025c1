//! Text formats for matrices, chains and polynomials.
//!
//! A quaternion is written `w,x,y,z` with no internal spaces. A matrix file
//! starts with a header `n m` followed by `n` lines of `m` entries. Chain and
//! polynomial files list whitespace-separated entries (polynomials lowest
//! degree first). Lines whose first non-blank character is `#` are ignored.
//! Numbers are written with 17 significant digits, which round-trips every
//! finite `f64`.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::poly::{QPoly, SphericalChain};
use crate::quaternion::Quaternion;

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_quaternion(token: &str, line: usize) -> Result<Quaternion> {
    let parts: Vec<&str> = token.split(',').collect();
    if parts.len() != 4 {
        return Err(parse_error(line, format!("expected w,x,y,z but got `{token}`")));
    }
    let mut v = [0.0; 4];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part.parse().map_err(|_| parse_error(line, format!("`{part}` is not a number")))?;
    }
    Ok(Quaternion::from_array(v))
}

pub fn render_quaternion(q: Quaternion) -> String {
    format!("{:.16e},{:.16e},{:.16e},{:.16e}", q.w, q.x, q.y, q.z)
}

pub fn parse_matrix(text: &str) -> Result<QMatrix> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_error(1, "missing `n m` header"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_error(hline, format!("bad dimension `{t}`"))))
        .collect::<Result<_>>()?;
    let [n, m] = dims[..] else {
        return Err(parse_error(hline, "header must be `n m`"));
    };
    let mut data = Vec::with_capacity(n * m);
    let mut last = hline;
    for _ in 0..n {
        let (ln, row) = lines.next().ok_or_else(|| parse_error(last + 1, format!("expected {n} rows")))?;
        last = ln;
        let entries: Vec<&str> = row.split_whitespace().collect();
        if entries.len() != m {
            return Err(parse_error(ln, format!("expected {m} entries, found {}", entries.len())));
        }
        for t in entries {
            data.push(parse_quaternion(t, ln)?);
        }
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_error(ln, format!("unexpected content after {n} rows")));
    }
    QMatrix::from_vec(n, m, data)
}

pub fn render_matrix(m: &QMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| render_quaternion(m[(i, j)])).collect();
        writeln!(out, "{}", row.join(" ")).expect("write to string");
    }
    out
}

/// All entries of a chain or polynomial file, in order.
pub fn parse_entries(text: &str) -> Result<Vec<Quaternion>> {
    let mut out = Vec::new();
    for (ln, line) in content_lines(text) {
        for t in line.split_whitespace() {
            out.push(parse_quaternion(t, ln)?);
        }
    }
    Ok(out)
}

fn render_entries(entries: &[Quaternion]) -> String {
    let mut out = String::new();
    for &q in entries {
        writeln!(out, "{}", render_quaternion(q)).expect("write to string");
    }
    out
}

/// Parses and validates a spherical chain.
pub fn parse_chain(text: &str, tol: f64) -> Result<SphericalChain> {
    SphericalChain::new(parse_entries(text)?, tol)
}

/// Chain entries without validation, for interpolation nodes that may be a
/// single real point.
pub fn parse_nodes(text: &str) -> Result<Vec<Quaternion>> {
    let v = parse_entries(text)?;
    if v.is_empty() {
        return Err(parse_error(1, "no entries"));
    }
    Ok(v)
}

pub fn render_chain(chain: &SphericalChain) -> String {
    render_entries(chain.elems())
}

pub fn parse_poly(text: &str) -> Result<QPoly> {
    Ok(QPoly::new(parse_entries(text)?))
}

pub fn render_poly(p: &QPoly) -> String {
    render_entries(p.coeffs())
}
