//! Plain-text serialization of a compact Arnoldi factorization.
//!
//! Scalars fields are `name = value` lines. Matrices are introduced by
//! `name = <order> <rows> <cols>` followed by one line per column
//! (`column-major`) or per row (`row-major`). `q`, `u1`, `u2` are stored
//! column-major and `h` row-major. Complex entries print as `re,im`.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::factorization::{CompactArnoldiFactorization, Method, Status};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

fn entry<T: Scalar>(v: T) -> String {
    if T::IS_COMPLEX {
        format!("{:.16e},{:.16e}", v.re(), v.im())
    } else {
        format!("{:.16e}", v.re())
    }
}

fn push_matrix<T: Scalar>(out: &mut String, name: &str, m: &Matrix<T>, row_major: bool) {
    let order = if row_major { "row-major" } else { "column-major" };
    out.push_str(&format!("{name} = {order} {} {}\n", m.rows(), m.cols()));
    let (outer, inner) = if row_major { (m.rows(), m.cols()) } else { (m.cols(), m.rows()) };
    for a in 0..outer {
        let line: Vec<String> = (0..inner)
            .map(|b| entry(if row_major { m[(a, b)] } else { m[(b, a)] }))
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

pub fn format_factorization<T: Scalar>(f: &CompactArnoldiFactorization<T>) -> String {
    let mut out = String::new();
    out.push_str(&format!("n = {}\nk = {}\neta = {}\n", f.n(), f.k(), f.eta()));
    let alpha: Vec<String> = f.alpha().iter().map(usize::to_string).collect();
    out.push_str(&format!("alpha = {}\n", alpha.join(" ")));
    out.push_str(&format!("gamma = {:.16e}\n", f.gamma()));
    out.push_str(&format!("status = {}\n", f.status().as_str()));
    out.push_str(&format!("method = {}\n", f.method().as_str()));
    out.push_str(&format!("field = {}\n", if T::IS_COMPLEX { "complex" } else { "real" }));
    push_matrix(&mut out, "q", f.q(), false);
    push_matrix(&mut out, "u1", f.u1(), false);
    push_matrix(&mut out, "u2", f.u2(), false);
    push_matrix(&mut out, "h", f.h(), true);
    out
}

pub fn write_factorization<T: Scalar>(path: impl AsRef<Path>, f: &CompactArnoldiFactorization<T>) -> Result<()> {
    fs::write(path, format_factorization(f))?;
    Ok(())
}

pub fn read_factorization<T: Scalar>(path: impl AsRef<Path>) -> Result<CompactArnoldiFactorization<T>> {
    parse_factorization(&fs::read_to_string(path)?)
}

fn parse_entry<T: Scalar>(line: usize, tok: &str) -> Result<T> {
    let num = |s: &str| -> Result<f64> { s.parse().map_err(|_| Error::parse(line, format!("bad number '{s}'"))) };
    match tok.split_once(',') {
        Some((re, im)) if T::IS_COMPLEX => Ok(T::from_parts(num(re)?, num(im)?)),
        Some(_) => Err(Error::parse(line, "complex entry in a real factorization")),
        None => Ok(T::from_real(num(tok)?)),
    }
}

pub fn parse_factorization<T: Scalar>(text: &str) -> Result<CompactArnoldiFactorization<T>> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let mut scalars: HashMap<String, (usize, String)> = HashMap::new();
    let mut matrices: HashMap<String, Matrix<T>> = HashMap::new();
    let mut i = 0;
    while i < lines.len() {
        let (ln, line) = lines[i];
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| Error::parse(ln, "expected 'name = value'"))?;
        i += 1;
        if !matches!(key, "q" | "u1" | "u2" | "h") {
            if scalars.insert(key.to_string(), (ln, value.to_string())).is_some() {
                return Err(Error::parse(ln, format!("duplicate field '{key}'")));
            }
            continue;
        }
        let parts: Vec<&str> = value.split_whitespace().collect();
        let (row_major, rows, cols) = match parts.as_slice() {
            [order, r, c] => {
                let row_major = match *order {
                    "row-major" => true,
                    "column-major" => false,
                    o => return Err(Error::parse(ln, format!("unknown order '{o}'"))),
                };
                let dim = |s: &str| s.parse::<usize>().map_err(|_| Error::parse(ln, format!("bad dimension '{s}'")));
                (row_major, dim(r)?, dim(c)?)
            }
            _ => return Err(Error::parse(ln, "expected '<order> <rows> <cols>'")),
        };
        let (outer, inner) = if row_major { (rows, cols) } else { (cols, rows) };
        let mut m = Matrix::zeros(rows, cols);
        // An empty inner dimension still writes one blank line per outer index,
        // which the blank-line filter removed.
        if inner > 0 {
            for a in 0..outer {
                let (ln, line) = *lines
                    .get(i)
                    .ok_or_else(|| Error::parse(text.lines().count(), format!("matrix '{key}' is truncated")))?;
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != inner {
                    return Err(Error::parse(ln, format!("expected {inner} entries in '{key}'")));
                }
                for (b, t) in toks.iter().enumerate() {
                    let v = parse_entry::<T>(ln, t)?;
                    if row_major {
                        m[(a, b)] = v;
                    } else {
                        m[(b, a)] = v;
                    }
                }
                i += 1;
            }
        }
        if matrices.insert(key.to_string(), m).is_some() {
            return Err(Error::parse(ln, format!("duplicate field '{key}'")));
        }
    }

    let last = text.lines().count().max(1);
    let get = |k: &str| scalars.get(k).ok_or_else(|| Error::parse(last, format!("missing field '{k}'")));
    let count = |k: &str| -> Result<usize> {
        let (ln, v) = get(k)?;
        v.parse().map_err(|_| Error::parse(*ln, format!("bad count '{v}'")))
    };
    let (n, k, eta) = (count("n")?, count("k")?, count("eta")?);
    let (ln, alpha_s) = get("alpha")?;
    let alpha = alpha_s
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| Error::parse(*ln, format!("bad rank '{t}'"))))
        .collect::<Result<Vec<_>>>()?;
    let (ln, g) = get("gamma")?;
    let gamma: f64 = g.parse().map_err(|_| Error::parse(*ln, format!("bad gamma '{g}'")))?;
    let (ln, s) = get("status")?;
    let status = Status::parse(s).ok_or_else(|| Error::parse(*ln, format!("unknown status '{s}'")))?;
    let (ln, s) = get("method")?;
    let method = Method::parse(s).ok_or_else(|| Error::parse(*ln, format!("unknown method '{s}'")))?;
    let (ln, s) = get("field")?;
    match (s.as_str(), T::IS_COMPLEX) {
        ("real", _) | ("complex", true) => {}
        _ => return Err(Error::parse(*ln, format!("field '{s}' does not fit the requested scalar type"))),
    }
    let mut take = |k: &str| matrices.remove(k).ok_or_else(|| Error::parse(last, format!("missing matrix '{k}'")));
    let (q, u1, u2, h) = (take("q")?, take("u1")?, take("u2")?, take("h")?);
    if q.rows() != n || u1.cols() != k || q.cols() != eta {
        return Err(Error::parse(last, "dimensions disagree with n, k, eta"));
    }
    CompactArnoldiFactorization::from_parts(q, u1, u2, h, alpha, gamma, status, method)
}
