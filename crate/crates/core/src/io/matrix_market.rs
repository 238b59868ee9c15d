//! Matrix Market reader and writer for dense storage.
//!
//! Reads `coordinate` (general or symmetric) and `array` (general) files
//! with `real` or `integer` entries, and `complex` entries when the target
//! scalar is complex. Writes `array general` with 17 significant digits.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, PartialEq)]
enum Field {
    Real,
    Complex,
}

pub fn read_matrix_market<T: Scalar>(path: impl AsRef<Path>) -> Result<Matrix<T>> {
    parse_matrix_market(&fs::read_to_string(path)?)
}

/// Reads a column vector stored as an `n × 1` (or `1 × n`) matrix.
pub fn read_vector<T: Scalar>(path: impl AsRef<Path>) -> Result<Vec<T>> {
    let m = read_matrix_market::<T>(path)?;
    if m.cols() == 1 || m.rows() == 1 {
        Ok(m.as_slice().to_vec())
    } else {
        Err(Error::invalid(format!(
            "expected a vector, found a {}x{} matrix",
            m.rows(),
            m.cols()
        )))
    }
}

pub fn parse_matrix_market<T: Scalar>(text: &str) -> Result<Matrix<T>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(Error::parse(hl, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'"));
    }
    let layout = match tokens[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(Error::parse(hl, format!("unsupported format '{other}'"))),
    };
    let field = match tokens[3].as_str() {
        "real" | "integer" | "double" => Field::Real,
        "complex" if T::IS_COMPLEX => Field::Complex,
        other => return Err(Error::parse(hl, format!("unsupported field '{other}'"))),
    };
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" if layout == Layout::Coordinate => true,
        other => return Err(Error::parse(hl, format!("unsupported symmetry '{other}' for this format"))),
    };

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (sl, size) = body.next().ok_or_else(|| Error::parse(hl + 1, "missing size line"))?;
    let dims = parse_usizes(sl, size)?;
    let width = if field == Field::Complex { 2 } else { 1 };
    match (layout, dims.as_slice()) {
        (Layout::Coordinate, &[rows, cols, nnz]) => {
            if symmetric && rows != cols {
                return Err(Error::parse(sl, "symmetric matrix must be square"));
            }
            let mut m = Matrix::zeros(rows, cols);
            let mut seen = 0;
            for (ln, line) in body {
                if seen == nnz {
                    return Err(Error::parse(ln, "more entries than declared"));
                }
                let t: Vec<&str> = line.split_whitespace().collect();
                if t.len() != 2 + width {
                    return Err(Error::parse(ln, format!("expected {} fields", 2 + width)));
                }
                let i = parse_index(ln, t[0], rows)?;
                let j = parse_index(ln, t[1], cols)?;
                let v = parse_value::<T>(ln, &t[2..])?;
                m[(i, j)] = v;
                if symmetric && i != j {
                    m[(j, i)] = v;
                }
                seen += 1;
            }
            if seen != nnz {
                return Err(Error::parse(text.lines().count(), format!("expected {nnz} entries, found {seen}")));
            }
            Ok(m)
        }
        (Layout::Array, &[rows, cols]) => {
            let mut data = Vec::with_capacity(rows * cols);
            for (ln, line) in body {
                if data.len() == rows * cols {
                    return Err(Error::parse(ln, "more entries than declared"));
                }
                let t: Vec<&str> = line.split_whitespace().collect();
                if t.len() != width {
                    return Err(Error::parse(ln, format!("expected {width} field(s)")));
                }
                data.push(parse_value::<T>(ln, &t)?);
            }
            if data.len() != rows * cols {
                return Err(Error::parse(
                    text.lines().count(),
                    format!("expected {} entries, found {}", rows * cols, data.len()),
                ));
            }
            Matrix::from_col_major(rows, cols, data)
        }
        _ => Err(Error::parse(sl, "malformed size line")),
    }
}

fn parse_usizes(line: usize, s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(line, format!("bad size '{t}'"))))
        .collect()
}

fn parse_index(line: usize, s: &str, bound: usize) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(i) if i >= 1 && i <= bound => Ok(i - 1),
        _ => Err(Error::parse(line, format!("index '{s}' outside 1..={bound}"))),
    }
}

fn parse_value<T: Scalar>(line: usize, t: &[&str]) -> Result<T> {
    let num = |s: &str| -> Result<f64> {
        let v: f64 = s.parse().map_err(|_| Error::parse(line, format!("bad number '{s}'")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::parse(line, format!("non-finite value '{s}'")))
        }
    };
    match t {
        [re] => Ok(T::from_real(num(re)?)),
        [re, im] => Ok(T::from_parts(num(re)?, num(im)?)),
        _ => Err(Error::parse(line, "bad entry")),
    }
}

/// `array general` text; complex scalars write `re im` pairs.
pub fn format_matrix_market<T: Scalar>(m: &Matrix<T>) -> String {
    let field = if T::IS_COMPLEX { "complex" } else { "real" };
    let mut out = format!("%%MatrixMarket matrix array {field} general\n{} {}\n", m.rows(), m.cols());
    for v in m.as_slice() {
        if T::IS_COMPLEX {
            out.push_str(&format!("{:.16e} {:.16e}\n", v.re(), v.im()));
        } else {
            out.push_str(&format!("{:.16e}\n", v.re()));
        }
    }
    out
}

pub fn write_matrix_market<T: Scalar>(path: impl AsRef<Path>, m: &Matrix<T>) -> Result<()> {
    fs::write(path, format_matrix_market(m))?;
    Ok(())
}

pub fn write_vector<T: Scalar>(path: impl AsRef<Path>, v: &[T]) -> Result<()> {
    write_matrix_market(path, &Matrix::column_vector(v))
}
