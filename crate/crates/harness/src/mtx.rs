//! Matrix Market coordinate files holding one triangle of a symmetric or
//! Hermitian matrix.
//!
//! Reading accepts `real`, `integer` and `complex` fields with `symmetric`
//! or `hermitian` storage. Entries must lie in the lower triangle, indices
//! are 1-based, duplicates are summed and `%` lines are skipped. Writing
//! emits the lower triangle with shortest round-trip floats, so a write
//! followed by a read reproduces the operator exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use feast_core::linalg::{SymmetricOperator, TripletBuilder};
use feast_core::{Scalar, SymmetryClass};
use num_complex::Complex64;

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Storage {
    Symmetric,
    Hermitian,
}

struct Header {
    field: Field,
    storage: Storage,
}

fn parse_header(line: &str) -> std::result::Result<Header, String> {
    let words: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" {
        return Err("expected '%%MatrixMarket matrix coordinate <field> <symmetry>'".into());
    }
    if words[1] != "matrix" {
        return Err(format!("unsupported object '{}'", words[1]));
    }
    if words[2] != "coordinate" {
        return Err(format!("unsupported format '{}', only coordinate is read", words[2]));
    }
    let field = match words[3].as_str() {
        "real" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        other => return Err(format!("unsupported field '{other}'")),
    };
    let storage = match words[4].as_str() {
        "symmetric" => Storage::Symmetric,
        "hermitian" => Storage::Hermitian,
        other => {
            return Err(format!(
                "symmetry '{other}' is not allowed, the matrix must be stored as symmetric or hermitian"
            ))
        }
    };
    Ok(Header { field, storage })
}

fn check_class(h: &Header, class: SymmetryClass) -> std::result::Result<(), String> {
    match (class, h.field, h.storage) {
        (SymmetryClass::RealSymmetric, Field::Real | Field::Integer, Storage::Symmetric) => Ok(()),
        (SymmetryClass::RealSymmetric, _, _) => {
            Err("real class needs a 'real symmetric' or 'integer symmetric' file".into())
        }
        (SymmetryClass::Hermitian, Field::Complex, Storage::Hermitian) => Ok(()),
        (SymmetryClass::Hermitian, Field::Real | Field::Integer, Storage::Symmetric) => Ok(()),
        (SymmetryClass::Hermitian, _, _) => {
            Err("hermitian class needs a 'complex hermitian' or 'real symmetric' file".into())
        }
    }
}

/// Parses Matrix Market text. `path` only labels error messages.
pub fn parse_matrix_market<T: Scalar>(text: &str, path: &Path) -> Result<SymmetricOperator<T>> {
    let err = |line: usize, message: String| HarnessError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let header = parse_header(first).map_err(|m| err(1, m))?;
    check_class(&header, T::CLASS).map_err(|m| err(1, m))?;

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body.next().ok_or_else(|| err(1, "missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|w| w.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| err(size_line, format!("bad size line: {e}")))?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(err(size_line, "size line needs 'rows cols entries'".into()));
    };
    if rows != cols {
        return Err(err(size_line, format!("matrix is {rows}x{cols}, not square")));
    }
    if rows == 0 {
        return Err(err(size_line, "matrix has zero rows".into()));
    }
    let n = rows;
    let mut builder = TripletBuilder::<T>::with_capacity(n, n, 2 * nnz);
    let mut count = 0;
    for (line_no, line) in body {
        count += 1;
        if count > nnz {
            return Err(err(line_no, format!("more entries than the {nnz} declared")));
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let expect = if header.field == Field::Complex { 4 } else { 3 };
        if words.len() != expect {
            return Err(err(
                line_no,
                format!("expected {expect} columns, found {}", words.len()),
            ));
        }
        let index = |w: &str, what: &str| -> Result<usize> {
            let v: usize = w
                .parse()
                .map_err(|e| err(line_no, format!("bad {what} index '{w}': {e}")))?;
            if v == 0 || v > n {
                return Err(err(line_no, format!("{what} index {v} outside 1..={n}")));
            }
            Ok(v - 1)
        };
        let i = index(words[0], "row")?;
        let j = index(words[1], "column")?;
        if i < j {
            return Err(err(
                line_no,
                format!("entry ({}, {}) is above the diagonal", i + 1, j + 1),
            ));
        }
        let number = |w: &str| -> Result<f64> {
            let v = match header.field {
                Field::Integer => w.parse::<i64>().map(|v| v as f64).map_err(|e| e.to_string()),
                _ => w.parse::<f64>().map_err(|e| e.to_string()),
            }
            .map_err(|e| err(line_no, format!("bad value '{w}': {e}")))?;
            if !v.is_finite() {
                return Err(err(line_no, format!("non-finite value '{w}'")));
            }
            Ok(v)
        };
        let value = match header.field {
            Field::Complex => Complex64::new(number(words[2])?, number(words[3])?),
            _ => Complex64::new(number(words[2])?, 0.0),
        };
        if i == j && value.im != 0.0 {
            return Err(err(line_no, "diagonal of a hermitian matrix must be real".into()));
        }
        let v = T::from_c64(value);
        builder.push(i, j, v);
        if i != j {
            builder.push(j, i, v.conj());
        }
    }
    if count < nnz {
        return Err(err(
            text.lines().count(),
            format!("found {count} entries, {nnz} declared"),
        ));
    }
    SymmetricOperator::from_csr(builder.build()).map_err(|e| err(size_line, e.to_string()))
}

pub fn load_matrix_market<T: Scalar>(path: &Path) -> Result<SymmetricOperator<T>> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_matrix_market(&text, path)
}

/// Lower triangle of `op` in Matrix Market form.
pub fn format_matrix_market<T: Scalar>(op: &SymmetricOperator<T>) -> String {
    let mut entries = Vec::new();
    op.for_each_entry(|i, j, v| {
        if i >= j {
            entries.push((j, i, v));
        }
    });
    // column-major order of the lower triangle
    entries.sort_by_key(|&(j, i, _)| (j, i));
    let n = op.n();
    let mut out = String::new();
    match T::CLASS {
        SymmetryClass::RealSymmetric => out.push_str("%%MatrixMarket matrix coordinate real symmetric\n"),
        SymmetryClass::Hermitian => out.push_str("%%MatrixMarket matrix coordinate complex hermitian\n"),
    }
    out.push_str(&format!("{n} {n} {}\n", entries.len()));
    for (j, i, v) in entries {
        match T::CLASS {
            SymmetryClass::RealSymmetric => out.push_str(&format!("{} {} {:e}\n", i + 1, j + 1, v.re())),
            SymmetryClass::Hermitian => out.push_str(&format!("{} {} {:e} {:e}\n", i + 1, j + 1, v.re(), v.im())),
        }
    }
    out
}

pub fn write_matrix_market<T: Scalar>(path: &Path, op: &SymmetricOperator<T>) -> Result<()> {
    let io_err = |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut f = fs::File::create(path).map_err(io_err)?;
    f.write_all(format_matrix_market(op).as_bytes()).map_err(io_err)?;
    Ok(())
}
