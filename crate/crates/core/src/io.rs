//! Text formats: matrices as header-less CSV, permutations as one 0-based
//! image per line.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Result, SeriationError};
use crate::matrix::{Matrix, Permutation};

fn io_err(path: &Path, source: std::io::Error) -> SeriationError {
    SeriationError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Parses a matrix from CSV text. Ragged rows, empty input and non-numeric or
/// non-finite fields are rejected.
pub fn parse_matrix_csv<R: Read>(reader: R) -> Result<Matrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut n_cols = 0;
    let mut n_rows = 0;
    let mut data = Vec::new();
    for record in rdr.records() {
        let record = record?;
        for (j, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                SeriationError::InvalidMatrix(format!(
                    "row {n_rows}, column {j}: cannot parse {field:?} as a number"
                ))
            })?;
            data.push(v);
        }
        n_cols = record.len();
        n_rows += 1;
    }
    Matrix::from_vec(n_rows, n_cols, data)
}

pub fn read_matrix_csv(path: &Path) -> Result<Matrix> {
    let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
    parse_matrix_csv(file).map_err(|e| match e {
        SeriationError::InvalidMatrix(message) => SeriationError::Parse {
            path: path.to_path_buf(),
            message,
        },
        other => other,
    })
}

/// Writes `a` as CSV using the shortest round-trip decimal form of each entry.
pub fn format_matrix_csv(a: &Matrix) -> String {
    let mut out = String::with_capacity(a.as_slice().len() * 8);
    for row in a.rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix_csv(path: &Path, a: &Matrix) -> Result<()> {
    write_text(path, &format_matrix_csv(a))
}

pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let mapping = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| {
            l.parse::<usize>().map_err(|_| {
                SeriationError::InvalidPermutation(format!("line {}: {l:?} is not an index", i + 1))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::new(mapping)
}

pub fn read_permutation(path: &Path) -> Result<Permutation> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_permutation(&text)
}

pub fn format_permutation(p: &Permutation) -> String {
    p.mapping().iter().map(|v| format!("{v}\n")).collect()
}

pub fn write_permutation(path: &Path, p: &Permutation) -> Result<()> {
    write_text(path, &format_permutation(p))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| io_err(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| io_err(path, e))
}
