//! Dense row-major matrices and row permutations.
//!
//! Indices are 0-based throughout. A permutation `p` acts on a matrix the way
//! a permutation matrix `Π` acts from the left: row `i` of `A` becomes row
//! `p[i]` of `ΠA`. With 1-based indices this is the usual convention
//! `Π_{π(i), i} = 1`, shifted down by one.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SeriationError};

/// Absolute tolerance for equality of reals in invariant checks.
pub const EPS: f64 = 1e-9;

/// Relative factor for comparing sums of squared errors between candidate fits.
pub const SSE_RTOL: f64 = 1e-12;

/// `a <= b` up to the relative SSE tolerance `SSE_RTOL * (1 + b)`.
pub fn sse_le(a: f64, b: f64) -> bool {
    a <= b + SSE_RTOL * (1.0 + b.abs())
}

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.n_rows, self.n_cols)?;
        for row in self.rows() {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    /// Builds a matrix from row-major data. Rejects empty shapes, length
    /// mismatches and non-finite entries.
    pub fn from_vec(n_rows: usize, n_cols: usize, data: Vec<f64>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(SeriationError::InvalidMatrix(format!(
                "shape {n_rows}x{n_cols} has no entries"
            )));
        }
        if data.len() != n_rows * n_cols {
            return Err(SeriationError::dims(
                format!("{} entries for {n_rows}x{n_cols}", n_rows * n_cols),
                format!("{} entries", data.len()),
            ));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(SeriationError::InvalidMatrix(format!(
                "non-finite entry {} at ({}, {})",
                data[pos],
                pos / n_cols,
                pos % n_cols
            )));
        }
        Ok(Matrix {
            n_rows,
            n_cols,
            data,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n_cols {
                return Err(SeriationError::InvalidMatrix(format!(
                    "ragged rows: row 0 has {n_cols} entries, row {i} has {}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Matrix::from_vec(n_rows, n_cols, data)
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        assert!(n_rows > 0 && n_cols > 0, "matrix shape must be positive");
        Matrix {
            n_rows,
            n_cols,
            data: vec![0.0; n_rows * n_cols],
        }
    }

    /// Builds a matrix entry by entry. Panics if `f` yields a non-finite value.
    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                data.push(f(i, j));
            }
        }
        Matrix::from_vec(n_rows, n_cols, data).expect("from_fn produced an invalid matrix")
    }

    /// Internal constructor for data produced by our own finite arithmetic.
    pub(crate) fn from_parts_unchecked(n_rows: usize, n_cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n_rows * n_cols);
        debug_assert!(data.iter().all(|v| v.is_finite()));
        Matrix {
            n_rows,
            n_cols,
            data,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n_cols)
    }

    /// Strided view of column `j`.
    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.data[j..].iter().step_by(self.n_cols).copied()
    }

    pub fn column_vec(&self, j: usize) -> Vec<f64> {
        self.column(j).collect()
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).iter().sum()
    }

    /// Entrywise sum. Both operands are finite but the sum may overflow, so
    /// the result is validated.
    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Matrix::from_vec(self.n_rows, self.n_cols, data)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Matrix::from_vec(self.n_rows, self.n_cols, data)
    }

    pub(crate) fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(SeriationError::dims(
                format!("{}x{}", self.n_rows, self.n_cols),
                format!("{}x{}", other.n_rows, other.n_cols),
            ));
        }
        Ok(())
    }

    /// First `(row, col)` where column `col` decreases by more than `slack`
    /// from `row` to `row + 1`.
    pub fn first_monotone_violation(&self, slack: f64) -> Option<(usize, usize)> {
        for i in 0..self.n_rows.saturating_sub(1) {
            let (cur, next) = (self.row(i), self.row(i + 1));
            if let Some(j) = cur.iter().zip(next).position(|(a, b)| *a > *b + slack) {
                return Some((i, j));
            }
        }
        None
    }

    pub fn is_column_monotone(&self, slack: f64) -> bool {
        self.first_monotone_violation(slack).is_none()
    }

    pub fn ensure_column_monotone(&self, slack: f64) -> Result<()> {
        match self.first_monotone_violation(slack) {
            None => Ok(()),
            Some((row, col)) => Err(SeriationError::NotMonotone { col, row }),
        }
    }
}

/// A bijection of `{0, …, n-1}`; `mapping[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.mapping)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = SeriationError;

    fn try_from(mapping: Vec<usize>) -> Result<Self> {
        Permutation::new(mapping)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.mapping
    }
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        if n == 0 {
            return Err(SeriationError::InvalidPermutation("empty mapping".into()));
        }
        let mut seen = vec![false; n];
        for &v in &mapping {
            if v >= n {
                return Err(SeriationError::InvalidPermutation(format!(
                    "image {v} out of range for length {n}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(SeriationError::InvalidPermutation(format!(
                    "image {v} appears more than once"
                )));
            }
        }
        Ok(Permutation { mapping })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "permutation length must be positive");
        Permutation {
            mapping: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn apply_index(&self, i: usize) -> usize {
        self.mapping[i]
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.mapping.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { mapping: inv }
    }

    /// `self ∘ other`, so that `permute_rows(p.compose(q), A) ==
    /// permute_rows(p, permute_rows(q, A))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(SeriationError::dims(
                format!("permutation of length {}", self.len()),
                format!("length {}", other.len()),
            ));
        }
        Ok(Permutation {
            mapping: other.mapping.iter().map(|&i| self.mapping[i]).collect(),
        })
    }

    /// Lexicographic successor of the mapping, or `None` at the last one.
    pub fn next_lexicographic(&self) -> Option<Permutation> {
        let mut m = self.mapping.clone();
        let n = m.len();
        let i = (0..n.saturating_sub(1)).rev().find(|&i| m[i] < m[i + 1])?;
        let j = (i + 1..n).rev().find(|&j| m[j] > m[i]).expect("successor exists");
        m.swap(i, j);
        m[i + 1..].reverse();
        Some(Permutation { mapping: m })
    }
}

/// Row `i` of `a` becomes row `p[i]` of the result.
pub fn permute_rows(p: &Permutation, a: &Matrix) -> Result<Matrix> {
    if p.len() != a.n_rows() {
        return Err(SeriationError::dims(
            format!("permutation of length {}", a.n_rows()),
            format!("length {}", p.len()),
        ));
    }
    let m = a.n_cols();
    let mut data = vec![0.0; a.as_slice().len()];
    for (i, row) in a.rows().enumerate() {
        let dst = p.apply_index(i);
        data[dst * m..(dst + 1) * m].copy_from_slice(row);
    }
    Ok(Matrix::from_parts_unchecked(a.n_rows(), m, data))
}

/// Squared Frobenius distance `‖a − b‖²_F`.
///
/// Per-row partial sums are added in sorted order, so the value is
/// bit-for-bit invariant under applying the same row permutation to both
/// operands.
pub fn frobenius_sq_dist(a: &Matrix, b: &Matrix) -> Result<f64> {
    a.check_same_shape(b)?;
    let mut per_row: Vec<f64> = a
        .rows()
        .zip(b.rows())
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y) * (x - y)).sum())
        .collect();
    per_row.sort_unstable_by(f64::total_cmp);
    Ok(per_row.iter().sum())
}
