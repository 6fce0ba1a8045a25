//! Path matrices, filter matrices and the primitive operations of the path
//! algebra.
//!
//! A [`PathMatrix`] is an `n x n` matrix over the nonnegative reals. It is
//! stored either sparsely (exact `u64` path counts, or real weights once a
//! non-integral scale has been applied) or as the complement of a sparse
//! {0,1} pattern, which keeps `not(..)` and `ONES` from densifying.

mod csr;
mod filter;
mod ops;

use std::fmt;

use thiserror::Error;

pub use filter::{materialize_filter, FilterSpec};
pub use ops::{
    add, clip, hadamard, matmul, not_, scale, transpose, vertex_in, vertex_out, ZERO_TOLERANCE,
};

pub(crate) use csr::{Csr, Pattern};

use crate::store::VertexDictionary;
use crate::util::format_g12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("not requires a {{0,1}} matrix; apply clip first")]
    NotBoolean,
    #[error("scale factor must be finite and nonnegative, got {0}")]
    InvalidScale(f64),
    #[error("vertex index {index} out of range for order {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("path count overflow")]
    Overflow,
    #[error("invalid entry ({row}, {col}) = {value}: entries must be finite and nonnegative")]
    InvalidEntry { row: usize, col: usize, value: f64 },
}

#[derive(Debug, Clone)]
pub(crate) enum Repr {
    Counts(Csr<u64>),
    Reals(Csr<f64>),
    /// All ones except at the stored pattern.
    Complement(Pattern),
}

/// Which of the two storage forms a matrix uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    Sparse,
    BoolComplement,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::Sparse => f.write_str("sparse"),
            Representation::BoolComplement => f.write_str("complement"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PathMatrix {
    pub(crate) repr: Repr,
}

impl PathMatrix {
    pub(crate) fn counts(m: Csr<u64>) -> Self {
        PathMatrix {
            repr: Repr::Counts(m),
        }
    }

    pub(crate) fn reals(m: Csr<f64>) -> Self {
        PathMatrix {
            repr: Repr::Reals(m),
        }
    }

    pub(crate) fn complement(p: Pattern) -> Self {
        PathMatrix {
            repr: Repr::Complement(p),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::counts(Csr::empty(n))
    }

    pub fn ones(n: usize) -> Self {
        Self::complement(Csr::empty(n))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_pairs(n, (0..n).map(|i| (i, i)))
    }

    /// A {0,1} matrix with ones at the given coordinates.
    ///
    /// # Panics
    /// If a coordinate is out of range.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let trip: Vec<_> = pairs
            .into_iter()
            .map(|(i, j)| {
                assert!(i < n && j < n, "({i}, {j}) out of range for order {n}");
                (i, j, 1u64)
            })
            .collect();
        Self::counts(Csr::from_triplets(n, trip, |a, _| a))
    }

    /// Builds a matrix from weighted entries. Duplicates are summed and zero
    /// entries dropped. Integral weights are kept as exact counts.
    pub fn from_entries(
        n: usize,
        entries: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, KernelError> {
        let mut trip = Vec::new();
        for (i, j, v) in entries {
            if i >= n || j >= n {
                return Err(KernelError::IndexOutOfRange { index: i.max(j), n });
            }
            if !v.is_finite() || v < 0.0 {
                return Err(KernelError::InvalidEntry {
                    row: i,
                    col: j,
                    value: v,
                });
            }
            if v > 0.0 {
                trip.push((i, j, v));
            }
        }
        let m = Csr::from_triplets(n, trip, |a, b| a + b);
        if m.values.iter().all(|v| v.fract() == 0.0 && *v <= MAX_EXACT) {
            Ok(Self::counts(m.map(|v| v as u64)))
        } else {
            Ok(Self::reals(m))
        }
    }

    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self, KernelError> {
        let n = rows.len();
        let mut entries = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(KernelError::DimensionMismatch {
                    left: n,
                    right: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                entries.push((i, j, v));
            }
        }
        Self::from_entries(n, entries)
    }

    pub fn n(&self) -> usize {
        match &self.repr {
            Repr::Counts(m) => m.n,
            Repr::Reals(m) => m.n,
            Repr::Complement(p) => p.n,
        }
    }

    pub fn representation(&self) -> Representation {
        match self.repr {
            Repr::Complement(_) => Representation::BoolComplement,
            _ => Representation::Sparse,
        }
    }

    /// Number of nonzero entries of the matrix.
    pub fn nnz(&self) -> usize {
        match &self.repr {
            Repr::Counts(m) => m.nnz(),
            Repr::Reals(m) => m.nnz(),
            Repr::Complement(p) => self.n() * self.n() - p.nnz(),
        }
    }

    /// Number of coordinates actually held in memory.
    pub fn stored_len(&self) -> usize {
        match &self.repr {
            Repr::Counts(m) => m.nnz(),
            Repr::Reals(m) => m.nnz(),
            Repr::Complement(p) => p.nnz(),
        }
    }

    /// True when every entry is 0 or 1.
    pub fn is_boolean(&self) -> bool {
        match &self.repr {
            Repr::Counts(m) => m.values.iter().all(|&v| v == 1),
            Repr::Reals(m) => m.values.iter().all(|&v| v == 1.0),
            Repr::Complement(_) => true,
        }
    }

    /// True when entries are held as exact integer counts.
    pub fn is_exact(&self) -> bool {
        !matches!(self.repr, Repr::Reals(_))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match &self.repr {
            Repr::Counts(m) => m.get(i, j).map_or(0.0, |v| v as f64),
            Repr::Reals(m) => m.get(i, j).unwrap_or(0.0),
            Repr::Complement(p) => {
                if p.get(i, j).is_some() {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// Nonzero entries of row `i` as `(column, value)`, by increasing column.
    pub fn row(&self, i: usize) -> Vec<(usize, f64)> {
        match &self.repr {
            Repr::Counts(m) => {
                let (c, v) = m.row(i);
                c.iter().zip(v).map(|(&j, &v)| (j, v as f64)).collect()
            }
            Repr::Reals(m) => {
                let (c, v) = m.row(i);
                c.iter().copied().zip(v.iter().copied()).collect()
            }
            Repr::Complement(p) => {
                let (cols, _) = p.row(i);
                complement_row(p.n, cols).map(|j| (j, 1.0)).collect()
            }
        }
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> Entries<'_> {
        Entries {
            m: self,
            row: 0,
            buf: Vec::new().into_iter(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut d = vec![vec![0.0; n]; n];
        for (i, j, v) in self.entries() {
            d[i][j] = v;
        }
        d
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let n = self.n();
        match &self.repr {
            Repr::Counts(m) => (0..n)
                .map(|i| m.row(i).1.iter().map(|&v| v as f64).sum())
                .collect(),
            Repr::Reals(m) => (0..n).map(|i| m.row(i).1.iter().sum()).collect(),
            Repr::Complement(p) => (0..n).map(|i| (n - p.row_len(i)) as f64).collect(),
        }
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let n = self.n();
        let mut sums = vec![0.0; n];
        match &self.repr {
            Repr::Counts(m) => m.iter().for_each(|(_, j, v)| sums[j] += v as f64),
            Repr::Reals(m) => m.iter().for_each(|(_, j, v)| sums[j] += v),
            Repr::Complement(p) => {
                let counts = p.col_counts();
                for (s, c) in sums.iter_mut().zip(counts) {
                    *s = (n - c) as f64;
                }
            }
        }
        sums
    }

    /// Largest absolute entrywise difference. Materializes complements, so
    /// intended for small orders.
    pub fn max_abs_diff(&self, other: &PathMatrix) -> f64 {
        let (a, b) = (self.to_dense(), other.to_dense());
        if a.len() != b.len() {
            return f64::INFINITY;
        }
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// Entrywise comparison with a tolerance relative to `max(1, |x|, |y|)`.
    pub fn approx_eq(&self, other: &PathMatrix, tol: f64) -> bool {
        if self.n() != other.n() {
            return false;
        }
        if let (Repr::Complement(p), Repr::Complement(q)) = (&self.repr, &other.repr) {
            return p == q;
        }
        let (a, b) = (self.to_dense(), other.to_dense());
        a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| {
            let scale = 1f64.max(x.abs()).max(y.abs());
            (x - y).abs() <= tol * scale
        })
    }

    /// Renders nonzero entries as `tail<TAB>head<TAB>weight` lines in
    /// row-major order, resolving ids through `dict`.
    pub fn to_tsv(&self, dict: &VertexDictionary) -> String {
        let mut out = String::new();
        let exact = self.is_exact();
        for (i, j, v) in self.entries() {
            let t = dict.name(i).unwrap_or("?");
            let h = dict.name(j).unwrap_or("?");
            let w = if exact {
                format!("{}", v as u64)
            } else {
                format_g12(v)
            };
            out.push_str(&format!("{t}\t{h}\t{w}\n"));
        }
        out
    }
}

/// Largest integer magnitude stored exactly in an `f64`.
pub(crate) const MAX_EXACT: f64 = 9_007_199_254_740_992.0;

pub(crate) fn complement_row(n: usize, excluded: &[usize]) -> impl Iterator<Item = usize> + '_ {
    let mut k = 0;
    (0..n).filter(move |&j| {
        while k < excluded.len() && excluded[k] < j {
            k += 1;
        }
        !(k < excluded.len() && excluded[k] == j)
    })
}

pub struct Entries<'a> {
    m: &'a PathMatrix,
    row: usize,
    buf: std::vec::IntoIter<(usize, f64)>,
}

impl Iterator for Entries<'_> {
    type Item = (usize, usize, f64);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some((j, v)) = self.buf.next() {
                return Some((self.row - 1, j, v));
            }
            if self.row >= self.m.n() {
                return None;
            }
            self.buf = self.m.row(self.row).into_iter();
            self.row += 1;
        }
    }
}

/// Exact equality of the denoted matrices, independent of representation.
impl PartialEq for PathMatrix {
    fn eq(&self, other: &Self) -> bool {
        if self.n() != other.n() {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Complement(p), Repr::Complement(q)) => p == q,
            (Repr::Complement(p), _) => sparse_equals_complement(other, p),
            (_, Repr::Complement(q)) => sparse_equals_complement(self, q),
            _ => {
                self.nnz() == other.nnz()
                    && (0..self.n()).all(|i| self.row(i) == other.row(i))
            }
        }
    }
}

fn sparse_equals_complement(sparse: &PathMatrix, p: &Pattern) -> bool {
    let n = p.n;
    if !sparse.is_boolean() || sparse.nnz() + p.nnz() != n * n {
        return false;
    }
    // disjoint supports with sizes summing to n^2 cover every coordinate once
    (0..n).all(|i| {
        let (excluded, _) = p.row(i);
        sparse
            .row(i)
            .iter()
            .all(|(j, _)| excluded.binary_search(j).is_err())
    })
}

impl fmt::Display for PathMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|&v| format_g12(v)).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}
