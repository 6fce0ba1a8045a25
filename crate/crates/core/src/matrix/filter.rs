use super::{Csr, KernelError, PathMatrix};

/// The vertex-specific and constant {0,1} filter matrices.
///
/// `V` is how vertices are referenced: ids for kernels, names in expressions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FilterSpec<V = usize> {
    /// All ones in row `i`.
    Row(V),
    /// All ones in column `i`.
    Col(V),
    /// A single one at `(i, j)`.
    Entry(V, V),
    Identity,
    Ones,
    Zeros,
}

impl<V> FilterSpec<V> {
    pub fn try_map<W, E>(&self, mut f: impl FnMut(&V) -> Result<W, E>) -> Result<FilterSpec<W>, E> {
        Ok(match self {
            FilterSpec::Row(i) => FilterSpec::Row(f(i)?),
            FilterSpec::Col(i) => FilterSpec::Col(f(i)?),
            FilterSpec::Entry(i, j) => FilterSpec::Entry(f(i)?, f(j)?),
            FilterSpec::Identity => FilterSpec::Identity,
            FilterSpec::Ones => FilterSpec::Ones,
            FilterSpec::Zeros => FilterSpec::Zeros,
        })
    }
}

pub fn materialize_filter(f: &FilterSpec<usize>, n: usize) -> Result<PathMatrix, KernelError> {
    let check = |i: &usize| {
        if *i < n {
            Ok(*i)
        } else {
            Err(KernelError::IndexOutOfRange { index: *i, n })
        }
    };
    let f = f.try_map(check)?;
    Ok(match f {
        FilterSpec::Row(i) => PathMatrix::from_pairs(n, (0..n).map(|j| (i, j))),
        FilterSpec::Col(j) => PathMatrix::from_pairs(n, (0..n).map(|i| (i, j))),
        FilterSpec::Entry(i, j) => PathMatrix::from_pairs(n, [(i, j)]),
        FilterSpec::Identity => PathMatrix::identity(n),
        FilterSpec::Ones => PathMatrix::complement(Csr::empty(n)),
        FilterSpec::Zeros => PathMatrix::zeros(n),
    })
}
