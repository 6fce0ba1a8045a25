//! Compressed sparse row storage shared by every path-matrix representation.

use std::fmt::Debug;

use rayon::prelude::*;

/// Entry values a CSR matrix can carry: exact path counts or real weights.
pub(crate) trait Weight: Copy + Send + Sync + PartialEq + Debug + 'static {
    const ONE: Self;
    const ZERO: Self;
    fn checked_add(self, other: Self) -> Option<Self>;
    fn checked_mul(self, other: Self) -> Option<Self>;
}

impl Weight for u64 {
    const ONE: Self = 1;
    const ZERO: Self = 0;
    fn checked_add(self, other: Self) -> Option<Self> {
        u64::checked_add(self, other)
    }
    fn checked_mul(self, other: Self) -> Option<Self> {
        u64::checked_mul(self, other)
    }
}

impl Weight for f64 {
    const ONE: Self = 1.0;
    const ZERO: Self = 0.0;
    fn checked_add(self, other: Self) -> Option<Self> {
        let v = self + other;
        v.is_finite().then_some(v)
    }
    fn checked_mul(self, other: Self) -> Option<Self> {
        let v = self * other;
        v.is_finite().then_some(v)
    }
}

/// Square CSR matrix. Column indices within a row are strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Csr<T> {
    pub n: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub values: Vec<T>,
}

/// A {0,1} sparsity pattern.
pub(crate) type Pattern = Csr<()>;

pub(crate) struct CsrBuilder<T> {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<T>,
}

impl<T> CsrBuilder<T> {
    pub fn new(n: usize) -> Self {
        Self::with_capacity(n, 0)
    }

    pub fn with_capacity(n: usize, nnz: usize) -> Self {
        let mut indptr = Vec::with_capacity(n + 1);
        indptr.push(0);
        Self {
            n,
            indptr,
            indices: Vec::with_capacity(nnz),
            values: Vec::with_capacity(nnz),
        }
    }

    /// Appends an entry to the current row; columns must be pushed in
    /// increasing order.
    pub fn push(&mut self, col: usize, value: T) {
        debug_assert!(col < self.n);
        self.indices.push(col);
        self.values.push(value);
    }

    pub fn end_row(&mut self) {
        self.indptr.push(self.indices.len());
    }

    pub fn finish(mut self) -> Csr<T> {
        while self.indptr.len() < self.n + 1 {
            self.indptr.push(self.indices.len());
        }
        Csr {
            n: self.n,
            indptr: self.indptr,
            indices: self.indices,
            values: self.values,
        }
    }
}

impl<T: Copy + Send + Sync> Csr<T> {
    pub fn empty(n: usize) -> Self {
        Csr {
            n,
            indptr: vec![0; n + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds from unsorted triplets; duplicate coordinates are folded with
    /// `combine`.
    pub fn from_triplets(
        n: usize,
        mut triplets: Vec<(usize, usize, T)>,
        mut combine: impl FnMut(T, T) -> T,
    ) -> Self {
        triplets.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut b = CsrBuilder::with_capacity(n, triplets.len());
        let mut row = 0;
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            while row < i {
                b.end_row();
                row += 1;
            }
            if last == Some((i, j)) {
                let slot = b.values.last_mut().expect("previous entry");
                *slot = combine(*slot, v);
            } else {
                b.push(j, v);
                last = Some((i, j));
            }
        }
        while row < n {
            b.end_row();
            row += 1;
        }
        b.finish()
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let (s, e) = (self.indptr[i], self.indptr[i + 1]);
        (&self.indices[s..e], &self.values[s..e])
    }

    pub fn row_len(&self, i: usize) -> usize {
        self.indptr[i + 1] - self.indptr[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<T> {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).ok().map(|k| vals[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn map<U>(&self, f: impl Fn(T) -> U) -> Csr<U> {
        Csr {
            n: self.n,
            indptr: self.indptr.clone(),
            indices: self.indices.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn pattern(&self) -> Pattern {
        self.map(|_| ())
    }

    /// Entries per column.
    pub fn col_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n];
        for &j in &self.indices {
            counts[j] += 1;
        }
        counts
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let counts = self.col_counts();
        let mut indptr = Vec::with_capacity(n + 1);
        indptr.push(0);
        for c in &counts {
            indptr.push(indptr.last().copied().unwrap_or(0) + c);
        }
        let mut next = indptr.clone();
        let mut indices = vec![0; self.nnz()];
        let mut values: Vec<Option<T>> = vec![None; self.nnz()];
        for i in 0..n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let slot = next[j];
                indices[slot] = i;
                values[slot] = Some(v);
                next[j] += 1;
            }
        }
        Csr {
            n,
            indptr,
            indices,
            values: values.into_iter().flatten().collect(),
        }
    }

    /// Row-wise merge of two matrices. `f` sees the value of each operand at
    /// every coordinate present in either and decides what to store.
    pub fn merge<U, V, E>(
        &self,
        other: &Csr<U>,
        mut f: impl FnMut(Option<T>, Option<U>) -> Result<Option<V>, E>,
    ) -> Result<Csr<V>, E>
    where
        U: Copy + Send + Sync,
    {
        let mut b = CsrBuilder::with_capacity(self.n, self.nnz().max(other.nnz()));
        for i in 0..self.n {
            let (ac, av) = self.row(i);
            let (bc, bv) = other.row(i);
            let (mut x, mut y) = (0, 0);
            while x < ac.len() || y < bc.len() {
                let (col, l, r) = match (ac.get(x), bc.get(y)) {
                    (Some(&ca), Some(&cb)) if ca == cb => {
                        x += 1;
                        y += 1;
                        (ca, Some(av[x - 1]), Some(bv[y - 1]))
                    }
                    (Some(&ca), Some(&cb)) if ca < cb => {
                        x += 1;
                        (ca, Some(av[x - 1]), None)
                    }
                    (Some(_), Some(&cb)) => {
                        y += 1;
                        (cb, None, Some(bv[y - 1]))
                    }
                    (Some(&ca), None) => {
                        x += 1;
                        (ca, Some(av[x - 1]), None)
                    }
                    (None, Some(&cb)) => {
                        y += 1;
                        (cb, None, Some(bv[y - 1]))
                    }
                    (None, None) => unreachable!(),
                };
                if let Some(v) = f(l, r)? {
                    b.push(col, v);
                }
            }
            b.end_row();
        }
        Ok(b.finish())
    }
}

/// Rows per parallel work unit in the product kernels.
const ROW_CHUNK: usize = 512;

/// Sparse matrix product. `None` signals arithmetic overflow.
pub(crate) fn spgemm<T: Weight>(a: &Csr<T>, b: &Csr<T>) -> Option<Csr<T>> {
    let n = a.n;
    let chunks: Vec<Option<(Vec<usize>, Vec<usize>, Vec<T>)>> = (0..n)
        .into_par_iter()
        .step_by(ROW_CHUNK)
        .map(|start| {
            let end = (start + ROW_CHUNK).min(n);
            let mut acc: Vec<T> = vec![T::ZERO; n];
            let mut seen = vec![false; n];
            let mut touched: Vec<usize> = Vec::new();
            let mut lens = Vec::with_capacity(end - start);
            let mut indices = Vec::new();
            let mut values = Vec::new();
            for i in start..end {
                let (acols, avals) = a.row(i);
                for (&k, &av) in acols.iter().zip(avals) {
                    let (bcols, bvals) = b.row(k);
                    for (&j, &bv) in bcols.iter().zip(bvals) {
                        let prod = av.checked_mul(bv)?;
                        if !seen[j] {
                            seen[j] = true;
                            touched.push(j);
                            acc[j] = prod;
                        } else {
                            acc[j] = acc[j].checked_add(prod)?;
                        }
                    }
                }
                touched.sort_unstable();
                for &j in &touched {
                    if acc[j] != T::ZERO {
                        indices.push(j);
                        values.push(acc[j]);
                    }
                    seen[j] = false;
                }
                touched.clear();
                lens.push(indices.len());
            }
            Some((lens, indices, values))
        })
        .collect();

    let mut indptr = Vec::with_capacity(n + 1);
    indptr.push(0);
    let mut indices = Vec::new();
    let mut values = Vec::new();
    for chunk in chunks {
        let (ends, idx, vals) = chunk?;
        let base = indices.len();
        indptr.extend(ends.iter().map(|e| base + e));
        indices.extend(idx);
        values.extend(vals);
    }
    Some(Csr {
        n,
        indptr,
        indices,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(m: &Csr<u64>) -> Vec<Vec<u64>> {
        let mut d = vec![vec![0; m.n]; m.n];
        for (i, j, v) in m.iter() {
            d[i][j] = v;
        }
        d
    }

    #[test]
    fn triplets_sum_duplicates() {
        let m = Csr::from_triplets(3, vec![(2, 0, 1u64), (0, 1, 2), (2, 0, 3)], |a, b| a + b);
        assert_eq!(dense(&m), vec![vec![0, 2, 0], vec![0, 0, 0], vec![4, 0, 0]]);
    }

    #[test]
    fn transpose_and_product_match_dense() {
        let a = Csr::from_triplets(3, vec![(0, 1, 1u64), (1, 2, 2), (2, 0, 1), (0, 2, 1)], |a, _| a);
        let t = a.transpose();
        assert_eq!(dense(&t), vec![vec![0, 0, 1], vec![1, 0, 0], vec![1, 2, 0]]);
        let p = spgemm(&a, &a).unwrap();
        // brute force
        let d = dense(&a);
        let mut want = vec![vec![0u64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    want[i][j] += d[i][k] * d[k][j];
                }
            }
        }
        assert_eq!(dense(&p), want);
    }

    #[test]
    fn product_overflow_is_detected() {
        let a = Csr::from_triplets(2, vec![(0, 0, u64::MAX), (0, 1, 2)], |a, _| a);
        assert!(spgemm(&a, &a).is_none());
    }

    #[test]
    fn large_product_spans_chunks() {
        let n = ROW_CHUNK * 2 + 7;
        let trip: Vec<_> = (0..n).map(|i| (i, (i * 7 + 3) % n, 1u64)).collect();
        let a = Csr::from_triplets(n, trip, |a, _| a);
        let p = spgemm(&a, &a).unwrap();
        assert_eq!(p.nnz(), n);
        for i in 0..n {
            let mid = (i * 7 + 3) % n;
            assert_eq!(p.get(i, (mid * 7 + 3) % n), Some(1));
        }
    }
}
