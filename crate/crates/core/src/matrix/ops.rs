//! The eight primitive operations: traverse (product, transpose), filter
//! (Hadamard, not, clip, vertex functions), weight and merge.

use std::borrow::Cow;

use super::csr::{spgemm, Csr, CsrBuilder, Pattern, Weight};
use super::{complement_row, KernelError, PathMatrix, Repr, MAX_EXACT};

/// Real entries at or below this magnitude after a subtraction are treated as
/// zero.
pub const ZERO_TOLERANCE: f64 = 1e-12;

fn same_order(a: &PathMatrix, b: &PathMatrix) -> Result<usize, KernelError> {
    if a.n() == b.n() {
        Ok(a.n())
    } else {
        Err(KernelError::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        })
    }
}

fn ones_like<T: Weight>(p: &Pattern) -> Csr<T> {
    p.map(|_| T::ONE)
}

/// Sparse operand as reals; `None` for complements.
fn sparse_reals(m: &PathMatrix) -> Option<Cow<'_, Csr<f64>>> {
    match &m.repr {
        Repr::Counts(c) => Some(Cow::Owned(c.map(|v| v as f64))),
        Repr::Reals(r) => Some(Cow::Borrowed(r)),
        Repr::Complement(_) => None,
    }
}

/// Dense counts for a complement: every coordinate not in `p` holds 1.
fn complement_counts(p: &Pattern) -> Csr<u64> {
    let n = p.n;
    let mut b = CsrBuilder::with_capacity(n, n * n - p.nnz());
    for i in 0..n {
        for j in complement_row(n, p.row(i).0) {
            b.push(j, 1u64);
        }
        b.end_row();
    }
    b.finish()
}

/// Complements become explicit counts; sparse operands pass through.
fn densify(m: &PathMatrix) -> Cow<'_, PathMatrix> {
    match &m.repr {
        Repr::Complement(p) => Cow::Owned(PathMatrix::counts(complement_counts(p))),
        _ => Cow::Borrowed(m),
    }
}

/// Ordinary matrix product: entry `(i, j)` counts (or weighs) the composed
/// paths from `i` to `j`.
pub fn matmul(a: &PathMatrix, b: &PathMatrix) -> Result<PathMatrix, KernelError> {
    same_order(a, b)?;
    match (&a.repr, &b.repr) {
        (Repr::Counts(x), Repr::Counts(y)) => {
            spgemm(x, y).map(PathMatrix::counts).ok_or(KernelError::Overflow)
        }
        (Repr::Complement(p), Repr::Complement(q)) => Ok(complement_complement(p, q)),
        (Repr::Complement(p), Repr::Counts(y)) => complement_sparse(p, y).map(PathMatrix::counts),
        (Repr::Complement(p), Repr::Reals(y)) => complement_sparse(p, y).map(PathMatrix::reals),
        (Repr::Counts(x), Repr::Complement(q)) => sparse_complement(x, q).map(PathMatrix::counts),
        (Repr::Reals(x), Repr::Complement(q)) => sparse_complement(x, q).map(PathMatrix::reals),
        _ => {
            let (x, y) = (sparse_reals(a), sparse_reals(b));
            let (x, y) = (x.expect("sparse"), y.expect("sparse"));
            spgemm(&x, &y).map(PathMatrix::reals).ok_or(KernelError::Overflow)
        }
    }
}

/// `s - t` for nonnegative weights with `t <= s` up to rounding; `None` when
/// the difference is zero.
trait Difference: Weight {
    fn difference(s: Self, t: Self) -> Option<Self>;
}

impl Difference for u64 {
    fn difference(s: u64, t: u64) -> Option<u64> {
        s.checked_sub(t).filter(|&d| d > 0)
    }
}

impl Difference for f64 {
    fn difference(s: f64, t: f64) -> Option<f64> {
        let d = s - t;
        (d > ZERO_TOLERANCE).then_some(d)
    }
}

/// `A . (1 - Q) = A . 1 - A . Q`, where `A . 1` broadcasts row sums.
fn sparse_complement<T: Difference>(a: &Csr<T>, q: &Pattern) -> Result<Csr<T>, KernelError> {
    let n = a.n;
    let aq = spgemm(a, &ones_like::<T>(q)).ok_or(KernelError::Overflow)?;
    let mut b = CsrBuilder::new(n);
    for i in 0..n {
        let mut s = T::ZERO;
        for &v in a.row(i).1 {
            s = s.checked_add(v).ok_or(KernelError::Overflow)?;
        }
        if s != T::ZERO {
            let (cols, vals) = aq.row(i);
            let mut k = 0;
            for j in 0..n {
                let sub = if k < cols.len() && cols[k] == j {
                    k += 1;
                    vals[k - 1]
                } else {
                    T::ZERO
                };
                if let Some(d) = T::difference(s, sub) {
                    b.push(j, d);
                }
            }
        }
        b.end_row();
    }
    Ok(b.finish())
}

/// `(1 - P) . B = 1 . B - P . B`, where `1 . B` broadcasts column sums.
fn complement_sparse<T: Difference>(p: &Pattern, bm: &Csr<T>) -> Result<Csr<T>, KernelError> {
    let n = p.n;
    let pb = spgemm(&ones_like::<T>(p), bm).ok_or(KernelError::Overflow)?;
    let mut colsum = vec![T::ZERO; n];
    for (_, j, v) in bm.iter() {
        colsum[j] = colsum[j].checked_add(v).ok_or(KernelError::Overflow)?;
    }
    let support: Vec<usize> = (0..n).filter(|&j| colsum[j] != T::ZERO).collect();
    let mut b = CsrBuilder::new(n);
    for i in 0..n {
        let (cols, vals) = pb.row(i);
        let mut k = 0;
        for &j in &support {
            while k < cols.len() && cols[k] < j {
                k += 1;
            }
            let sub = if k < cols.len() && cols[k] == j {
                vals[k]
            } else {
                T::ZERO
            };
            if let Some(d) = T::difference(colsum[j], sub) {
                b.push(j, d);
            }
        }
        b.end_row();
    }
    Ok(b.finish())
}

/// `(1 - P)(1 - Q) = n - |P_i| - |Q^j| + (PQ)_ij`.
fn complement_complement(p: &Pattern, q: &Pattern) -> PathMatrix {
    let n = p.n;
    let pq = spgemm(&ones_like::<u64>(p), &ones_like::<u64>(q))
        .expect("pattern products are bounded by n");
    let qcols = q.col_counts();
    let mut b = CsrBuilder::new(n);
    for i in 0..n {
        let free = (n - p.row_len(i)) as i128;
        for j in 0..n {
            let v = free - qcols[j] as i128 + pq.get(i, j).unwrap_or(0) as i128;
            if v > 0 {
                b.push(j, v as u64);
            }
        }
        b.end_row();
    }
    PathMatrix::counts(b.finish())
}

/// Inverts path direction.
pub fn transpose(a: &PathMatrix) -> PathMatrix {
    match &a.repr {
        Repr::Counts(m) => PathMatrix::counts(m.transpose()),
        Repr::Reals(m) => PathMatrix::reals(m.transpose()),
        Repr::Complement(p) => PathMatrix::complement(p.transpose()),
    }
}

/// Entrywise product, the masking operation.
pub fn hadamard(a: &PathMatrix, b: &PathMatrix) -> Result<PathMatrix, KernelError> {
    same_order(a, b)?;
    fn mask<T: Weight>(m: &Csr<T>, p: &Pattern) -> Csr<T> {
        m.merge(p, |x, y| -> Result<_, ()> { Ok(if y.is_none() { x } else { None }) })
            .expect("infallible")
    }
    fn both<T: Weight>(x: &Csr<T>, y: &Csr<T>) -> Result<Csr<T>, KernelError> {
        x.merge(y, |l, r| match (l, r) {
            (Some(l), Some(r)) => l.checked_mul(r).map(Some).ok_or(KernelError::Overflow),
            _ => Ok(None),
        })
        .map(|m| drop_zeros(m))
    }
    Ok(match (&a.repr, &b.repr) {
        (Repr::Complement(p), Repr::Complement(q)) => PathMatrix::complement(
            p.merge(q, |_, _| -> Result<_, ()> { Ok(Some(())) })
                .expect("infallible"),
        ),
        (Repr::Counts(m), Repr::Complement(p)) | (Repr::Complement(p), Repr::Counts(m)) => {
            PathMatrix::counts(mask(m, p))
        }
        (Repr::Reals(m), Repr::Complement(p)) | (Repr::Complement(p), Repr::Reals(m)) => {
            PathMatrix::reals(mask(m, p))
        }
        (Repr::Counts(x), Repr::Counts(y)) => PathMatrix::counts(both(x, y)?),
        _ => {
            let (x, y) = (sparse_reals(a).expect("sparse"), sparse_reals(b).expect("sparse"));
            PathMatrix::reals(both(&x, &y)?)
        }
    })
}

fn drop_zeros<T: Weight>(m: Csr<T>) -> Csr<T> {
    if m.values.iter().all(|&v| v != T::ZERO) {
        return m;
    }
    let mut b = CsrBuilder::with_capacity(m.n, m.nnz());
    for i in 0..m.n {
        let (cols, vals) = m.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            if v != T::ZERO {
                b.push(j, v);
            }
        }
        b.end_row();
    }
    b.finish()
}

/// `n(A) = 1 - A`, defined only for {0,1} matrices.
pub fn not_(a: &PathMatrix) -> Result<PathMatrix, KernelError> {
    match &a.repr {
        Repr::Complement(p) => Ok(PathMatrix::counts(ones_like(p))),
        Repr::Counts(m) if a.is_boolean() => Ok(PathMatrix::complement(m.pattern())),
        Repr::Reals(m) if a.is_boolean() => Ok(PathMatrix::complement(m.pattern())),
        _ => Err(KernelError::NotBoolean),
    }
}

/// `c(Z)_ij = 1` iff `Z_ij > 0`.
pub fn clip(a: &PathMatrix) -> PathMatrix {
    match &a.repr {
        Repr::Counts(m) => PathMatrix::counts(m.map(|_| 1)),
        Repr::Reals(m) => PathMatrix::counts(m.map(|_| 1)),
        Repr::Complement(p) => PathMatrix::complement(p.clone()),
    }
}

/// Whether a row or column weight sum exceeds the threshold `p`.
fn exceeds(a: &PathMatrix, p: u64, by_row: bool) -> Vec<bool> {
    let n = a.n();
    match &a.repr {
        Repr::Counts(m) => {
            let mut sums = vec![0u128; n];
            for (i, j, v) in m.iter() {
                sums[if by_row { i } else { j }] += v as u128;
            }
            sums.into_iter().map(|s| s > p as u128).collect()
        }
        Repr::Reals(_) => {
            let sums = if by_row { a.row_sums() } else { a.col_sums() };
            sums.into_iter().map(|s| s > p as f64).collect()
        }
        Repr::Complement(pat) => {
            let missing: Vec<usize> = if by_row {
                (0..n).map(|i| pat.row_len(i)).collect()
            } else {
                pat.col_counts()
            };
            missing.into_iter().map(|c| (n - c) as u64 > p).collect()
        }
    }
}

/// Builds the {0,1} matrix whose row (or column) `k` is all ones iff
/// `selected[k]`, choosing whichever representation stores fewer entries.
fn full_lines(selected: &[bool], by_row: bool) -> PathMatrix {
    let n = selected.len();
    let k = selected.iter().filter(|&&s| s).count();
    let sparse = k <= n - k;
    let keep = |line: usize| selected[line] == sparse;
    let mut b: CsrBuilder<()> = CsrBuilder::new(n);
    for i in 0..n {
        if by_row {
            if keep(i) {
                (0..n).for_each(|j| b.push(j, ()));
            }
        } else {
            (0..n).filter(|&j| keep(j)).for_each(|j| b.push(j, ()));
        }
        b.end_row();
    }
    let pattern = b.finish();
    if sparse {
        PathMatrix::counts(ones_like(&pattern))
    } else {
        PathMatrix::complement(pattern)
    }
}

/// `v-(Z, p)`: row `i` becomes all ones iff its weight sum exceeds `p`.
pub fn vertex_out(a: &PathMatrix, p: u64) -> PathMatrix {
    full_lines(&exceeds(a, p, true), true)
}

/// `v+(Z, p)`: column `j` becomes all ones iff its weight sum exceeds `p`.
pub fn vertex_in(a: &PathMatrix, p: u64) -> PathMatrix {
    full_lines(&exceeds(a, p, false), false)
}

/// Weights every path by `lambda`.
pub fn scale(a: &PathMatrix, lambda: f64) -> Result<PathMatrix, KernelError> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(KernelError::InvalidScale(lambda));
    }
    let n = a.n();
    if lambda == 0.0 {
        return Ok(PathMatrix::zeros(n));
    }
    if lambda == 1.0 {
        return Ok(a.clone());
    }
    let a = densify(a);
    let integral = lambda.fract() == 0.0 && lambda <= MAX_EXACT;
    match &a.repr {
        Repr::Counts(m) if integral => {
            let k = lambda as u64;
            let mut out = m.clone();
            for v in &mut out.values {
                *v = v.checked_mul(k).ok_or(KernelError::Overflow)?;
            }
            Ok(PathMatrix::counts(out))
        }
        _ => {
            let mut out = sparse_reals(&a).expect("sparse").into_owned();
            for v in &mut out.values {
                *v *= lambda;
                if !v.is_finite() {
                    return Err(KernelError::Overflow);
                }
            }
            Ok(PathMatrix::reals(drop_zeros(out)))
        }
    }
}

/// Entrywise sum, merging two path matrices.
pub fn add(a: &PathMatrix, b: &PathMatrix) -> Result<PathMatrix, KernelError> {
    same_order(a, b)?;
    fn sum<T: Weight>(x: &Csr<T>, y: &Csr<T>) -> Result<Csr<T>, KernelError> {
        x.merge(y, |l, r| match (l, r) {
            (Some(l), Some(r)) => l.checked_add(r).map(Some).ok_or(KernelError::Overflow),
            (l, r) => Ok(l.or(r)),
        })
    }
    let (a, b) = (densify(a), densify(b));
    match (&a.repr, &b.repr) {
        (Repr::Counts(x), Repr::Counts(y)) => sum(x, y).map(PathMatrix::counts),
        _ => {
            let (x, y) = (sparse_reals(&a).expect("sparse"), sparse_reals(&b).expect("sparse"));
            sum(&x, &y).map(PathMatrix::reals)
        }
    }
}
