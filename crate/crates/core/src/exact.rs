//! Exact rational linear algebra.
//!
//! Every elimination here is fraction-free: rational input rows are scaled to
//! primitive integer rows and pivoting only ever forms integer combinations
//! `a * row - b * pivot` followed by division by the row content. This keeps
//! entry growth bounded by the size of the minors involved instead of letting
//! denominators compound.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number. Always stored in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand constructor for integers.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, ExactError> {
        if entries.len() != rows * cols {
            return Err(ExactError::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(QMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed to type the empty case.
    pub fn from_rows(cols: usize, rows: &[Vec<Rational>]) -> Result<Self, ExactError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(ExactError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            entries.extend(r.iter().cloned());
        }
        Ok(QMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| primitive_dense(self.row(r)))
            .collect()
    }
}

/// Scales a rational vector to a primitive integer vector (content 1, first
/// nonzero entry positive). The zero vector maps to zeros.
fn primitive_dense(v: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    normalize_dense(&mut out);
    out
}

fn normalize_dense(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
    }
    if g.is_zero() {
        return;
    }
    let neg = v
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative());
    if neg {
        g = -g;
    }
    if !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Fraction-free Gauss-Jordan reduction of integer rows. Returns the nonzero
/// reduced rows and their pivot columns. Each pivot column is zero in every
/// other returned row.
fn gauss_jordan(mut rows: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let pv = pivot_row[c].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c].is_zero() {
                continue;
            }
            let g = pv.gcd(&row[c]);
            let a = &pv / &g;
            let b = &row[c] / &g;
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &a * &*x - &b * y;
            }
            normalize_dense(row);
        }
        pivots.push(c);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    (rows, pivots)
}

/// Exact rank over the rationals.
pub fn rank(m: &QMatrix) -> usize {
    let mut e = SparseEchelon::new();
    for r in 0..m.rows() {
        e.insert_dense(m.row(r));
    }
    e.rank()
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn nullspace(m: &QMatrix) -> Vec<Vec<Rational>> {
    let (rows, pivots) = gauss_jordan(m.integer_rows(), m.cols());
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; m.cols()];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut x = vec![Rational::zero(); m.cols()];
        x[free] = Rational::one();
        for (row, &pc) in rows.iter().zip(&pivots) {
            if !row[free].is_zero() {
                x[pc] = -Rational::new(row[free].clone(), row[pc].clone());
            }
        }
        basis.push(x);
    }
    basis
}

/// Outcome of solving `m x = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    /// Consistent, with a kernel of the given dimension; `particular` is one
    /// solution.
    Underdetermined {
        particular: Vec<Rational>,
        kernel_dim: usize,
    },
    Inconsistent,
}

pub fn solve(m: &QMatrix, rhs: &[Rational]) -> Result<Solution, ExactError> {
    if rhs.len() != m.rows() {
        return Err(ExactError::DimensionMismatch {
            expected: m.rows(),
            found: rhs.len(),
        });
    }
    let cols = m.cols();
    let augmented: Vec<Vec<Rational>> = (0..m.rows())
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let int_rows = augmented.iter().map(|r| primitive_dense(r)).collect();
    let (rows, pivots) = gauss_jordan(int_rows, cols + 1);
    if pivots.last() == Some(&cols) {
        return Ok(Solution::Inconsistent);
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &pc) in rows.iter().zip(&pivots) {
        x[pc] = Rational::new(row[cols].clone(), row[pc].clone());
    }
    let kernel_dim = cols - pivots.len();
    if kernel_dim == 0 {
        Ok(Solution::Unique(x))
    } else {
        Ok(Solution::Underdetermined {
            particular: x,
            kernel_dim,
        })
    }
}

/// Decides whether `target` lies in the span of `vectors`; when it does, the
/// returned coefficients satisfy `sum c_i v_i = target` exactly.
pub fn in_span(
    vectors: &[Vec<Rational>],
    target: &[Rational],
) -> Result<Option<Vec<Rational>>, ExactError> {
    let len = target.len();
    for v in vectors {
        if v.len() != len {
            return Err(ExactError::DimensionMismatch {
                expected: len,
                found: v.len(),
            });
        }
    }
    // Columns of the system are the generators.
    let m = QMatrix::from_rows(
        vectors.len(),
        &(0..len)
            .map(|i| vectors.iter().map(|v| v[i].clone()).collect())
            .collect::<Vec<_>>(),
    )?;
    Ok(match solve(&m, target)? {
        Solution::Unique(c) => Some(c),
        Solution::Underdetermined { particular, .. } => Some(particular),
        Solution::Inconsistent => None,
    })
}

/// `ambient_dim - rank(subspace)`.
pub fn quotient_dim(ambient_dim: usize, subspace: &[Vec<Rational>]) -> Result<usize, ExactError> {
    let mut e = SparseEchelon::new();
    for v in subspace {
        if v.len() != ambient_dim {
            return Err(ExactError::DimensionMismatch {
                expected: ambient_dim,
                found: v.len(),
            });
        }
        e.insert_dense(v);
    }
    Ok(ambient_dim - e.rank())
}

/// Sparse integer row, sorted by column, primitive with positive leading entry.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Converts `(column, rational)` pairs into a primitive sparse integer row.
pub fn sparse_from_rationals(mut entries: Vec<(usize, Rational)>) -> SparseRow {
    entries.retain(|(_, v)| !v.is_zero());
    entries.sort_by_key(|(c, _)| *c);
    let mut lcm = BigInt::one();
    for (_, x) in &entries {
        lcm = lcm.lcm(x.denom());
    }
    let mut row: SparseRow = entries
        .into_iter()
        .map(|(c, x)| (c, x.numer() * (&lcm / x.denom())))
        .collect();
    normalize_sparse(&mut row);
    row
}

fn normalize_sparse(row: &mut SparseRow) {
    let Some(first) = row.first() else { return };
    let mut g = BigInt::zero();
    for (_, x) in row.iter() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if first.1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// `a * row - b * pivot`, dropping cancelled entries.
fn combine(row: &SparseRow, a: &BigInt, pivot: &SparseRow, b: &BigInt) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push((row[i].0, a * &row[i].1));
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, -(b * &pivot[j].1)));
            j += 1;
        } else {
            let v = a * &row[i].1 - b * &pivot[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incrementally built row echelon form over the integers.
///
/// Each stored row has a distinct pivot, its lowest nonzero column. A vector in
/// the span therefore has as lowest nonzero column the smallest pivot among the
/// rows it uses, which is what lets callers read off leading-form spaces of a
/// filtered span when columns are ordered by filtration degree.
#[derive(Debug, Clone, Default)]
pub struct SparseEchelon {
    rows: Vec<SparseRow>,
    pivot_row: HashMap<usize, usize>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    /// Reduces `row` against the stored pivots until its leading column is
    /// free; returns the (possibly empty) remainder.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        while let Some((lead, lv)) = row.first().cloned() {
            let Some(&pi) = self.pivot_row.get(&lead) else {
                break;
            };
            let pivot = &self.rows[pi];
            let pv = &pivot[0].1;
            let g = pv.gcd(&lv);
            row = combine(&row, &(pv / &g), pivot, &(&lv / &g));
            normalize_sparse(&mut row);
        }
        row
    }

    /// Inserts a row; returns true when it was independent of the current span.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        match row.first() {
            None => false,
            Some((lead, _)) => {
                self.pivot_row.insert(*lead, self.rows.len());
                self.rows.push(row);
                true
            }
        }
    }

    pub fn insert_dense(&mut self, v: &[Rational]) -> bool {
        let entries = v.iter().cloned().enumerate().collect();
        self.insert(sparse_from_rationals(entries))
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> QMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let rs: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        QMatrix::from_rows(cols, &rs).unwrap()
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&QMatrix::identity(3)), 3);
        assert_eq!(rank(&QMatrix::zeros(2, 2)), 0);
        assert_eq!(rank(&q(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn in_span_examples() {
        let c = in_span(&[v(&[1, 0])], &v(&[0, 0])).unwrap().unwrap();
        assert_eq!(c, v(&[0]));
        assert!(in_span(&[v(&[1, 0])], &v(&[0, 1])).unwrap().is_none());
        let c = in_span(&[v(&[1, 1]), v(&[1, -1])], &v(&[2, 0]))
            .unwrap()
            .unwrap();
        assert_eq!(c, v(&[1, 1]));
        assert!(matches!(
            in_span(&[v(&[1, 0, 0])], &v(&[1, 0])),
            Err(ExactError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn quotient_dim_examples() {
        assert_eq!(quotient_dim(3, &[]).unwrap(), 3);
        assert_eq!(
            quotient_dim(3, &[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap(),
            0
        );
        assert_eq!(quotient_dim(2, &[v(&[1, 1])]).unwrap(), 1);
        assert!(quotient_dim(2, &[v(&[1])]).is_err());
    }

    #[test]
    fn solve_cases() {
        let m = q(&[&[1, 1], &[1, -1]]);
        assert_eq!(
            solve(&m, &v(&[2, 0])).unwrap(),
            Solution::Unique(v(&[1, 1]))
        );
        let m = q(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&m, &v(&[1, 3])).unwrap(), Solution::Inconsistent);
        assert!(matches!(
            solve(&m, &v(&[1, 2])).unwrap(),
            Solution::Underdetermined { kernel_dim: 1, .. }
        ));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = q(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 2);
        for x in &ns {
            for r in 0..m.rows() {
                let s: Rational = m.row(r).iter().zip(x).map(|(a, b)| a * b).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn echelon_leading_column_is_minimal_pivot() {
        let mut e = SparseEchelon::new();
        e.insert_dense(&v(&[0, 1, 1]));
        e.insert_dense(&v(&[1, 1, 0]));
        e.insert_dense(&v(&[1, 2, 1]));
        assert_eq!(e.rank(), 2);
        let mut piv: Vec<usize> = e.pivots().collect();
        piv.sort();
        assert_eq!(piv, vec![0, 1]);
        assert!(e.contains(sparse_from_rationals(vec![
            (0, rat(1, 2)),
            (1, int(1)),
            (2, rat(1, 2))
        ])));
    }
}
