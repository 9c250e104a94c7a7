//! Dense arbitrary-precision integer matrices.
//!
//! `IntMatrix` carries every boundary map and every Smith normal form factor
//! in the crate. All rank and determinant computations are fraction-free
//! (Bareiss elimination), so intermediate values stay integral and exact.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("entry list has {got} elements, expected {rows}x{cols}={expected}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("dimension mismatch: cannot multiply {lr}x{lc} by {rr}x{rc}")]
    MulShape {
        lr: usize,
        lc: usize,
        rr: usize,
        rc: usize,
    },
    #[error("matrix is {rows}x{cols}, operation requires a square matrix")]
    NotSquare { rows: usize, cols: usize },
}

/// A dense row-major matrix over the integers.
///
/// Empty shapes (`rows == 0` or `cols == 0`) are permitted and behave as the
/// zero map of rank 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::ShapeMismatch {
                rows,
                cols,
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from machine-integer rows; handy in tests and builders.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(
            rows.iter().all(|row| row.len() == c),
            "ragged row lengths"
        );
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        Self {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows)
            .all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::MulShape {
                lr: self.rows,
                lc: self.cols,
                rr: other.rows,
                rc: other.cols,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Extracts the submatrix given by `row_idx` x `col_idx` (indices need
    /// not be contiguous).
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        let mut out = Self::zeros(row_idx.len(), col_idx.len());
        for (i, &r) in row_idx.iter().enumerate() {
            for (j, &c) in col_idx.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn row_iter(&self, i: usize) -> impl Iterator<Item = &BigInt> {
        (0..self.cols).map(move |j| self.get(i, j))
    }

    /// Rank of the matrix as a linear map over the rationals, computed by
    /// fraction-free (Bareiss) elimination. Empty matrices have rank 0.
    pub fn rank_over_rationals(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        bareiss(&mut self.clone()).rank
    }

    /// Exact determinant by fraction-free elimination. Errors on non-square
    /// input; the 0x0 determinant is 1 (empty product).
    pub fn determinant(&self) -> Result<BigInt, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows == 0 {
            return Ok(BigInt::one());
        }
        let mut work = self.clone();
        let outcome = bareiss(&mut work);
        if outcome.rank < self.rows {
            return Ok(BigInt::zero());
        }
        let last = work.get(self.rows - 1, self.rows - 1).clone();
        Ok(if outcome.swaps.is_multiple_of(2) { last } else { -last })
    }

    /// True iff the matrix is square with determinant +1 or -1, i.e.
    /// invertible over the integers.
    pub fn is_unimodular(&self) -> Result<bool, MatrixError> {
        let det = self.determinant()?;
        Ok(det.abs().is_one())
    }
}

struct EliminationOutcome {
    rank: usize,
    swaps: usize,
}

/// In-place fraction-free elimination. After a pivot at `(r, c)` every later
/// update divides by the previous pivot; the division is exact by Sylvester's
/// identity, so entries stay integral throughout.
fn bareiss(m: &mut IntMatrix) -> EliminationOutcome {
    let (rows, cols) = m.shape();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut swaps = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if pivot_row != rank {
            m.swap_rows(pivot_row, rank);
            swaps += 1;
        }
        let pivot = m.get(rank, c).clone();
        for i in rank + 1..rows {
            let head = m.get(i, c).clone();
            for j in c + 1..cols {
                let num = &pivot * m.get(i, j) - &head * m.get(rank, j);
                m.set(i, j, num / &prev);
            }
            m.set(i, c, BigInt::zero());
        }
        prev = pivot;
        rank += 1;
    }
    EliminationOutcome { rank, swaps }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        self.get(i, j)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} ", self.rows, self.cols)?;
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).to_string())
                    .collect::<Vec<_>>()
            }))
            .finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Builds an [`IntMatrix`] from integer literal rows: `mat![[1, 2], [3, 4]]`.
#[macro_export]
macro_rules! mat {
    () => { $crate::matrix::IntMatrix::zeros(0, 0) };
    ($([$($x:expr),* $(,)?]),+ $(,)?) => {
        $crate::matrix::IntMatrix::from_i64_rows(&[$(vec![$($x as i64),*]),+])
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: determinant by recursive cofactor expansion.
    fn cofactor_det(m: &IntMatrix) -> BigInt {
        assert!(m.is_square());
        let n = m.rows();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut acc = BigInt::zero();
        let all_rows: Vec<usize> = (1..n).collect();
        for j in 0..n {
            if m.get(0, j).is_zero() {
                continue;
            }
            let keep_cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = m.submatrix(&all_rows, &keep_cols);
            let term = m.get(0, j) * cofactor_det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn rank_identity() {
        assert_eq!(IntMatrix::identity(3).rank_over_rationals(), 3);
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(IntMatrix::zeros(2, 2).rank_over_rationals(), 0);
    }

    #[test]
    fn rank_full_2x2() {
        // det [[2,4],[6,8]] = -8 by cofactor expansion, so rank 2.
        let m = mat![[2, 4], [6, 8]];
        assert_eq!(cofactor_det(&m), BigInt::from(-8));
        assert_eq!(m.rank_over_rationals(), 2);
    }

    #[test]
    fn rank_empty_shapes() {
        assert_eq!(IntMatrix::zeros(0, 5).rank_over_rationals(), 0);
        assert_eq!(IntMatrix::zeros(5, 0).rank_over_rationals(), 0);
        assert_eq!(IntMatrix::zeros(0, 0).rank_over_rationals(), 0);
    }

    #[test]
    fn rank_dependent_rows() {
        let m = mat![[1, 2, 3], [2, 4, 6], [1, 1, 1]];
        assert_eq!(m.rank_over_rationals(), 2);
    }

    #[test]
    fn determinant_matches_cofactor_oracle() {
        let cases = [
            mat![[2, 1], [1, 1]],
            mat![[2, 4], [6, 8]],
            mat![[1, 2, 3], [4, 5, 6], [7, 8, 10]],
            mat![[0, 2], [3, 0]],
            mat![[5]],
        ];
        for m in &cases {
            assert_eq!(m.determinant().unwrap(), cofactor_det(m));
        }
    }

    #[test]
    fn unimodular_cases() {
        assert!(IntMatrix::identity(4).is_unimodular().unwrap());
        assert!(!mat![[1, 0], [0, 2]].is_unimodular().unwrap());
        // det [[2,1],[1,1]] = 1 by the cofactor oracle.
        let m = mat![[2, 1], [1, 1]];
        assert_eq!(cofactor_det(&m), BigInt::one());
        assert!(m.is_unimodular().unwrap());
    }

    #[test]
    fn unimodular_rejects_non_square() {
        assert_eq!(
            IntMatrix::zeros(2, 3).is_unimodular(),
            Err(MatrixError::NotSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn new_rejects_bad_entry_count() {
        assert!(IntMatrix::new(2, 2, vec![BigInt::zero(); 3]).is_err());
    }

    #[test]
    fn mul_shapes() {
        let a = mat![[1, 2], [3, 4]];
        let b = mat![[1], [1]];
        assert_eq!(a.mul(&b).unwrap(), mat![[3], [7]]);
        assert!(b.mul(&a).is_err());
    }

    fn arb_matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..=9, r * c).prop_map(move |v| {
                IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
            })
        })
    }

    fn arb_square_matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max_dim).prop_flat_map(|n| {
            proptest::collection::vec(-9i64..=9, n * n).prop_map(move |v| {
                IntMatrix::new(n, n, v.into_iter().map(BigInt::from).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_invariant_under_transpose(m in arb_matrix(8)) {
            prop_assert_eq!(m.rank_over_rationals(), m.transpose().rank_over_rationals());
        }

        #[test]
        fn det_matches_oracle_small(m in arb_square_matrix(4)) {
            prop_assert_eq!(m.determinant().unwrap(), cofactor_det(&m));
        }
    }
}
