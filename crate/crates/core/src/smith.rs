//! Smith normal form over the integers.
//!
//! `smith_normal_form` produces an exact factorization `A = U * D * V` with
//! `U`, `V` unimodular and `D` diagonal satisfying the divisibility chain
//! d_i | d_{i+1}. The reduction keeps every intermediate entry integral and
//! records the inverse of each elementary operation directly into `U` and
//! `V`, so the product identity holds at every step.
//!
//! `determinant_divisor` is the independent route to the same invariants:
//! the i-th determinant divisor is the gcd of all i x i minors, evaluated by
//! brute-force minor enumeration with cofactor determinants (no elimination
//! shared with the SNF path), and the elementary divisors are ratios of
//! consecutive determinant divisors.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::gcd_big;
use crate::matrix::IntMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SmithError {
    #[error("minor order {order} out of range: must satisfy 0 <= order <= {max}")]
    MinorOrderOutOfRange { order: usize, max: usize },
    #[error(
        "matrix has min(rows, cols) = {min_dim} > {cap}: minor enumeration is exponential, use the SNF path instead"
    )]
    MinorEnumerationTooLarge { min_dim: usize, cap: usize },
}

/// Largest min(rows, cols) accepted by [`determinant_divisor`]; the number of
/// minors grows as C(m,i) * C(n,i).
pub const MINOR_ORACLE_CAP: usize = 6;

/// The factorization `A = U * D * V` together with the extracted invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Unimodular m x m left factor.
    pub u: IntMatrix,
    /// Diagonal m x n middle factor with the divisibility chain.
    pub d: IntMatrix,
    /// Unimodular n x n right factor.
    pub v: IntMatrix,
    /// The positive diagonal entries of `D`, in chain order.
    pub divisors: Vec<BigInt>,
    /// Number of nonzero diagonal entries; equals the rational rank of `A`.
    pub rank: usize,
}

/// Outcome of the independent checks of an [`SnfResult`] against its input.
///
/// Failures are report entries, not errors; `pass()` is the conjunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfVerification {
    pub product_equals_input: bool,
    pub u_unimodular: bool,
    pub v_unimodular: bool,
    pub d_diagonal: bool,
    pub divisor_chain: bool,
    pub rank_agrees: bool,
}

impl SnfVerification {
    pub fn pass(&self) -> bool {
        self.product_equals_input
            && self.u_unimodular
            && self.v_unimodular
            && self.d_diagonal
            && self.divisor_chain
            && self.rank_agrees
    }
}

/// Working state of the reduction. Every mutation applies an elementary
/// operation to `w` and its inverse to `u` or `v`, preserving
/// `original = u * w * v`. `v_inv` accumulates the forward column operations
/// so an integer kernel basis can be read off at the end.
struct SnfState {
    w: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfState {
    fn new(a: &IntMatrix) -> Self {
        let (m, n) = a.shape();
        Self {
            w: a.clone(),
            u: IntMatrix::identity(m),
            v: IntMatrix::identity(n),
            v_inv: IntMatrix::identity(n),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.w.swap_rows(a, b);
        self.u.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.w.swap_cols(a, b);
        self.v.swap_rows(a, b);
        self.v_inv.swap_cols(a, b);
    }

    /// row[target] += c * row[source] on `w`; inverse goes into `u`.
    fn row_axpy(&mut self, target: usize, source: usize, c: &BigInt) {
        for j in 0..self.w.cols() {
            let val = self.w.get(target, j) + c * self.w.get(source, j);
            self.w.set(target, j, val);
        }
        for i in 0..self.u.rows() {
            let val = self.u.get(i, source) - c * self.u.get(i, target);
            self.u.set(i, source, val);
        }
    }

    /// col[target] += c * col[source] on `w`; inverse goes into `v`.
    fn col_axpy(&mut self, target: usize, source: usize, c: &BigInt) {
        for i in 0..self.w.rows() {
            let val = self.w.get(i, target) + c * self.w.get(i, source);
            self.w.set(i, target, val);
        }
        for j in 0..self.v.cols() {
            let val = self.v.get(source, j) - c * self.v.get(target, j);
            self.v.set(source, j, val);
        }
        for i in 0..self.v_inv.rows() {
            let val = self.v_inv.get(i, target) + c * self.v_inv.get(i, source);
            self.v_inv.set(i, target, val);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.w.cols() {
            let val = -self.w.get(i, j);
            self.w.set(i, j, val);
        }
        for r in 0..self.u.rows() {
            let val = -self.u.get(r, i);
            self.u.set(r, i, val);
        }
    }

    /// Smallest-magnitude nonzero entry of the submatrix w[k.., k..];
    /// ties break in row-major order so the reduction is deterministic.
    fn min_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut best_abs = BigInt::zero();
        for i in k..self.w.rows() {
            for j in k..self.w.cols() {
                let e = self.w.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let a = e.abs();
                if best.is_none() || a < best_abs {
                    best = Some((i, j));
                    best_abs = a;
                }
            }
        }
        best
    }

    fn run(&mut self) -> usize {
        let (m, n) = self.w.shape();
        let limit = m.min(n);
        let mut k = 0;
        while k < limit {
            let Some((pi, pj)) = self.min_pivot(k) else {
                break;
            };
            self.swap_rows(k, pi);
            self.swap_cols(k, pj);
            loop {
                let mut dirty = false;
                for i in k + 1..m {
                    if !self.w.get(i, k).is_zero() {
                        let q = nearest_quotient(self.w.get(i, k), self.w.get(k, k));
                        self.row_axpy(i, k, &-q);
                        if !self.w.get(i, k).is_zero() {
                            dirty = true;
                        }
                    }
                }
                for j in k + 1..n {
                    if !self.w.get(k, j).is_zero() {
                        let q = nearest_quotient(self.w.get(k, j), self.w.get(k, k));
                        self.col_axpy(j, k, &-q);
                        if !self.w.get(k, j).is_zero() {
                            dirty = true;
                        }
                    }
                }
                if dirty {
                    // A remainder smaller than the pivot appeared; re-select.
                    let (pi, pj) = self.min_pivot(k).expect("nonzero remainder exists");
                    self.swap_rows(k, pi);
                    self.swap_cols(k, pj);
                    continue;
                }
                // Row k and column k are clear. Enforce that the pivot
                // divides the rest of the submatrix before moving on.
                if let Some(bad_row) = self.find_nondivisible_row(k) {
                    self.row_axpy(k, bad_row, &BigInt::one());
                    continue;
                }
                break;
            }
            if self.w.get(k, k).is_negative() {
                self.negate_row(k);
            }
            k += 1;
        }
        k
    }

    fn find_nondivisible_row(&self, k: usize) -> Option<usize> {
        let pivot = self.w.get(k, k);
        for i in k + 1..self.w.rows() {
            for j in k + 1..self.w.cols() {
                if !(self.w.get(i, j) % pivot).is_zero() {
                    return Some(i);
                }
            }
        }
        None
    }
}

/// Quotient of `a / b` rounded to the nearest integer, which keeps the
/// remainder at most |b|/2 and bounds coefficient growth.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let q0 = a / b;
    let mut best = q0.clone();
    let mut best_rem = (a - &q0 * b).abs();
    for cand in [&q0 - 1i32, &q0 + 1i32] {
        let rem = (a - &cand * b).abs();
        if rem < best_rem {
            best_rem = rem;
            best = cand;
        }
    }
    best
}

/// Computes the Smith normal form of `A`. Handles empty and zero matrices
/// (rank 0, no divisors).
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut state = SnfState::new(a);
    let steps = state.run();
    let divisors: Vec<BigInt> = (0..steps)
        .map(|i| state.w.get(i, i).clone())
        .filter(|d| !d.is_zero())
        .collect();
    let rank = divisors.len();
    SnfResult {
        u: state.u,
        d: state.w,
        v: state.v,
        divisors,
        rank,
    }
}

/// The ordered elementary divisors of `A` (the positive diagonal of its SNF).
pub fn elementary_divisors(a: &IntMatrix) -> Vec<BigInt> {
    smith_normal_form(a).divisors
}

/// A basis of the integer kernel of `A`, returned as the columns of an
/// n x (n - rank) matrix. `A * K = 0` exactly.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let mut state = SnfState::new(a);
    let steps = state.run();
    let rank = (0..steps)
        .filter(|&i| !state.w.get(i, i).is_zero())
        .count();
    let n = a.cols();
    let cols: Vec<usize> = (rank..n).collect();
    let all_rows: Vec<usize> = (0..n).collect();
    state.v_inv.submatrix(&all_rows, &cols)
}

/// The i-th determinant divisor of `A`: the gcd of the absolute values of
/// all i x i minors, with order 0 defined as 1. Evaluated as the chained
/// gcd over the minor enumeration. Returns 0 when every minor vanishes.
///
/// Brute-force only: rejects matrices with min(rows, cols) beyond
/// [`MINOR_ORACLE_CAP`].
pub fn determinant_divisor(a: &IntMatrix, order: usize) -> Result<BigInt, SmithError> {
    let min_dim = a.rows().min(a.cols());
    if order > min_dim {
        return Err(SmithError::MinorOrderOutOfRange {
            order,
            max: min_dim,
        });
    }
    if min_dim > MINOR_ORACLE_CAP {
        return Err(SmithError::MinorEnumerationTooLarge {
            min_dim,
            cap: MINOR_ORACLE_CAP,
        });
    }
    if order == 0 {
        return Ok(BigInt::one());
    }
    let mut chained = BigInt::zero();
    for row_set in combinations(a.rows(), order) {
        for col_set in combinations(a.cols(), order) {
            let minor = cofactor_determinant(&a.submatrix(&row_set, &col_set));
            chained = gcd_big(&chained, &minor);
        }
    }
    Ok(chained)
}

/// Determinant by recursive cofactor expansion along the first row. Kept
/// separate from the elimination path so the determinant divisors are a
/// genuinely independent oracle.
fn cofactor_determinant(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let rest_rows: Vec<usize> = (1..n).collect();
    let mut acc = BigInt::zero();
    for j in 0..n {
        if m.get(0, j).is_zero() {
            continue;
        }
        let keep: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let term = m.get(0, j) * cofactor_determinant(&m.submatrix(&rest_rows, &keep));
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// All `size`-element subsets of `0..n` in lexicographic order.
fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > n {
        return out;
    }
    let mut current: Vec<usize> = (0..size).collect();
    loop {
        out.push(current.clone());
        // Advance to the next subset.
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] != i + n - size {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        current[i] += 1;
        for j in i + 1..size {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Runs the independent checks of the SNF definition against `result`.
pub fn verify_snf(a: &IntMatrix, result: &SnfResult) -> SnfVerification {
    let product_equals_input = result
        .u
        .mul(&result.d)
        .and_then(|ud| ud.mul(&result.v))
        .map(|udv| udv == *a)
        .unwrap_or(false);
    let u_unimodular = result.u.is_unimodular().unwrap_or(false);
    let v_unimodular = result.v.is_unimodular().unwrap_or(false);
    let d_diagonal = result.d.is_diagonal();

    let min_dim = result.d.rows().min(result.d.cols());
    let diag: Vec<BigInt> = (0..min_dim).map(|i| result.d.get(i, i).clone()).collect();
    let nonzero: Vec<&BigInt> = diag.iter().filter(|d| !d.is_zero()).collect();
    let mut divisor_chain = nonzero.len() == result.divisors.len()
        && nonzero
            .iter()
            .zip(result.divisors.iter())
            .all(|(a, b)| **a == *b)
        && result.divisors.iter().all(|d| d.is_positive());
    // Zeros must only appear after the nonzero prefix, and each divisor must
    // divide the next.
    divisor_chain &= diag
        .iter()
        .skip(result.divisors.len())
        .all(|d| d.is_zero());
    divisor_chain &= result
        .divisors
        .windows(2)
        .all(|w| (&w[1] % &w[0]).is_zero());

    let rank_agrees =
        result.rank == result.divisors.len() && result.rank == a.rank_over_rationals();

    SnfVerification {
        product_equals_input,
        u_unimodular,
        v_unimodular,
        d_diagonal,
        divisor_chain,
        rank_agrees,
    }
}
