//! Minimal commutative-ring interface shared by the polynomial and matrix code.

use crate::scalar::ExactScalar;
use crate::series::TaylorSeries;

/// Commutative ring element. `is_zero` is exact for scalars and
/// "zero to validity" for truncated series.
pub trait Ring: Clone + PartialEq {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Ring for ExactScalar {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
}

/// Series ring; operands must share a base point (checked by callers).
impl Ring for TaylorSeries {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        TaylorSeries::is_zero(self)
    }
}

/// Determinant by cofactor expansion along the first row.
///
/// Division-free, so it works over any [`Ring`]; intended for the small
/// (`≤ 5×5`) matrices that occur here.
pub fn det_laplace<R: Ring>(mat: &[Vec<R>], one: &R) -> R {
    let n = mat.len();
    match n {
        0 => one.clone(),
        1 => mat[0][0].clone(),
        2 => mat[0][0].mul(&mat[1][1]).sub(&mat[0][1].mul(&mat[1][0])),
        _ => {
            let mut acc: Option<R> = None;
            for col in 0..n {
                if mat[0][col].is_zero() {
                    continue;
                }
                let minor = minor(mat, 0, col);
                let term = mat[0][col].mul(&det_laplace(&minor, one));
                acc = Some(match (acc, col % 2 == 0) {
                    (None, true) => term,
                    (None, false) => term.neg(),
                    (Some(a), true) => a.add(&term),
                    (Some(a), false) => a.sub(&term),
                });
            }
            acc.unwrap_or_else(|| one.sub(one))
        }
    }
}

/// The matrix with row `r` and column `c` removed.
pub fn minor<R: Clone>(mat: &[Vec<R>], r: usize, c: usize) -> Vec<Vec<R>> {
    mat.iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
        .collect()
}

impl Ring for num_complex::Complex64 {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        *self == num_complex::Complex64::new(0.0, 0.0)
    }
}
