//! Gaussian elimination over an exact field.

use std::fmt::Debug;

use num::{One, Zero};

use super::{Cyclotomic, Rational};

/// Field operations needed by the elimination routines.
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    /// `None` for zero.
    fn reciprocal(&self) -> Option<Self>;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn reciprocal(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Scalar for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn one() -> Self {
        Cyclotomic::one()
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn reciprocal(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolution<F> {
    Unique(Vec<F>),
    /// Consistent with a solution space of positive dimension; carries one
    /// particular solution (free variables set to zero).
    Underdetermined {
        particular: Vec<F>,
        rank: usize,
    },
    Inconsistent,
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref<F: Scalar>(m: &mut [Vec<F>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].reciprocal().expect("nonzero pivot");
        for c in 0..m[row].len() {
            m[row][c] = m[row][c].times(&inv);
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..m[r].len() {
                    let delta = f.times(&m[row][c]);
                    m[r][c] = m[r][c].minus(&delta);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Solves `a · x = b` for a possibly non-square `a`.
pub fn solve_linear<F: Scalar>(a: &[Vec<F>], b: &[F]) -> LinearSolution<F> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, cols);
    if aug[pivots.len()..].iter().any(|r| !r[cols].is_zero()) {
        return LinearSolution::Inconsistent;
    }
    let mut x = vec![F::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    if pivots.len() == cols {
        LinearSolution::Unique(x)
    } else {
        LinearSolution::Underdetermined {
            particular: x,
            rank: pivots.len(),
        }
    }
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<F: Scalar>(a: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = a.len();
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, n);
    (pivots.len() == n).then(|| aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant<F: Scalar>(a: &[Vec<F>]) -> F {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = F::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return F::zero();
        };
        if p != col {
            m.swap(p, col);
            det = F::zero().minus(&det);
        }
        det = det.times(&m[col][col]);
        let inv = m[col][col].reciprocal().expect("nonzero pivot");
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].times(&inv);
            for c in col..n {
                let delta = f.times(&m[col][c]);
                m[r][c] = m[r][c].minus(&delta);
            }
        }
    }
    det
}

pub fn mat_mul<F: Scalar>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(F::zero(), |acc, k| acc.plus(&row[k].times(&b[k][j]))))
                .collect()
        })
        .collect()
}
