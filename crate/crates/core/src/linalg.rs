//! Dense exact linear algebra over any field: row reduction, rank, kernel,
//! determinant and inverse. Used with [`Rational`](crate::Rational) and with
//! [`RationalFunction`](crate::RationalFunction) entries.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar_poly::ScalarError;

pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Field for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
{
}

pub type Matrix<F> = Vec<Vec<F>>;

pub(crate) fn check_square<F>(m: &[Vec<F>]) -> Result<(), ScalarError> {
    let rows = m.len();
    match m.iter().position(|r| r.len() != rows) {
        Some(row) => Err(ScalarError::NotSquare {
            rows,
            row,
            cols: m[row].len(),
        }),
        None => Ok(()),
    }
}

pub fn identity<F: Field>(n: usize) -> Matrix<F> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect()
}

pub fn mat_mul<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Matrix<F> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "inner dimensions differ");
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .fold(F::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Field>(a: &[Vec<F>], v: &[F]) -> Vec<F> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        })
        .collect()
}

/// Brings `m` to reduced row echelon form in place and returns the pivot columns.
pub fn rref<F: Field>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = F::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &[Vec<F>]) -> usize {
    let mut work = m.to_vec();
    rref(&mut work).len()
}

/// Basis of `{v : m v = 0}`, one vector per free column, with a 1 in that column.
pub fn kernel<F: Field>(m: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut work = m.to_vec();
    let pivots = rref(&mut work);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![F::zero(); cols];
            v[free] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -work[r][free].clone();
            }
            v
        })
        .collect()
}

pub fn determinant<F: Field>(m: &[Vec<F>]) -> F {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return F::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det = det * pivot.clone();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() / pivot.clone();
            for j in c..n {
                let sub = f.clone() * a[c][j].clone();
                a[i][j] = a[i][j].clone() - sub;
            }
        }
    }
    det
}

/// Gauss-Jordan inverse, `None` when singular.
pub fn inverse<F: Field>(m: &[Vec<F>]) -> Option<Matrix<F>> {
    let n = m.len();
    let mut aug: Matrix<F> = m
        .iter()
        .zip(identity::<F>(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.last().is_some_and(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}
