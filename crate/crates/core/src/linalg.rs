//! Dense exact linear algebra over the rationals. Matrices are row-major
//! `Vec<Vec<Rational>>`; all routines are plain Gaussian elimination.

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form and the pivot column of every nonzero row.
pub fn rref(m: &[Vec<Rational>], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = Rational::one() / &a[row][col];
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..ncols {
                    let delta = &f * &a[row][c];
                    a[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    a.truncate(row);
    (a, pivots)
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    match rows.first() {
        None => 0,
        Some(first) => rref(rows, first.len()).1.len(),
    }
}

/// Basis of `{x : row·x = 0 for every row}` in dimension `ncols`.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Matrix {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[i][f].clone();
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Unique(Vec<Rational>),
    Underdetermined { rank: usize },
    Inconsistent,
}

/// Solves `a·x = b` for `a` with `ncols` columns.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], ncols: usize) -> SolveOutcome {
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return SolveOutcome::Inconsistent;
    }
    if pivots.len() < ncols {
        return SolveOutcome::Underdetermined { rank: pivots.len() };
    }
    let mut x = vec![Rational::zero(); ncols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r[i][ncols].clone();
    }
    SolveOutcome::Unique(x)
}

pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}

pub fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| crate::rational::dot(row, v)).collect()
}
