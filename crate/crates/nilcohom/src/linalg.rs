//! Exact dense linear algebra over the rationals.
//!
//! Everything routes through one fraction-free (Bareiss) row elimination with
//! a fixed pivot rule: first non-zero column, ties broken by lowest row
//! index. No tolerances exist; rank, kernel, span membership and solutions
//! are exact and deterministic.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>, // row-major
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> QMatrix {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> QMatrix {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> QMatrix {
        let mut m = QMatrix::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> QMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = QMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row length mismatch");
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    /// Vertical stack: `self` on top of `other`.
    pub fn stack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut m = QMatrix::zeros(self.rows + other.rows, self.cols);
        m.data[..self.data.len()].clone_from_slice(&self.data);
        m.data[self.data.len()..].clone_from_slice(&other.data);
        m
    }

    /// Horizontal concatenation: `[self | other]`.
    pub fn augment(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = QMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Row echelon form via fraction-free elimination.
    pub fn echelon(&self) -> Echelon {
        let mut mat: Vec<Vec<BigInt>> = Vec::with_capacity(self.rows);
        let mut scales: Vec<BigInt> = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut lcm = BigInt::one();
            for c in 0..self.cols {
                lcm = lcm.lcm(self.get(r, c).denom());
            }
            let row: Vec<BigInt> = (0..self.cols)
                .map(|c| {
                    let v = self.get(r, c);
                    v.numer() * (&lcm / v.denom())
                })
                .collect();
            scales.push(lcm);
            mat.push(row);
        }

        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut swap_sign = 1i32;
        let mut prev = BigInt::one();
        let mut next_row = 0usize;
        for col in 0..self.cols {
            if next_row == self.rows {
                break;
            }
            let Some(pivot_row) = (next_row..self.rows).find(|&r| !mat[r][col].is_zero()) else {
                continue;
            };
            if pivot_row != next_row {
                mat.swap(pivot_row, next_row);
                swap_sign = -swap_sign;
            }
            for r in next_row + 1..self.rows {
                for c in col + 1..self.cols {
                    let num = &mat[next_row][col] * &mat[r][c] - &mat[r][col] * &mat[next_row][c];
                    // exact by the Bareiss minor identity
                    debug_assert!((&num % &prev).is_zero(), "inexact fraction-free division");
                    mat[r][c] = num / &prev;
                }
                mat[r][col] = BigInt::zero();
            }
            prev = mat[next_row][col].clone();
            pivots.push((next_row, col));
            next_row += 1;
        }

        Echelon {
            mat,
            pivots,
            cols: self.cols,
            scales,
            swap_sign,
        }
    }

    /// Basis of the right kernel, one vector per free column, in ascending
    /// free-column order. Vectors are primitive integer vectors with the
    /// first non-zero entry positive.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let ech = self.echelon();
        let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut x = vec![Rational::zero(); self.cols];
            x[free] = Rational::one();
            for &(r, c) in ech.pivots.iter().rev() {
                if c >= free {
                    if c == free {
                        unreachable!("free column cannot be a pivot");
                    }
                    continue;
                }
                let mut acc = Rational::zero();
                for j in c + 1..self.cols {
                    if !x[j].is_zero() && !ech.mat[r][j].is_zero() {
                        acc += Rational::from_integer(ech.mat[r][j].clone()) * &x[j];
                    }
                }
                x[c] = -acc / Rational::from_integer(ech.mat[r][c].clone());
            }
            primitive_normalize(&mut x);
            basis.push(x);
        }
        basis
    }

    /// A particular solution of `self · x = rhs` with all free variables
    /// zero, or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(rhs.len(), self.rows);
        let augmented = self.augment(&QMatrix::from_columns(self.rows, &[rhs.to_vec()]));
        let ech = augmented.echelon();
        if ech.pivots.iter().any(|&(_, c)| c == self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for &(r, c) in ech.pivots.iter().rev() {
            let mut acc = Rational::from_integer(ech.mat[r][self.cols].clone());
            for j in c + 1..self.cols {
                if !x[j].is_zero() && !ech.mat[r][j].is_zero() {
                    acc -= Rational::from_integer(ech.mat[r][j].clone()) * &x[j];
                }
            }
            x[c] = acc / Rational::from_integer(ech.mat[r][c].clone());
        }
        Some(x)
    }

    /// Indices of a maximal set of linearly independent columns, greedy from
    /// the left (the pivot columns of the echelon form).
    pub fn independent_columns(&self) -> Vec<usize> {
        self.echelon().pivots.iter().map(|&(_, c)| c).collect()
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return Rational::one();
        }
        let ech = self.echelon();
        if ech.pivots.len() < self.rows {
            return Rational::zero();
        }
        let (last_row, last_col) = *ech.pivots.last().expect("full rank");
        debug_assert_eq!((last_row, last_col), (self.rows - 1, self.cols - 1));
        let mut det = Rational::from_integer(ech.mat[last_row][last_col].clone());
        if ech.swap_sign < 0 {
            det = -det;
        }
        let mut scale = BigInt::one();
        for s in &ech.scales {
            scale *= s;
        }
        det / Rational::from_integer(scale)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut out = QMatrix::zeros(n, n);
        for c in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[c] = Rational::one();
            let col = self.solve(&e)?;
            if (0..n).any(|r| {
                let mut check = Rational::zero();
                for j in 0..n {
                    check += self.get(r, j) * &col[j];
                }
                check != e[r]
            }) {
                return None; // singular: solve() hit a free variable
            }
            for r in 0..n {
                out.set(r, c, col[r].clone());
            }
        }
        Some(out)
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| *self.get(r, c) == -self.get(c, r)))
    }
}

pub struct Echelon {
    /// Integer row-echelon matrix (rows were scaled to integers first).
    pub mat: Vec<Vec<BigInt>>,
    /// `(row, col)` of each pivot, in elimination order.
    pub pivots: Vec<(usize, usize)>,
    pub cols: usize,
    scales: Vec<BigInt>,
    swap_sign: i32,
}

/// A fully reduced elimination of a fixed matrix `A`, prepared once so that
/// many right-hand sides can be solved by a single matrix-vector product
/// each. Same pivot rule as [`QMatrix::echelon`]; solutions agree with
/// [`QMatrix::solve`] (free variables zero).
#[derive(Debug, Clone)]
pub struct PreparedSolver {
    cols: usize,
    /// Row transform `T` with `T·A` in reduced row echelon form.
    transform: QMatrix,
    pivots: Vec<(usize, usize)>,
}

impl PreparedSolver {
    pub fn new(a: &QMatrix) -> PreparedSolver {
        let rows = a.rows();
        let cols = a.cols();
        let mut aug = a.augment(&QMatrix::identity(rows));
        let mut pivots = Vec::new();
        let mut next_row = 0usize;
        for col in 0..cols {
            if next_row == rows {
                break;
            }
            let Some(pivot_row) = (next_row..rows).find(|&r| !aug.get(r, col).is_zero()) else {
                continue;
            };
            if pivot_row != next_row {
                for c in 0..aug.cols() {
                    let tmp = aug.get(pivot_row, c).clone();
                    aug.set(pivot_row, c, aug.get(next_row, c).clone());
                    aug.set(next_row, c, tmp);
                }
            }
            let inv = Rational::one() / aug.get(next_row, col).clone();
            for c in 0..aug.cols() {
                let v = aug.get(next_row, c) * &inv;
                aug.set(next_row, c, v);
            }
            for r in 0..rows {
                if r == next_row || aug.get(r, col).is_zero() {
                    continue;
                }
                let factor = aug.get(r, col).clone();
                for c in 0..aug.cols() {
                    let v = aug.get(r, c) - &factor * aug.get(next_row, c);
                    aug.set(r, c, v);
                }
            }
            pivots.push((next_row, col));
            next_row += 1;
        }
        let mut transform = QMatrix::zeros(rows, rows);
        for r in 0..rows {
            for c in 0..rows {
                transform.set(r, c, aug.get(r, cols + c).clone());
            }
        }
        PreparedSolver {
            cols,
            transform,
            pivots,
        }
    }

    /// Particular solution with free variables zero, or `None` when
    /// inconsistent.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        let rows = self.transform.rows();
        assert_eq!(rhs.len(), rows);
        let mut reduced = vec![Rational::zero(); rows];
        for (r, slot) in reduced.iter_mut().enumerate() {
            let mut acc = Rational::zero();
            for (c, value) in rhs.iter().enumerate() {
                if !value.is_zero() {
                    let t = self.transform.get(r, c);
                    if !t.is_zero() {
                        acc += t * value;
                    }
                }
            }
            *slot = acc;
        }
        // rows past the last pivot must vanish for consistency
        for r in self.pivots.len()..rows {
            if !reduced[r].is_zero() {
                return None;
            }
        }
        let mut x = vec![Rational::zero(); self.cols];
        for &(r, c) in &self.pivots {
            x[c] = reduced[r].clone();
        }
        Some(x)
    }
}

/// Scales a rational vector to a primitive integer vector (gcd 1) whose
/// first non-zero entry is positive. The zero vector is left unchanged.
pub fn primitive_normalize(v: &mut [Rational]) {
    let mut lcm = BigInt::one();
    for x in v.iter() {
        lcm = lcm.lcm(x.denom());
    }
    let mut gcd = BigInt::zero();
    for x in v.iter() {
        let scaled = x.numer() * (&lcm / x.denom());
        gcd = gcd.gcd(&scaled);
    }
    if gcd.is_zero() {
        return;
    }
    let mut factor = Rational::new(lcm, gcd);
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if (first.clone() * &factor).is_negative() {
            factor = -factor;
        }
    }
    for x in v.iter_mut() {
        *x *= &factor;
    }
}

/// True iff `target` lies in the span of `vectors` (all of length `len`).
pub fn in_span(len: usize, vectors: &[Vec<Rational>], target: &[Rational]) -> bool {
    assert_eq!(target.len(), len);
    if target.iter().all(|x| x.is_zero()) {
        return true;
    }
    if vectors.is_empty() {
        return false;
    }
    QMatrix::from_columns(len, vectors).solve(target).is_some()
}
