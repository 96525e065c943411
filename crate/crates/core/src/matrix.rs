//! Dense matrices over exact rationals.
//!
//! Blocks at desk scale have dimension at most a few hundred, so a dense
//! row-major layout is enough. Multiplication skips zero entries, which makes
//! products of the (very sparse) generator and weight-block-diagonal matrices
//! cost what a sparse representation would.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn scalar(n: usize, c: &Rat) -> Self {
        let mut m = QMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Integer-entry convenience constructor, mostly for tests and oracles.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rat::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Rat) {
        self.entries[i * self.cols + j] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == QMatrix::identity(self.rows)
    }

    pub fn trace(&self) -> Rat {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn scale(&self, c: &Rat) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// `self - c * I`.
    pub fn sub_scalar(&self, c: &Rat) -> QMatrix {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i) - c;
            m.set(i, i, v);
        }
        m
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Rank over the rationals by exact row reduction.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            let inv = m.get(rank, col).recip().unwrap();
            m.scale_row(rank, &inv);
            for r in 0..m.rows {
                if r != rank && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    m.row_sub_scaled(r, rank, &f);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<QMatrix> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = QMatrix::identity(n);
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Err(Error::SingularMatrix);
            };
            m.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let f = m.get(col, col).recip().unwrap();
            m.scale_row(col, &f);
            inv.scale_row(col, &f);
            for r in 0..n {
                if r != col && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    m.row_sub_scaled(r, col, &f);
                    inv.row_sub_scaled(r, col, &f);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, f: &Rat) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            if !self.entries[idx].is_zero() {
                self.entries[idx] *= f;
            }
        }
    }

    /// row r -= f * row src
    fn row_sub_scaled(&mut self, r: usize, src: usize, f: &Rat) {
        for j in 0..self.cols {
            let v = self.entries[src * self.cols + j].clone();
            if !v.is_zero() {
                self.entries[r * self.cols + j] -= &(&v * f);
            }
        }
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "dimension mismatch in matrix addition: {}x{} + {}x{}",
            self.rows,
            self.cols,
            rhs.rows,
            rhs.cols
        );
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "dimension mismatch in matrix subtraction: {}x{} - {}x{}",
            self.rows,
            self.cols,
            rhs.rows,
            rhs.cols
        );
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert!(
            self.cols == rhs.rows,
            "dimension mismatch in matrix product: {}x{} * {}x{}",
            self.rows,
            self.cols,
            rhs.rows,
            rhs.cols
        );
        let mut out = QMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }
}

/// Inverse of a square nonsingular matrix; `m * mat_inverse(m) = identity`
/// exactly.
pub fn mat_inverse(m: &QMatrix) -> Result<QMatrix> {
    m.inverse()
}

/// Lagrange spectral projectors of a diagonalizable matrix with the given
/// exact spectrum: `P_c = prod_{c' != c} (m - c' I)/(c - c')`.
///
/// The precondition `prod_c (m - c I) = 0` is checked first; its failure
/// signals a wrong eigenvalue list and returns `SpectrumMismatch`.
pub fn lagrange_projectors(m: &QMatrix, eigenvalues: &[Rat]) -> Result<Vec<QMatrix>> {
    assert!(m.is_square(), "projectors of non-square matrix");
    for (i, a) in eigenvalues.iter().enumerate() {
        if eigenvalues[i + 1..].contains(a) {
            return Err(Error::SpectrumMismatch);
        }
    }
    let shifted: Vec<QMatrix> = eigenvalues.iter().map(|c| m.sub_scalar(c)).collect();
    let mut ann = QMatrix::identity(m.rows());
    for s in &shifted {
        ann = &ann * s;
    }
    if !ann.is_zero() {
        return Err(Error::SpectrumMismatch);
    }
    let mut projectors = Vec::with_capacity(eigenvalues.len());
    for (i, c) in eigenvalues.iter().enumerate() {
        let mut p = QMatrix::identity(m.rows());
        let mut denom = Rat::one();
        for (j, c2) in eigenvalues.iter().enumerate() {
            if i != j {
                p = &p * &shifted[j];
                denom *= &(c - c2);
            }
        }
        projectors.push(p.scale(&denom.recip().unwrap()));
    }
    Ok(projectors)
}
