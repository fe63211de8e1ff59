use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Real coefficient matrix (boundary conditions, vertex condition blocks).
pub type RealMatrix<T> = Matrix<T>;

/// Nonnegative integer matrix, used for multi digraph adjacency.
pub type CountMatrix = Matrix<u32>;

impl<T> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from nested rows; an empty outer vector gives a 0x0 matrix.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`Matrix::from_rows`] but fixes the column count, so that
    /// matrices with zero rows keep their width.
    pub fn from_rows_with_cols(rows: Vec<Vec<T>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!("row {} has {} entries, expected {cols}", i + 1, row.len())));
            }
            data.extend(row);
        }
        Ok(Matrix { rows: nrows, cols, data })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut f).collect() }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let cols = self.cols.max(1);
        self.data.iter().enumerate().map(move |(k, v)| (k / cols, k % cols, v))
    }
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Submatrix on the given row and column indices, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Stacks matrices vertically; all blocks must share the column count.
    pub fn vstack(blocks: &[&Matrix<T>], cols: usize) -> Result<Self> {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(Error::Dimension(format!("vstack: block has {} columns, expected {cols}", b.cols)));
            }
            rows += b.rows;
            data.extend(b.data.iter().cloned());
        }
        Ok(Matrix { rows, cols, data })
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Matrix<u32> {
    pub fn from_u32_rows(rows: &[&[u32]]) -> Result<Self> {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
    }

    pub fn row_sum(&self, i: usize) -> u32 {
        self.row(i).iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> u32 {
        (0..self.rows).map(|i| *self.get(i, j)).sum()
    }
}

/// Upper triangular factor, transformed right-hand side, odd row swaps.
type Echelon<T> = (Matrix<T>, Option<Matrix<T>>, bool);

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// Converts a matrix of `f64` literals, mostly for tests and fixtures.
    pub fn from_f64_rows(rows: &[&[f64]]) -> Result<Self> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| T::from_f64_lossy(x)).collect()).collect())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| T::from_f64_lossy(x as f64)).collect()).collect())
    }

    pub fn check_finite(&self) -> Result<()> {
        for (i, j, v) in self.iter() {
            if !v.is_finite_value() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Matrix<T>) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc + a.clone() * rhs.get(k, j).clone();
            }
            acc
        }))
    }

    pub fn add(&self, rhs: &Matrix<T>) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::Dimension("add: shapes differ".into()));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() + rhs.get(i, j).clone()))
    }

    pub fn sub(&self, rhs: &Matrix<T>) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::Dimension("sub: shapes differ".into()));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() - rhs.get(i, j).clone()))
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v.clone())
    }

    /// Euclidean norm of row `i`, evaluated in `f64`.
    pub fn row_norm(&self, i: usize) -> f64 {
        self.row(i)
            .iter()
            .map(|v| {
                let x = v.to_f64_lossy();
                x * x
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Largest absolute entry, in `f64`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64_lossy().abs()).fold(0.0, f64::max)
    }

    /// Block diagonal matrix from square or rectangular blocks.
    pub fn block_diag(blocks: &[Matrix<T>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for (i, j, v) in b.iter() {
                out.set(r0 + i, c0 + j, v.clone());
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Gaussian elimination with partial pivoting on a copy of `self`.
    /// Returns the row-echelon factors needed for determinants and solves,
    /// or `None` when a pivot column is entirely zero.
    fn eliminate(&self, rhs: Option<&Matrix<T>>) -> Result<Option<Echelon<T>>> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.cloned();
        if let Some(b) = &b {
            if b.rows != n {
                return Err(Error::Dimension(format!("right-hand side has {} rows, expected {n}", b.rows)));
            }
        }
        let mut odd = false;
        for col in 0..n {
            let mut pivot = col;
            for r in col + 1..n {
                if a.get(r, col).abs() > a.get(pivot, col).abs() {
                    pivot = r;
                }
            }
            if a.get(pivot, col).is_zero() {
                return Ok(None);
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                if let Some(b) = b.as_mut() {
                    b.swap_rows(pivot, col);
                }
                odd = !odd;
            }
            let p = a.get(col, col).clone();
            for r in col + 1..n {
                let factor = a.get(r, col).clone() / p.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = a.get(r, c).clone() - factor.clone() * a.get(col, c).clone();
                    a.set(r, c, v);
                }
                if let Some(b) = b.as_mut() {
                    for c in 0..b.cols {
                        let v = b.get(r, c).clone() - factor.clone() * b.get(col, c).clone();
                        b.set(r, c, v);
                    }
                }
            }
        }
        Ok(Some((a, b, odd)))
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(i * self.cols + j, k * self.cols + j);
        }
    }

    pub fn determinant(&self) -> Result<T> {
        match self.eliminate(None)? {
            None => Ok(T::zero()),
            Some((u, _, odd)) => {
                let mut det = T::one();
                for i in 0..u.rows {
                    det = det * u.get(i, i).clone();
                }
                Ok(if odd { -det } else { det })
            }
        }
    }

    /// Solves `self * X = rhs`; `None` if `self` is singular.
    pub fn solve(&self, rhs: &Matrix<T>) -> Result<Option<Matrix<T>>> {
        let Some((u, Some(mut b), _)) = self.eliminate(Some(rhs))? else {
            return Ok(None);
        };
        let n = u.rows;
        for c in 0..b.cols {
            for i in (0..n).rev() {
                let mut acc = b.get(i, c).clone();
                for k in i + 1..n {
                    acc = acc - u.get(i, k).clone() * b.get(k, c).clone();
                }
                b.set(i, c, acc / u.get(i, i).clone());
            }
        }
        Ok(Some(b))
    }

    pub fn inverse(&self) -> Result<Option<Matrix<T>>> {
        self.solve(&Matrix::identity(self.rows))
    }
}
