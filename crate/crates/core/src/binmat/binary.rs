use std::fmt;

use serde::{Deserialize, Serialize};

use crate::binmat::index::IndexSet;
use crate::binmat::matrix::{CountMatrix, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Matrix with entries in {0,1}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix(Matrix<bool>);

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix(Matrix::filled(rows, cols, false))
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        BinaryMatrix(Matrix::filled(rows, cols, true))
    }

    pub fn identity(n: usize) -> Self {
        BinaryMatrix::from_fn(n, n, |i, j| i == j)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> bool) -> Self {
        BinaryMatrix(Matrix::from_fn(rows, cols, f))
    }

    pub fn from_bool(m: Matrix<bool>) -> Self {
        BinaryMatrix(m)
    }

    /// Builds from rows of 0/1 literals; any other value is rejected.
    pub fn from_01(rows: &[&[u8]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_01_rows(rows.iter().map(|r| r.to_vec()).collect(), cols)
    }

    pub fn from_01_rows(rows: Vec<Vec<u8>>, cols: usize) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (j, v) in row.into_iter().enumerate() {
                match v {
                    0 => r.push(false),
                    1 => r.push(true),
                    _ => return Err(Error::Dimension(format!("entry ({},{}) = {v} is not 0/1", i + 1, j + 1))),
                }
            }
            out.push(r);
        }
        Ok(BinaryMatrix(Matrix::from_rows_with_cols(out, cols)?))
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        *self.0.get(i, j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.0.set(i, j, v)
    }

    pub fn as_matrix(&self) -> &Matrix<bool> {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        BinaryMatrix(self.0.transpose())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        BinaryMatrix(self.0.select(rows, cols))
    }

    pub fn row_support(&self, i: usize) -> IndexSet {
        IndexSet::new((0..self.ncols()).filter(|&j| self.get(i, j)).collect())
    }

    pub fn col_support(&self, j: usize) -> IndexSet {
        IndexSet::new((0..self.nrows()).filter(|&i| self.get(i, j)).collect())
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.0.row(i).iter().all(|b| !b)
    }

    pub fn is_zero_col(&self, j: usize) -> bool {
        (0..self.nrows()).all(|i| !self.get(i, j))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|(_, _, b)| !b)
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|(_, _, b)| **b).count()
    }

    pub fn is_symmetric(&self) -> bool {
        self.0.is_square() && (0..self.nrows()).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Integer product of the 0/1 matrices.
    pub fn count_product(&self, rhs: &BinaryMatrix) -> Result<CountMatrix> {
        if self.ncols() != rhs.nrows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols(),
                rhs.nrows(),
                rhs.ncols()
            )));
        }
        Ok(Matrix::from_fn(self.nrows(), rhs.ncols(), |i, j| {
            (0..self.ncols()).filter(|&k| self.get(i, k) && rhs.get(k, j)).count() as u32
        }))
    }

    /// `hat(self * rhs)`: entry is 1 iff some k has both factors 1.
    pub fn bool_product(&self, rhs: &BinaryMatrix) -> Result<BinaryMatrix> {
        Ok(BinaryMatrix(self.count_product(rhs)?.map(|&c| c > 0)))
    }

    pub fn to_counts(&self) -> CountMatrix {
        self.0.map(|&b| u32::from(b))
    }

    /// Reads a count matrix whose entries are all 0 or 1.
    pub fn from_counts(c: &CountMatrix) -> Result<Self> {
        for (i, j, &v) in c.iter() {
            if v > 1 {
                return Err(Error::Dimension(format!("entry ({},{}) = {v} is not 0/1", i + 1, j + 1)));
            }
        }
        Ok(BinaryMatrix(c.map(|&v| v == 1)))
    }

    pub fn to_01_rows(&self) -> Vec<Vec<u8>> {
        (0..self.nrows()).map(|i| self.0.row(i).iter().map(|&b| u8::from(b)).collect()).collect()
    }

    pub fn to_scalar<T: Scalar>(&self) -> Matrix<T> {
        self.0.map(|&b| if b { T::one() } else { T::zero() })
    }

    pub fn vstack(blocks: &[&BinaryMatrix], cols: usize) -> Result<Self> {
        let inner: Vec<&Matrix<bool>> = blocks.iter().map(|b| &b.0).collect();
        Ok(BinaryMatrix(Matrix::vstack(&inner, cols)?))
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.nrows() {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.ncols() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_01_rows())
    }
}

impl Serialize for BinaryMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_01_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<u8>>::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        BinaryMatrix::from_01_rows(rows, cols).map_err(serde::de::Error::custom)
    }
}

/// Entry is 1 iff `|A(i,j)| > tol`.
pub fn hat<T: Scalar>(a: &Matrix<T>, tol: &T) -> BinaryMatrix {
    BinaryMatrix(a.map(|v| v.exceeds(tol)))
}

/// Indices `j` with `|v_j| > tol`.
pub fn support<T: Scalar>(v: &[T], tol: &T) -> IndexSet {
    IndexSet::new(v.iter().enumerate().filter(|(_, x)| x.exceeds(tol)).map(|(j, _)| j).collect())
}

/// Outcome of a pairwise equal-or-orthogonal check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairCheck {
    Pass,
    /// The lexicographically smallest offending pair, 0-based, `first < second`.
    Fail {
        first: usize,
        second: usize,
    },
}

impl PairCheck {
    pub fn passed(&self) -> bool {
        matches!(self, PairCheck::Pass)
    }
}

pub fn columns_equal_or_orthogonal(a: &BinaryMatrix) -> PairCheck {
    let cols: Vec<IndexSet> = (0..a.ncols()).map(|j| a.col_support(j)).collect();
    pairwise_check(&cols)
}

pub fn rows_equal_or_orthogonal(a: &BinaryMatrix) -> PairCheck {
    let rows: Vec<IndexSet> = (0..a.nrows()).map(|i| a.row_support(i)).collect();
    pairwise_check(&rows)
}

fn pairwise_check(vectors: &[IndexSet]) -> PairCheck {
    for j in 0..vectors.len() {
        for k in j + 1..vectors.len() {
            if vectors[j] != vectors[k] && !vectors[j].is_disjoint(&vectors[k]) {
                return PairCheck::Fail { first: j, second: k };
            }
        }
    }
    PairCheck::Pass
}
