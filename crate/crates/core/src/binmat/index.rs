use std::fmt;

use serde::{Deserialize, Serialize};

use crate::binmat::matrix::Matrix;
use crate::error::{Error, Result};

/// Sorted set of distinct 0-based indices. Displayed 1-based.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Sorts and deduplicates.
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        IndexSet(indices)
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn range(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    /// Builds from 1-based indices, rejecting 0, duplicates, and entries above `dim`.
    pub fn from_one_based(indices: &[usize], dim: usize) -> Result<Self> {
        let mut out = Vec::with_capacity(indices.len());
        for &i in indices {
            if i == 0 || i > dim {
                return Err(Error::InvalidIndexSet(format!("index {i} outside 1..={dim}")));
            }
            out.push(i - 1);
        }
        let set = IndexSet::new(out);
        if set.len() != indices.len() {
            return Err(Error::InvalidIndexSet("duplicate index".into()));
        }
        Ok(set)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        IndexSet::new(v)
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|&i| other.contains(i)).collect())
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|&i| !other.contains(i)).collect())
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|&i| !other.contains(i))
    }

    pub fn check_within(&self, dim: usize) -> Result<()> {
        match self.0.last() {
            Some(&i) if i >= dim => Err(Error::InvalidIndexSet(format!("index {} outside 1..={dim}", i + 1))),
            _ => Ok(()),
        }
    }

    /// True if `sets` are pairwise disjoint and cover `0..n`.
    pub fn is_partition_of(sets: &[IndexSet], n: usize) -> bool {
        let mut seen = vec![false; n];
        for s in sets {
            for i in s.iter() {
                if i >= n || seen[i] {
                    return false;
                }
                seen[i] = true;
            }
        }
        seen.into_iter().all(|b| b)
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        IndexSet::new(iter.into_iter().collect())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serialized 1-based.
impl Serialize for IndexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if v.contains(&0) {
            return Err(serde::de::Error::custom("indices are 1-based"));
        }
        Ok(IndexSet::new(v.into_iter().map(|i| i - 1).collect()))
    }
}

/// Bijection on `0..n`, stored as its image array: `i ↦ image[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &i in &image {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!(
                    "image {:?} is not a bijection on 1..={n}",
                    image.iter().map(|i| i + 1).collect::<Vec<_>>()
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { image })
    }

    pub fn from_one_based(image: &[usize]) -> Result<Self> {
        if image.contains(&0) {
            return Err(Error::InvalidPermutation("indices are 1-based".into()));
        }
        Permutation::new(image.iter().map(|i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    /// Swaps `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(i, j);
        Permutation { image }
    }

    /// The permutation sending `order[t]` to `t`, i.e. listing `order` first-to-last.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        Ok(Permutation::new(order.to_vec())?.inverse())
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { image: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Dimension("composing permutations of different sizes".into()));
        }
        Ok(Permutation { image: other.image.iter().map(|&i| self.image[i]).collect() })
    }
}

/// `B(i,j) = A(rowPerm⁻¹(i), colPerm⁻¹(j))`: row `r` of `A` moves to row `rowPerm(r)`.
pub fn permute<T: Clone>(a: &Matrix<T>, row_perm: &Permutation, col_perm: &Permutation) -> Result<Matrix<T>> {
    if row_perm.len() != a.nrows() || col_perm.len() != a.ncols() {
        return Err(Error::Dimension(format!(
            "permutations of sizes {}/{} do not fit a {}x{} matrix",
            row_perm.len(),
            col_perm.len(),
            a.nrows(),
            a.ncols()
        )));
    }
    let ri = row_perm.inverse();
    let ci = col_perm.inverse();
    Ok(Matrix::from_fn(a.nrows(), a.ncols(), |i, j| a.get(ri.apply(i), ci.apply(j)).clone()))
}
