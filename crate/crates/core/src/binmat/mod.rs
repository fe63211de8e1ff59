//! Matrix primitives: dense matrices over a [`Scalar`](crate::scalar::Scalar),
//! 0/1 matrices and the hat operator, index sets, permutations, and
//! connected components of symmetric 0/1 matrices.

mod binary;
mod components;
mod index;
mod matrix;

pub use binary::{columns_equal_or_orthogonal, hat, rows_equal_or_orthogonal, support, BinaryMatrix, PairCheck};
pub use components::{component_sets, irreducible_components, Component};
pub use index::{permute, IndexSet, Permutation};
pub use matrix::{CountMatrix, Matrix, RealMatrix};
