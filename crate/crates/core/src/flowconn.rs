//! Flow connectivity at a single vertex: which incoming and outgoing arcs
//! share a nonzero coefficient in some boundary row.

use serde::Serialize;

use crate::binmat::{component_sets, hat, BinaryMatrix, IndexSet, RealMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Boundary rows at one vertex split into outgoing and incoming columns.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexBoundaryBlock<T: Scalar> {
    pub psi_out: RealMatrix<T>,
    pub psi_in: RealMatrix<T>,
    pub out_arcs: Vec<usize>,
    pub in_arcs: Vec<usize>,
    pub tol: T,
}

impl<T: Scalar> VertexBoundaryBlock<T> {
    /// Validates shapes and requires every row and column of `psi_out`
    /// to have a nonzero entry.
    pub fn new(
        psi_out: RealMatrix<T>,
        psi_in: RealMatrix<T>,
        out_arcs: Vec<usize>,
        in_arcs: Vec<usize>,
        tol: T,
    ) -> Result<Self> {
        if psi_out.nrows() != psi_in.nrows() {
            return Err(Error::InvalidBlock(format!(
                "outgoing part has {} rows, incoming part {}",
                psi_out.nrows(),
                psi_in.nrows()
            )));
        }
        if psi_out.ncols() != out_arcs.len() || psi_in.ncols() != in_arcs.len() {
            return Err(Error::InvalidBlock("arc lists do not match column counts".into()));
        }
        psi_out.check_finite()?;
        psi_in.check_finite()?;
        let h = hat(&psi_out, &tol);
        if let Some(j) = (0..h.ncols()).find(|&j| h.is_zero_col(j)) {
            return Err(Error::InvalidBlock(format!("outgoing column {} (arc {}) is zero", j + 1, out_arcs[j] + 1)));
        }
        if let Some(i) = (0..h.nrows()).find(|&i| h.is_zero_row(i)) {
            return Err(Error::InvalidBlock(format!("outgoing row {} is zero", i + 1)));
        }
        Ok(VertexBoundaryBlock { psi_out, psi_in, out_arcs, in_arcs, tol })
    }

    pub fn rows(&self) -> usize {
        self.psi_out.nrows()
    }

    pub fn is_source(&self) -> bool {
        self.in_arcs.is_empty()
    }
}

/// 0/1 matrix with the arcs its rows and columns stand for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityMatrix {
    pub matrix: BinaryMatrix,
    pub row_arcs: Vec<usize>,
    pub col_arcs: Vec<usize>,
}

/// Outgoing arcs versus incoming arcs at a transient vertex.
pub fn transient_connectivity<T: Scalar>(b: &VertexBoundaryBlock<T>) -> ConnectivityMatrix {
    let out = hat(&b.psi_out, &b.tol);
    let inn = hat(&b.psi_in, &b.tol);
    ConnectivityMatrix {
        matrix: out.transpose().bool_product(&inn).expect("row counts validated"),
        row_arcs: b.out_arcs.clone(),
        col_arcs: b.in_arcs.clone(),
    }
}

/// Outgoing arcs versus outgoing arcs at a source.
pub fn source_connectivity<T: Scalar>(b: &VertexBoundaryBlock<T>) -> Result<ConnectivityMatrix> {
    if !b.is_source() {
        return Err(Error::WrongVertexKind(format!(
            "source connectivity requested for a vertex with {} incoming arcs",
            b.in_arcs.len()
        )));
    }
    let out = hat(&b.psi_out, &b.tol);
    Ok(ConnectivityMatrix {
        matrix: out.transpose().bool_product(&out)?,
        row_arcs: b.out_arcs.clone(),
        col_arcs: b.out_arcs.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum FullConnectivity {
    Pass,
    /// First zero entry in row-major order, 0-based.
    Fail {
        row: usize,
        col: usize,
    },
}

impl FullConnectivity {
    pub fn passed(&self) -> bool {
        matches!(self, FullConnectivity::Pass)
    }
}

pub fn check_full_connectivity(c: &ConnectivityMatrix) -> FullConnectivity {
    let m = &c.matrix;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if !m.get(i, j) {
                return FullConnectivity::Fail { row: i, col: j };
            }
        }
    }
    FullConnectivity::Pass
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Irreducibility {
    Pass,
    /// Components as positions within the matrix, 0-based.
    Fail {
        components: Vec<IndexSet>,
    },
}

impl Irreducibility {
    pub fn passed(&self) -> bool {
        matches!(self, Irreducibility::Pass)
    }
}

pub fn check_irreducible(c: &ConnectivityMatrix) -> Result<Irreducibility> {
    let comps = component_sets(&c.matrix)?;
    Ok(if comps.len() <= 1 { Irreducibility::Pass } else { Irreducibility::Fail { components: comps } })
}

/// Smallest row whose coefficients are nonzero in every column of both parts.
pub fn has_kirchhoff_row<T: Scalar>(b: &VertexBoundaryBlock<T>) -> Option<usize> {
    (0..b.rows()).find(|&r| {
        b.psi_out.row(r).iter().all(|v| v.exceeds(&b.tol)) && b.psi_in.row(r).iter().all(|v| v.exceeds(&b.tol))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(out: &[&[f64]], inn: &[&[f64]]) -> Result<VertexBoundaryBlock<f64>> {
        let po = RealMatrix::from_f64_rows(out).unwrap();
        let pi = RealMatrix::from_f64_rows(inn).unwrap();
        let (a, b) = (po.ncols(), pi.ncols());
        VertexBoundaryBlock::new(po, pi, (0..a).collect(), (a..a + b).collect(), 0.0)
    }

    #[test]
    fn identity_blocks_are_not_fully_connected() {
        let b = block(&[&[1.0, 0.0], &[0.0, 1.0]], &[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        let c = transient_connectivity(&b);
        assert_eq!(c.matrix, BinaryMatrix::identity(2));
        assert_eq!(check_full_connectivity(&c), FullConnectivity::Fail { row: 0, col: 1 });
        assert_eq!(has_kirchhoff_row(&b), None);
    }

    #[test]
    fn kirchhoff_row_gives_all_ones() {
        let b = block(&[&[1.0, 0.0], &[2.0, -1.0]], &[&[0.0, 1.0], &[3.0, 1.0]]).unwrap();
        assert_eq!(has_kirchhoff_row(&b), Some(1));
        assert!(check_full_connectivity(&transient_connectivity(&b)).passed());
    }

    #[test]
    fn single_pair() {
        let b = block(&[&[1.0], &[1.0]], &[&[2.0], &[0.0]]).unwrap();
        assert_eq!(transient_connectivity(&b).matrix, BinaryMatrix::ones(1, 1));
    }

    #[test]
    fn ass1_is_enforced() {
        assert!(matches!(block(&[&[1.0, 0.0]], &[&[1.0]]), Err(Error::InvalidBlock(_))));
        assert!(matches!(block(&[&[1.0], &[0.0]], &[&[1.0], &[1.0]]), Err(Error::InvalidBlock(_))));
    }

    #[test]
    fn source_checks() {
        let b = block(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]], &[&[], &[], &[]]).unwrap();
        let c = source_connectivity(&b).unwrap();
        assert_eq!(c.matrix, BinaryMatrix::identity(3));
        match check_irreducible(&c).unwrap() {
            Irreducibility::Fail { components } => assert_eq!(components.len(), 3),
            other => panic!("expected failure, got {other:?}"),
        }
        let t = block(&[&[1.0]], &[&[1.0]]).unwrap();
        assert!(matches!(source_connectivity(&t), Err(Error::WrongVertexKind(_))));
    }

    #[test]
    fn banded_source_is_irreducible() {
        let b = block(
            &[&[0.0, 1.0, 1.0, 0.0], &[1.0, 0.0, 0.0, 0.0], &[1.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 1.0]],
            &[&[], &[], &[], &[]],
        )
        .unwrap();
        let c = source_connectivity(&b).unwrap();
        assert_eq!(
            c.matrix,
            BinaryMatrix::from_01(&[&[1, 1, 0, 0], &[1, 1, 1, 0], &[0, 1, 1, 1], &[0, 0, 1, 1]]).unwrap()
        );
        assert!(check_irreducible(&c).unwrap().passed());
    }
}
