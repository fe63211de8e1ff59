//! Forward direction: from a metric graph carrying 2x2 hyperbolic systems
//! and vertex conditions to the flat boundary system over Riemann
//! invariants.

mod assembly;
mod classify;
mod diag;
mod generate;

pub use assembly::{
    assemble_global, build_contraction, compile, flow_checks, vertex_block, wellposed, Compilation, VertexAssembly,
    VertexCompile, VertexFlow, WellPosedness, DET_TOLERANCE,
};
pub use classify::{classify, count_outgoing, is_outgoing, InvariantClassification, OutgoingCounts};
pub use diag::{diagonalize_edge, eigen_of, EdgeEigen};
pub use generate::{random_problem, GeneratorConfig};

use std::collections::BTreeSet;

use crate::binmat::RealMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which endpoint of an edge is parametrized by `x = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Tail,
    Head,
}

/// Coefficients of one edge: either the matrix itself or its eigen-data.
#[derive(Clone, Debug, PartialEq)]
pub enum EdgeData<T: Scalar> {
    Matrix(RealMatrix<T>),
    /// Eigenvalues `λ₊ > λ₋` and the diagonalizing matrix with columns `(f₊, f₋)`.
    Eigen {
        lambda_plus: T,
        lambda_minus: T,
        f: RealMatrix<T>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphEdge<T: Scalar> {
    pub tail: usize,
    pub head: usize,
    pub x0: Endpoint,
    pub data: EdgeData<T>,
}

impl<T: Scalar> GraphEdge<T> {
    /// Endpoint with `x = 0`.
    pub fn zero_end(&self) -> usize {
        match self.x0 {
            Endpoint::Tail => self.tail,
            Endpoint::Head => self.head,
        }
    }

    /// Endpoint with `x = 1`.
    pub fn one_end(&self) -> usize {
        match self.x0 {
            Endpoint::Tail => self.head,
            Endpoint::Head => self.tail,
        }
    }

    /// `Some(0)` or `Some(1)` when `v` is an endpoint.
    pub fn l(&self, v: usize) -> Option<u8> {
        if v == self.zero_end() {
            Some(0)
        } else if v == self.one_end() {
            Some(1)
        } else {
            None
        }
    }
}

/// Simple connected graph with per-edge systems and per-vertex conditions.
///
/// `phi[v]` has `k_v` rows and two columns per incident edge, edges in
/// ascending index order, `(p₁, p₂)` within each edge. Sinks carry no
/// conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricGraphProblem<T: Scalar> {
    pub vertex_names: Vec<String>,
    pub edges: Vec<GraphEdge<T>>,
    pub phi: Vec<Option<RealMatrix<T>>>,
}

impl<T: Scalar> MetricGraphProblem<T> {
    pub fn new(vertex_names: Vec<String>, edges: Vec<GraphEdge<T>>, phi: Vec<Option<RealMatrix<T>>>) -> Result<Self> {
        let r = vertex_names.len();
        if edges.is_empty() {
            return Err(Error::InvalidProblem("the graph has no edges".into()));
        }
        if phi.len() != r {
            return Err(Error::Dimension(format!("{} condition slots for {r} vertices", phi.len())));
        }
        let mut seen = BTreeSet::new();
        for (j, e) in edges.iter().enumerate() {
            if e.tail >= r || e.head >= r {
                return Err(Error::InvalidProblem(format!("edge {} has an endpoint outside 1..={r}", j + 1)));
            }
            if e.tail == e.head {
                return Err(Error::InvalidProblem(format!("edge {} is a loop", j + 1)));
            }
            if !seen.insert((e.tail.min(e.head), e.tail.max(e.head))) {
                return Err(Error::InvalidProblem(format!("edge {} duplicates an earlier edge", j + 1)));
            }
            match &e.data {
                EdgeData::Matrix(m) => {
                    if m.shape() != (2, 2) {
                        return Err(Error::Dimension(format!("edge {} matrix is not 2x2", j + 1)));
                    }
                    m.check_finite()?;
                }
                EdgeData::Eigen { f, lambda_plus, lambda_minus } => {
                    if f.shape() != (2, 2) {
                        return Err(Error::Dimension(format!("edge {} eigenvector matrix is not 2x2", j + 1)));
                    }
                    f.check_finite()?;
                    if !lambda_plus.is_finite_value() || !lambda_minus.is_finite_value() {
                        return Err(Error::InvalidProblem(format!("edge {} has a non-finite eigenvalue", j + 1)));
                    }
                }
            }
        }
        for p in phi.iter().flatten() {
            p.check_finite()?;
        }
        let problem = MetricGraphProblem { vertex_names, edges, phi };
        if let Some(v) = (0..r).find(|&v| problem.incident(v).is_empty()) {
            return Err(Error::InvalidProblem(format!("vertex {} has no edges", v + 1)));
        }
        if !problem.is_connected() {
            return Err(Error::InvalidProblem("the graph is not connected".into()));
        }
        Ok(problem)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Incident edges in ascending order.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&j| self.edges[j].tail == v || self.edges[j].head == v).collect()
    }

    fn is_connected(&self) -> bool {
        let r = self.vertex_count();
        let mut seen = vec![false; r];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.tail, e.head), (e.head, e.tail)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}
