//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use graph_realize::binmat::{BinaryMatrix, IndexSet, RealMatrix};
use graph_realize::flowconn::VertexBoundaryBlock;
use graph_realize::linedigraph::{analyze, augment, line_adjacency, IncidencePair, MultiDigraph, Recognition};
use graph_realize::realize::BoundarySystem;
use graph_realize::{Rational, Result};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

pub fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

pub fn qmatrix(rows: &[&[i64]]) -> RealMatrix<Rational> {
    RealMatrix::from_i64_rows(rows).unwrap()
}

pub fn set(one_based: &[usize], dim: usize) -> IndexSet {
    IndexSet::from_one_based(one_based, dim).unwrap()
}

/// Three-vertex worked example; `j_minus` is 1-based.
pub fn three_vertex_system(j_minus: &[usize]) -> BoundarySystem<Rational> {
    let xi_out = qmatrix(&[
        &[0, 1, 1, 0, 0, 0],
        &[1, 0, 0, 0, 0, 0],
        &[1, 1, 0, 0, 0, 0],
        &[0, 0, 1, 1, 0, 0],
        &[0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 1],
    ]);
    let xi_in = qmatrix(&[
        &[0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0],
        &[-1, -1, 0, 0, 0, -1],
        &[0, 0, -1, -1, -1, 0],
    ]);
    let minus = set(j_minus, 6);
    let plus = IndexSet::range(6).difference(&minus);
    let speeds = [3, 2, 5, 4, 1, 1].iter().map(|&c| q(c)).collect();
    BoundarySystem::new(3, xi_out, xi_in, plus, minus, speeds).unwrap()
}

/// Line digraph on seven arcs with two transient vertices.
pub fn seven_arc_matrix() -> BinaryMatrix {
    BinaryMatrix::from_01(&[
        &[0, 0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0, 0],
        &[1, 1, 0, 1, 0, 0, 0],
        &[0, 0, 1, 0, 1, 0, 0],
        &[0, 0, 0, 0, 0, 0, 0],
        &[0, 0, 1, 0, 1, 0, 0],
        &[0, 0, 0, 0, 0, 0, 0],
    ])
    .unwrap()
}

/// Line digraph built arc by arc: `(k, j)` is set when arc `j` ends where
/// arc `k` starts.
pub fn line_digraph_oracle(arcs: &[(usize, usize)]) -> BinaryMatrix {
    let m = arcs.len();
    let mut a = BinaryMatrix::zeros(m, m);
    for k in 0..m {
        for j in 0..m {
            if arcs[j].1 == arcs[k].0 {
                a.set(k, j, true);
            }
        }
    }
    a
}

/// Zero diagonal and every column pair equal or disjoint, by brute force.
pub fn criterion_oracle(a: &BinaryMatrix) -> bool {
    let n = a.nrows();
    if (0..n).any(|i| a.get(i, i)) {
        return false;
    }
    for p in 0..n {
        for r in p + 1..n {
            let equal = (0..n).all(|i| a.get(i, p) == a.get(i, r));
            let disjoint = (0..n).all(|i| !(a.get(i, p) && a.get(i, r)));
            if !equal && !disjoint {
                return false;
            }
        }
    }
    true
}

/// Random square 0/1 matrix that fails the recognition criterion. Half of
/// them have a zero diagonal, so the failure is in the columns.
pub fn random_failing_matrix(rng: &mut impl Rng) -> BinaryMatrix {
    loop {
        let n = rng.gen_range(2..=8);
        let density = rng.gen_range(0.15..0.6);
        let zero_diag = rng.gen_bool(0.5);
        let a = BinaryMatrix::from_fn(n, n, |i, j| !(zero_diag && i == j) && rng.gen_bool(density));
        if !criterion_oracle(&a) {
            return a;
        }
    }
}

/// Whether a failing verdict points at an actual violation.
pub fn witness_is_valid(a: &BinaryMatrix, r: &Recognition) -> bool {
    let n = a.nrows();
    match *r {
        Recognition::Pass => false,
        Recognition::Loop { index } => index < n && a.get(index, index),
        Recognition::Columns { first, second } => {
            let differ = (0..n).any(|i| a.get(i, first) != a.get(i, second));
            let overlap = (0..n).any(|i| a.get(i, first) && a.get(i, second));
            (0..n).all(|i| !a.get(i, i)) && first != second && differ && overlap
        }
    }
}

fn random_entry(rng: &mut impl Rng, density: f64) -> f64 {
    if rng.gen_bool(density) {
        let v = rng.gen_range(0.5..2.0);
        if rng.gen_bool(0.5) {
            v
        } else {
            -v
        }
    } else if rng.gen_bool(0.1) {
        // Below the tolerance; must count as zero.
        1e-15
    } else {
        0.0
    }
}

pub const BLOCK_TOL: f64 = 1e-12;

/// Random block with every row and column of the outgoing part nonzero.
/// Sources have no incoming columns. Roughly a third carry a dense row.
pub fn random_block(rng: &mut impl Rng, source: bool) -> VertexBoundaryBlock<f64> {
    let out_n = rng.gen_range(1..=5);
    let in_n = if source { 0 } else { rng.gen_range(1..=5) };
    let rows = rng.gen_range(1..=5);
    let density = rng.gen_range(0.2..0.7);
    let mut po: Vec<Vec<f64>> = (0..rows).map(|_| (0..out_n).map(|_| random_entry(rng, density)).collect()).collect();
    let mut pi: Vec<Vec<f64>> = (0..rows).map(|_| (0..in_n).map(|_| random_entry(rng, density)).collect()).collect();
    for j in 0..out_n {
        if po.iter().all(|r| r[j].abs() <= BLOCK_TOL) {
            po[rng.gen_range(0..rows)][j] = 1.0;
        }
    }
    for r in po.iter_mut() {
        if r.iter().all(|x| x.abs() <= BLOCK_TOL) {
            r[rng.gen_range(0..out_n)] = -1.0;
        }
    }
    if rng.gen_bool(0.35) {
        let r = rng.gen_range(0..rows);
        po[r].iter_mut().for_each(|x| *x = rng.gen_range(0.5..2.0));
        pi[r].iter_mut().for_each(|x| *x = -rng.gen_range(0.5..2.0));
    }
    let po = RealMatrix::from_rows_with_cols(po, out_n).unwrap();
    let pi = RealMatrix::from_rows_with_cols(pi, in_n).unwrap();
    VertexBoundaryBlock::new(po, pi, (0..out_n).collect(), (out_n..out_n + in_n).collect(), BLOCK_TOL).unwrap()
}

/// Flow connection evaluated directly: outgoing `j` and incoming `k` are
/// connected when some row is nonzero at both.
pub fn transient_oracle(b: &VertexBoundaryBlock<f64>) -> BinaryMatrix {
    let (a, c) = (b.psi_out.ncols(), b.psi_in.ncols());
    let mut m = BinaryMatrix::zeros(a, c);
    for j in 0..a {
        for k in 0..c {
            for r in 0..b.rows() {
                if b.psi_out.get(r, j).abs() > b.tol && b.psi_in.get(r, k).abs() > b.tol {
                    m.set(j, k, true);
                }
            }
        }
    }
    m
}

pub fn source_oracle(b: &VertexBoundaryBlock<f64>) -> BinaryMatrix {
    let a = b.psi_out.ncols();
    let mut m = BinaryMatrix::zeros(a, a);
    for j in 0..a {
        for k in 0..a {
            for r in 0..b.rows() {
                if b.psi_out.get(r, j).abs() > b.tol && b.psi_out.get(r, k).abs() > b.tol {
                    m.set(j, k, true);
                }
            }
        }
    }
    m
}

/// Rows nonzero in every column of both parts.
pub fn dense_rows(b: &VertexBoundaryBlock<f64>) -> Vec<usize> {
    (0..b.rows()).filter(|&r| b.psi_out.row(r).iter().chain(b.psi_in.row(r)).all(|x| x.abs() > b.tol)).collect()
}

/// Connected components of a symmetric 0/1 matrix by depth-first search.
pub fn component_count(s: &BinaryMatrix) -> usize {
    let n = s.nrows();
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for (w, done) in seen.iter_mut().enumerate() {
                if s.get(v, w) && !*done {
                    *done = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

/// Reconstructs the host of `g` from its line digraph, grouping source and
/// sink arcs by their original end vertex. Arc columns keep their indices.
pub fn reconstruct(g: &MultiDigraph) -> Result<IncidencePair> {
    let a = line_adjacency(&g.incidence())?;
    let c = analyze(&a)?;
    let group = |pick: fn(&(usize, usize)) -> usize, keep: &dyn Fn(usize) -> bool| -> Vec<IndexSet> {
        (0..g.vertex_count)
            .filter(|&v| keep(v))
            .map(|v| IndexSet::new((0..g.arcs.len()).filter(|&a| pick(&g.arcs[a]) == v).collect()))
            .collect()
    };
    let sources = group(|a| a.0, &|v| g.in_degree(v) == 0 && g.out_degree(v) > 0);
    let sinks = group(|a| a.1, &|v| g.out_degree(v) == 0 && g.in_degree(v) > 0);
    augment(&c, &sources, &sinks)
}
