use std::fmt;

use crate::binmat::{CountMatrix, IndexSet, RealMatrix};
use crate::error::{Error, Result};
use crate::linedigraph::{augment, IncidencePair, MultiDigraph, Role};
use crate::realize::{BoundarySystem, FailureTag, PartLabel, SinkPartition, SourceDecomposition, VertexPartition};
use crate::scalar::Scalar;

/// Incidence matrices of the full multi digraph for one sink grouping.
///
/// Vertices are numbered transient first, then sources, then sinks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceLayout {
    pub incidence: IncidencePair,
    /// `A(Γ) = A⁺(A⁻)ᵀ`; entry `(i, j)` counts arcs `j -> i`.
    pub adjacency: CountMatrix,
    pub transient: usize,
    pub sources: usize,
    /// Part owning each sink vertex.
    pub sink_owners: Vec<PartLabel>,
}

impl IncidenceLayout {
    pub fn vertex_count(&self) -> usize {
        self.transient + self.sources + self.sink_owners.len()
    }

    pub fn role(&self, v: usize) -> Role {
        if v < self.transient {
            Role::Transient
        } else if v < self.transient + self.sources {
            Role::Source
        } else {
            Role::Sink
        }
    }
}

pub fn build_incidence(vp: &VertexPartition, sd: &SourceDecomposition, sp: &SinkPartition) -> Result<IncidenceLayout> {
    let incidence = augment(&vp.collapsed, &sd.blocks, &sp.flat())?;
    let adjacency = multi_digraph_adjacency(&incidence)?;
    Ok(IncidenceLayout {
        incidence,
        adjacency,
        transient: vp.transient_count(),
        sources: sd.k(),
        sink_owners: sp.owners(),
    })
}

pub fn multi_digraph_adjacency(p: &IncidencePair) -> Result<CountMatrix> {
    p.plus.count_product(&p.minus.transpose())
}

/// Arcs between vertices `i < j`: `ij` holds arcs `j -> i`, `ji` arcs `i -> j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMapEntry {
    pub i: usize,
    pub j: usize,
    pub ij: IndexSet,
    pub ji: IndexSet,
}

/// One entry per vertex pair joined by at least one arc, in row-major order.
/// Loops are reported by [`check_conditions`] from the diagonal.
pub fn edge_indices(adj: &CountMatrix, p: &IncidencePair) -> Result<Vec<EdgeMapEntry>> {
    let n = p.vertex_count();
    if adj.shape() != (n, n) {
        return Err(Error::Internal(format!("adjacency is {:?} for {n} vertices", adj.shape())));
    }
    let arcs = |head: usize, tail: usize| p.plus.row_support(head).intersection(&p.minus.row_support(tail));
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (a_ij, a_ji) = (*adj.get(i, j), *adj.get(j, i));
            if a_ij + a_ji == 0 {
                continue;
            }
            let (ij, ji) = (arcs(i, j), arcs(j, i));
            if ij.len() != a_ij as usize || ji.len() != a_ji as usize {
                return Err(Error::Internal(format!(
                    "arc sets {ij}/{ji} disagree with adjacency counts {a_ij}/{a_ji} at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            out.push(EdgeMapEntry { i, j, ij, ji });
        }
    }
    Ok(out)
}

/// A violated realizability condition. Indices are 0-based; [`describe`]
/// renders them 1-based.
///
/// [`describe`]: ConditionFailure::describe
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionFailure {
    Loop {
        vertex: usize,
        count: u32,
    },
    /// `(a_ij, a_ji)` outside `{(2,0), (1,1), (0,2), (0,0)}`.
    Form {
        i: usize,
        j: usize,
        a_ij: u32,
        a_ji: u32,
    },
    /// Parallel arcs `k, l` with different flow directions.
    ConcurrentMixed {
        i: usize,
        j: usize,
        pattern: (u32, u32),
        k: usize,
        l: usize,
    },
    /// Parallel arcs `k, l` with equal speeds.
    EqualSpeeds {
        i: usize,
        j: usize,
        pattern: (u32, u32),
        k: usize,
        l: usize,
    },
    /// Antiparallel arcs `k` (into `i`) and `l` (into `j`) on the same side.
    CountercurrentSameSide {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        plus: bool,
    },
}

impl ConditionFailure {
    pub fn tag(&self) -> FailureTag {
        match self {
            ConditionFailure::Loop { .. } | ConditionFailure::Form { .. } => FailureTag::Form,
            _ => FailureTag::Edgeid,
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            ConditionFailure::Loop { vertex, count } => {
                format!("form at vertex {}: {count} loop arc(s)", vertex + 1)
            }
            ConditionFailure::Form { i, j, a_ij, a_ji } => {
                format!("form at vertices ({},{}): arc counts ({a_ij},{a_ji})", i + 1, j + 1)
            }
            ConditionFailure::ConcurrentMixed { i, j, pattern, k, l } => format!(
                "edgeid at vertices ({},{}): ({},{}) pair ({},{}) mixes J+ and J-",
                i + 1,
                j + 1,
                pattern.0,
                pattern.1,
                k + 1,
                l + 1
            ),
            ConditionFailure::EqualSpeeds { i, j, pattern, k, l } => format!(
                "edgeid at vertices ({},{}): ({},{}) pair ({},{}) has equal speeds",
                i + 1,
                j + 1,
                pattern.0,
                pattern.1,
                k + 1,
                l + 1
            ),
            ConditionFailure::CountercurrentSameSide { i, j, k, l, plus } => format!(
                "edgeid at vertices ({},{}): (1,1) pair ({},{}) both in {}",
                i + 1,
                j + 1,
                k + 1,
                l + 1,
                if plus { "J+" } else { "J-" }
            ),
        }
    }
}

impl fmt::Display for ConditionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Checks the arc-count pattern of every vertex pair and the direction
/// and speed constraints on each pair of arcs. Empty means success.
pub fn check_conditions<T: Scalar>(
    bs: &BoundarySystem<T>,
    adj: &CountMatrix,
    edge_map: &[EdgeMapEntry],
    tol: &T,
) -> Vec<ConditionFailure> {
    let mut out = Vec::new();
    for v in 0..adj.nrows().min(adj.ncols()) {
        let count = *adj.get(v, v);
        if count != 0 {
            out.push(ConditionFailure::Loop { vertex: v, count });
        }
    }
    for e in edge_map {
        let (i, j) = (e.i, e.j);
        let pattern = (e.ij.len() as u32, e.ji.len() as u32);
        match pattern {
            (2, 0) | (0, 2) => {
                let pair = if pattern.0 == 2 { &e.ij } else { &e.ji };
                let (k, l) = (pair.as_slice()[0], pair.as_slice()[1]);
                if bs.is_plus(k) != bs.is_plus(l) {
                    out.push(ConditionFailure::ConcurrentMixed { i, j, pattern, k, l });
                } else if !(bs.speeds[k].clone() - bs.speeds[l].clone()).exceeds(tol) {
                    out.push(ConditionFailure::EqualSpeeds { i, j, pattern, k, l });
                }
            }
            (1, 1) => {
                let (k, l) = (e.ij.as_slice()[0], e.ji.as_slice()[0]);
                if bs.is_plus(k) == bs.is_plus(l) {
                    out.push(ConditionFailure::CountercurrentSameSide { i, j, k, l, plus: bs.is_plus(k) });
                }
            }
            (a_ij, a_ji) => out.push(ConditionFailure::Form { i, j, a_ij, a_ji }),
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    /// Both components flow the same way.
    Concurrent,
    /// One component in each direction.
    Countercurrent,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeKind::Concurrent => "conc",
            EdgeKind::Countercurrent => "counter",
        })
    }
}

/// Undirected edge carrying the components `(first, second)`.
///
/// `x0` is the endpoint parametrized by 0, `x1` the one parametrized by 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NetworkEdge {
    pub components: (usize, usize),
    pub kind: EdgeKind,
    pub x0: usize,
    pub x1: usize,
}

impl NetworkEdge {
    pub fn contains(&self, c: usize) -> bool {
        self.components.0 == c || self.components.1 == c
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkVertex {
    pub role: Role,
    /// Boundary rows located at this vertex; empty for sinks.
    pub rows: IndexSet,
    pub out_arcs: IndexSet,
    pub in_arcs: IndexSet,
}

/// Boundary rows of one vertex restricted to its own components.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexSystem<T: Scalar> {
    pub vertex: usize,
    pub rows: IndexSet,
    pub out_cols: IndexSet,
    pub in_cols: IndexSet,
    pub xi_out: RealMatrix<T>,
    pub xi_in: RealMatrix<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealizedNetwork<T: Scalar> {
    pub vertices: Vec<NetworkVertex>,
    /// Ordered by smallest component.
    pub edges: Vec<NetworkEdge>,
    /// One per non-sink vertex, in vertex order.
    pub systems: Vec<VertexSystem<T>>,
    /// Component `c` runs `arcs[c].0 -> arcs[c].1`.
    pub digraph: MultiDigraph,
    pub sink_partition: SinkPartition,
    pub speeds: Vec<T>,
    pub j_plus: IndexSet,
    pub j_minus: IndexSet,
}

impl<T: Scalar> RealizedNetwork<T> {
    pub fn edge_of(&self, c: usize) -> Option<usize> {
        self.edges.iter().position(|e| e.contains(c))
    }

    /// Component pairs as sorted `(min, max)`, in edge order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .map(|e| {
                let (a, b) = e.components;
                (a.min(b), a.max(b))
            })
            .collect()
    }
}

/// Builds the network for a grouping that passed [`check_conditions`].
pub fn assemble_network<T: Scalar>(
    bs: &BoundarySystem<T>,
    vp: &VertexPartition,
    sd: &SourceDecomposition,
    layout: &IncidenceLayout,
    edge_map: &[EdgeMapEntry],
    tol: &T,
) -> Result<RealizedNetwork<T>> {
    if !check_conditions(bs, &layout.adjacency, edge_map, tol).is_empty() {
        return Err(Error::Contract("network assembly requires all conditions to pass".into()));
    }
    let p = &layout.incidence;
    let size = bs.size();
    let speed_gt = |a: usize, b: usize| bs.speeds[a] > bs.speeds[b];

    let mut edges = Vec::with_capacity(edge_map.len());
    for e in edge_map {
        let edge = match (e.ij.len(), e.ji.len()) {
            (2, 0) | (0, 2) => {
                // Both arcs run tail -> head.
                let (pair, tail, head) = if e.ij.len() == 2 { (&e.ij, e.j, e.i) } else { (&e.ji, e.i, e.j) };
                let (k, l) = (pair.as_slice()[0], pair.as_slice()[1]);
                let components = if speed_gt(l, k) { (l, k) } else { (k, l) };
                let (x0, x1) = if bs.is_plus(k) { (tail, head) } else { (head, tail) };
                NetworkEdge { components, kind: EdgeKind::Concurrent, x0, x1 }
            }
            (1, 1) => {
                let (k, l) = (e.ij.as_slice()[0], e.ji.as_slice()[0]);
                // k runs j -> i, l runs i -> j; x = 0 sits at the tail of the J+ arc.
                if bs.is_plus(k) {
                    NetworkEdge { components: (k, l), kind: EdgeKind::Countercurrent, x0: e.j, x1: e.i }
                } else {
                    NetworkEdge { components: (l, k), kind: EdgeKind::Countercurrent, x0: e.i, x1: e.j }
                }
            }
            other => return Err(Error::Internal(format!("unexpected arc pattern {other:?}"))),
        };
        edges.push(edge);
    }
    edges.sort_by_key(|e| e.components.0.min(e.components.1));

    let arcs: Vec<(usize, usize)> = (0..size).map(|c| (p.tail(c), p.head(c))).collect();
    let digraph = MultiDigraph::new(layout.vertex_count(), arcs)?;

    let mut vertices = Vec::with_capacity(layout.vertex_count());
    let mut systems = Vec::new();
    for v in 0..layout.vertex_count() {
        let role = layout.role(v);
        let rows = match role {
            Role::Transient => vp.parts[v].clone(),
            Role::Source => sd.rows[v - layout.transient].clone(),
            _ => IndexSet::empty(),
        };
        let out_arcs = p.minus.row_support(v);
        let in_arcs = p.plus.row_support(v);
        if role != Role::Sink {
            systems.push(VertexSystem {
                vertex: v,
                rows: rows.clone(),
                out_cols: out_arcs.clone(),
                in_cols: in_arcs.clone(),
                xi_out: bs.xi_out.select(rows.as_slice(), out_arcs.as_slice()),
                xi_in: bs.xi_in.select(rows.as_slice(), in_arcs.as_slice()),
            });
        }
        vertices.push(NetworkVertex { role, rows, out_arcs, in_arcs });
    }

    let net = RealizedNetwork {
        vertices,
        edges,
        systems,
        digraph,
        sink_partition: SinkPartition { groups: Vec::new() },
        speeds: bs.speeds.clone(),
        j_plus: bs.j_plus.clone(),
        j_minus: bs.j_minus.clone(),
    };
    verify_network(bs, &net, tol)?;
    Ok(net)
}

/// Structural self-checks on an assembled network.
fn verify_network<T: Scalar>(bs: &BoundarySystem<T>, net: &RealizedNetwork<T>, tol: &T) -> Result<()> {
    let size = bs.size();
    let mut seen = vec![0usize; size];
    for e in &net.edges {
        let (k, l) = e.components;
        seen[k] += 1;
        seen[l] += 1;
        match e.kind {
            EdgeKind::Concurrent => {
                if bs.is_plus(k) != bs.is_plus(l) || !(bs.speeds[k].clone() - bs.speeds[l].clone()).exceeds(tol) {
                    return Err(Error::Internal(format!("concurrent edge ({},{}) is invalid", k + 1, l + 1)));
                }
            }
            EdgeKind::Countercurrent => {
                if bs.is_plus(k) == bs.is_plus(l) {
                    return Err(Error::Internal(format!("countercurrent edge ({},{}) is invalid", k + 1, l + 1)));
                }
            }
        }
        for c in [k, l] {
            let (tail, head) = net.digraph.arcs[c];
            let expect = if bs.is_plus(c) { (e.x0, e.x1) } else { (e.x1, e.x0) };
            if (tail, head) != expect {
                return Err(Error::Internal(format!("component {} disagrees with its edge orientation", c + 1)));
            }
        }
    }
    if let Some(c) = seen.iter().position(|&n| n != 1) {
        return Err(Error::Internal(format!("component {} lies on {} edges", c + 1, seen[c])));
    }
    // Every nonzero coefficient of a vertex's rows must fall on its own components.
    for s in &net.systems {
        for i in s.rows.iter() {
            for c in 0..size {
                if bs.xi_out.get(i, c).exceeds(tol) && !s.out_cols.contains(c)
                    || bs.xi_in.get(i, c).exceeds(tol) && !s.in_cols.contains(c)
                {
                    return Err(Error::Internal(format!(
                        "row {} couples component {} outside vertex {}",
                        i + 1,
                        c + 1,
                        s.vertex + 1
                    )));
                }
            }
        }
    }
    Ok(())
}
