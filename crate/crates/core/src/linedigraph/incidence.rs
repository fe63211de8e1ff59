use std::fmt;

use serde::Serialize;

use crate::binmat::{BinaryMatrix, CountMatrix, IndexSet, Matrix};
use crate::error::{Error, Result};
use crate::linedigraph::iso::LabeledGraph;
use crate::linedigraph::Collapsed;

/// Incoming (`plus`) and outgoing (`minus`) incidence matrices over the same
/// arc columns. Each column of each matrix has exactly one 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidencePair {
    pub plus: BinaryMatrix,
    pub minus: BinaryMatrix,
}

impl IncidencePair {
    pub fn new(plus: BinaryMatrix, minus: BinaryMatrix) -> Result<Self> {
        if plus.shape() != minus.shape() {
            return Err(Error::Dimension(format!(
                "incidence matrices have shapes {:?} and {:?}",
                plus.shape(),
                minus.shape()
            )));
        }
        for (name, m) in [("incoming", &plus), ("outgoing", &minus)] {
            for j in 0..m.ncols() {
                let ones = m.col_support(j).len();
                if ones != 1 {
                    return Err(Error::Contract(format!(
                        "{name} incidence column {} has {ones} nonzero entries",
                        j + 1
                    )));
                }
            }
        }
        Ok(IncidencePair { plus, minus })
    }

    pub fn vertex_count(&self) -> usize {
        self.plus.nrows()
    }

    pub fn arc_count(&self) -> usize {
        self.plus.ncols()
    }

    pub fn head(&self, arc: usize) -> usize {
        self.plus.col_support(arc).first().expect("validated incidence column")
    }

    pub fn tail(&self, arc: usize) -> usize {
        self.minus.col_support(arc).first().expect("validated incidence column")
    }
}

/// Appends source and sink rows to the collapsed matrices.
///
/// Incoming matrix: transient rows, one zero row per source group, one
/// indicator row per sink group. Outgoing matrix: transient rows, one
/// indicator row per source group, one zero row per sink group.
pub fn augment(c: &Collapsed, source_groups: &[IndexSet], sink_groups: &[IndexSet]) -> Result<IncidencePair> {
    let m = c.plus.ncols();
    check_groups("source", source_groups, &c.source_arcs(), m)?;
    check_groups("sink", sink_groups, &c.sink_arcs(), m)?;
    let n = c.transient_count();
    let (k, z) = (source_groups.len(), sink_groups.len());
    let mut plus = BinaryMatrix::zeros(n + k + z, m);
    let mut minus = BinaryMatrix::zeros(n + k + z, m);
    for i in 0..n {
        for j in 0..m {
            plus.set(i, j, c.plus.get(i, j));
            minus.set(i, j, c.minus.get(i, j));
        }
    }
    for (s, g) in source_groups.iter().enumerate() {
        for j in g.iter() {
            minus.set(n + s, j, true);
        }
    }
    for (t, g) in sink_groups.iter().enumerate() {
        for j in g.iter() {
            plus.set(n + k + t, j, true);
        }
    }
    IncidencePair::new(plus, minus)
}

/// All sources lumped into one vertex and all sinks into another.
pub fn augment_lumped(c: &Collapsed) -> Result<IncidencePair> {
    let single = |s: IndexSet| if s.is_empty() { vec![] } else { vec![s] };
    augment(c, &single(c.source_arcs()), &single(c.sink_arcs()))
}

fn check_groups(kind: &str, groups: &[IndexSet], expected: &IndexSet, m: usize) -> Result<()> {
    if groups.iter().any(IndexSet::is_empty) {
        return Err(Error::Contract(format!("empty {kind} group")));
    }
    let mut seen = IndexSet::empty();
    for g in groups {
        g.check_within(m)?;
        if !g.is_disjoint(&seen) {
            return Err(Error::Contract(format!("{kind} groups overlap at {g}")));
        }
        seen = seen.union(g);
    }
    if &seen != expected {
        return Err(Error::Contract(format!("{kind} groups cover {seen}, expected {expected}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Transient,
    Source,
    Sink,
    Isolated,
}

impl Role {
    pub fn from_degrees(indeg: usize, outdeg: usize) -> Self {
        match (indeg > 0, outdeg > 0) {
            (true, true) => Role::Transient,
            (false, true) => Role::Source,
            (true, false) => Role::Sink,
            (false, false) => Role::Isolated,
        }
    }

    pub fn code(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::Transient => "transient",
            Role::Source => "source",
            Role::Sink => "sink",
            Role::Isolated => "isolated",
        };
        f.write_str(s)
    }
}

/// Multi digraph with indexed arcs; arc `a` runs `arcs[a].0 -> arcs[a].1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MultiDigraph {
    pub vertex_count: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl MultiDigraph {
    pub fn new(vertex_count: usize, arcs: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(t, h)) = arcs.iter().find(|&&(t, h)| t >= vertex_count || h >= vertex_count) {
            return Err(Error::Dimension(format!(
                "arc ({},{}) refers to a vertex outside 1..={vertex_count}",
                t + 1,
                h + 1
            )));
        }
        Ok(MultiDigraph { vertex_count, arcs })
    }

    pub fn has_loops(&self) -> bool {
        self.arcs.iter().any(|(t, h)| t == h)
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|a| a.1 == v).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|a| a.0 == v).count()
    }

    pub fn roles(&self) -> Vec<Role> {
        (0..self.vertex_count).map(|v| Role::from_degrees(self.in_degree(v), self.out_degree(v))).collect()
    }

    pub fn incidence(&self) -> IncidencePair {
        let n = self.vertex_count;
        let m = self.arcs.len();
        let plus = BinaryMatrix::from_fn(n, m, |v, a| self.arcs[a].1 == v);
        let minus = BinaryMatrix::from_fn(n, m, |v, a| self.arcs[a].0 == v);
        IncidencePair { plus, minus }
    }

    /// Entry `(i,j)` counts arcs `j -> i`.
    pub fn adjacency(&self) -> CountMatrix {
        let mut a = Matrix::filled(self.vertex_count, self.vertex_count, 0u32);
        for &(t, h) in &self.arcs {
            let v = *a.get(h, t);
            a.set(h, t, v + 1);
        }
        a
    }

    /// Drops vertices without arcs, keeping the order of the others.
    pub fn without_isolated(&self) -> MultiDigraph {
        let keep: Vec<usize> = (0..self.vertex_count).filter(|&v| self.in_degree(v) + self.out_degree(v) > 0).collect();
        let pos = |v: usize| keep.iter().position(|&k| k == v).expect("endpoint is kept");
        MultiDigraph { vertex_count: keep.len(), arcs: self.arcs.iter().map(|&(t, h)| (pos(t), pos(h))).collect() }
    }

    /// Labeled form for isomorphism tests. Vertices are colored by role;
    /// arcs carry their index when `keep_arc_indices` is set.
    pub fn to_labeled(&self, keep_arc_indices: bool) -> LabeledGraph {
        LabeledGraph {
            vertex_labels: self.roles().into_iter().map(Role::code).collect(),
            edges: self
                .arcs
                .iter()
                .enumerate()
                .map(|(a, &(t, h))| (t, h, if keep_arc_indices { a as u64 + 1 } else { 0 }))
                .collect(),
            directed: true,
        }
    }

    pub fn is_isomorphic(&self, other: &MultiDigraph, keep_arc_indices: bool) -> bool {
        self.to_labeled(keep_arc_indices).is_isomorphic(&other.to_labeled(keep_arc_indices))
    }
}

/// `A⁺(A⁻)ᵀ` and the multi digraph read off the incidence columns.
pub fn host_adjacency(p: &IncidencePair) -> Result<(CountMatrix, MultiDigraph)> {
    let adj = p.plus.count_product(&p.minus.transpose())?;
    let arcs = (0..p.arc_count()).map(|a| (p.tail(a), p.head(a))).collect();
    let g = MultiDigraph::new(p.vertex_count(), arcs)?;
    Ok((adj, g))
}

/// `(A⁻)ᵀA⁺`: entry `(k,j)` is 1 when arc `j` enters the tail of arc `k`.
pub fn line_adjacency(p: &IncidencePair) -> Result<BinaryMatrix> {
    let c = p.minus.transpose().count_product(&p.plus)?;
    BinaryMatrix::from_counts(&c)
}
