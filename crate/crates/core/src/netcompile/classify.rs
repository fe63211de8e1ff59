use crate::binmat::IndexSet;
use crate::error::{Error, Result};
use crate::linedigraph::Role;
use crate::netcompile::{EdgeEigen, MetricGraphProblem};
use crate::scalar::Scalar;

/// Whether invariant `c` (0 for `u₁`, 1 for `u₂`) of an edge with `alpha`
/// positive eigenvalues is outgoing at the endpoint with parameter `l`.
pub fn is_outgoing(alpha: u8, l: u8, c: usize) -> bool {
    match (c, l) {
        (0, 0) => alpha >= 1,
        (0, _) => alpha == 0,
        (_, 0) => alpha == 2,
        (_, _) => alpha <= 1,
    }
}

/// Flow classification of all invariants and the global component numbering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantClassification {
    /// Positive eigenvalues per edge.
    pub alpha: Vec<u8>,
    pub j0: IndexSet,
    pub j1: IndexSet,
    pub j2: IndexSet,
    pub roles: Vec<Role>,
    /// Outgoing count per vertex.
    pub k: Vec<usize>,
    /// Component index of `(u₁, u₂)` on each edge.
    pub component: Vec<[usize; 2]>,
    pub j_plus: IndexSet,
    pub j_minus: IndexSet,
}

impl InvariantClassification {
    pub fn size(&self) -> usize {
        2 * self.alpha.len()
    }

    /// Edge and invariant carried by a component.
    pub fn invariant_of(&self, comp: usize) -> Option<(usize, usize)> {
        self.component.iter().enumerate().find_map(|(j, pair)| pair.iter().position(|&x| x == comp).map(|c| (j, c)))
    }
}

/// The three equivalent counts of outgoing values at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutgoingCounts {
    pub by_parameters: usize,
    pub by_partition: usize,
    pub by_flags: usize,
}

/// Outgoing value count at `v`, evaluated three ways; they must agree.
pub fn count_outgoing<T: Scalar>(problem: &MetricGraphProblem<T>, alpha: &[u8], v: usize) -> Result<OutgoingCounts> {
    let inc = problem.incident(v);
    let l_of = |j: usize| problem.edges[j].l(v).expect("incident edge") as i64;
    let by_parameters: i64 = inc.iter().map(|&j| 2 * (1 - alpha[j] as i64) * l_of(j) + alpha[j] as i64).sum();
    let count = |a: u8, l: i64| inc.iter().filter(|&&j| alpha[j] == a && l_of(j) == l).count();
    let ones = inc.iter().filter(|&&j| alpha[j] == 1).count();
    let by_partition = ones + 2 * (count(2, 0) + count(0, 1));
    let by_flags = inc.iter().map(|&j| (0..2).filter(|&c| is_outgoing(alpha[j], l_of(j) as u8, c)).count()).sum();
    let counts = OutgoingCounts { by_parameters: by_parameters as usize, by_partition, by_flags };
    if by_parameters < 0 || counts.by_parameters != by_partition || by_partition != by_flags {
        return Err(Error::Internal(format!("outgoing counts disagree at vertex {}: {counts:?}", v + 1)));
    }
    Ok(counts)
}

/// Classifies every invariant and numbers the components: first invariants
/// of edges with a positive eigenvalue, second invariants of edges with two,
/// first invariants of edges with none, second invariants of edges with at
/// most one; each group by ascending edge index.
pub fn classify<T: Scalar>(problem: &MetricGraphProblem<T>, eigen: &[EdgeEigen<T>]) -> Result<InvariantClassification> {
    let m = problem.edge_count();
    if eigen.len() != m {
        return Err(Error::Dimension(format!("{} eigen-decompositions for {m} edges", eigen.len())));
    }
    let alpha: Vec<u8> = eigen.iter().map(EdgeEigen::alpha).collect();
    let with = |a: &[u8]| -> IndexSet { (0..m).filter(|&j| a.contains(&alpha[j])).collect() };
    let (j0, j1, j2) = (with(&[0]), with(&[1]), with(&[2]));

    let mut component = vec![[usize::MAX; 2]; m];
    let mut next = 0;
    for (c, group) in [(0, with(&[1, 2])), (1, j2.clone()), (0, j0.clone()), (1, with(&[0, 1]))] {
        for j in group.iter() {
            component[j][c] = next;
            next += 1;
        }
    }
    let m_plus = j1.len() + 2 * j2.len();
    let j_plus = IndexSet::range(m_plus);
    let j_minus: IndexSet = (m_plus..2 * m).collect();

    let mut roles = Vec::with_capacity(problem.vertex_count());
    let mut k = Vec::with_capacity(problem.vertex_count());
    for v in 0..problem.vertex_count() {
        let counts = count_outgoing(problem, &alpha, v)?;
        let deg = problem.incident(v).len();
        k.push(counts.by_flags);
        roles.push(match counts.by_flags {
            0 => Role::Sink,
            n if n == 2 * deg => Role::Source,
            _ => Role::Transient,
        });
    }
    let non_sink: usize = k.iter().sum();
    if non_sink != 2 * m {
        return Err(Error::Internal(format!("outgoing counts sum to {non_sink}, expected {}", 2 * m)));
    }
    Ok(InvariantClassification { alpha, j0, j1, j2, roles, k, component, j_plus, j_minus })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outgoing_table() {
        // Both positive: everything leaves the x = 0 end.
        assert!(is_outgoing(2, 0, 0) && is_outgoing(2, 0, 1));
        assert!(!is_outgoing(2, 1, 0) && !is_outgoing(2, 1, 1));
        // Mixed signs: u₁ leaves at 0, u₂ leaves at 1.
        assert!(is_outgoing(1, 0, 0) && !is_outgoing(1, 0, 1));
        assert!(!is_outgoing(1, 1, 0) && is_outgoing(1, 1, 1));
        // Both negative: everything leaves the x = 1 end.
        assert!(!is_outgoing(0, 0, 0) && !is_outgoing(0, 0, 1));
        assert!(is_outgoing(0, 1, 0) && is_outgoing(0, 1, 1));
    }
}
