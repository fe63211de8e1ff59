use std::fmt;

use crate::binmat::{support, IndexSet};
use crate::error::{Error, Result};
use crate::realize::{BoundarySystem, SourceDecomposition, VertexPartition};
use crate::scalar::Scalar;

/// Which groupings of the sink arcs of one part are enumerated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SinkPolicy {
    /// Perfect matchings only.
    #[default]
    Pairs,
    /// Set partitions with groups of any size.
    AnyPartition,
}

/// A vertex that can be the tail of sink arcs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartLabel {
    Transient(usize),
    Source(usize),
}

impl fmt::Display for PartLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartLabel::Transient(i) => write!(f, "V{}", i + 1),
            PartLabel::Source(i) => write!(f, "S{}", i + 1),
        }
    }
}

/// One grouping of every part's sink arcs; each group becomes a sink vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SinkPartition {
    pub groups: Vec<(PartLabel, Vec<IndexSet>)>,
}

impl SinkPartition {
    /// All groups in sink-vertex order.
    pub fn flat(&self) -> Vec<IndexSet> {
        self.groups.iter().flat_map(|(_, g)| g.iter().cloned()).collect()
    }

    /// Part owning each sink vertex, in sink-vertex order.
    pub fn owners(&self) -> Vec<PartLabel> {
        self.groups.iter().flat_map(|(p, g)| std::iter::repeat_n(*p, g.len())).collect()
    }
}

/// Sink arcs grouped by the vertex whose boundary rows contain their
/// outgoing coefficients: transient vertices first, then sources.
pub fn sink_arcs_by_part<T: Scalar>(
    bs: &BoundarySystem<T>,
    vp: &VertexPartition,
    sd: &SourceDecomposition,
    tol: &T,
) -> Result<Vec<(PartLabel, IndexSet)>> {
    let mut parts: Vec<(PartLabel, &IndexSet, Vec<usize>)> = Vec::new();
    for (i, rows) in vp.parts.iter().enumerate() {
        parts.push((PartLabel::Transient(i), rows, Vec::new()));
    }
    for (r, rows) in sd.rows.iter().enumerate() {
        parts.push((PartLabel::Source(r), rows, Vec::new()));
    }
    for j in vp.classes.sink_arcs().iter() {
        let supp = support(&bs.xi_out.column(j), tol);
        let hits: Vec<usize> = (0..parts.len()).filter(|&p| !supp.is_disjoint(parts[p].1)).collect();
        match hits.as_slice() {
            [p] => parts[*p].2.push(j),
            _ => {
                return Err(Error::Internal(format!(
                    "sink arc {} has outgoing support {supp} meeting {} vertices",
                    j + 1,
                    hits.len()
                )))
            }
        }
    }
    Ok(parts.into_iter().map(|(l, _, arcs)| (l, IndexSet::new(arcs))).collect())
}

/// Enumeration state for the groupings of one part.
#[derive(Clone, Debug)]
struct PartCounter {
    label: PartLabel,
    arcs: IndexSet,
    digits: Vec<usize>,
}

impl PartCounter {
    fn new(label: PartLabel, arcs: IndexSet, policy: SinkPolicy) -> Self {
        let n = arcs.len();
        let len = match policy {
            SinkPolicy::Pairs => n / 2,
            SinkPolicy::AnyPartition => n,
        };
        PartCounter { label, arcs, digits: vec![0; len] }
    }

    /// Next digit vector in lexicographic order; false after the last one.
    fn advance(&mut self, policy: SinkPolicy) -> bool {
        let n = self.arcs.len();
        match policy {
            // Digit t picks the partner of the smallest unpaired arc among
            // the remaining n - 2t - 1 candidates.
            SinkPolicy::Pairs => {
                for t in (0..self.digits.len()).rev() {
                    if self.digits[t] + 1 < n - 2 * t - 1 {
                        self.digits[t] += 1;
                        self.digits[t + 1..].iter_mut().for_each(|d| *d = 0);
                        return true;
                    }
                }
                false
            }
            // Restricted growth string.
            SinkPolicy::AnyPartition => {
                for t in (1..n).rev() {
                    let bound = self.digits[..t].iter().max().copied().unwrap_or(0);
                    if self.digits[t] <= bound {
                        self.digits[t] += 1;
                        self.digits[t + 1..].iter_mut().for_each(|d| *d = 0);
                        return true;
                    }
                }
                false
            }
        }
    }

    fn decode(&self, policy: SinkPolicy) -> Vec<IndexSet> {
        let arcs = self.arcs.as_slice();
        match policy {
            SinkPolicy::Pairs => {
                let mut left: Vec<usize> = arcs.to_vec();
                let mut out = Vec::with_capacity(self.digits.len());
                for &d in &self.digits {
                    let a = left.remove(0);
                    let b = left.remove(d);
                    out.push(IndexSet::new(vec![a, b]));
                }
                out
            }
            SinkPolicy::AnyPartition => {
                let blocks = self.digits.iter().max().map_or(0, |m| m + 1);
                let mut out = vec![Vec::new(); blocks];
                for (t, &d) in self.digits.iter().enumerate() {
                    out[d].push(arcs[t]);
                }
                out.into_iter().map(IndexSet::new).collect()
            }
        }
    }
}

/// Lazy product of the per-part groupings; the last part varies fastest.
#[derive(Clone, Debug)]
pub struct SinkGroupings {
    policy: SinkPolicy,
    parts: Vec<PartCounter>,
    odd: Vec<(PartLabel, IndexSet)>,
    done: bool,
}

impl SinkGroupings {
    /// Parts whose sink arcs cannot be paired (only under [`SinkPolicy::Pairs`]).
    pub fn odd_parts(&self) -> &[(PartLabel, IndexSet)] {
        &self.odd
    }

    /// True once every grouping has been yielded.
    pub fn is_exhausted(&self) -> bool {
        self.done
    }
}

impl Iterator for SinkGroupings {
    type Item = SinkPartition;

    fn next(&mut self) -> Option<SinkPartition> {
        if self.done {
            return None;
        }
        let current = SinkPartition { groups: self.parts.iter().map(|p| (p.label, p.decode(self.policy))).collect() };
        let policy = self.policy;
        self.done = !self.parts.iter_mut().rev().any(|p| {
            if p.advance(policy) {
                true
            } else {
                p.digits.iter_mut().for_each(|d| *d = 0);
                false
            }
        });
        Some(current)
    }
}

pub fn sink_groupings(sink_arcs: &[(PartLabel, IndexSet)], policy: SinkPolicy) -> SinkGroupings {
    let odd: Vec<(PartLabel, IndexSet)> = match policy {
        SinkPolicy::Pairs => sink_arcs.iter().filter(|(_, s)| s.len() % 2 == 1).cloned().collect(),
        SinkPolicy::AnyPartition => Vec::new(),
    };
    let parts =
        sink_arcs.iter().filter(|(_, s)| !s.is_empty()).map(|(l, s)| PartCounter::new(*l, s.clone(), policy)).collect();
    SinkGroupings { policy, parts, done: !odd.is_empty(), odd }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(arcs: &[usize]) -> Vec<(PartLabel, IndexSet)> {
        vec![(PartLabel::Transient(0), IndexSet::new(arcs.to_vec()))]
    }

    #[test]
    fn no_sinks_gives_one_empty_grouping() {
        let all: Vec<_> = sink_groupings(&part(&[]), SinkPolicy::Pairs).collect();
        assert_eq!(all.len(), 1);
        assert!(all[0].flat().is_empty());
    }

    #[test]
    fn four_arcs_give_three_pairings_in_order() {
        let all: Vec<Vec<IndexSet>> =
            sink_groupings(&part(&[0, 1, 2, 3]), SinkPolicy::Pairs).map(|p| p.flat()).collect();
        let s = |a: usize, b: usize| IndexSet::new(vec![a, b]);
        assert_eq!(all, vec![vec![s(0, 1), s(2, 3)], vec![s(0, 2), s(1, 3)], vec![s(0, 3), s(1, 2)]]);
    }

    #[test]
    fn pairing_counts_are_double_factorials() {
        for (n, expect) in [(2, 1), (4, 3), (6, 15), (8, 105)] {
            let arcs: Vec<usize> = (0..n).collect();
            assert_eq!(sink_groupings(&part(&arcs), SinkPolicy::Pairs).count(), expect);
        }
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        for (n, expect) in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52)] {
            let arcs: Vec<usize> = (0..n).collect();
            assert_eq!(sink_groupings(&part(&arcs), SinkPolicy::AnyPartition).count(), expect);
        }
    }

    #[test]
    fn odd_part_empties_the_stream() {
        let mut g = sink_groupings(&part(&[4, 5, 6]), SinkPolicy::Pairs);
        assert_eq!(g.odd_parts().len(), 1);
        assert!(g.next().is_none());
    }

    #[test]
    fn product_varies_last_part_fastest() {
        let parts = vec![
            (PartLabel::Transient(0), IndexSet::new(vec![0, 1, 2, 3])),
            (PartLabel::Source(0), IndexSet::new(vec![4, 5, 6, 7])),
        ];
        let mut g = sink_groupings(&parts, SinkPolicy::Pairs);
        let first = g.next().unwrap();
        let second = g.next().unwrap();
        assert_eq!(first.groups[0], second.groups[0]);
        assert_ne!(first.groups[1], second.groups[1]);
        assert_eq!(g.count(), 7);
        assert_eq!(first.owners().len(), 4);
    }
}
