use crate::error::{Error, Result};
use crate::linedigraph::incidence::MultiDigraph;

pub const MAX_VERTICES: usize = 4;
pub const MAX_ARCS: usize = 5;

/// Lazy enumeration of loop-free multi digraphs on labeled vertices.
///
/// For each vertex count `2..=max_v` and arc count `1..=max_arcs`, every
/// multiset of ordered vertex pairs `(t, h)`, `t != h`, is produced once.
/// Arcs are listed in nondecreasing pair order, so each multiset has a
/// single representative.
#[derive(Clone, Debug)]
pub struct SmallDigraphs {
    max_v: usize,
    max_arcs: usize,
    v: usize,
    pairs: Vec<(usize, usize)>,
    /// Nondecreasing indices into `pairs`; empty before the first item.
    choice: Vec<usize>,
    done: bool,
}

pub fn enumerate_small_digraphs(max_v: usize, max_arcs: usize) -> Result<SmallDigraphs> {
    if max_v > MAX_VERTICES || max_arcs > MAX_ARCS {
        return Err(Error::BoundsExceeded(format!(
            "at most {MAX_VERTICES} vertices and {MAX_ARCS} arcs, got {max_v} and {max_arcs}"
        )));
    }
    let mut it = SmallDigraphs {
        max_v,
        max_arcs,
        v: 2,
        pairs: ordered_pairs(2),
        choice: Vec::new(),
        done: max_v < 2 || max_arcs == 0,
    };
    if !it.done {
        it.choice = vec![0];
    }
    Ok(it)
}

fn ordered_pairs(v: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for t in 0..v {
        for h in 0..v {
            if t != h {
                out.push((t, h));
            }
        }
    }
    out
}

/// Number of graphs [`enumerate_small_digraphs`] yields, by the
/// multiset-coefficient formula.
pub fn small_digraph_count(max_v: usize, max_arcs: usize) -> u64 {
    let binom = |n: u64, k: u64| -> u64 {
        let mut r = 1u64;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    };
    let mut total = 0;
    for v in 2..=max_v as u64 {
        let p = v * (v - 1);
        for a in 1..=max_arcs as u64 {
            total += binom(p + a - 1, a);
        }
    }
    total
}

impl SmallDigraphs {
    fn advance(&mut self) {
        let p = self.pairs.len();
        // Next nondecreasing sequence of the same length.
        let mut i = self.choice.len();
        while i > 0 {
            i -= 1;
            if self.choice[i] + 1 < p {
                let next = self.choice[i] + 1;
                for c in &mut self.choice[i..] {
                    *c = next;
                }
                return;
            }
        }
        if self.choice.len() < self.max_arcs {
            self.choice = vec![0; self.choice.len() + 1];
        } else if self.v < self.max_v {
            self.v += 1;
            self.pairs = ordered_pairs(self.v);
            self.choice = vec![0];
        } else {
            self.done = true;
        }
    }
}

impl Iterator for SmallDigraphs {
    type Item = MultiDigraph;

    fn next(&mut self) -> Option<MultiDigraph> {
        if self.done {
            return None;
        }
        let g = MultiDigraph { vertex_count: self.v, arcs: self.choice.iter().map(|&c| self.pairs[c]).collect() };
        self.advance();
        Some(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn two_vertices_one_arc() {
        let all: Vec<_> = enumerate_small_digraphs(2, 1).unwrap().collect();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].arcs, vec![(0, 1)]);
        assert_eq!(all[1].arcs, vec![(1, 0)]);
    }

    #[test]
    fn two_vertices_two_arcs() {
        let all: Vec<_> = enumerate_small_digraphs(2, 2).unwrap().collect();
        assert!(all.iter().any(|g| g.arcs == vec![(0, 1), (0, 1)]));
        assert!(all.iter().any(|g| g.arcs == vec![(0, 1), (1, 0)]));
        assert_eq!(all.len(), 5);
    }

    #[test]
    fn counts_and_uniqueness() {
        for (v, a) in [(3, 2), (3, 4), (4, 3)] {
            let all: Vec<_> = enumerate_small_digraphs(v, a).unwrap().collect();
            assert_eq!(all.len() as u64, small_digraph_count(v, a));
            let distinct: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
            assert!(all.iter().all(|g| !g.has_loops()));
        }
        assert_eq!(small_digraph_count(3, 2), 32);
    }

    #[test]
    fn bounds_guard() {
        assert!(enumerate_small_digraphs(5, 1).is_err());
        assert!(enumerate_small_digraphs(2, 6).is_err());
    }
}
