//! Canonical labeling for small vertex- and edge-labeled (multi)graphs by
//! color refinement plus individualization. Exponential in the worst case;
//! meant for graphs of a dozen vertices.

use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub vertex_labels: Vec<u64>,
    /// `(u, v, label)`; parallel edges allowed.
    pub edges: Vec<(usize, usize, u64)>,
    pub directed: bool,
}

/// Certificate: equal for two graphs iff they are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Canonical {
    pub vertex_labels: Vec<u64>,
    pub edges: Vec<(usize, usize, u64)>,
}

type Signature = (usize, Vec<(u64, u8, usize)>);

impl LabeledGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn is_isomorphic(&self, other: &LabeledGraph) -> bool {
        self.directed == other.directed
            && self.vertex_count() == other.vertex_count()
            && self.edges.len() == other.edges.len()
            && self.canonical_form() == other.canonical_form()
    }

    pub fn canonical_form(&self) -> Canonical {
        let initial = rank(&self.vertex_labels);
        let colors = self.refine(initial);
        let mut best = None;
        self.search(colors, &mut best);
        best.expect("search reaches at least one discrete coloring")
    }

    /// Neighborhood lists: `(edge label, direction flag, neighbor)`.
    fn adjacency(&self) -> Vec<Vec<(u64, u8, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(u, v, l) in &self.edges {
            if self.directed {
                adj[u].push((l, 0, v));
                adj[v].push((l, 1, u));
            } else {
                adj[u].push((l, 0, v));
                adj[v].push((l, 0, u));
            }
        }
        adj
    }

    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let adj = self.adjacency();
        let mut classes = distinct(&colors);
        loop {
            let sigs: Vec<Signature> = (0..colors.len())
                .map(|v| {
                    let mut nb: Vec<(u64, u8, usize)> = adj[v].iter().map(|&(l, d, w)| (l, d, colors[w])).collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let next = rank(&sigs);
            let next_classes = distinct(&next);
            colors = next;
            if next_classes == classes {
                return colors;
            }
            classes = next_classes;
        }
    }

    fn search(&self, colors: Vec<usize>, best: &mut Option<Canonical>) {
        let n = colors.len();
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c] += 1;
        }
        // First smallest non-singleton cell.
        let target = (0..n).filter(|&c| sizes[c] > 1).min_by_key(|&c| (sizes[c], c));
        let Some(cell) = target else {
            let cert = self.certificate(&colors);
            if best.as_ref().is_none_or(|b| cert < *b) {
                *best = Some(cert);
            }
            return;
        };
        for v in (0..n).filter(|&v| colors[v] == cell) {
            let keyed: Vec<(usize, bool)> = (0..n).map(|u| (colors[u], u != v)).collect();
            let split = self.refine(rank(&keyed));
            self.search(split, best);
        }
    }

    fn certificate(&self, perm: &[usize]) -> Canonical {
        let n = perm.len();
        let mut labels = vec![0; n];
        for v in 0..n {
            labels[perm[v]] = self.vertex_labels[v];
        }
        let mut edges: Vec<(usize, usize, u64)> = self
            .edges
            .iter()
            .map(|&(u, v, l)| {
                let (a, b) = (perm[u], perm[v]);
                if self.directed || a <= b {
                    (a, b, l)
                } else {
                    (b, a, l)
                }
            })
            .collect();
        edges.sort_unstable();
        Canonical { vertex_labels: labels, edges }
    }
}

/// Dense ranks `0..k` preserving the order of the keys.
fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut order: BTreeMap<K, usize> = keys.iter().cloned().map(|k| (k, 0)).collect();
    for (r, v) in order.values_mut().enumerate() {
        *v = r;
    }
    keys.iter().map(|k| order[k]).collect()
}

fn distinct(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |m| m + 1)
}
