use std::collections::VecDeque;

use crate::binmat::binary::BinaryMatrix;
use crate::binmat::index::IndexSet;
use crate::error::{Error, Result};

/// One connected component together with a BFS tree rooted at its
/// smallest member, which certifies connectivity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub members: IndexSet,
    /// `parent[t]` is the BFS parent of `members[t]`; `None` for the root.
    pub parent: Vec<Option<usize>>,
}

impl Component {
    pub fn root(&self) -> usize {
        self.members.as_slice()[0]
    }

    /// Path from `v` up to the root, following BFS parents.
    pub fn path_to_root(&self, v: usize) -> Option<Vec<usize>> {
        let pos = |x: usize| self.members.as_slice().binary_search(&x).ok();
        let mut path = vec![v];
        let mut cur = pos(v)?;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = pos(p)?;
        }
        Some(path)
    }
}

/// Connected components of the undirected graph with adjacency `s`
/// (diagonal ignored), ordered by smallest member.
pub fn irreducible_components(s: &BinaryMatrix) -> Result<Vec<Component>> {
    let (rows, cols) = s.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    for i in 0..rows {
        for j in 0..i {
            if s.get(i, j) != s.get(j, i) {
                return Err(Error::NotSymmetric { row: j, col: i });
            }
        }
    }
    let mut comp_of = vec![usize::MAX; rows];
    let mut parent = vec![None; rows];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for start in 0..rows {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        comp_of[start] = id;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in 0..rows {
                if w != v && s.get(v, w) && comp_of[w] == usize::MAX {
                    comp_of[w] = id;
                    parent[w] = Some(v);
                    members.push(w);
                    queue.push_back(w);
                }
            }
        }
        comps.push(members);
    }
    Ok(comps
        .into_iter()
        .map(|m| {
            let members = IndexSet::new(m);
            let parent = members.iter().map(|v| parent[v]).collect();
            Component { members, parent }
        })
        .collect())
}

/// Member sets only.
pub fn component_sets(s: &BinaryMatrix) -> Result<Vec<IndexSet>> {
    Ok(irreducible_components(s)?.into_iter().map(|c| c.members).collect())
}
