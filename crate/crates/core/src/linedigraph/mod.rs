//! Line digraph recognition and reconstruction of the host multi digraph.
//!
//! A square 0/1 matrix `A` is read with rows indexed by outgoing arcs and
//! columns by incoming arcs: `A(k, j) = 1` when arc `j` enters the vertex
//! that arc `k` leaves. Equal rows share a tail vertex, equal columns share
//! a head vertex; zero rows are arcs leaving sources and zero columns are
//! arcs entering sinks.

mod enumerate;
mod incidence;
mod iso;

pub use enumerate::{enumerate_small_digraphs, small_digraph_count, SmallDigraphs};
pub use incidence::{augment, augment_lumped, host_adjacency, line_adjacency, IncidencePair, MultiDigraph, Role};
pub use iso::{Canonical, LabeledGraph};

use serde::Serialize;

use crate::binmat::{columns_equal_or_orthogonal, BinaryMatrix, IndexSet, PairCheck};
use crate::error::{Error, Result};

/// Outcome of [`recognize`]. Indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recognition {
    Pass,
    /// `A(i,i) = 1`: an arc would follow itself.
    Loop {
        index: usize,
    },
    /// Columns that are neither equal nor orthogonal.
    Columns {
        first: usize,
        second: usize,
    },
}

impl Recognition {
    pub fn passed(&self) -> bool {
        matches!(self, Recognition::Pass)
    }

    /// Human-readable witness with 1-based indices.
    pub fn describe(&self) -> String {
        match self {
            Recognition::Pass => "PASS".into(),
            Recognition::Loop { index } => format!("diagonal entry ({0},{0}) is 1", index + 1),
            Recognition::Columns { first, second } => {
                format!("columns {} and {} are neither equal nor orthogonal", first + 1, second + 1)
            }
        }
    }
}

/// Decides whether `a` is the adjacency matrix of the line digraph of a
/// loop-free multi digraph: zero diagonal and pairwise equal-or-orthogonal
/// columns. The first diagonal violation is reported before any column pair.
pub fn recognize(a: &BinaryMatrix) -> Result<Recognition> {
    let (rows, cols) = a.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if let Some(index) = (0..rows).find(|&i| a.get(i, i)) {
        return Ok(Recognition::Loop { index });
    }
    Ok(match columns_equal_or_orthogonal(a) {
        PairCheck::Pass => Recognition::Pass,
        PairCheck::Fail { first, second } => Recognition::Columns { first, second },
    })
}

/// Row classes (arcs sharing a tail) and column classes (arcs sharing a head).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassStructure {
    pub v_out: Vec<IndexSet>,
    pub v_in: Vec<IndexSet>,
    /// The last `v_out` class collects the zero rows.
    pub has_source_class: bool,
    /// The last `v_in` class collects the zero columns.
    pub has_sink_class: bool,
}

impl ClassStructure {
    /// Number of transient vertices.
    pub fn transient_count(&self) -> usize {
        self.v_out.len() - usize::from(self.has_source_class)
    }

    pub fn source_arcs(&self) -> IndexSet {
        if self.has_source_class {
            self.v_out.last().cloned().unwrap_or_default()
        } else {
            IndexSet::empty()
        }
    }

    pub fn sink_arcs(&self) -> IndexSet {
        if self.has_sink_class {
            self.v_in.last().cloned().unwrap_or_default()
        } else {
            IndexSet::empty()
        }
    }

    /// The out-class containing arc `k`.
    pub fn out_class_of(&self, k: usize) -> Option<usize> {
        self.v_out.iter().position(|c| c.contains(k))
    }
}

/// Groups equal vectors by scanning for the smallest unassigned index.
fn scan_classes(vectors: &[IndexSet]) -> Vec<IndexSet> {
    let mut assigned = vec![false; vectors.len()];
    let mut classes = Vec::new();
    for start in 0..vectors.len() {
        if assigned[start] {
            continue;
        }
        let class: Vec<usize> =
            (start..vectors.len()).filter(|&r| !assigned[r] && vectors[r] == vectors[start]).collect();
        for &r in &class {
            assigned[r] = true;
        }
        classes.push(IndexSet::new(class));
    }
    classes
}

/// Moves the class whose vectors are empty to the end, keeping the
/// relative order of the others. Returns whether such a class exists.
fn move_zero_class_last(classes: &mut Vec<IndexSet>, vectors: &[IndexSet]) -> bool {
    match classes.iter().position(|c| c.first().is_some_and(|r| vectors[r].is_empty())) {
        Some(pos) => {
            let zero = classes.remove(pos);
            classes.push(zero);
            true
        }
        None => false,
    }
}

/// Builds the row and column classes of a recognized matrix.
pub fn build_classes(a: &BinaryMatrix) -> Result<ClassStructure> {
    let verdict = recognize(a)?;
    if !verdict.passed() {
        return Err(Error::NotLineDigraph(verdict.describe()));
    }
    let m = a.nrows();
    let rows: Vec<IndexSet> = (0..m).map(|i| a.row_support(i)).collect();
    let cols: Vec<IndexSet> = (0..m).map(|j| a.col_support(j)).collect();
    let mut v_out = scan_classes(&rows);
    let mut v_in = scan_classes(&cols);
    let has_source_class = move_zero_class_last(&mut v_out, &rows);
    let has_sink_class = move_zero_class_last(&mut v_in, &cols);
    let cs = ClassStructure { v_out, v_in, has_source_class, has_sink_class };
    let n_in = cs.v_in.len() - usize::from(has_sink_class);
    if cs.transient_count() != n_in {
        return Err(Error::Internal(format!("{} transient out-classes but {n_in} in-classes", cs.transient_count())));
    }
    Ok(cs)
}

/// `in_of_out[i] = j` pairs out-class `i` with in-class `j` at the same
/// transient vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexMatching {
    pub in_of_out: Vec<usize>,
}

pub fn match_vertices(a: &BinaryMatrix, cs: &ClassStructure) -> Result<VertexMatching> {
    let n = cs.transient_count();
    let mut in_of_out = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for i in 0..n {
        let p = cs.v_out[i].first().ok_or_else(|| Error::Internal("empty out-class".into()))?;
        let candidates: Vec<usize> = (0..n).filter(|&j| cs.v_in[j].first().is_some_and(|q| a.get(p, q))).collect();
        match candidates.as_slice() {
            [j] if !used[*j] => {
                used[*j] = true;
                in_of_out.push(*j);
            }
            _ => {
                return Err(Error::Internal(format!(
                    "out-class {} matches in-classes {:?}",
                    cs.v_out[i],
                    candidates.iter().map(|&j| cs.v_in[j].to_string()).collect::<Vec<_>>()
                )))
            }
        }
    }
    Ok(VertexMatching { in_of_out })
}

/// The collapsed matrices: `plus` has one row per out-class (incoming arcs
/// of each vertex), `minus` one row per matched in-class (outgoing arcs).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collapsed {
    pub plus: BinaryMatrix,
    pub minus: BinaryMatrix,
    pub classes: ClassStructure,
    pub matching: VertexMatching,
}

impl Collapsed {
    pub fn transient_count(&self) -> usize {
        self.classes.transient_count()
    }

    /// Arcs without a tail among transient vertices (zero columns of `minus`).
    pub fn source_arcs(&self) -> IndexSet {
        self.classes.source_arcs()
    }

    /// Arcs without a head among transient vertices (zero columns of `plus`).
    pub fn sink_arcs(&self) -> IndexSet {
        self.classes.sink_arcs()
    }
}

pub fn collapse(a: &BinaryMatrix, cs: &ClassStructure) -> Result<Collapsed> {
    let matching = match_vertices(a, cs)?;
    let m = a.ncols();
    let n = cs.transient_count();
    let plus_rows: Vec<usize> = cs.v_out.iter().filter_map(IndexSet::first).collect();
    let plus = a.select(&plus_rows, &(0..m).collect::<Vec<_>>());
    let mut minus = BinaryMatrix::zeros(n + usize::from(cs.has_sink_class), m);
    for (i, &j) in matching.in_of_out.iter().enumerate() {
        let q = cs.v_in[j].first().ok_or_else(|| Error::Internal("empty in-class".into()))?;
        for k in 0..m {
            minus.set(i, k, a.get(k, q));
        }
    }
    Ok(Collapsed { plus, minus, classes: cs.clone(), matching })
}

/// Recognition, class construction, matching and collapse in one step.
pub fn analyze(a: &BinaryMatrix) -> Result<Collapsed> {
    let cs = build_classes(a)?;
    collapse(a, &cs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seven_arc_matrix() -> BinaryMatrix {
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

    fn sets(v: &[&[usize]]) -> Vec<IndexSet> {
        v.iter().map(|s| IndexSet::from_one_based(s, 100).unwrap()).collect()
    }

    #[test]
    fn recognize_examples() {
        assert!(recognize(&seven_arc_matrix()).unwrap().passed());
        let one = BinaryMatrix::from_01(&[&[1]]).unwrap();
        assert_eq!(recognize(&one).unwrap(), Recognition::Loop { index: 0 });
        assert!(recognize(&BinaryMatrix::zeros(2, 3)).is_err());
        let bad = BinaryMatrix::from_01(&[&[0, 1, 1], &[0, 0, 1], &[0, 0, 0]]).unwrap();
        assert_eq!(recognize(&bad).unwrap(), Recognition::Columns { first: 1, second: 2 });
    }

    #[test]
    fn classes_of_seven_arc_matrix() {
        let cs = build_classes(&seven_arc_matrix()).unwrap();
        assert_eq!(cs.v_out, sets(&[&[3], &[4, 6], &[1, 2, 5, 7]]));
        assert_eq!(cs.v_in, sets(&[&[1, 2, 4], &[3, 5], &[6, 7]]));
        assert!(cs.has_source_class && cs.has_sink_class);
        assert_eq!(cs.transient_count(), 2);
    }

    #[test]
    fn path_of_two_arcs() {
        // Arc 1 enters the middle vertex, arc 2 leaves it.
        let a = BinaryMatrix::from_01(&[&[0, 0], &[1, 0]]).unwrap();
        let c = analyze(&a).unwrap();
        assert_eq!(c.classes.v_out, sets(&[&[2], &[1]]));
        assert_eq!(c.classes.v_in, sets(&[&[1], &[2]]));
        assert_eq!(c.matching.in_of_out, vec![0]);
        assert_eq!(c.plus.to_01_rows(), vec![vec![1, 0], vec![0, 0]]);
        assert_eq!(c.minus.to_01_rows(), vec![vec![0, 1], vec![0, 0]]);
    }

    #[test]
    fn single_isolated_arc() {
        let c = analyze(&BinaryMatrix::zeros(1, 1)).unwrap();
        assert_eq!(c.plus.to_01_rows(), vec![vec![0]]);
        assert_eq!(c.minus.to_01_rows(), vec![vec![0]]);
        assert_eq!(c.transient_count(), 0);
    }

    #[test]
    fn seven_arc_collapse() {
        let c = analyze(&seven_arc_matrix()).unwrap();
        assert_eq!(c.plus, BinaryMatrix::from_01(&[&[1, 1, 0, 1, 0, 0, 0], &[0, 0, 1, 0, 1, 0, 0], &[0; 7]]).unwrap());
        assert_eq!(c.minus, BinaryMatrix::from_01(&[&[0, 0, 1, 0, 0, 0, 0], &[0, 0, 0, 1, 0, 1, 0], &[0; 7]]).unwrap());
        assert_eq!(c.matching.in_of_out, vec![0, 1]);
    }
}
