use crate::binmat::{component_sets, hat, support, BinaryMatrix, IndexSet};
use crate::error::{Error, Result};
use crate::linedigraph::{analyze, ClassStructure, Collapsed, VertexMatching};
use crate::realize::{AssumptionReport, BoundarySystem};
use crate::scalar::Scalar;

/// Boundary rows grouped by vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    /// Rows of transient vertex `i`, in out-class order.
    pub parts: Vec<IndexSet>,
    /// Rows belonging to sources.
    pub v_s: IndexSet,
    pub classes: ClassStructure,
    pub matching: VertexMatching,
    pub collapsed: Collapsed,
    pub zero_in_rows: IndexSet,
}

impl VertexPartition {
    pub fn transient_count(&self) -> usize {
        self.parts.len()
    }

    /// Outgoing arcs of transient vertex `i`.
    pub fn out_arcs(&self, i: usize) -> &IndexSet {
        &self.classes.v_out[i]
    }

    /// Incoming arcs of transient vertex `i`.
    pub fn in_arcs(&self, i: usize) -> &IndexSet {
        &self.classes.v_in[self.matching.in_of_out[i]]
    }
}

fn column_support<T: Scalar>(bs_col: Vec<T>, tol: &T) -> IndexSet {
    support(&bs_col, tol)
}

/// Builds the row partition and re-verifies that every column support of
/// both matrices lies inside a single part.
pub fn vertex_partition<T: Scalar>(
    bs: &BoundarySystem<T>,
    report: &AssumptionReport,
    tol: &T,
) -> Result<VertexPartition> {
    if !report.all_passed() {
        return Err(Error::Contract("vertex partition needs all assumptions to pass".into()));
    }
    let size = bs.size();
    let collapsed = analyze(&report.a)?;
    let cs = collapsed.classes.clone();
    let source_arcs = cs.source_arcs();
    let out_cols: Vec<IndexSet> = (0..size).map(|j| column_support(bs.xi_out.column(j), tol)).collect();
    let in_cols: Vec<IndexSet> = (0..size).map(|j| column_support(bs.xi_in.column(j), tol)).collect();

    let v_s: IndexSet = if cs.has_source_class {
        (0..size).filter(|&i| support(bs.xi_out.row(i), tol).is_subset(&source_arcs)).collect()
    } else {
        IndexSet::empty()
    };
    let parts: Vec<IndexSet> = (0..cs.transient_count())
        .map(|i| cs.v_out[i].iter().fold(IndexSet::empty(), |acc, s| acc.union(&out_cols[s])))
        .collect();

    let mut all = parts.clone();
    all.push(v_s.clone());
    if !IndexSet::is_partition_of(&all, size) {
        return Err(Error::Internal(format!("vertex row sets {all:?} do not partition the {size} rows")));
    }
    for (name, cols) in [("xi_out", &out_cols), ("xi_in", &in_cols)] {
        for (j, supp) in cols.iter().enumerate() {
            if supp.is_empty() {
                continue;
            }
            if !all.iter().any(|p| supp.is_subset(p)) {
                return Err(Error::Internal(format!(
                    "{name} column {} has support {supp} split across vertices",
                    j + 1
                )));
            }
        }
    }
    Ok(VertexPartition {
        parts,
        v_s,
        matching: collapsed.matching.clone(),
        classes: cs,
        collapsed,
        zero_in_rows: report.zero_in_rows.clone(),
    })
}

/// Source rows split into mutually disconnected sources.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceDecomposition {
    /// `hat(hat(Ξ^S_out)ᵀ hat(Ξ^S_out))` over the source arcs, in ascending arc order.
    pub xi_s: BinaryMatrix,
    /// Outgoing arcs of each source.
    pub blocks: Vec<IndexSet>,
    /// Boundary rows of each source.
    pub rows: Vec<IndexSet>,
}

impl SourceDecomposition {
    pub fn k(&self) -> usize {
        self.blocks.len()
    }
}

pub fn source_decomposition<T: Scalar>(
    bs: &BoundarySystem<T>,
    vp: &VertexPartition,
    tol: &T,
) -> Result<SourceDecomposition> {
    let arcs = vp.classes.source_arcs();
    if vp.v_s.is_empty() || arcs.is_empty() {
        return Ok(SourceDecomposition { xi_s: BinaryMatrix::zeros(0, 0), blocks: vec![], rows: vec![] });
    }
    let sub = bs.xi_out.select(vp.v_s.as_slice(), arcs.as_slice());
    let h = hat(&sub, tol);
    let xi_s = h.transpose().bool_product(&h)?;
    let comps = component_sets(&xi_s)?;
    let h = &h;
    let mut blocks = Vec::with_capacity(comps.len());
    let mut rows = Vec::with_capacity(comps.len());
    for c in comps {
        let block: IndexSet = c.iter().map(|t| arcs.as_slice()[t]).collect();
        let r: IndexSet =
            c.iter().flat_map(|t| (0..h.nrows()).filter(move |&i| h.get(i, t))).map(|i| vp.v_s.as_slice()[i]).collect();
        blocks.push(block);
        rows.push(r);
    }
    let covered = rows.iter().fold(IndexSet::empty(), |acc, r| acc.union(r));
    if covered != vp.v_s || rows.iter().map(IndexSet::len).sum::<usize>() != vp.v_s.len() {
        return Err(Error::Internal("source row sets do not partition the source rows".into()));
    }
    Ok(SourceDecomposition { xi_s, blocks, rows })
}
