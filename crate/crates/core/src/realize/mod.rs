//! Graph realizability of a flat boundary system
//! `Ξ_out · out + Ξ_in · in = 0`.
//!
//! The pipeline checks the structural assumptions, partitions boundary rows
//! into vertices, splits the source rows into independent sources, searches
//! over groupings of the sink arcs, and for each grouping assembles the
//! multi digraph and tests whether its arcs pair up into the edges of a
//! simple graph with consistent orientations.

mod assemble;
mod assumptions;
mod partition;
mod sinks;

pub use assemble::{
    assemble_network, build_incidence, check_conditions, edge_indices, multi_digraph_adjacency, ConditionFailure,
    EdgeKind, EdgeMapEntry, IncidenceLayout, NetworkEdge, NetworkVertex, RealizedNetwork, VertexSystem,
};
pub use assumptions::{check_assumptions, Ass3Failure, AssoutFailure, AssumptionReport};
pub use partition::{source_decomposition, vertex_partition, SourceDecomposition, VertexPartition};
pub use sinks::{sink_arcs_by_part, sink_groupings, PartLabel, SinkGroupings, SinkPartition, SinkPolicy};

use std::fmt;

use crate::binmat::{IndexSet, RealMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Flat boundary system over `2m` solution components.
///
/// Component `j` is an outgoing value in column `j` of `xi_out` and an
/// incoming value in column `j` of `xi_in`. Components in `j_plus` move
/// from `x = 0` to `x = 1`, those in `j_minus` the other way.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySystem<T: Scalar> {
    pub m: usize,
    pub xi_out: RealMatrix<T>,
    pub xi_in: RealMatrix<T>,
    pub j_plus: IndexSet,
    pub j_minus: IndexSet,
    pub speeds: Vec<T>,
}

impl<T: Scalar> BoundarySystem<T> {
    pub fn new(
        m: usize,
        xi_out: RealMatrix<T>,
        xi_in: RealMatrix<T>,
        j_plus: IndexSet,
        j_minus: IndexSet,
        speeds: Vec<T>,
    ) -> Result<Self> {
        let size = 2 * m;
        for (name, x) in [("xi_out", &xi_out), ("xi_in", &xi_in)] {
            if x.shape() != (size, size) {
                return Err(Error::Dimension(format!("{name} is {}x{}, expected {size}x{size}", x.nrows(), x.ncols())));
            }
            x.check_finite()?;
        }
        j_plus.check_within(size)?;
        j_minus.check_within(size)?;
        if !IndexSet::is_partition_of(&[j_plus.clone(), j_minus.clone()], size) {
            return Err(Error::InvalidIndexSet(format!(
                "j_plus {j_plus} and j_minus {j_minus} do not partition 1..={size}"
            )));
        }
        if speeds.len() != size {
            return Err(Error::Dimension(format!("{} speeds for {size} components", speeds.len())));
        }
        if let Some(j) = speeds.iter().position(|c| !c.is_finite_value() || !c.is_positive()) {
            return Err(Error::InvalidProblem(format!("speed of component {} is not positive", j + 1)));
        }
        Ok(BoundarySystem { m, xi_out, xi_in, j_plus, j_minus, speeds })
    }

    /// Number of components, `2m`.
    pub fn size(&self) -> usize {
        2 * self.m
    }

    pub fn is_plus(&self, j: usize) -> bool {
        self.j_plus.contains(j)
    }
}

#[derive(Clone, Debug)]
pub struct RealizeOptions<T: Scalar> {
    pub tol: T,
    /// Maximum number of sink groupings to evaluate.
    pub budget: usize,
    pub policy: SinkPolicy,
    /// Keep searching after the first success and record every realization.
    pub collect_all: bool,
}

pub const DEFAULT_BUDGET: usize = 10_000;

impl<T: Scalar> Default for RealizeOptions<T> {
    fn default() -> Self {
        RealizeOptions {
            tol: T::default_tolerance(),
            budget: DEFAULT_BUDGET,
            policy: SinkPolicy::Pairs,
            collect_all: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FailureTag {
    Assout,
    MAss,
    Ass3,
    Form,
    Edgeid,
    SinkPartitionExhausted,
    OddSinkArcs,
}

impl fmt::Display for FailureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FailureTag::Assout => "assout",
            FailureTag::MAss => "MAss",
            FailureTag::Ass3 => "ass3",
            FailureTag::Form => "form",
            FailureTag::Edgeid => "edgeid",
            FailureTag::SinkPartitionExhausted => "sink-partition-exhausted",
            FailureTag::OddSinkArcs => "odd-sink-arcs",
        };
        f.write_str(s)
    }
}

/// One evaluated sink grouping and why it failed.
#[derive(Clone, Debug, PartialEq)]
pub struct Attempt {
    pub partition: SinkPartition,
    pub layout: IncidenceLayout,
    pub edge_map: Vec<EdgeMapEntry>,
    pub failures: Vec<ConditionFailure>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnosis {
    pub tags: Vec<FailureTag>,
    pub assumptions: AssumptionReport,
    /// Parts whose sink arcs cannot be split into pairs.
    pub odd_parts: Vec<(PartLabel, IndexSet)>,
    pub attempts: Vec<Attempt>,
}

impl Diagnosis {
    fn from_assumptions(report: AssumptionReport) -> Self {
        let mut tags = Vec::new();
        if !report.assout.is_empty() {
            tags.push(FailureTag::Assout);
        }
        if !report.line_digraph.passed() {
            tags.push(FailureTag::MAss);
        }
        if !report.ass3.is_empty() {
            tags.push(FailureTag::Ass3);
        }
        Diagnosis { tags, assumptions: report, odd_parts: Vec::new(), attempts: Vec::new() }
    }

    fn add_tag(&mut self, t: FailureTag) {
        if !self.tags.contains(&t) {
            self.tags.push(t);
        }
    }

    /// Human-readable lines with 1-based indices.
    pub fn describe(&self) -> Vec<String> {
        let mut out = self.assumptions.describe_failures();
        for (part, arcs) in &self.odd_parts {
            out.push(format!("odd-sink-arcs: part {part} has {} sink arcs {arcs}", arcs.len()));
        }
        for (t, a) in self.attempts.iter().enumerate() {
            for f in &a.failures {
                out.push(format!("attempt {}: {}", t + 1, f.describe()));
            }
        }
        out
    }
}

/// Successful outcome: the first realization found plus search statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization<T: Scalar> {
    pub network: RealizedNetwork<T>,
    /// All realizations found, in enumeration order, when collecting.
    pub all: Vec<RealizedNetwork<T>>,
    pub successes: usize,
    pub tried: usize,
    /// Whether every sink grouping was evaluated.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RealizeOutcome<T: Scalar> {
    Realizable(Box<Realization<T>>),
    NotRealizable(Box<Diagnosis>),
    /// The budget ran out before any grouping succeeded.
    BudgetExhausted {
        tried: usize,
        diagnosis: Box<Diagnosis>,
    },
}

impl<T: Scalar> RealizeOutcome<T> {
    pub fn is_realizable(&self) -> bool {
        matches!(self, RealizeOutcome::Realizable(_))
    }
}

/// Upstream artifacts shared by every sink grouping.
#[derive(Clone, Debug, PartialEq)]
pub struct Structure {
    pub assumptions: AssumptionReport,
    pub partition: VertexPartition,
    pub sources: SourceDecomposition,
    pub sink_arcs: Vec<(PartLabel, IndexSet)>,
}

/// Runs the assumption checks, the vertex partition and the source
/// decomposition. `Ok(Err(report))` when an assumption fails.
pub fn analyze_structure<T: Scalar>(
    bs: &BoundarySystem<T>,
    tol: &T,
) -> Result<std::result::Result<Structure, AssumptionReport>> {
    let report = check_assumptions(bs, tol)?;
    if !report.all_passed() {
        return Ok(Err(report));
    }
    let vp = vertex_partition(bs, &report, tol)?;
    let sd = source_decomposition(bs, &vp, tol)?;
    let sink_arcs = sink_arcs_by_part(bs, &vp, &sd, tol)?;
    Ok(Ok(Structure { assumptions: report, partition: vp, sources: sd, sink_arcs }))
}

/// Full pipeline.
pub fn realize<T: Scalar>(bs: &BoundarySystem<T>, opts: &RealizeOptions<T>) -> Result<RealizeOutcome<T>> {
    let st = match analyze_structure(bs, &opts.tol)? {
        Ok(st) => st,
        Err(report) => return Ok(RealizeOutcome::NotRealizable(Box::new(Diagnosis::from_assumptions(report)))),
    };
    let mut diagnosis = Diagnosis::from_assumptions(st.assumptions.clone());
    let mut groupings = sink_groupings(&st.sink_arcs, opts.policy);
    if !groupings.odd_parts().is_empty() {
        diagnosis.odd_parts = groupings.odd_parts().to_vec();
        diagnosis.add_tag(FailureTag::OddSinkArcs);
        return Ok(RealizeOutcome::NotRealizable(Box::new(diagnosis)));
    }
    let has_sinks = st.sink_arcs.iter().any(|(_, s)| !s.is_empty());
    let mut tried = 0;
    let mut found: Vec<RealizedNetwork<T>> = Vec::new();
    let mut complete = true;
    loop {
        if has_sinks && tried >= opts.budget {
            complete = groupings.is_exhausted();
            break;
        }
        let Some(sp) = groupings.next() else { break };
        tried += 1;
        let layout = build_incidence(&st.partition, &st.sources, &sp)?;
        let edge_map = edge_indices(&layout.adjacency, &layout.incidence)?;
        let failures = check_conditions(bs, &layout.adjacency, &edge_map, &opts.tol);
        if failures.is_empty() {
            let mut net = assemble_network(bs, &st.partition, &st.sources, &layout, &edge_map, &opts.tol)?;
            net.sink_partition = sp;
            found.push(net);
            if !opts.collect_all {
                complete = groupings.is_exhausted();
                break;
            }
        } else {
            for f in &failures {
                diagnosis.add_tag(f.tag());
            }
            diagnosis.attempts.push(Attempt { partition: sp, layout, edge_map, failures });
        }
    }
    if let Some(first) = found.first().cloned() {
        let successes = found.len();
        let all = if opts.collect_all { found } else { Vec::new() };
        return Ok(RealizeOutcome::Realizable(Box::new(Realization {
            network: first,
            all,
            successes,
            tried,
            complete,
        })));
    }
    if !complete {
        return Ok(RealizeOutcome::BudgetExhausted { tried, diagnosis: Box::new(diagnosis) });
    }
    if has_sinks {
        diagnosis.add_tag(FailureTag::SinkPartitionExhausted);
    }
    Ok(RealizeOutcome::NotRealizable(Box::new(diagnosis)))
}
