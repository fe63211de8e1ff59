//! Compile a metric-graph problem, realize the resulting boundary system and
//! compare the reconstructed graph with the original.

use std::fmt;

use crate::error::Result;
use crate::linedigraph::LabeledGraph;
use crate::netcompile::{compile, flow_checks, Compilation, MetricGraphProblem, VertexFlow};
use crate::realize::{realize, Diagnosis, RealizeOptions, RealizeOutcome, RealizedNetwork};
use crate::scalar::Scalar;

/// Pipeline stage at which a round trip stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Compile,
    Check,
    Realize,
    Compare,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Compile => "compile",
            Stage::Check => "check",
            Stage::Realize => "realize",
            Stage::Compare => "compare",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RoundTripOutcome<T: Scalar> {
    /// A realization reproduces the input graph; `matched` indexes
    /// `realizations`.
    Match {
        compilation: Box<Compilation<T>>,
        realizations: Vec<RealizedNetwork<T>>,
        matched: usize,
    },
    Failed {
        stage: Stage,
        reason: Vec<String>,
    },
}

impl<T: Scalar> RoundTripOutcome<T> {
    pub fn passed(&self) -> bool {
        matches!(self, RoundTripOutcome::Match { .. })
    }

    pub fn stage(&self) -> Option<Stage> {
        match self {
            RoundTripOutcome::Match { .. } => None,
            RoundTripOutcome::Failed { stage, .. } => Some(*stage),
        }
    }
}

fn pair_label(a: usize, b: usize, size: usize) -> u64 {
    (a.min(b) * size + a.max(b)) as u64
}

/// Input graph with edges directed from the `x = 0` end, labeled by their
/// component pair.
pub fn problem_graph<T: Scalar>(problem: &MetricGraphProblem<T>, c: &Compilation<T>) -> LabeledGraph {
    let size = c.classification.size();
    LabeledGraph {
        vertex_labels: c.classification.roles.iter().map(|r| r.code()).collect(),
        edges: problem
            .edges
            .iter()
            .zip(&c.classification.component)
            .map(|(e, [a, b])| (e.zero_end(), e.one_end(), pair_label(*a, *b, size)))
            .collect(),
        directed: true,
    }
}

/// Realized network in the same labeling as [`problem_graph`].
pub fn network_graph<T: Scalar>(net: &RealizedNetwork<T>) -> LabeledGraph {
    let size = net.speeds.len();
    LabeledGraph {
        vertex_labels: net.vertices.iter().map(|v| v.role.code()).collect(),
        edges: net.edges.iter().map(|e| (e.x0, e.x1, pair_label(e.components.0, e.components.1, size))).collect(),
        directed: true,
    }
}

fn flow_failures(flows: &[VertexFlow]) -> Vec<String> {
    flows
        .iter()
        .filter(|f| !f.passed())
        .map(|f| format!("vertex {}: {}", f.vertex + 1, f.witness.as_deref().unwrap_or("flow check failed")))
        .collect()
}

fn diagnosis_lines(d: &Diagnosis) -> Vec<String> {
    let tags: Vec<String> = d.tags.iter().map(ToString::to_string).collect();
    let mut out = vec![format!("not realizable: {}", tags.join(", "))];
    out.extend(d.describe());
    out
}

/// Accepts when any realization found under `opts` (collecting all of
/// them) matches the input as a directed, labeled graph.
pub fn roundtrip<T: Scalar>(problem: &MetricGraphProblem<T>, opts: &RealizeOptions<T>) -> Result<RoundTripOutcome<T>> {
    let failed = |stage, reason| Ok(RoundTripOutcome::Failed { stage, reason });
    let c = match compile(problem, &opts.tol) {
        Ok(c) => c,
        Err(e) => return failed(Stage::Compile, vec![e.to_string()]),
    };
    let Some(bs) = c.system.clone() else {
        let bad: Vec<String> = c.ill_posed().iter().map(|v| format!("vertex {} is ill posed", v + 1)).collect();
        return failed(Stage::Compile, bad);
    };
    let flows = flow_checks(&c, &opts.tol)?;
    let bad = flow_failures(&flows);
    if !bad.is_empty() {
        return failed(Stage::Check, bad);
    }
    let opts = RealizeOptions { collect_all: true, ..opts.clone() };
    let realizations = match realize(&bs, &opts)? {
        RealizeOutcome::Realizable(r) => r.all,
        RealizeOutcome::NotRealizable(d) => return failed(Stage::Realize, diagnosis_lines(&d)),
        RealizeOutcome::BudgetExhausted { tried, .. } => {
            return failed(Stage::Realize, vec![format!("budget exhausted after {tried} sink groupings")])
        }
    };
    let original = problem_graph(problem, &c);
    match realizations.iter().position(|net| network_graph(net).is_isomorphic(&original)) {
        Some(matched) => Ok(RoundTripOutcome::Match { compilation: Box::new(c), realizations, matched }),
        None => failed(
            Stage::Compare,
            vec![format!("none of {} realizations is isomorphic to the input graph", realizations.len())],
        ),
    }
}
