use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::binmat::RealMatrix;
use crate::error::{Error, Result};
use crate::netcompile::{compile, flow_checks, EdgeData, Endpoint, GraphEdge, MetricGraphProblem};
use crate::scalar::Scalar;

/// Bounds for [`random_problem`].
#[derive(Clone, Debug)]
pub struct GeneratorConfig {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Pendant sinks hanging off one vertex; bounds the pairing search.
    pub max_sinks_per_vertex: usize,
    /// Redraws of the vertex conditions before giving up.
    pub max_attempts: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig { max_vertices: 8, max_edges: 12, max_sinks_per_vertex: 2, max_attempts: 200 }
    }
}

fn nonzero<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    let x = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        x
    } else {
        -x
    }
}

fn outgoing_count(alpha: u8, l: u8) -> usize {
    (0..2).filter(|&c| super::is_outgoing(alpha, l, c)).count()
}

/// Random simple connected graph with integer eigen-data and dense vertex
/// conditions that are well posed and flow connected.
///
/// Sinks are always pendant vertices, so each sink receives exactly one
/// edge. Edges mix all three sign patterns of the eigenvalues.
pub fn random_problem<T: Scalar, R: Rng>(rng: &mut R, cfg: &GeneratorConfig) -> Result<MetricGraphProblem<T>> {
    if cfg.max_vertices < 2 || cfg.max_edges < cfg.max_vertices.min(2) - 1 {
        return Err(Error::InvalidProblem("generator bounds admit no connected graph".into()));
    }
    let n = rng.gen_range(2..=cfg.max_vertices.min(cfg.max_edges + 1));
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        pairs.insert((u, v));
    }
    let max_m = cfg.max_edges.min(n * (n - 1) / 2);
    let m = rng.gen_range(n - 1..=max_m);
    while pairs.len() < m {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let mut ends: Vec<(usize, usize)> =
        pairs.into_iter().map(|(a, b)| if rng.gen_bool(0.5) { (a, b) } else { (b, a) }).collect();
    ends.shuffle(rng);
    let x0: Vec<Endpoint> = (0..m).map(|_| if rng.gen_bool(0.5) { Endpoint::Tail } else { Endpoint::Head }).collect();
    let mut alpha: Vec<u8> = (0..m).map(|_| rng.gen_range(0..=2)).collect();

    let zero_end = |j: usize| if x0[j] == Endpoint::Tail { ends[j].0 } else { ends[j].1 };
    let incident = |v: usize| (0..m).filter(|&j| ends[j].0 == v || ends[j].1 == v).collect::<Vec<_>>();
    // Turn non-pendant sinks, and sinks beyond the per-vertex cap, into
    // transient vertices by giving one incident edge mixed signs.
    loop {
        let k = |v: usize, alpha: &[u8]| -> usize {
            incident(v).iter().map(|&j| outgoing_count(alpha[j], u8::from(zero_end(j) != v))).sum()
        };
        let mut changed = false;
        let mut pendant_sinks = vec![0usize; n];
        for v in 0..n {
            if k(v, &alpha) != 0 {
                continue;
            }
            let inc = incident(v);
            let j = inc[0];
            let neighbor = if ends[j].0 == v { ends[j].1 } else { ends[j].0 };
            if inc.len() > 1 || pendant_sinks[neighbor] >= cfg.max_sinks_per_vertex {
                alpha[j] = 1;
                changed = true;
                break;
            }
            pendant_sinks[neighbor] += 1;
        }
        if !changed {
            break;
        }
    }

    let mut edges = Vec::with_capacity(m);
    for j in 0..m {
        let (lp, lm) = match alpha[j] {
            2 => {
                let lm = rng.gen_range(1..=4);
                (lm + rng.gen_range(1..=4), lm)
            }
            0 => {
                let lp = -rng.gen_range(1..=4);
                (lp, lp - rng.gen_range(1..=4))
            }
            _ => (rng.gen_range(1..=5), -rng.gen_range(1..=5)),
        };
        let f = loop {
            let e: Vec<i64> = (0..4).map(|_| nonzero(rng, 3)).collect();
            if e[0] * e[3] - e[1] * e[2] != 0 {
                break RealMatrix::<T>::from_i64_rows(&[&e[0..2], &e[2..4]])?;
            }
        };
        let (lp, lm) = (T::from_f64_lossy(lp as f64), T::from_f64_lossy(lm as f64));
        let data = if rng.gen_bool(0.5) {
            let d = RealMatrix::from_rows(vec![vec![lp.clone(), T::zero()], vec![T::zero(), lm.clone()]])?;
            let inv = f.inverse()?.ok_or_else(|| Error::Internal("sampled singular matrix".into()))?;
            EdgeData::Matrix(f.mul(&d)?.mul(&inv)?)
        } else {
            EdgeData::Eigen { lambda_plus: lp, lambda_minus: lm, f }
        };
        edges.push(GraphEdge { tail: ends[j].0, head: ends[j].1, x0: x0[j], data });
    }

    let names: Vec<String> = (1..=n).map(|v| format!("v{v}")).collect();
    let k_of =
        |v: usize| -> usize { incident(v).iter().map(|&j| outgoing_count(alpha[j], u8::from(zero_end(j) != v))).sum() };
    let tol = T::default_tolerance();
    for _ in 0..cfg.max_attempts {
        let phi: Vec<Option<RealMatrix<T>>> = (0..n)
            .map(|v| {
                let k = k_of(v);
                (k > 0).then(|| {
                    let cols = 2 * incident(v).len();
                    RealMatrix::from_fn(k, cols, |_, _| T::from_f64_lossy(nonzero(rng, 9) as f64))
                })
            })
            .collect();
        let problem = MetricGraphProblem::new(names.clone(), edges.clone(), phi)?;
        let compiled = compile(&problem, &tol)?;
        if compiled.system.is_some() && flow_checks(&compiled, &tol)?.iter().all(|f| f.passed()) {
            return Ok(problem);
        }
    }
    Err(Error::Internal("no admissible vertex conditions found".into()))
}
