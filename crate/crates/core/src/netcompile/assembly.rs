use crate::binmat::{IndexSet, RealMatrix};
use crate::error::{Error, Result};
use crate::flowconn::{
    check_full_connectivity, check_irreducible, has_kirchhoff_row, source_connectivity, transient_connectivity,
    FullConnectivity, Irreducibility, VertexBoundaryBlock,
};
use crate::linedigraph::Role;
use crate::netcompile::{classify, eigen_of, is_outgoing, EdgeEigen, InvariantClassification, MetricGraphProblem};
use crate::realize::BoundarySystem;
use crate::scalar::Scalar;

/// Relative determinant threshold for the solvability test on floats.
pub const DET_TOLERANCE: f64 = 1e-9;

/// The split of `F(v)` into outgoing and incoming columns at one vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexAssembly<T: Scalar> {
    pub vertex: usize,
    pub k_v: usize,
    /// Incident edges, ascending.
    pub edges: Vec<usize>,
    /// `(edge, invariant)` of each column of `F(v)`.
    pub columns: Vec<(usize, usize)>,
    pub outgoing: Vec<bool>,
    /// Block diagonal `F(v)`.
    pub f: RealMatrix<T>,
    /// `F(v)` with the incoming columns zeroed.
    pub f_out_full: RealMatrix<T>,
    /// Outgoing columns only (`2|J_v| × k_v`).
    pub f_out: RealMatrix<T>,
    /// Incoming columns only (`2|J_v| × (2|J_v| - k_v)`).
    pub f_in: RealMatrix<T>,
    /// Component index of each column of `f_out`.
    pub out_components: Vec<usize>,
    /// Component index of each column of `f_in`.
    pub in_components: Vec<usize>,
}

pub fn build_contraction<T: Scalar>(
    problem: &MetricGraphProblem<T>,
    cls: &InvariantClassification,
    eigen: &[EdgeEigen<T>],
    v: usize,
) -> Result<VertexAssembly<T>> {
    let edges = problem.incident(v);
    let mut columns = Vec::with_capacity(2 * edges.len());
    let mut outgoing = Vec::with_capacity(2 * edges.len());
    for &j in &edges {
        let l = problem.edges[j].l(v).ok_or_else(|| Error::Internal("edge not incident".into()))?;
        for c in 0..2 {
            columns.push((j, c));
            outgoing.push(is_outgoing(cls.alpha[j], l, c));
        }
    }
    let f = RealMatrix::block_diag(&edges.iter().map(|&j| eigen[j].f.clone()).collect::<Vec<_>>());
    let n = f.nrows();
    let all: Vec<usize> = (0..n).collect();
    let out_idx: Vec<usize> = (0..n).filter(|&t| outgoing[t]).collect();
    let in_idx: Vec<usize> = (0..n).filter(|&t| !outgoing[t]).collect();
    let f_out_full = RealMatrix::from_fn(n, n, |r, t| if outgoing[t] { f.get(r, t).clone() } else { T::zero() });
    let comp = |t: usize| cls.component[columns[t].0][columns[t].1];
    let asm = VertexAssembly {
        vertex: v,
        k_v: out_idx.len(),
        f_out: f.select(&all, &out_idx),
        f_in: f.select(&all, &in_idx),
        out_components: out_idx.iter().map(|&t| comp(t)).collect(),
        in_components: in_idx.iter().map(|&t| comp(t)).collect(),
        edges,
        columns,
        outgoing,
        f,
        f_out_full,
    };
    if asm.k_v != cls.k[v] {
        return Err(Error::Internal(format!("vertex {} has {} outgoing columns but k = {}", v + 1, asm.k_v, cls.k[v])));
    }
    Ok(asm)
}

/// Solvability of the vertex conditions for the outgoing values.
#[derive(Clone, Debug, PartialEq)]
pub struct WellPosedness<T: Scalar> {
    /// `Φ_v F_out(v)`.
    pub psi_out: RealMatrix<T>,
    /// `Φ_v F_in(v)`.
    pub psi_in: RealMatrix<T>,
    pub det: T,
    /// Product of the row norms of `psi_out`.
    pub scale: f64,
    /// `-(Φ_v F_out)⁻¹ Φ_v F_in`, present when solvable.
    pub map: Option<RealMatrix<T>>,
}

impl<T: Scalar> WellPosedness<T> {
    pub fn passed(&self) -> bool {
        self.map.is_some()
    }
}

/// Exact scalars need a nonzero determinant; floats need
/// `|det| > 1e-9 · ∏ row norms`.
pub fn wellposed<T: Scalar>(phi: &RealMatrix<T>, asm: &VertexAssembly<T>) -> Result<WellPosedness<T>> {
    if phi.shape() != (asm.k_v, asm.f.nrows()) {
        return Err(Error::Dimension(format!(
            "conditions at vertex {} are {}x{}, expected {}x{}",
            asm.vertex + 1,
            phi.nrows(),
            phi.ncols(),
            asm.k_v,
            asm.f.nrows()
        )));
    }
    let psi_out = phi.mul(&asm.f_out)?;
    let psi_in = phi.mul(&asm.f_in)?;
    let det = psi_out.determinant()?;
    let scale: f64 = (0..psi_out.nrows()).map(|i| psi_out.row_norm(i)).product();
    let solvable = if T::EXACT { !det.is_zero() } else { det.to_f64_lossy().abs() > DET_TOLERANCE * scale };
    let map = if solvable { psi_out.solve(&psi_in)?.map(|x| x.neg()) } else { None };
    Ok(WellPosedness { psi_out, psi_in, det, scale, map })
}

/// Per-vertex compilation result; sinks carry no conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexCompile<T: Scalar> {
    pub role: Role,
    pub assembly: VertexAssembly<T>,
    pub wellposed: Option<WellPosedness<T>>,
}

/// Boundary block of a non-sink vertex in component indices.
pub fn vertex_block<T: Scalar>(vc: &VertexCompile<T>, tol: &T) -> Option<Result<VertexBoundaryBlock<T>>> {
    let wp = vc.wellposed.as_ref()?;
    Some(VertexBoundaryBlock::new(
        wp.psi_out.clone(),
        wp.psi_in.clone(),
        vc.assembly.out_components.clone(),
        vc.assembly.in_components.clone(),
        tol.clone(),
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Compilation<T: Scalar> {
    pub eigen: Vec<EdgeEigen<T>>,
    pub classification: InvariantClassification,
    pub vertices: Vec<VertexCompile<T>>,
    /// Present when every non-sink vertex is well posed.
    pub system: Option<BoundarySystem<T>>,
    /// Vertex owning each boundary row.
    pub row_vertex: Vec<usize>,
    /// Component `c` leaves `arcs[c].0` and enters `arcs[c].1`.
    pub arcs: Vec<(usize, usize)>,
}

impl<T: Scalar> Compilation<T> {
    pub fn ill_posed(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.vertices[v].wellposed.as_ref().is_some_and(|w| !w.passed())).collect()
    }

    /// Component pairs per edge, as `(min, max)`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.classification.component.iter().map(|[a, b]| ((*a).min(*b), (*a).max(*b))).collect()
    }
}

pub fn compile<T: Scalar>(problem: &MetricGraphProblem<T>, tol: &T) -> Result<Compilation<T>> {
    let eigen = problem
        .edges
        .iter()
        .enumerate()
        .map(|(j, e)| eigen_of(&e.data, tol).map_err(|err| Error::InvalidProblem(format!("edge {}: {err}", j + 1))))
        .collect::<Result<Vec<_>>>()?;
    let cls = classify(problem, &eigen)?;
    let r = problem.vertex_count();
    let size = cls.size();

    let mut vertices = Vec::with_capacity(r);
    for v in 0..r {
        let assembly = build_contraction(problem, &cls, &eigen, v)?;
        let role = cls.roles[v];
        let wp = match (&problem.phi[v], role) {
            (Some(phi), Role::Sink) if phi.nrows() > 0 => {
                return Err(Error::InvalidProblem(format!("sink vertex {} carries conditions", v + 1)))
            }
            (_, Role::Sink) => None,
            (None, _) => return Err(Error::InvalidProblem(format!("vertex {} has no conditions", v + 1))),
            (Some(phi), _) => Some(wellposed(phi, &assembly)?),
        };
        vertices.push(VertexCompile { role, assembly, wellposed: wp });
    }

    let arcs: Vec<(usize, usize)> = (0..size)
        .map(|g| {
            let (j, c) = cls.invariant_of(g).expect("every component is numbered");
            let e = &problem.edges[j];
            if is_outgoing(cls.alpha[j], 0, c) {
                (e.zero_end(), e.one_end())
            } else {
                (e.one_end(), e.zero_end())
            }
        })
        .collect();

    let mut xi_out = RealMatrix::zeros(size, size);
    let mut xi_in = RealMatrix::zeros(size, size);
    let mut row_vertex = Vec::with_capacity(size);
    for vc in &vertices {
        let Some(wp) = &vc.wellposed else { continue };
        for r in 0..wp.psi_out.nrows() {
            let row = row_vertex.len();
            for (t, &g) in vc.assembly.out_components.iter().enumerate() {
                xi_out.set(row, g, wp.psi_out.get(r, t).clone());
            }
            for (t, &g) in vc.assembly.in_components.iter().enumerate() {
                xi_in.set(row, g, wp.psi_in.get(r, t).clone());
            }
            row_vertex.push(vc.assembly.vertex);
        }
    }
    if row_vertex.len() != size {
        return Err(Error::Internal(format!("{} boundary rows for {size} components", row_vertex.len())));
    }

    let all_ok = vertices.iter().all(|vc| vc.wellposed.as_ref().is_none_or(WellPosedness::passed));
    let system = if all_ok {
        let mut speeds = vec![T::zero(); size];
        for (j, pair) in cls.component.iter().enumerate() {
            for (c, &g) in pair.iter().enumerate() {
                speeds[g] = eigen[j].speed(c);
            }
        }
        Some(BoundarySystem::new(problem.edge_count(), xi_out, xi_in, cls.j_plus.clone(), cls.j_minus.clone(), speeds)?)
    } else {
        None
    };
    Ok(Compilation { eigen, classification: cls, vertices, system, row_vertex, arcs })
}

/// Compiles and fails when any vertex is ill posed.
pub fn assemble_global<T: Scalar>(problem: &MetricGraphProblem<T>, tol: &T) -> Result<BoundarySystem<T>> {
    let c = compile(problem, tol)?;
    match c.system {
        Some(bs) => Ok(bs),
        None => {
            let list: Vec<String> = c
                .ill_posed()
                .iter()
                .map(|&v| {
                    let wp = c.vertices[v].wellposed.as_ref().expect("ill-posed vertices have conditions");
                    format!("vertex {} (det {})", v + 1, wp.det)
                })
                .collect();
            Err(Error::InvalidProblem(format!("ill-posed conditions at {}", list.join(", "))))
        }
    }
}

/// Flow-connectivity verdicts at one non-sink vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFlow {
    pub vertex: usize,
    pub role: Role,
    /// Why the outgoing block has a zero row or column, if it does.
    pub ass1: Option<String>,
    /// Transient vertices only.
    pub full: Option<FullConnectivity>,
    /// Sources only.
    pub irreducible: Option<Irreducibility>,
    pub kirchhoff_row: Option<usize>,
    /// 1-based description of the first failure.
    pub witness: Option<String>,
}

impl VertexFlow {
    pub fn passed(&self) -> bool {
        self.ass1.is_none()
            && self.full.as_ref().is_none_or(FullConnectivity::passed)
            && self.irreducible.as_ref().is_none_or(Irreducibility::passed)
    }
}

pub fn flow_checks<T: Scalar>(c: &Compilation<T>, tol: &T) -> Result<Vec<VertexFlow>> {
    let mut out = Vec::new();
    for vc in &c.vertices {
        let Some(block) = vertex_block(vc, tol) else { continue };
        let vertex = vc.assembly.vertex;
        let mut flow = VertexFlow {
            vertex,
            role: vc.role,
            ass1: None,
            full: None,
            irreducible: None,
            kirchhoff_row: None,
            witness: None,
        };
        match block {
            Err(Error::InvalidBlock(msg)) => {
                flow.witness = Some(format!("ass1: {msg}"));
                flow.ass1 = Some(msg);
            }
            Err(e) => return Err(e),
            Ok(b) => {
                flow.kirchhoff_row = has_kirchhoff_row(&b);
                if vc.role == Role::Source {
                    let cm = source_connectivity(&b)?;
                    let irr = check_irreducible(&cm)?;
                    if let Irreducibility::Fail { components } = &irr {
                        let groups: Vec<String> = components
                            .iter()
                            .map(|s| {
                                let arcs: IndexSet = s.iter().map(|p| cm.row_arcs[p]).collect();
                                arcs.to_string()
                            })
                            .collect();
                        flow.witness = Some(format!("assirr: outgoing components split into {}", groups.join(" ")));
                    }
                    flow.irreducible = Some(irr);
                } else {
                    let cm = transient_connectivity(&b);
                    let full = check_full_connectivity(&cm);
                    if let FullConnectivity::Fail { row, col } = full {
                        flow.witness = Some(format!(
                            "sfC: outgoing component {} does not depend on incoming component {}",
                            cm.row_arcs[row] + 1,
                            cm.col_arcs[col] + 1
                        ));
                    }
                    flow.full = Some(full);
                }
            }
        }
        out.push(flow);
    }
    Ok(out)
}
