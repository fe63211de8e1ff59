use crate::binmat::{hat, support, BinaryMatrix, IndexSet};
use crate::error::Result;
use crate::linedigraph::{build_classes, recognize, ClassStructure, Recognition};
use crate::realize::BoundarySystem;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssoutFailure {
    ZeroColumn(usize),
    ZeroRow(usize),
}

/// A row with no incoming coefficients whose outgoing support spans
/// several out-classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ass3Failure {
    pub row: usize,
    pub support: IndexSet,
    pub classes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssumptionReport {
    pub assout: Vec<AssoutFailure>,
    /// `hat(hat(Ξ_out)ᵀ hat(Ξ_in))`, rows = outgoing arcs, columns = incoming arcs.
    pub a: BinaryMatrix,
    pub line_digraph: Recognition,
    pub classes: Option<ClassStructure>,
    /// Rows of `Ξ_in` that vanish.
    pub zero_in_rows: IndexSet,
    pub ass3: Vec<Ass3Failure>,
}

impl AssumptionReport {
    pub fn all_passed(&self) -> bool {
        self.assout.is_empty() && self.line_digraph.passed() && self.ass3.is_empty()
    }

    /// Three lines, one per assumption, each PASS or FAIL with a witness.
    pub fn summary_lines(&self) -> Vec<String> {
        let assout = match self.assout.first() {
            None => "PASS".to_string(),
            Some(AssoutFailure::ZeroColumn(j)) => format!("FAIL (xi_out column {} is zero)", j + 1),
            Some(AssoutFailure::ZeroRow(i)) => format!("FAIL (xi_out row {} is zero)", i + 1),
        };
        let mass = match self.line_digraph {
            Recognition::Pass => "PASS".to_string(),
            other => format!("FAIL ({})", other.describe()),
        };
        let ass3 = if !self.line_digraph.passed() {
            "SKIPPED (needs line-digraph)".to_string()
        } else {
            match self.ass3.first() {
                None => "PASS".to_string(),
                Some(f) => {
                    format!("FAIL (row {} has outgoing support {} across several out-classes)", f.row + 1, f.support)
                }
            }
        };
        vec![format!("assout: {assout}"), format!("line-digraph: {mass}"), format!("ass3: {ass3}")]
    }

    pub fn describe_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for f in &self.assout {
            out.push(match f {
                AssoutFailure::ZeroColumn(j) => format!("assout: xi_out column {} is zero", j + 1),
                AssoutFailure::ZeroRow(i) => format!("assout: xi_out row {} is zero", i + 1),
            });
        }
        if !self.line_digraph.passed() {
            out.push(format!("MAss: {}", self.line_digraph.describe()));
        }
        for f in &self.ass3 {
            out.push(format!("ass3: row {} has outgoing support {} across several out-classes", f.row + 1, f.support));
        }
        out
    }
}

/// Evaluates the three structural assumptions. All failures are listed;
/// the third check only runs when the line-digraph test passes.
pub fn check_assumptions<T: Scalar>(bs: &BoundarySystem<T>, tol: &T) -> Result<AssumptionReport> {
    let size = bs.size();
    let h_out = hat(&bs.xi_out, tol);
    let h_in = hat(&bs.xi_in, tol);
    let mut assout = Vec::new();
    for j in 0..size {
        if h_out.is_zero_col(j) {
            assout.push(AssoutFailure::ZeroColumn(j));
        }
    }
    for i in 0..size {
        if h_out.is_zero_row(i) {
            assout.push(AssoutFailure::ZeroRow(i));
        }
    }
    let a = h_out.transpose().bool_product(&h_in)?;
    let line_digraph = recognize(&a)?;
    let zero_in_rows: IndexSet = (0..size).filter(|&i| h_in.is_zero_row(i)).collect();
    let mut classes = None;
    let mut ass3 = Vec::new();
    if line_digraph.passed() {
        let cs = build_classes(&a)?;
        for i in zero_in_rows.iter() {
            let supp = support(bs.xi_out.row(i), tol);
            let mut touched: Vec<usize> = supp.iter().filter_map(|k| cs.out_class_of(k)).collect();
            touched.sort_unstable();
            touched.dedup();
            if touched.len() > 1 {
                ass3.push(Ass3Failure { row: i, support: supp, classes: touched });
            }
        }
        classes = Some(cs);
    }
    Ok(AssumptionReport { assout, a, line_digraph, classes, zero_in_rows, ass3 })
}
