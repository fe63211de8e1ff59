//! JSON documents: boundary systems and metric-graph problems in, networks
//! and diagnoses out. Indices in documents are 1-based.
//!
//! Numbers may be JSON integers, decimals or `{"num": …, "den": …}`
//! fractions. The optional `"arithmetic"` field selects exact rationals
//! (the default) or floating point.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::binmat::{IndexSet, RealMatrix};
use crate::error::{Error, Result};
use crate::netcompile::{EdgeData, Endpoint, GraphEdge, MetricGraphProblem};
use crate::realize::{BoundarySystem, Diagnosis, RealizedNetwork};
use crate::scalar::{parse_decimal, Scalar};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocumentKind {
    BoundarySystem,
    MetricGraph,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arithmetic {
    Exact,
    Float,
}

/// Fields shared by every input document.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub kind: DocumentKind,
    pub arithmetic: Arithmetic,
}

fn input_error(location: &str, message: impl Into<String>) -> Error {
    Error::Input { location: location.to_string(), message: message.into() }
}

/// Parses JSON text; syntax errors carry line and column.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        let location = format!("line {}, column {}", e.line(), e.column());
        let message = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        input_error(&location, message.strip_suffix(&suffix).unwrap_or(&message))
    })
}

fn object<'a>(v: &'a Value, at: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| input_error(at, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str, at: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| input_error(at, format!("missing field \"{name}\"")))
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| input_error(at, "expected an array"))
}

fn index(v: &Value, at: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| input_error(at, "expected a nonnegative integer"))
}

fn integer(v: &Value, at: &str) -> Result<BigInt> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(input_error(at, "expected an integer")),
    };
    match parse_decimal(&text) {
        Some((num, den)) if den == BigInt::from(1) => Ok(num),
        _ => Err(input_error(at, format!("\"{text}\" is not an integer"))),
    }
}

/// Integer, decimal literal or `{"num", "den"}` fraction.
pub fn scalar<T: Scalar>(v: &Value, at: &str) -> Result<T> {
    match v {
        Value::Number(n) => {
            let text = n.to_string();
            let x = T::from_decimal_str(&text).ok_or_else(|| input_error(at, format!("bad number \"{text}\"")))?;
            if x.is_finite_value() {
                Ok(x)
            } else {
                Err(input_error(at, format!("\"{text}\" is out of range")))
            }
        }
        Value::Object(obj) => {
            let num = integer(field(obj, "num", at)?, &format!("{at}.num"))?;
            let den = integer(field(obj, "den", at)?, &format!("{at}.den"))?;
            if den == BigInt::from(0) {
                return Err(input_error(at, "zero denominator"));
            }
            Ok(T::from_ratio(&num, &den))
        }
        _ => Err(input_error(at, "expected a number or {\"num\", \"den\"}")),
    }
}

/// Rectangular matrix; `cols` fixes the width of an empty matrix.
pub fn matrix<T: Scalar>(v: &Value, at: &str, cols: Option<usize>) -> Result<RealMatrix<T>> {
    let rows = array(v, at)?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let at_row = format!("{at}[{i}]");
        let entries = array(row, &at_row)?;
        out.push(
            entries
                .iter()
                .enumerate()
                .map(|(j, x)| scalar(x, &format!("{at_row}[{j}]")))
                .collect::<Result<Vec<T>>>()?,
        );
    }
    let width = cols.or_else(|| out.first().map(Vec::len)).unwrap_or(0);
    RealMatrix::from_rows_with_cols(out, width).map_err(|e| input_error(at, e.to_string()))
}

fn index_set(v: &Value, at: &str, dim: usize) -> Result<IndexSet> {
    let items = array(v, at)?;
    let raw = items.iter().enumerate().map(|(i, x)| index(x, &format!("{at}[{i}]"))).collect::<Result<Vec<_>>>()?;
    if raw.len() != raw.iter().collect::<std::collections::BTreeSet<_>>().len() {
        return Err(input_error(at, "repeated index"));
    }
    IndexSet::from_one_based(&raw, dim).map_err(|e| input_error(at, e.to_string()))
}

/// Reads `kind`, `version` and `arithmetic`.
pub fn read_header(doc: &Value) -> Result<Header> {
    let obj = object(doc, "document")?;
    let kind = match field(obj, "kind", "document")?.as_str() {
        Some("boundary_system") => DocumentKind::BoundarySystem,
        Some("metric_graph") => DocumentKind::MetricGraph,
        _ => return Err(input_error("kind", "expected \"boundary_system\" or \"metric_graph\"")),
    };
    if let Some(v) = obj.get("version") {
        if v.as_u64() != Some(SCHEMA_VERSION) {
            return Err(input_error("version", format!("unsupported schema version {v}")));
        }
    }
    let arithmetic = match obj.get("arithmetic").map(|v| v.as_str()) {
        None | Some(Some("exact")) => Arithmetic::Exact,
        Some(Some("float")) => Arithmetic::Float,
        _ => return Err(input_error("arithmetic", "expected \"exact\" or \"float\"")),
    };
    Ok(Header { kind, arithmetic })
}

pub fn parse_boundary_system<T: Scalar>(doc: &Value) -> Result<BoundarySystem<T>> {
    let obj = object(doc, "document")?;
    let m = index(field(obj, "m", "document")?, "m")?;
    let size = 2 * m;
    let xi_out = matrix(field(obj, "xi_out", "document")?, "xi_out", Some(size))?;
    let xi_in = matrix(field(obj, "xi_in", "document")?, "xi_in", Some(size))?;
    let j_plus = index_set(field(obj, "j_plus", "document")?, "j_plus", size)?;
    let j_minus = index_set(field(obj, "j_minus", "document")?, "j_minus", size)?;
    let speeds = array(field(obj, "speeds", "document")?, "speeds")?
        .iter()
        .enumerate()
        .map(|(i, x)| scalar(x, &format!("speeds[{i}]")))
        .collect::<Result<Vec<T>>>()?;
    BoundarySystem::new(m, xi_out, xi_in, j_plus, j_minus, speeds).map_err(|e| input_error("document", e.to_string()))
}

/// Vertex reference: 1-based index or name.
fn vertex_ref(v: &Value, names: &[String], at: &str) -> Result<usize> {
    match v {
        Value::String(s) => {
            names.iter().position(|n| n == s).ok_or_else(|| input_error(at, format!("unknown vertex \"{s}\"")))
        }
        _ => {
            let i = index(v, at)?;
            if i == 0 || i > names.len() {
                return Err(input_error(at, format!("vertex {i} outside 1..={}", names.len())));
            }
            Ok(i - 1)
        }
    }
}

pub fn parse_metric_graph<T: Scalar>(doc: &Value) -> Result<MetricGraphProblem<T>> {
    let obj = object(doc, "document")?;
    let names = array(field(obj, "vertices", "document")?, "vertices")?
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(input_error(&format!("vertices[{i}]"), "expected a name")),
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(input_error(&format!("vertices[{i}]"), format!("duplicate vertex \"{n}\"")));
        }
    }

    let mut edges = Vec::new();
    for (j, e) in array(field(obj, "edges", "document")?, "edges")?.iter().enumerate() {
        let at = format!("edges[{j}]");
        let eo = object(e, &at)?;
        if let Some(id) = eo.get("id") {
            if index(id, &format!("{at}.id"))? != j + 1 {
                return Err(input_error(&format!("{at}.id"), format!("expected id {}", j + 1)));
            }
        }
        let tail = vertex_ref(field(eo, "tail", &at)?, &names, &format!("{at}.tail"))?;
        let head = vertex_ref(field(eo, "head", &at)?, &names, &format!("{at}.head"))?;
        let x0 = match eo.get("x0").map(|v| v.as_str()) {
            None | Some(Some("tail")) => Endpoint::Tail,
            Some(Some("head")) => Endpoint::Head,
            _ => return Err(input_error(&format!("{at}.x0"), "expected \"tail\" or \"head\"")),
        };
        let data = match (eo.get("M"), eo.get("lambda"), eo.get("F")) {
            (Some(m), None, None) => EdgeData::Matrix(matrix(m, &format!("{at}.M"), None)?),
            (None, Some(l), Some(f)) => {
                let at_l = format!("{at}.lambda");
                let l = array(l, &at_l)?;
                if l.len() != 2 {
                    return Err(input_error(&at_l, "expected [lambda_plus, lambda_minus]"));
                }
                EdgeData::Eigen {
                    lambda_plus: scalar(&l[0], &format!("{at_l}[0]"))?,
                    lambda_minus: scalar(&l[1], &format!("{at_l}[1]"))?,
                    f: matrix(f, &format!("{at}.F"), None)?,
                }
            }
            _ => return Err(input_error(&at, "give either \"M\" or both \"lambda\" and \"F\"")),
        };
        edges.push(GraphEdge { tail, head, x0, data });
    }

    let mut phi: Vec<Option<RealMatrix<T>>> = vec![None; names.len()];
    if let Some(conds) = obj.get("vertex_conditions") {
        for (i, c) in array(conds, "vertex_conditions")?.iter().enumerate() {
            let at = format!("vertex_conditions[{i}]");
            let co = object(c, &at)?;
            let v = vertex_ref(field(co, "vertex", &at)?, &names, &format!("{at}.vertex"))?;
            if phi[v].is_some() {
                return Err(input_error(&at, format!("second condition block for vertex \"{}\"", names[v])));
            }
            let m = matrix::<T>(field(co, "phi", &at)?, &format!("{at}.phi"), None)?;
            if m.nrows() > 0 {
                phi[v] = Some(m);
            }
        }
    }
    MetricGraphProblem::new(names, edges, phi).map_err(|e| input_error("document", e.to_string()))
}

pub fn matrix_json<T: Scalar>(m: &RealMatrix<T>) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array(m.row(i).iter().map(Scalar::to_json).collect())).collect())
}

fn set_json(s: &IndexSet) -> Value {
    json!(s.one_based())
}

fn arithmetic_name<T: Scalar>() -> &'static str {
    if T::EXACT {
        "exact"
    } else {
        "float"
    }
}

pub fn boundary_system_json<T: Scalar>(bs: &BoundarySystem<T>) -> Value {
    json!({
        "kind": "boundary_system",
        "version": SCHEMA_VERSION,
        "arithmetic": arithmetic_name::<T>(),
        "m": bs.m,
        "xi_out": matrix_json(&bs.xi_out),
        "xi_in": matrix_json(&bs.xi_in),
        "j_plus": set_json(&bs.j_plus),
        "j_minus": set_json(&bs.j_minus),
        "speeds": bs.speeds.iter().map(Scalar::to_json).collect::<Vec<_>>(),
    })
}

pub fn metric_graph_json<T: Scalar>(p: &MetricGraphProblem<T>) -> Value {
    let edges: Vec<Value> = p
        .edges
        .iter()
        .enumerate()
        .map(|(j, e)| {
            let mut obj = Map::new();
            obj.insert("id".into(), json!(j + 1));
            obj.insert("tail".into(), json!(p.vertex_names[e.tail]));
            obj.insert("head".into(), json!(p.vertex_names[e.head]));
            obj.insert("x0".into(), json!(if e.x0 == Endpoint::Tail { "tail" } else { "head" }));
            match &e.data {
                EdgeData::Matrix(m) => {
                    obj.insert("M".into(), matrix_json(m));
                }
                EdgeData::Eigen { lambda_plus, lambda_minus, f } => {
                    obj.insert("lambda".into(), json!([lambda_plus.to_json(), lambda_minus.to_json()]));
                    obj.insert("F".into(), matrix_json(f));
                }
            }
            Value::Object(obj)
        })
        .collect();
    let conditions: Vec<Value> = p
        .phi
        .iter()
        .enumerate()
        .filter_map(|(v, m)| m.as_ref().map(|m| json!({"vertex": p.vertex_names[v], "phi": matrix_json(m)})))
        .collect();
    json!({
        "kind": "metric_graph",
        "version": SCHEMA_VERSION,
        "arithmetic": arithmetic_name::<T>(),
        "vertices": p.vertex_names,
        "edges": edges,
        "vertex_conditions": conditions,
    })
}

pub fn network_json<T: Scalar>(net: &RealizedNetwork<T>) -> Value {
    let vertices: Vec<Value> = net
        .vertices
        .iter()
        .enumerate()
        .map(|(v, x)| {
            json!({
                "id": v + 1,
                "role": x.role.to_string(),
                "rows": set_json(&x.rows),
                "out": set_json(&x.out_arcs),
                "in": set_json(&x.in_arcs),
            })
        })
        .collect();
    let edges: Vec<Value> = net
        .edges
        .iter()
        .enumerate()
        .map(|(k, e)| {
            json!({
                "id": k + 1,
                "components": [e.components.0 + 1, e.components.1 + 1],
                "kind": e.kind.to_string(),
                "x0": e.x0 + 1,
                "x1": e.x1 + 1,
            })
        })
        .collect();
    let systems: Vec<Value> = net
        .systems
        .iter()
        .map(|s| {
            json!({
                "vertex": s.vertex + 1,
                "rows": set_json(&s.rows),
                "out_cols": set_json(&s.out_cols),
                "in_cols": set_json(&s.in_cols),
                "xi_out": matrix_json(&s.xi_out),
                "xi_in": matrix_json(&s.xi_in),
            })
        })
        .collect();
    let arcs: Vec<Value> = net.digraph.arcs.iter().map(|&(t, h)| json!([t + 1, h + 1])).collect();
    let sinks: Vec<Value> = net
        .sink_partition
        .groups
        .iter()
        .map(|(part, groups)| json!({"part": part.to_string(), "groups": groups.iter().map(set_json).collect::<Vec<_>>()}))
        .collect();
    json!({
        "kind": "realized_network",
        "version": SCHEMA_VERSION,
        "vertices": vertices,
        "edges": edges,
        "systems": systems,
        "arcs": arcs,
        "sink_partition": sinks,
    })
}

pub fn diagnosis_json(d: &Diagnosis) -> Value {
    json!({
        "kind": "diagnosis",
        "version": SCHEMA_VERSION,
        "tags": d.tags.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "assumptions": d.assumptions.summary_lines(),
        "details": d.describe(),
        "attempts": d.attempts.len(),
    })
}

/// Pretty-printed with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values built here always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn number_forms() {
        let doc = parse_json(r#"[3, -2.5, {"num": 1, "den": 3}, 1e2]"#).unwrap();
        let xs: Vec<BigRational> = doc.as_array().unwrap().iter().map(|v| scalar(v, "x").unwrap()).collect();
        assert_eq!(xs, vec![q(3, 1), q(-5, 2), q(1, 3), q(100, 1)]);
        let f: f64 = scalar(&json!({"num": 1, "den": 4}), "x").unwrap();
        assert_eq!(f, 0.25);
        assert!(scalar::<f64>(&json!({"num": 1, "den": 0}), "x").is_err());
        assert!(scalar::<f64>(&json!("1"), "x").is_err());
    }

    #[test]
    fn syntax_errors_carry_location() {
        match parse_json("{\"kind\": \"boundary_system\",\n \"m\": ") {
            Err(Error::Input { location, .. }) => assert!(location.starts_with("line 2"), "{location}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn boundary_system_round_trips() {
        let text = r#"{"kind": "boundary_system", "m": 1,
            "xi_out": [[1, 0], [0, 1]], "xi_in": [[0, -1], [{"num": -1, "den": 2}, 0]],
            "j_plus": [1], "j_minus": [2], "speeds": [1, 2.5]}"#;
        let doc = parse_json(text).unwrap();
        assert_eq!(read_header(&doc).unwrap().arithmetic, Arithmetic::Exact);
        let bs: BoundarySystem<BigRational> = parse_boundary_system(&doc).unwrap();
        assert_eq!(bs.xi_in.get(1, 0), &q(-1, 2));
        let again: BoundarySystem<BigRational> = parse_boundary_system(&boundary_system_json(&bs)).unwrap();
        assert_eq!(again, bs);
    }

    #[test]
    fn schema_errors_name_the_field() {
        let doc = parse_json(r#"{"kind": "boundary_system", "m": 1, "xi_out": [[1, 0]], "xi_in": [], "j_plus": [1], "j_minus": [2], "speeds": [1, 1]}"#).unwrap();
        match parse_boundary_system::<f64>(&doc) {
            Err(Error::Input { location, .. }) => assert_eq!(location, "document"),
            other => panic!("{other:?}"),
        }
        let doc = parse_json(r#"{"kind": "boundary_system", "m": 1, "xi_out": [[1, "a"], [0, 1]]}"#).unwrap();
        match parse_boundary_system::<f64>(&doc) {
            Err(Error::Input { location, .. }) => assert_eq!(location, "xi_out[0][1]"),
            other => panic!("{other:?}"),
        }
        assert!(read_header(&json!({"kind": "other"})).is_err());
        assert!(read_header(&json!({"kind": "metric_graph", "version": 7})).is_err());
    }

    #[test]
    fn metric_graph_round_trips() {
        let text = r#"{"kind": "metric_graph", "vertices": ["a", "b"],
            "edges": [{"id": 1, "tail": "a", "head": 2, "x0": "head", "lambda": [1, -1], "F": [[1, 1], [1, -1]]}],
            "vertex_conditions": [{"vertex": "a", "phi": [[1, 0]]}, {"vertex": 2, "phi": [[0, 1]]}]}"#;
        let p: MetricGraphProblem<BigRational> = parse_metric_graph(&parse_json(text).unwrap()).unwrap();
        assert_eq!((p.edges[0].tail, p.edges[0].head, p.edges[0].x0), (0, 1, Endpoint::Head));
        let again: MetricGraphProblem<BigRational> = parse_metric_graph(&metric_graph_json(&p)).unwrap();
        assert_eq!(again, p);
    }
}
