//! DOT export of realized networks and multi digraphs, and a reader for the
//! subset this module writes.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::linedigraph::{MultiDigraph, Role};
use crate::realize::{EdgeKind, RealizedNetwork};
use crate::scalar::Scalar;

fn shape(role: Role) -> &'static str {
    match role {
        Role::Source => "triangle",
        Role::Sink => "invtriangle",
        _ => "ellipse",
    }
}

fn vertex_line(out: &mut String, v: usize, role: Role) {
    let _ = writeln!(out, "  v{} [label=\"v{} {role}\", shape={}];", v + 1, v + 1, shape(role));
}

/// Undirected network; each edge is written from its `x = 0` end and
/// labeled `e_k: (j',j'') [conc|counter]` with 1-based indices.
pub fn network_dot<T: Scalar>(net: &RealizedNetwork<T>) -> String {
    let mut out = String::from("graph network {\n");
    for (v, x) in net.vertices.iter().enumerate() {
        vertex_line(&mut out, v, x.role);
    }
    for (k, e) in net.edges.iter().enumerate() {
        let _ = writeln!(
            out,
            "  v{} -- v{} [label=\"e_{}: ({},{}) [{}]\"];",
            e.x0 + 1,
            e.x1 + 1,
            k + 1,
            e.components.0 + 1,
            e.components.1 + 1,
            e.kind
        );
    }
    out.push_str("}\n");
    out
}

/// Directed dump with arcs labeled by 1-based component index.
pub fn digraph_dot(g: &MultiDigraph) -> String {
    let mut out = String::from("digraph arcs {\n");
    for (v, role) in g.roles().into_iter().enumerate() {
        vertex_line(&mut out, v, role);
    }
    for (a, &(t, h)) in g.arcs.iter().enumerate() {
        let _ = writeln!(out, "  v{} -> v{} [label=\"{}\"];", t + 1, h + 1, a + 1);
    }
    out.push_str("}\n");
    out
}

/// Network edge as read back from DOT, 0-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DotEdge {
    pub x0: usize,
    pub x1: usize,
    pub components: (usize, usize),
    pub kind: EdgeKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DotNetwork {
    pub roles: Vec<Role>,
    pub edges: Vec<DotEdge>,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Input { location: format!("dot line {line}"), message: message.into() }
}

fn vertex_id(s: &str, line: usize) -> Result<usize> {
    s.trim()
        .strip_prefix('v')
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .map(|n| n - 1)
        .ok_or_else(|| parse_error(line, format!("bad vertex id \"{s}\"")))
}

/// `key=value` pairs; values may be double-quoted.
fn attributes(s: &str, line: usize) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let eq = rest.find('=').ok_or_else(|| parse_error(line, "attribute without '='"))?;
        let key = rest[..eq].trim().to_string();
        rest = rest[eq + 1..].trim_start();
        let value;
        if let Some(q) = rest.strip_prefix('"') {
            let end = q.find('"').ok_or_else(|| parse_error(line, "unterminated string"))?;
            value = q[..end].to_string();
            rest = &q[end + 1..];
        } else {
            let end = rest.find(',').unwrap_or(rest.len());
            value = rest[..end].trim().to_string();
            rest = &rest[end..];
        }
        out.push((key, value));
        rest = rest.trim_start().strip_prefix(',').unwrap_or(rest).trim_start();
    }
    Ok(out)
}

fn edge_label(label: &str, line: usize) -> Result<((usize, usize), EdgeKind)> {
    let bad = || parse_error(line, format!("bad edge label \"{label}\""));
    let (_, rest) = label.split_once(": (").ok_or_else(bad)?;
    let (pair, kind) = rest.split_once(") [").ok_or_else(bad)?;
    let (a, b) = pair.split_once(',').ok_or_else(bad)?;
    let num = |s: &str| s.trim().parse::<usize>().ok().filter(|&n| n > 0).map(|n| n - 1).ok_or_else(bad);
    let kind = match kind.strip_suffix(']').ok_or_else(bad)? {
        "conc" => EdgeKind::Concurrent,
        "counter" => EdgeKind::Countercurrent,
        _ => return Err(bad()),
    };
    Ok(((num(a)?, num(b)?), kind))
}

/// Reads DOT produced by [`network_dot`].
pub fn parse_network_dot(text: &str) -> Result<DotNetwork> {
    let mut roles: Vec<Option<Role>> = Vec::new();
    let mut edges = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with("graph") || s == "}" {
            continue;
        }
        let body = s.strip_suffix("];").ok_or_else(|| parse_error(line, "expected a statement ending in \"];\""))?;
        let (head, attrs) = body.split_once(" [").ok_or_else(|| parse_error(line, "missing attribute list"))?;
        let attrs = attributes(attrs, line)?;
        let get = |k: &str| attrs.iter().find(|(key, _)| key == k).map(|(_, v)| v.as_str());
        if let Some((a, b)) = head.split_once("--") {
            let (components, kind) = edge_label(get("label").unwrap_or(""), line)?;
            edges.push(DotEdge { x0: vertex_id(a, line)?, x1: vertex_id(b, line)?, components, kind });
        } else {
            let v = vertex_id(head, line)?;
            let role = match get("label").and_then(|l| l.rsplit(' ').next()) {
                Some("transient") => Role::Transient,
                Some("source") => Role::Source,
                Some("sink") => Role::Sink,
                Some("isolated") => Role::Isolated,
                _ => return Err(parse_error(line, "vertex label lacks a role")),
            };
            if roles.len() <= v {
                roles.resize(v + 1, None);
            }
            roles[v] = Some(role);
        }
    }
    let roles = roles
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.ok_or_else(|| parse_error(0, format!("vertex v{} is not declared", v + 1))))
        .collect::<Result<Vec<_>>>()?;
    if let Some(e) = edges.iter().find(|e| e.x0 >= roles.len() || e.x1 >= roles.len()) {
        return Err(parse_error(0, format!("edge endpoint v{} is not declared", e.x0.max(e.x1) + 1)));
    }
    Ok(DotNetwork { roles, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attributes_with_quotes_and_commas() {
        let a = attributes("label=\"e_1: (1,2) [conc]\", shape=triangle", 1).unwrap();
        assert_eq!(a[0], ("label".into(), "e_1: (1,2) [conc]".into()));
        assert_eq!(a[1], ("shape".into(), "triangle".into()));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_network_dot("graph network {\n  v1 -- v2\n}\n").is_err());
        assert!(parse_network_dot("graph network {\n  v1 -- v2 [label=\"e_1: (1,2) [conc]\"];\n}\n").is_err());
        assert!(edge_label("e_1: (0,2) [conc]", 1).is_err());
    }

    #[test]
    fn digraph_shapes() {
        let g = MultiDigraph::new(2, vec![(1, 0)]).unwrap();
        let dot = digraph_dot(&g);
        assert!(dot.contains("v2 [label=\"v2 source\", shape=triangle];"));
        assert!(dot.contains("v1 [label=\"v1 sink\", shape=invtriangle];"));
        assert!(dot.contains("v2 -> v1 [label=\"1\"];"));
    }
}
