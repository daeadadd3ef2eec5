//! Plain-text mesh format for Lagrange meshes.
//!
//! ```text
//! # comment
//! nodes 3
//! 0 0
//! 1 0
//! 0 1
//! elements 1
//! tri3 0 1 2
//! ```

use super::{Element, ElementKind, Mesh};
use crate::error::{Error, Result};
use std::fmt::Write;
use std::path::Path;

pub fn format_mesh(m: &Mesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "nodes {}", m.nodes.len());
    for p in &m.nodes {
        let _ = writeln!(s, "{:?} {:?}", p[0], p[1]);
    }
    let _ = writeln!(s, "elements {}", m.elements.len());
    for e in &m.elements {
        let ids: Vec<String> = e.nodes.iter().map(|n| n.to_string()).collect();
        let _ = writeln!(s, "{} {}", e.kind.name(), ids.join(" "));
    }
    s
}

fn cfg(msg: String) -> Error {
    Error::Config(msg)
}

pub fn parse_mesh(text: &str) -> Result<Mesh> {
    let rest: Vec<(usize, &str)> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let (no, first) = *rest.first().ok_or_else(|| cfg("empty mesh file".into()))?;
    let nn: usize = first
        .strip_prefix("nodes")
        .and_then(|t| t.trim().parse().ok())
        .ok_or_else(|| cfg(format!("line {}: expected 'nodes N'", no + 1)))?;
    let rest = &rest[1..];
    let mut m = Mesh::default();
    if rest.len() < nn + 1 {
        return Err(cfg("truncated node block".into()));
    }
    for &(no, l) in &rest[..nn] {
        let v: Vec<f64> = l
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| cfg(format!("line {}: bad coordinate", no + 1)))?;
        if v.len() != 2 {
            return Err(cfg(format!("line {}: expected 2 coordinates", no + 1)));
        }
        m.nodes.push([v[0], v[1]]);
    }
    let (no, l) = rest[nn];
    let ne: usize = l
        .strip_prefix("elements")
        .and_then(|t| t.trim().parse().ok())
        .ok_or_else(|| cfg(format!("line {}: expected 'elements N'", no + 1)))?;
    if rest.len() != nn + 1 + ne {
        return Err(cfg("element count does not match".into()));
    }
    for &(no, l) in &rest[nn + 1..] {
        let mut it = l.split_whitespace();
        let (kind, nv) = match it.next() {
            Some("quad4") => (ElementKind::Quad4, 4),
            Some("quad8") => (ElementKind::Quad8, 8),
            Some("tri3") => (ElementKind::Tri3, 3),
            other => return Err(cfg(format!("line {}: unknown element kind {:?}", no + 1, other))),
        };
        let nodes: Vec<usize> = it
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| cfg(format!("line {}: bad node id", no + 1)))?;
        if nodes.len() != nv || nodes.iter().any(|&n| n >= nn) {
            return Err(cfg(format!("line {}: bad connectivity", no + 1)));
        }
        m.elements.push(Element { kind, nodes, nurbs: None });
    }
    Ok(m)
}

pub fn read_mesh(path: &Path) -> Result<Mesh> {
    parse_mesh(&std::fs::read_to_string(path)?)
}
