//! Meshes of Lagrange and NURBS elements, boundary-layer and Cartesian builders.

mod cartesian;
mod io;
mod layer;
mod merge;
pub mod vtk;

pub use cartesian::{build_cartesian_mesh, cartesian_grid, crosshatch_grid, Aabb};
pub use io::{format_mesh, parse_mesh, read_mesh};
pub use layer::{build_boundary_layer, build_layer_from_spec, BoundaryLayer, BoundaryLayerSpec};
pub use merge::merge_conforming_nodes;
pub use vtk::{format_vtk, format_vtk_cells, CellField, PointField};

use crate::geom::V2;
use crate::nurbs::NurbsPatch;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Quad4,
    Quad8,
    Tri3,
    /// Tensor-product NURBS element (biquadratic in all benchmarks).
    #[serde(rename = "nurbs9")]
    Nurbs,
}

impl ElementKind {
    pub fn name(self) -> &'static str {
        match self {
            ElementKind::Quad4 => "quad4",
            ElementKind::Quad8 => "quad8",
            ElementKind::Tri3 => "tri3",
            ElementKind::Nurbs => "nurbs9",
        }
    }
}

/// Location of a NURBS element inside its patch.
#[derive(Clone, Debug, PartialEq)]
pub struct NurbsCell {
    pub patch: usize,
    /// Knot-span indices per direction.
    pub spans: [usize; 2],
    pub bounds: [(f64, f64); 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    pub kind: ElementKind,
    /// Mesh node ids; for NURBS elements in support order (first direction fastest).
    pub nodes: Vec<usize>,
    pub nurbs: Option<NurbsCell>,
}

/// Element edge reference: element id and local edge (quads: 0 bottom, 1 right,
/// 2 top, 3 left in the reference square; triangles: edge k joins corners k and k+1).
pub type EdgeRef = (usize, usize);

#[derive(Clone, Debug, Default)]
pub struct Mesh {
    pub nodes: Vec<V2>,
    pub elements: Vec<Element>,
    /// NURBS geometry carriers; `patch_nodes[p][cp]` is the mesh node of control point cp.
    pub patches: Vec<NurbsPatch>,
    pub patch_nodes: Vec<Vec<usize>>,
    pub node_sets: BTreeMap<String, Vec<usize>>,
    pub edge_sets: BTreeMap<String, Vec<EdgeRef>>,
}

impl Mesh {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Corner polygon (counter-clockwise) of a Lagrange element.
    pub fn corner_polygon(&self, e: usize) -> Vec<V2> {
        let el = &self.elements[e];
        let nc = match el.kind {
            ElementKind::Tri3 => 3,
            _ => 4,
        };
        el.nodes[..nc].iter().map(|&n| self.nodes[n]).collect()
    }

    pub fn aabb(&self) -> Aabb {
        Aabb::of(&self.nodes)
    }

    /// Nodes referenced by at least one element.
    pub fn used_nodes(&self) -> Vec<bool> {
        let mut used = vec![false; self.nodes.len()];
        for e in &self.elements {
            for &n in &e.nodes {
                used[n] = true;
            }
        }
        used
    }

    pub fn node_set(&self, name: &str) -> &[usize] {
        self.node_sets.get(name).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn edge_set(&self, name: &str) -> &[EdgeRef] {
        self.edge_sets.get(name).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Nodes whose coordinates satisfy `pred`.
    pub fn select_nodes(&self, pred: impl Fn(V2) -> bool) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| pred(self.nodes[i])).collect()
    }

    /// Boundary edges of Lagrange elements whose end nodes both satisfy `pred`.
    /// Tag `left`, `right`, `bottom`, `top` node and edge sets on the bounding box sides.
    pub fn tag_aabb_sides(&mut self) {
        let b = self.aabb();
        cartesian::tag_box_sides(self, b.min[0], b.max[0], b.min[1], b.max[1]);
    }

    pub fn select_edges(&self, pred: impl Fn(V2) -> bool) -> Vec<EdgeRef> {
        let mut out = Vec::new();
        for (e, el) in self.elements.iter().enumerate() {
            if el.kind == ElementKind::Nurbs {
                continue;
            }
            let nc = if el.kind == ElementKind::Tri3 { 3 } else { 4 };
            for k in 0..nc {
                let (a, b) = (el.nodes[k], el.nodes[(k + 1) % nc]);
                if pred(self.nodes[a]) && pred(self.nodes[b]) {
                    out.push((e, k));
                }
            }
        }
        out
    }
}
