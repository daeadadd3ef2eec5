//! Boundary-layer NURBS meshes lofted between an offset curve and its base.

use super::{merge_conforming_nodes, Element, ElementKind, Mesh, NurbsCell};
use crate::error::{geometry, Result};
use crate::nurbs::{KnotVector, NurbsPatch};
use crate::offset::{offset_curves, OffsetMethod, OffsetRequest, OptimizerSettings};
use serde::{Deserialize, Serialize};

/// Layer built from base curves (material on the right of travel).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BoundaryLayerSpec {
    pub distance: f64,
    #[serde(default = "default_method")]
    pub method: OffsetMethod,
    /// Elements through the thickness.
    #[serde(default = "one")]
    pub thickness_elements: usize,
    #[serde(default = "two")]
    pub thickness_degree: usize,
    /// Uniform knot-insertion factor along the surface, per patch (missing entries = 1).
    #[serde(default)]
    pub refinement: Vec<usize>,
    #[serde(default)]
    pub optimizer: OptimizerSettings,
}

fn default_method() -> OffsetMethod {
    OffsetMethod::Interpolation
}
fn one() -> usize {
    1
}
fn two() -> usize {
    2
}

#[derive(Clone, Debug)]
pub struct BoundaryLayer {
    pub mesh: Mesh,
    /// Interface curves Γ* (v = 0 edges of the refined layer patches).
    pub interface: Vec<NurbsPatch>,
    pub base: Vec<NurbsPatch>,
}

/// Offset the base curves inward and loft the layer.
pub fn build_layer_from_spec(base: &[NurbsPatch], spec: &BoundaryLayerSpec) -> Result<BoundaryLayer> {
    let mut req = OffsetRequest::new(spec.distance, spec.method);
    req.optimizer = spec.optimizer.clone();
    let tol = 1e-9 * spec.distance.max(1.0);
    let offs = offset_curves(base, &req, tol)?;
    let interface: Vec<NurbsPatch> = offs.into_iter().map(|r| r.offset).collect();
    build_boundary_layer(base, &interface, spec.thickness_elements, spec.thickness_degree, &spec.refinement)
}

/// Loft P_ij = (1 - g_j) O_i + g_j B_i between interface O (v = 0) and base B (v = 1).
///
/// Node sets: `gamma_star`, `outer`; edge sets: `gamma_star`, `outer`, `start`, `end`.
pub fn build_boundary_layer(
    base: &[NurbsPatch],
    interface: &[NurbsPatch],
    thickness_elements: usize,
    thickness_degree: usize,
    refinement: &[usize],
) -> Result<BoundaryLayer> {
    if base.is_empty() || base.len() != interface.len() {
        return geometry("base and interface patch counts differ");
    }
    if thickness_elements == 0 || thickness_degree == 0 {
        return geometry("layer needs at least one element of degree >= 1 through the thickness");
    }
    let kv_v = KnotVector::uniform(thickness_degree, thickness_elements, 0.0, 1.0);
    let g = kv_v.greville();
    let mut mesh = Mesh::default();
    let np = base.len();
    let mut gamma = Vec::with_capacity(np);
    let mut bases = Vec::with_capacity(np);
    for (p, (b, o)) in base.iter().zip(interface).enumerate() {
        if b.pdim() != 1 || b.dim() != 2 || o.counts() != b.counts() || b.knot_vector(0) != o.knot_vector(0) {
            return geometry("layer patches must be compatible planar curves");
        }
        let nu = b.n_points();
        let mut pts = Vec::with_capacity(nu * g.len() * 2);
        let mut w = Vec::with_capacity(nu * g.len());
        for &gj in &g {
            for i in 0..nu {
                let (ob, bb) = (o.point(i), b.point(i));
                pts.push((1.0 - gj) * ob[0] + gj * bb[0]);
                pts.push((1.0 - gj) * ob[1] + gj * bb[1]);
                w.push(b.weight(i));
            }
        }
        let mut patch = NurbsPatch::new(vec![b.knot_vector(0).clone(), kv_v.clone()], 2, pts, w)?;
        let f = refinement.get(p).copied().unwrap_or(1);
        if f > 1 {
            patch = patch.refine_uniform(0, f)?;
            gamma.push(o.refine_uniform(0, f)?);
            bases.push(b.refine_uniform(0, f)?);
        } else {
            gamma.push(o.clone());
            bases.push(b.clone());
        }
        add_patch(&mut mesh, patch, p == 0, p + 1 == np);
    }
    let tol = 1e-10 * mesh.aabb().diagonal();
    let mesh = merge_conforming_nodes(&mesh, tol);
    Ok(BoundaryLayer { mesh, interface: gamma, base: bases })
}

fn add_patch(mesh: &mut Mesh, patch: NurbsPatch, first: bool, last: bool) {
    let pid = mesh.patches.len();
    let counts = patch.counts();
    let offset = mesh.nodes.len();
    for k in 0..patch.n_points() {
        let x = patch.point(k);
        mesh.nodes.push([x[0], x[1]]);
    }
    let ids: Vec<usize> = (offset..offset + patch.n_points()).collect();
    let (p, q) = (patch.knot_vector(0).degree(), patch.knot_vector(1).degree());
    let spans_of = |d: usize| -> Vec<usize> {
        let kv = patch.knot_vector(d);
        let k = kv.knots();
        (kv.degree()..k.len() - kv.degree() - 1).filter(|&s| k[s + 1] > k[s]).collect()
    };
    let (su, sv) = (spans_of(0), spans_of(1));
    for (jv, &s1) in sv.iter().enumerate() {
        for (iu, &s0) in su.iter().enumerate() {
            let mut nodes = Vec::with_capacity((p + 1) * (q + 1));
            for j in s1 - q..=s1 {
                for i in s0 - p..=s0 {
                    nodes.push(ids[i + counts[0] * j]);
                }
            }
            let k0 = patch.knot_vector(0).knots();
            let k1 = patch.knot_vector(1).knots();
            let e = mesh.elements.len();
            mesh.elements.push(Element {
                kind: ElementKind::Nurbs,
                nodes,
                nurbs: Some(NurbsCell { patch: pid, spans: [s0, s1], bounds: [(k0[s0], k0[s0 + 1]), (k1[s1], k1[s1 + 1])] }),
            });
            let mut tag = |name: &str, edge: usize| mesh.edge_sets.entry(name.into()).or_default().push((e, edge));
            if jv == 0 {
                tag("gamma_star", 0);
            }
            if jv + 1 == sv.len() {
                tag("outer", 2);
            }
            if first && iu == 0 {
                tag("start", 3);
            }
            if last && iu + 1 == su.len() {
                tag("end", 1);
            }
        }
    }
    let nu = counts[0];
    let row = |j: usize| -> Vec<usize> { (0..nu).map(|i| ids[i + nu * j]).collect() };
    mesh.node_sets.entry("gamma_star".into()).or_default().extend(row(0));
    mesh.node_sets.entry("outer".into()).or_default().extend(row(counts[1] - 1));
    mesh.patches.push(patch);
    mesh.patch_nodes.push((offset..offset + counts[0] * counts[1]).collect());
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nurbs::KnotVector;

    fn line(a: [f64; 2], b: [f64; 2]) -> NurbsPatch {
        let kv = KnotVector::uniform(2, 1, 0.0, 1.0);
        let m = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        NurbsPatch::curve2(kv, &[a, m, b], &[1.0; 3]).unwrap()
    }

    #[test]
    fn flat_layer() {
        // Base along y = 3 travelling in +x: material below (right of travel).
        let base = [line([0., 3.], [1.5, 3.]), line([1.5, 3.], [3., 3.])];
        let spec = BoundaryLayerSpec {
            distance: 0.4,
            method: OffsetMethod::Interpolation,
            thickness_elements: 2,
            thickness_degree: 2,
            refinement: vec![2, 1],
            optimizer: OptimizerSettings::default(),
        };
        let l = build_layer_from_spec(&base, &spec).unwrap();
        assert_eq!(l.mesh.elements.len(), (2 + 1) * 2);
        // Patches share the seam column (3 control points along thickness).
        let n_cp: usize = l.mesh.patches.iter().map(|p| p.n_points()).sum();
        assert_eq!(l.mesh.nodes.len(), n_cp - 4);
        for &n in l.mesh.node_set("gamma_star") {
            assert!((l.mesh.nodes[n][1] - 2.6).abs() < 1e-12);
        }
        assert_eq!(l.mesh.edge_set("gamma_star").len(), 3);
        assert_eq!(l.mesh.edge_set("start").len(), 2);
        assert_eq!(l.mesh.edge_set("end").len(), 2);
        assert_eq!(l.interface[0].knot_vector(0).n_spans(), 2);
        // Positive Jacobian: x_u along +x, x_v along +y.
        let p = &l.mesh.patches[0];
        let (_, d) = p.eval(&[0.3, 0.5]).unwrap();
        let det = d[0][0] * d[1][1] - d[0][1] * d[1][0];
        assert!(det > 0.0);
    }
}
