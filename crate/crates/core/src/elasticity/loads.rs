//! Consistent nodal forces for edge tractions.

use super::shape::element_shape;
use crate::error::{geometry, Result};
use crate::geom::V2;
use crate::mesh::{EdgeRef, ElementKind, Mesh};
use crate::quadrature::gauss_on;

/// Local coordinates and their derivative along edge parameter s ∈ [-1, 1];
/// edges run counter-clockwise around the element.
pub fn edge_point(kind: ElementKind, edge: usize, s: f64) -> Result<([f64; 2], [f64; 2])> {
    Ok(match (kind, edge) {
        (ElementKind::Tri3, 0) => ([0.5 * (1. + s), 0.], [0.5, 0.]),
        (ElementKind::Tri3, 1) => ([0.5 * (1. - s), 0.5 * (1. + s)], [-0.5, 0.5]),
        (ElementKind::Tri3, 2) => ([0., 0.5 * (1. - s)], [0., -0.5]),
        (ElementKind::Tri3, _) => return geometry("triangle edge out of range"),
        (_, 0) => ([s, -1.], [1., 0.]),
        (_, 1) => ([1., s], [0., 1.]),
        (_, 2) => ([-s, 1.], [-1., 0.]),
        (_, 3) => ([-1., -s], [0., -1.]),
        _ => return geometry("quad edge out of range"),
    })
}

/// Gauss point on an element edge: element shape values and their derivatives along s.
pub struct EdgeGauss {
    pub element: usize,
    pub xi: [f64; 2],
    pub values: Vec<f64>,
    pub ds: Vec<f64>,
    pub weight: f64,
}

pub fn edge_gauss_points(mesh: &Mesh, edges: &[EdgeRef], n_gauss: usize) -> Result<Vec<EdgeGauss>> {
    let mut out = Vec::new();
    for &(e, k) in edges {
        if e >= mesh.elements.len() {
            return geometry("edge references a missing element");
        }
        for (s, w) in gauss_on(-1.0, 1.0, n_gauss) {
            let (xi, dxi) = edge_point(mesh.elements[e].kind, k, s)?;
            let sh = element_shape(mesh, e, xi)?;
            let ds = sh.grads.iter().map(|g| g[0] * dxi[0] + g[1] * dxi[1]).collect();
            out.push(EdgeGauss { element: e, xi, values: sh.values, ds, weight: w });
        }
    }
    Ok(out)
}

fn reference_point(mesh: &Mesh, g: &EdgeGauss, field: Option<&[f64]>) -> (V2, V2) {
    let mut x = [0.0; 2];
    let mut t = [0.0; 2];
    for (a, &n) in mesh.elements[g.element].nodes.iter().enumerate() {
        let mut p = mesh.nodes[n];
        if let Some(u) = field {
            p[0] += u[2 * n];
            p[1] += u[2 * n + 1];
        }
        for i in 0..2 {
            x[i] += g.values[a] * p[i];
            t[i] += g.ds[a] * p[i];
        }
    }
    (x, t)
}

/// Dead traction t(X) integrated over reference edges; returns global force (2 per node).
pub fn dead_traction(mesh: &Mesh, edges: &[EdgeRef], n_gauss: usize, traction: impl Fn(V2) -> V2) -> Result<Vec<f64>> {
    let mut f = vec![0.0; 2 * mesh.nodes.len()];
    for g in edge_gauss_points(mesh, edges, n_gauss)? {
        let (x, t) = reference_point(mesh, &g, None);
        let tr = traction(x);
        let ds = t[0].hypot(t[1]) * g.weight;
        for (a, &n) in mesh.elements[g.element].nodes.iter().enumerate() {
            f[2 * n] += g.values[a] * tr[0] * ds;
            f[2 * n + 1] += g.values[a] * tr[1] * ds;
        }
    }
    Ok(f)
}

/// Follower pressure t = p n_out on the current edges: force and its displacement
/// derivative as (row, col, value) triplets over node dofs.
pub fn follower_pressure(mesh: &Mesh, edges: &[EdgeRef], n_gauss: usize, p: f64, u: &[f64]) -> Result<(Vec<f64>, Vec<(usize, usize, f64)>)> {
    let mut f = vec![0.0; 2 * mesh.nodes.len()];
    let mut k = Vec::new();
    for g in edge_gauss_points(mesh, edges, n_gauss)? {
        let (_, t) = reference_point(mesh, &g, Some(u));
        // n_out ds = (dy, -dx) for counter-clockwise edges.
        let nds = [t[1], -t[0]];
        let nodes = &mesh.elements[g.element].nodes;
        for (a, &na) in nodes.iter().enumerate() {
            f[2 * na] += p * g.values[a] * nds[0] * g.weight;
            f[2 * na + 1] += p * g.values[a] * nds[1] * g.weight;
            for (b, &nb) in nodes.iter().enumerate() {
                let c = p * g.values[a] * g.ds[b] * g.weight;
                k.push((2 * na, 2 * nb + 1, c));
                k.push((2 * na + 1, 2 * nb, -c));
            }
        }
    }
    Ok((f, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::cartesian_grid;

    #[test]
    fn totals() {
        let m = cartesian_grid(-1.5, 1.5, 0., 3., 4, 2, ElementKind::Quad8).unwrap();
        let top = m.edge_set("top").to_vec();
        let f = dead_traction(&m, &top, 5, |x| [0.0, 0.1 * x[0].powi(4)]).unwrap();
        let fy: f64 = f.iter().skip(1).step_by(2).sum();
        assert!((fy - 0.30375).abs() < 1e-13);
        let b = cartesian_grid(0., 1.5, -0.5, 0.5, 3, 4, ElementKind::Quad4).unwrap();
        let right = b.edge_set("right").to_vec();
        let f = dead_traction(&b, &right, 3, |x| [-0.2 * x[1], 0.0]).unwrap();
        let fx: f64 = f.iter().step_by(2).sum();
        let my: f64 = (0..b.nodes.len()).map(|n| b.nodes[n][1] * f[2 * n]).sum();
        assert!(fx.abs() < 1e-15);
        assert!((my + 1.0 / 60.0).abs() < 1e-14);
    }

    #[test]
    fn follower_matches_dead_when_undeformed() {
        let m = cartesian_grid(0., 1., 0., 1., 2, 1, ElementKind::Quad4).unwrap();
        let top = m.edge_set("top").to_vec();
        let u = vec![0.0; 2 * m.nodes.len()];
        let (f, _) = follower_pressure(&m, &top, 2, -0.01, &u).unwrap();
        let d = dead_traction(&m, &top, 2, |_| [0.0, -0.01]).unwrap();
        for (a, b) in f.iter().zip(&d) {
            assert!((a - b).abs() < 1e-16);
        }
        // Tangent vs finite differences.
        let u: Vec<f64> = (0..u.len()).map(|i| 0.01 * (i % 3) as f64).collect();
        let (_, k) = follower_pressure(&m, &top, 2, -0.3, &u).unwrap();
        let n = u.len();
        let mut kd = vec![0.0; n * n];
        for (r, c, v) in k {
            kd[r * n + c] += v;
        }
        for q in 0..n {
            let (mut a, mut b) = (u.clone(), u.clone());
            a[q] += 1e-6;
            b[q] -= 1e-6;
            let fa = follower_pressure(&m, &top, 2, -0.3, &a).unwrap().0;
            let fb = follower_pressure(&m, &top, 2, -0.3, &b).unwrap().0;
            for p in 0..n {
                assert!(((fa[p] - fb[p]) / 2e-6 - kd[p * n + q]).abs() < 1e-9);
            }
        }
    }
}
