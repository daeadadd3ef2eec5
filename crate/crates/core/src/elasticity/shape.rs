//! Element shape functions in local coordinates (reference square [-1,1]² for quads and
//! NURBS elements, unit reference triangle for tri3).

use crate::error::{geometry, Result};
use crate::geom::V2;
use crate::mesh::{ElementKind, Mesh};
use crate::quadrature::{gauss_square, triangle_rule};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Shape {
    pub values: Vec<f64>,
    /// Gradients with respect to local coordinates.
    pub grads: Vec<[f64; 2]>,
}

const QUAD_CORNERS: [[f64; 2]; 4] = [[-1., -1.], [1., -1.], [1., 1.], [-1., 1.]];

/// Lagrange shape functions; node order: corners counter-clockwise, then mid-sides
/// (bottom, right, top, left) for quad8.
pub fn lagrange_shape(kind: ElementKind, xi: [f64; 2]) -> Result<Shape> {
    let [x, y] = xi;
    let mut s = Shape::default();
    match kind {
        ElementKind::Quad4 => {
            for c in QUAD_CORNERS {
                s.values.push(0.25 * (1. + c[0] * x) * (1. + c[1] * y));
                s.grads.push([0.25 * c[0] * (1. + c[1] * y), 0.25 * c[1] * (1. + c[0] * x)]);
            }
        }
        ElementKind::Quad8 => {
            for c in QUAD_CORNERS {
                let (a, b) = (1. + c[0] * x, 1. + c[1] * y);
                let t = c[0] * x + c[1] * y - 1.;
                s.values.push(0.25 * a * b * t);
                s.grads.push([0.25 * c[0] * b * (t + a), 0.25 * c[1] * a * (t + b)]);
            }
            for m in [[0., -1.], [1., 0.], [0., 1.], [-1., 0.]] {
                if m[0] == 0.0 {
                    s.values.push(0.5 * (1. - x * x) * (1. + m[1] * y));
                    s.grads.push([-x * (1. + m[1] * y), 0.5 * m[1] * (1. - x * x)]);
                } else {
                    s.values.push(0.5 * (1. + m[0] * x) * (1. - y * y));
                    s.grads.push([0.5 * m[0] * (1. - y * y), -y * (1. + m[0] * x)]);
                }
            }
        }
        ElementKind::Tri3 => {
            s.values = vec![1. - x - y, x, y];
            s.grads = vec![[-1., -1.], [1., 0.], [0., 1.]];
        }
        ElementKind::Nurbs => return geometry("NURBS elements need patch data"),
    }
    Ok(s)
}

/// Shape functions of element `e`; NURBS local coordinates map linearly onto the knot span.
pub fn element_shape(mesh: &Mesh, e: usize, xi: [f64; 2]) -> Result<Shape> {
    let el = &mesh.elements[e];
    if el.kind != ElementKind::Nurbs {
        return lagrange_shape(el.kind, xi);
    }
    let cell = el.nurbs.as_ref().ok_or_else(|| crate::Error::Geometry("NURBS element without cell".into()))?;
    let patch = &mesh.patches[cell.patch];
    let mut u = [0.0; 2];
    let mut h = [0.0; 2];
    for d in 0..2 {
        let (a, b) = cell.bounds[d];
        h[d] = 0.5 * (b - a);
        u[d] = a + h[d] * (xi[d] + 1.0);
    }
    let rb = patch.rational_basis_in_span(&u, &cell.spans)?;
    Ok(Shape { grads: rb.grads.iter().map(|g| [g[0] * h[0], g[1] * h[1]]).collect(), values: rb.values })
}

/// Point, Jacobian dx/dξ (row = physical component) and its determinant.
#[derive(Clone, Debug)]
pub struct GeomEval {
    pub shape: Shape,
    pub x: V2,
    pub jac: [[f64; 2]; 2],
    pub det: f64,
}

pub fn element_geometry(mesh: &Mesh, e: usize, xi: [f64; 2]) -> Result<GeomEval> {
    let shape = element_shape(mesh, e, xi)?;
    let mut x = [0.0; 2];
    let mut jac = [[0.0; 2]; 2];
    for (k, &n) in mesh.elements[e].nodes.iter().enumerate() {
        let p = mesh.nodes[n];
        for i in 0..2 {
            x[i] += shape.values[k] * p[i];
            for j in 0..2 {
                jac[i][j] += p[i] * shape.grads[k][j];
            }
        }
    }
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    Ok(GeomEval { shape, x, jac, det })
}

/// Physical shape-function gradients from a geometry evaluation.
pub fn physical_gradients(g: &GeomEval) -> Vec<[f64; 2]> {
    let inv = [[g.jac[1][1] / g.det, -g.jac[0][1] / g.det], [-g.jac[1][0] / g.det, g.jac[0][0] / g.det]];
    g.shape
        .grads
        .iter()
        .map(|d| [d[0] * inv[0][0] + d[1] * inv[1][0], d[0] * inv[0][1] + d[1] * inv[1][1]])
        .collect()
}

/// Reference-element centre used as the Newton start.
pub fn reference_center(kind: ElementKind) -> [f64; 2] {
    if kind == ElementKind::Tri3 {
        [1. / 3., 1. / 3.]
    } else {
        [0., 0.]
    }
}

/// Newton inversion of the isoparametric map; residual below 1e-12 (relative to element size).
pub fn inverse_isoparametric_map(mesh: &Mesh, e: usize, x: V2) -> Result<[f64; 2]> {
    let mut xi = reference_center(mesh.elements[e].kind);
    let size = {
        let g = element_geometry(mesh, e, xi)?;
        g.det.abs().sqrt().max(1e-300)
    };
    for _ in 0..50 {
        let g = element_geometry(mesh, e, xi)?;
        let r = [x[0] - g.x[0], x[1] - g.x[1]];
        if r[0].hypot(r[1]) <= 1e-13 * size.max(1.0) {
            return Ok(xi);
        }
        if g.det.abs() < 1e-300 {
            break;
        }
        let d0 = (g.jac[1][1] * r[0] - g.jac[0][1] * r[1]) / g.det;
        let d1 = (-g.jac[1][0] * r[0] + g.jac[0][0] * r[1]) / g.det;
        xi = [xi[0] + d0, xi[1] + d1];
        if !(xi[0].is_finite() && xi[1].is_finite()) || xi[0].abs() > 10.0 || xi[1].abs() > 10.0 {
            break;
        }
    }
    geometry(format!("inverse map failed for element {e} at ({}, {})", x[0], x[1]))
}

/// Standard element rule in local coordinates: 2×2 Gauss for quad4, 3×3 for quad8 and
/// NURBS, degree-2 triangle rule for tri3.
pub fn standard_rule(kind: ElementKind) -> Vec<([f64; 2], f64)> {
    match kind {
        ElementKind::Quad4 => gauss_square(2),
        ElementKind::Quad8 | ElementKind::Nurbs => gauss_square(3),
        ElementKind::Tri3 => triangle_rule(2),
    }
}

/// Whether local coordinates lie in the reference element (with tolerance).
pub fn inside_reference(kind: ElementKind, xi: [f64; 2], tol: f64) -> bool {
    match kind {
        ElementKind::Tri3 => xi[0] >= -tol && xi[1] >= -tol && xi[0] + xi[1] <= 1.0 + tol,
        _ => xi[0].abs() <= 1.0 + tol && xi[1].abs() <= 1.0 + tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{cartesian_grid, Element};

    fn check_pu_kronecker(kind: ElementKind, nodes: &[[f64; 2]]) {
        for (i, &p) in nodes.iter().enumerate() {
            let s = lagrange_shape(kind, p).unwrap();
            for (j, v) in s.values.iter().enumerate() {
                assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
        let p = [0.3, 0.2];
        let s = lagrange_shape(kind, p).unwrap();
        assert!((s.values.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        // Finite-difference gradients.
        for d in 0..2 {
            let mut a = p;
            let mut b = p;
            a[d] += 1e-6;
            b[d] -= 1e-6;
            let (sa, sb) = (lagrange_shape(kind, a).unwrap(), lagrange_shape(kind, b).unwrap());
            for k in 0..s.values.len() {
                let fd = (sa.values[k] - sb.values[k]) / 2e-6;
                assert!((fd - s.grads[k][d]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn lagrange() {
        let q4 = lagrange_shape(ElementKind::Quad4, [0., 0.]).unwrap();
        assert!(q4.values.iter().all(|v| (v - 0.25).abs() < 1e-15));
        check_pu_kronecker(ElementKind::Quad4, &QUAD_CORNERS);
        let mut q8 = QUAD_CORNERS.to_vec();
        q8.extend([[0., -1.], [1., 0.], [0., 1.], [-1., 0.]]);
        check_pu_kronecker(ElementKind::Quad8, &q8);
        check_pu_kronecker(ElementKind::Tri3, &[[0., 0.], [1., 0.], [0., 1.]]);
    }

    #[test]
    fn inverse_map_round_trip() {
        let m = cartesian_grid(0., 2., 0., 1., 1, 1, ElementKind::Quad4).unwrap();
        assert_eq!(inverse_isoparametric_map(&m, 0, [1.0, 0.5]).unwrap(), [0.0, 0.0]);
        let v = inverse_isoparametric_map(&m, 0, [2.0, 1.0]).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);
        let mut d = Mesh::default();
        d.nodes = vec![[0., 0.], [2., 0.2], [1.8, 1.5], [-0.1, 1.0]];
        d.elements.push(Element { kind: ElementKind::Quad4, nodes: vec![0, 1, 2, 3], nurbs: None });
        for xi in [[0.3, -0.7], [-0.9, 0.9], [0.5, 0.5]] {
            let x = element_geometry(&d, 0, xi).unwrap().x;
            let back = inverse_isoparametric_map(&d, 0, x).unwrap();
            let x2 = element_geometry(&d, 0, back).unwrap().x;
            assert!(crate::geom::dist(x, x2) < 1e-12);
        }
    }
}
