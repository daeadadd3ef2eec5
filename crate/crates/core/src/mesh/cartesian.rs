use super::{Element, ElementKind, Mesh};
use crate::error::{geometry, Result};
use crate::geom::V2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: V2,
    pub max: V2,
}

impl Aabb {
    pub fn of(points: &[V2]) -> Self {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for d in 0..2 {
                min[d] = min[d].min(p[d]);
                max[d] = max[d].max(p[d]);
            }
        }
        Self { min, max }
    }

    pub fn contains(&self, p: V2, tol: f64) -> bool {
        (0..2).all(|d| p[d] >= self.min[d] - tol && p[d] <= self.max[d] + tol)
    }

    pub fn diagonal(&self) -> f64 {
        (self.max[0] - self.min[0]).hypot(self.max[1] - self.min[1])
    }

    pub fn overlaps(&self, o: &Aabb) -> bool {
        (0..2).all(|d| self.min[d] <= o.max[d] && o.min[d] <= self.max[d])
    }
}

/// Cartesian background mesh over the bounding box of `points` with target size `h`.
///
/// Cell counts are ceil(extent / h) per axis; `padding` enlarges the box by that
/// many cells of size h on each side.
pub fn build_cartesian_mesh(points: &[V2], h: f64, kind: ElementKind, padding: usize) -> Result<Mesh> {
    if !(h > 0.0) {
        return geometry("element size must be positive");
    }
    let bb = Aabb::of(points);
    let ext = [bb.max[0] - bb.min[0], bb.max[1] - bb.min[1]];
    if !(ext[0] > 0.0 && ext[1] > 0.0) {
        return geometry("degenerate bounding box");
    }
    let pad = padding as f64 * h;
    let n = |e: f64| ((e / h) - 1e-9).ceil().max(1.0) as usize;
    cartesian_grid(
        bb.min[0] - pad,
        bb.max[0] + pad,
        bb.min[1] - pad,
        bb.max[1] + pad,
        n(ext[0]) + 2 * padding,
        n(ext[1]) + 2 * padding,
        kind,
    )
}

/// Tensor grid of quad4 or quad8 cells; node sets `left`, `right`, `bottom`, `top`.
pub fn cartesian_grid(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize, kind: ElementKind) -> Result<Mesh> {
    if nx == 0 || ny == 0 || !(x1 > x0) || !(y1 > y0) {
        return geometry("invalid grid extents");
    }
    let xs: Vec<f64> = (0..=nx).map(|i| if i == nx { x1 } else { x0 + (x1 - x0) * i as f64 / nx as f64 }).collect();
    let ys: Vec<f64> = (0..=ny).map(|j| if j == ny { y1 } else { y0 + (y1 - y0) * j as f64 / ny as f64 }).collect();
    let mut m = Mesh::default();
    for &y in &ys {
        for &x in &xs {
            m.nodes.push([x, y]);
        }
    }
    let c = |i: usize, j: usize| i + (nx + 1) * j;
    let (hbase, vbase) = (m.nodes.len(), m.nodes.len() + nx * (ny + 1));
    if kind == ElementKind::Quad8 {
        for &y in &ys {
            for i in 0..nx {
                m.nodes.push([0.5 * (xs[i] + xs[i + 1]), y]);
            }
        }
        for j in 0..ny {
            for &x in &xs {
                m.nodes.push([x, 0.5 * (ys[j] + ys[j + 1])]);
            }
        }
    }
    let hm = |i: usize, j: usize| hbase + i + nx * j;
    let vm = |i: usize, j: usize| vbase + i + (nx + 1) * j;
    for j in 0..ny {
        for i in 0..nx {
            let mut nodes = vec![c(i, j), c(i + 1, j), c(i + 1, j + 1), c(i, j + 1)];
            match kind {
                ElementKind::Quad4 => {}
                ElementKind::Quad8 => nodes.extend([hm(i, j), vm(i + 1, j), hm(i, j + 1), vm(i, j)]),
                _ => return geometry("cartesian grids use quad4 or quad8"),
            }
            m.elements.push(Element { kind, nodes, nurbs: None });
        }
    }
    tag_box_sides(&mut m, x0, x1, y0, y1);
    Ok(m)
}

pub(crate) fn tag_box_sides(m: &mut Mesh, x0: f64, x1: f64, y0: f64, y1: f64) {
    let tol = 1e-12 * (x1 - x0).max(y1 - y0);
    let sets: [(&str, Box<dyn Fn(V2) -> bool>); 4] = [
        ("left", Box::new(move |p: V2| (p[0] - x0).abs() <= tol)),
        ("right", Box::new(move |p: V2| (p[0] - x1).abs() <= tol)),
        ("bottom", Box::new(move |p: V2| (p[1] - y0).abs() <= tol)),
        ("top", Box::new(move |p: V2| (p[1] - y1).abs() <= tol)),
    ];
    for (name, f) in sets.iter() {
        let nodes = m.select_nodes(f);
        let edges = m.select_edges(f);
        m.node_sets.insert(name.to_string(), nodes);
        m.edge_sets.insert(name.to_string(), edges);
    }
}

/// Checkerboard of quad4 cells and cells split into four tri3 by both diagonals.
pub fn crosshatch_grid(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Result<Mesh> {
    let mut m = cartesian_grid(x0, x1, y0, y1, nx, ny, ElementKind::Quad4)?;
    let quads = std::mem::take(&mut m.elements);
    for (k, q) in quads.into_iter().enumerate() {
        let (i, j) = (k % nx, k / nx);
        if (i + j) % 2 == 0 {
            m.elements.push(q);
            continue;
        }
        let c = m.nodes.len();
        let mut mid = [0.0, 0.0];
        for &n in &q.nodes {
            mid[0] += 0.25 * m.nodes[n][0];
            mid[1] += 0.25 * m.nodes[n][1];
        }
        m.nodes.push(mid);
        for e in 0..4 {
            m.elements.push(Element {
                kind: ElementKind::Tri3,
                nodes: vec![q.nodes[e], q.nodes[(e + 1) % 4], c],
                nurbs: None,
            });
        }
    }
    tag_box_sides(&mut m, x0, x1, y0, y1);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let sq = [[0., 0.], [1., 0.], [1., 1.], [0., 1.]];
        let m = build_cartesian_mesh(&sq, 0.5, ElementKind::Quad4, 0).unwrap();
        assert_eq!((m.elements.len(), m.nodes.len()), (4, 9));
        let b = [[0., 0.], [3., 3.]];
        let m = build_cartesian_mesh(&b, 1.0, ElementKind::Quad8, 0).unwrap();
        assert_eq!(m.elements.len(), 9);
        assert_eq!(m.nodes.len(), 16 + 12 + 12);
        assert_eq!(m.node_set("bottom").len(), 7);
        assert!(build_cartesian_mesh(&[[0., 0.], [1., 0.]], 0.5, ElementKind::Quad4, 0).is_err());
        let c = crosshatch_grid(0., 1.5, -0.5, 0.5, 15, 10).unwrap();
        assert_eq!(c.elements.len(), 75 + 75 * 4);
    }
}
