//! Uniform-bin spatial index over mesh cells.

use crate::elasticity::shape::{inside_reference, inverse_isoparametric_map};
use crate::geom::V2;
use crate::mesh::{Aabb, Mesh};

pub struct CellLocator {
    bb: Aabb,
    n: [usize; 2],
    bins: Vec<Vec<usize>>,
    cell_boxes: Vec<Aabb>,
}

impl CellLocator {
    pub fn new(mesh: &Mesh) -> Self {
        let cell_boxes: Vec<Aabb> = mesh
            .elements
            .iter()
            .map(|e| Aabb::of(&e.nodes.iter().map(|&n| mesh.nodes[n]).collect::<Vec<_>>()))
            .collect();
        let bb = mesh.aabb();
        let k = ((mesh.elements.len() as f64).sqrt().ceil() as usize).max(1);
        let n = [k, k];
        let mut loc = Self { bb, n, bins: vec![Vec::new(); k * k], cell_boxes };
        for c in 0..loc.cell_boxes.len() {
            let (lo, hi) = loc.range(&loc.cell_boxes[c]);
            for j in lo[1]..=hi[1] {
                for i in lo[0]..=hi[0] {
                    loc.bins[i + n[0] * j].push(c);
                }
            }
        }
        loc
    }

    fn range(&self, b: &Aabb) -> ([usize; 2], [usize; 2]) {
        let mut lo = [0; 2];
        let mut hi = [0; 2];
        for d in 0..2 {
            let ext = (self.bb.max[d] - self.bb.min[d]).max(1e-300);
            let f = |x: f64| (((x - self.bb.min[d]) / ext * self.n[d] as f64).floor().max(0.0) as usize).min(self.n[d] - 1);
            lo[d] = f(b.min[d]);
            hi[d] = f(b.max[d]);
        }
        (lo, hi)
    }

    /// Cells whose bounding boxes overlap `b`, ascending and unique.
    pub fn candidates(&self, b: &Aabb) -> Vec<usize> {
        if !self.bb.overlaps(b) {
            return Vec::new();
        }
        let (lo, hi) = self.range(b);
        let mut out = Vec::new();
        for j in lo[1]..=hi[1] {
            for i in lo[0]..=hi[0] {
                out.extend(self.bins[i + self.n[0] * j].iter().copied().filter(|&c| self.cell_boxes[c].overlaps(b)));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn cell_box(&self, c: usize) -> &Aabb {
        &self.cell_boxes[c]
    }

    /// First cell (lowest id) containing `x` with its local coordinates.
    pub fn locate(&self, mesh: &Mesh, x: V2, tol: f64) -> Option<(usize, [f64; 2])> {
        let pad = tol * self.bb.diagonal();
        let b = Aabb { min: [x[0] - pad, x[1] - pad], max: [x[0] + pad, x[1] + pad] };
        for c in self.candidates(&b) {
            if let Ok(xi) = inverse_isoparametric_map(mesh, c, x) {
                if inside_reference(mesh.elements[c].kind, xi, tol.max(1e-12)) {
                    return Some((c, xi));
                }
            }
        }
        None
    }
}
