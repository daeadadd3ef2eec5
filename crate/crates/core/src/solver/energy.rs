//! Energy-norm error of a coarse solution against a fine reference.

use super::problem::Body;
use crate::cutcell::CellLocator;
use crate::elasticity::shape::{element_geometry, inside_reference, inverse_isoparametric_map, physical_gradients};
use crate::error::{Error, Result};
use crate::geom::V2;
use crate::mesh::Aabb;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EnergyError {
    /// sqrt(∫ (ε_h − ε_ref) : C : (ε_h − ε_ref)).
    pub absolute: f64,
    /// Reference energy norm sqrt(∫ ε_ref : C : ε_ref) over the same points.
    pub reference_norm: f64,
    /// Points that fell outside every active reference cell and used the nearest one.
    pub fallbacks: usize,
}

impl EnergyError {
    pub fn relative(&self) -> f64 {
        self.absolute / self.reference_norm.max(f64::MIN_POSITIVE)
    }
}

/// Small-strain Voigt strain [εxx, εyy, 2εxy] of body `b` at local point `xi` of cell `e`.
fn strain_at(b: &Body, u: &[f64], e: usize, xi: [f64; 2]) -> Result<([f64; 3], V2, f64)> {
    let g = element_geometry(&b.mesh, e, xi)?;
    let dn = physical_gradients(&g);
    let ub = b.slice(u);
    let mut h = [[0.0; 2]; 2];
    for (k, &n) in b.mesh.elements[e].nodes.iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                h[i][j] += ub[2 * n + i] * dn[k][j];
            }
        }
    }
    Ok(([h[0][0], h[1][1], h[0][1] + h[1][0]], g.x, g.det))
}

struct RefLocator<'a> {
    body: &'a Body,
    loc: CellLocator,
    active: Vec<bool>,
    centers: Vec<V2>,
}

impl<'a> RefLocator<'a> {
    fn new(body: &'a Body) -> Self {
        let loc = CellLocator::new(&body.mesh);
        let active = body.quadrature.iter().map(|q| !q.is_empty()).collect();
        let centers = (0..body.mesh.elements.len())
            .map(|c| {
                let b = loc.cell_box(c);
                [0.5 * (b.min[0] + b.max[0]), 0.5 * (b.min[1] + b.max[1])]
            })
            .collect();
        Self { body, loc, active, centers }
    }

    fn find(&self, x: V2) -> Option<(usize, [f64; 2], bool)> {
        let mesh = &self.body.mesh;
        let pad = 1e-9 * mesh.aabb().diagonal();
        let bb = Aabb { min: [x[0] - pad, x[1] - pad], max: [x[0] + pad, x[1] + pad] };
        for c in self.loc.candidates(&bb) {
            if !self.active[c] {
                continue;
            }
            if let Ok(xi) = inverse_isoparametric_map(mesh, c, x) {
                if inside_reference(mesh.elements[c].kind, xi, 1e-9) {
                    return Some((c, xi, false));
                }
            }
        }
        let best = (0..self.centers.len())
            .filter(|&c| self.active[c])
            .min_by(|&a, &b| {
                let da = crate::geom::dist(self.centers[a], x);
                let db = crate::geom::dist(self.centers[b], x);
                da.total_cmp(&db).then(a.cmp(&b))
            })?;
        inverse_isoparametric_map(mesh, best, x).ok().map(|xi| (best, xi, true))
    }
}

/// Energy-norm error over the quadrature points of `coarse`; bodies are matched by index.
pub fn energy_norm_error(coarse: &[Body], u_coarse: &[f64], reference: &[Body], u_ref: &[f64]) -> Result<EnergyError> {
    if coarse.len() != reference.len() {
        return Err(Error::Config("coarse and reference problems have different body counts".into()));
    }
    let mut out = EnergyError::default();
    let mut err2 = 0.0;
    let mut ref2 = 0.0;
    for (bc, br) in coarse.iter().zip(reference) {
        let c = bc.material.tangent();
        let loc = RefLocator::new(br);
        for e in bc.active_elements() {
            for q in &bc.quadrature[e] {
                let (eh, x, _) = strain_at(bc, u_coarse, e, q.xi)?;
                let Some((re, rxi, fb)) = loc.find(x) else {
                    return Err(Error::Solver("reference body has no active cells".into()));
                };
                out.fallbacks += fb as usize;
                let (er, _, _) = strain_at(br, u_ref, re, rxi)?;
                let d = [eh[0] - er[0], eh[1] - er[1], eh[2] - er[2]];
                let quad = |v: [f64; 3]| (0..3).map(|i| (0..3).map(|j| v[i] * c[i][j] * v[j]).sum::<f64>()).sum::<f64>();
                err2 += q.weight * quad(d);
                ref2 += q.weight * quad(er);
            }
        }
    }
    out.absolute = err2.max(0.0).sqrt();
    out.reference_norm = ref2.max(0.0).sqrt();
    Ok(out)
}
