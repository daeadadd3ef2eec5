//! Coupled problem description and deterministic global assembly.

use super::linear::TripletMatrix;
use crate::contact::ContactPair;
use crate::cutcell::{full_cell_quadrature, QuadPoint};
use crate::elasticity::{element_force_stiffness, follower_pressure, Material};
use crate::embedded::EmbeddedCoupling;
use crate::error::Result;
use crate::mesh::{EdgeRef, Mesh};
use rayon::prelude::*;

/// One discretized subdomain; `quadrature[e]` empty marks an inactive element.
#[derive(Clone, Debug)]
pub struct Body {
    pub name: String,
    pub mesh: Mesh,
    pub material: Material,
    pub quadrature: Vec<Vec<QuadPoint>>,
    /// First system node of this body.
    pub offset: usize,
}

impl Body {
    /// Body with the standard rule in every element.
    pub fn full(name: &str, mesh: Mesh, material: Material, offset: usize) -> Result<Self> {
        let quadrature = (0..mesh.elements.len()).map(|e| full_cell_quadrature(&mesh, e)).collect::<Result<_>>()?;
        Ok(Self { name: name.into(), mesh, material, quadrature, offset })
    }

    pub fn n_nodes(&self) -> usize {
        self.mesh.nodes.len()
    }

    /// Displacement slice of this body in a system vector.
    pub fn slice<'a>(&self, u: &'a [f64]) -> &'a [f64] {
        &u[2 * self.offset..2 * (self.offset + self.n_nodes())]
    }

    pub fn active_elements(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.mesh.elements.len()).filter(|&e| !self.quadrature[e].is_empty())
    }
}

#[derive(Clone, Debug)]
pub enum LoadKind {
    /// Reference nodal forces of the body (2 per node), scaled by the load factor.
    Dead(Vec<f64>),
    /// Pressure p along current outward normals (t = p n).
    FollowerPressure { edges: Vec<EdgeRef>, p: f64, n_gauss: usize },
}

#[derive(Clone, Debug)]
pub struct Load {
    pub body: usize,
    pub kind: LoadKind,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dirichlet {
    pub body: usize,
    pub node: usize,
    pub component: usize,
    pub value: f64,
}

#[derive(Clone, Debug)]
pub struct ContactSpec {
    /// Body whose mesh carries the slave edges.
    pub body: usize,
    pub pair: ContactPair,
}

#[derive(Clone, Debug)]
pub struct Tolerances {
    pub residual: f64,
    pub displacement: f64,
    pub max_iterations: usize,
    pub max_active_set_changes: usize,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub bodies: Vec<Body>,
    pub loads: Vec<Load>,
    pub dirichlet: Vec<Dirichlet>,
    pub coupling: Option<EmbeddedCoupling>,
    pub contact: Option<ContactSpec>,
    pub load_steps: usize,
    /// Defaults to 1e-8 · max(‖f_ext‖, 1) and 1e-8 · mesh diagonal when None.
    pub tolerances: Option<Tolerances>,
}

impl Problem {
    pub fn n_nodes(&self) -> usize {
        self.bodies.iter().map(|b| b.offset + b.n_nodes()).max().unwrap_or(0)
    }

    /// Nodes not touched by any active element or coupling row (held at zero).
    pub fn free_nodes(&self) -> Vec<bool> {
        let mut used = vec![false; self.n_nodes()];
        for b in &self.bodies {
            for e in b.active_elements() {
                for &n in &b.mesh.elements[e].nodes {
                    used[b.offset + n] = true;
                }
            }
        }
        used
    }

    /// Total reference external force (load factor 1) in system numbering.
    pub fn dead_load(&self) -> Vec<f64> {
        let mut f = vec![0.0; 2 * self.n_nodes()];
        for l in &self.loads {
            if let LoadKind::Dead(v) = &l.kind {
                let off = 2 * self.bodies[l.body].offset;
                for (i, x) in v.iter().enumerate() {
                    f[off + i] += x;
                }
            }
        }
        f
    }

    /// Internal + coupling force minus external load, with tangent (displacement block).
    pub fn assemble(&self, u: &[f64], load_factor: f64) -> Result<(Vec<f64>, TripletMatrix)> {
        let ndof = 2 * self.n_nodes();
        let mut r = vec![0.0; ndof];
        let mut k = TripletMatrix::new(ndof);
        for b in &self.bodies {
            let ub = b.slice(u);
            let elems: Vec<usize> = b.active_elements().collect();
            let results: Vec<Result<(Vec<f64>, Vec<f64>)>> = elems
                .par_iter()
                .map(|&e| {
                    let ue: Vec<f64> = b.mesh.elements[e].nodes.iter().flat_map(|&n| [ub[2 * n], ub[2 * n + 1]]).collect();
                    element_force_stiffness(&b.mesh, e, &b.quadrature[e], &ue, &b.material)
                })
                .collect();
            for (&e, res) in elems.iter().zip(results) {
                let (fe, ke) = res?;
                let dofs: Vec<usize> = b.mesh.elements[e].nodes.iter().flat_map(|&n| [2 * (b.offset + n), 2 * (b.offset + n) + 1]).collect();
                let nd = dofs.len();
                for p in 0..nd {
                    r[dofs[p]] += fe[p];
                    for q in 0..nd {
                        k.add(dofs[p], dofs[q], ke[p * nd + q]);
                    }
                }
            }
        }
        if let Some(c) = &self.coupling {
            let (f, kt) = c.force_stiffness(u);
            for (i, v) in f.into_iter().enumerate() {
                r[i] += v;
            }
            for (a, bb, v) in kt {
                k.add(a, bb, v);
            }
        }
        for l in &self.loads {
            let b = &self.bodies[l.body];
            let off = 2 * b.offset;
            match &l.kind {
                LoadKind::Dead(v) => {
                    for (i, x) in v.iter().enumerate() {
                        r[off + i] -= load_factor * x;
                    }
                }
                LoadKind::FollowerPressure { edges, p, n_gauss } => {
                    let (f, kt) = follower_pressure(&b.mesh, edges, *n_gauss, load_factor * p, b.slice(u))?;
                    for (i, x) in f.into_iter().enumerate() {
                        r[off + i] -= x;
                    }
                    for (a, bb, v) in kt {
                        k.add(off + a, off + bb, -v);
                    }
                }
            }
        }
        Ok((r, k))
    }
}
