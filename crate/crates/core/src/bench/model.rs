//! Shared construction of a boundary layer embedded in a cut background mesh.

use crate::cutcell::{build_cut_cell_quadrature, CellClass, CutCellOptions, CutCellQuadrature};
use crate::elasticity::{cauchy_stress, Material};
use crate::embedded::{assemble_embedded_mortar, EmbeddedCoupling};
use crate::error::Result;
use crate::geom::V2;
use crate::mesh::{build_boundary_layer, build_layer_from_spec, format_vtk_cells, BoundaryLayer, BoundaryLayerSpec, CellField, Mesh, PointField};
use crate::nurbs::NurbsPatch;
use crate::solver::{Body, Problem};

/// Inputs of a layered discretization.
#[derive(Clone, Debug)]
pub struct LayeredSetup {
    /// Base B-rep curves, material on the right of travel.
    pub base: Vec<NurbsPatch>,
    /// Prescribed Γ*; when None the base is offset with `layer`.
    pub interface: Option<Vec<NurbsPatch>>,
    pub layer: BoundaryLayerSpec,
    pub background: Mesh,
    /// Polygon vertices closing the bulk region after Γ*.
    pub closure: Vec<V2>,
    pub cut: CutCellOptions,
    pub layer_material: Material,
    pub background_material: Material,
    pub epsilon: f64,
}

#[derive(Clone, Debug)]
pub struct LayeredModel {
    pub layer: BoundaryLayer,
    pub cut: CutCellQuadrature,
    pub coupling: EmbeddedCoupling,
    /// Body 0 is the layer (offset 0), body 1 the background.
    pub bodies: Vec<Body>,
}

pub const LAYER: usize = 0;
pub const BACKGROUND: usize = 1;

impl LayeredSetup {
    pub fn build(&self) -> Result<LayeredModel> {
        let layer = match &self.interface {
            Some(gs) => build_boundary_layer(&self.base, gs, self.layer.thickness_elements, self.layer.thickness_degree, &self.layer.refinement)?,
            None => build_layer_from_spec(&self.base, &self.layer)?,
        };
        crate::embedded::check_layer(&layer.mesh)?;
        let cut = build_cut_cell_quadrature(&self.background, &layer.interface, &self.closure, &self.cut)?;
        let offset = layer.mesh.n_nodes();
        let coupling = assemble_embedded_mortar(&layer.mesh, &self.background, offset, &cut.interface, self.epsilon)?;
        let lb = Body::full("layer", layer.mesh.clone(), self.layer_material.clone(), 0)?;
        let bb = Body {
            name: "background".into(),
            mesh: self.background.clone(),
            material: self.background_material.clone(),
            quadrature: cut.cells.iter().map(|c| c.points.clone()).collect(),
            offset,
        };
        Ok(LayeredModel { layer, cut, coupling, bodies: vec![lb, bb] })
    }
}

impl LayeredModel {
    pub fn problem(&self) -> Problem {
        Problem {
            bodies: self.bodies.clone(),
            loads: Vec::new(),
            dirichlet: Vec::new(),
            coupling: Some(self.coupling.clone()),
            contact: None,
            load_steps: 1,
            tolerances: None,
        }
    }

    /// Unknown count excluding void background nodes.
    pub fn dofs(&self) -> usize {
        let p = self.problem();
        2 * p.free_nodes().iter().filter(|&&f| f).count()
    }

    pub fn cut_counts(&self) -> [usize; 3] {
        [self.cut.count(CellClass::Material), self.cut.count(CellClass::Cut), self.cut.count(CellClass::Void)]
    }
}

/// Quadrature-weighted mean Cauchy stress [σxx, σyy, σxy] per element (NaN when inactive).
pub fn element_stresses(body: &Body, u: &[f64]) -> Result<Vec<[f64; 3]>> {
    let ub = body.slice(u);
    let mut out = vec![[f64::NAN; 3]; body.mesh.elements.len()];
    for e in body.active_elements() {
        let ue: Vec<f64> = body.mesh.elements[e].nodes.iter().flat_map(|&n| [ub[2 * n], ub[2 * n + 1]]).collect();
        let mut acc = [0.0; 3];
        let mut w = 0.0;
        for q in &body.quadrature[e] {
            let s = cauchy_stress(&body.mesh, e, q.xi, &ue, &body.material)?;
            for i in 0..3 {
                acc[i] += q.weight * s[i];
            }
            w += q.weight;
        }
        out[e] = acc.map(|v| v / w);
    }
    Ok(out)
}

/// Cauchy stress at every quadrature point of every active element: (element, stress).
pub fn point_stresses(body: &Body, u: &[f64]) -> Result<Vec<(usize, [f64; 3])>> {
    let ub = body.slice(u);
    let mut out = Vec::new();
    for e in body.active_elements() {
        let ue: Vec<f64> = body.mesh.elements[e].nodes.iter().flat_map(|&n| [ub[2 * n], ub[2 * n + 1]]).collect();
        for q in &body.quadrature[e] {
            out.push((e, cauchy_stress(&body.mesh, e, q.xi, &ue, &body.material)?));
        }
    }
    Ok(out)
}

/// VTK of one body with displacement and element Cauchy stress; inactive cells are omitted.
pub fn body_vtk(body: &Body, u: &[f64]) -> Result<String> {
    let ub = body.slice(u).to_vec();
    let st = element_stresses(body, u)?;
    let flat: Vec<f64> = st.iter().flat_map(|s| s.iter().copied()).collect();
    let active: Vec<bool> = body.quadrature.iter().map(|q| !q.is_empty()).collect();
    let sxx: Vec<f64> = st.iter().map(|s| s[0]).collect();
    let syy: Vec<f64> = st.iter().map(|s| s[1]).collect();
    format_vtk_cells(
        &body.mesh,
        &[PointField { name: "displacement", nodal: &ub, ncomp: 2 }],
        &[
            CellField { name: "cauchy_stress", values: &flat, ncomp: 3 },
            CellField { name: "sigma_xx", values: &sxx, ncomp: 1 },
            CellField { name: "sigma_yy", values: &syy, ncomp: 1 },
        ],
        Some(&active),
        4,
    )
}
