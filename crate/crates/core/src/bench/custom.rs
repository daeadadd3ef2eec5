//! Mesh-only run: offset layer from base curve files in a Cartesian background.

use super::config::CustomConfig;
use super::model::{LayeredSetup, BACKGROUND, LAYER};
use super::report::{Artifacts, Summary};
use crate::elasticity::{Kinematics, Material};
use crate::error::Result;
use crate::mesh::{build_cartesian_mesh, format_vtk_cells, BoundaryLayerSpec};
use crate::nurbs::read_patch;

pub fn run_custom(cfg: &CustomConfig) -> Result<(Summary, Artifacts)> {
    let base = cfg.base.iter().map(|p| read_patch(std::path::Path::new(p))).collect::<Result<Vec<_>>>()?;
    let spec = BoundaryLayerSpec {
        distance: cfg.distance,
        method: cfg.method,
        thickness_elements: cfg.thickness_elements,
        thickness_degree: 2,
        refinement: cfg.refinement.clone(),
        optimizer: Default::default(),
    };
    let layer = crate::mesh::build_layer_from_spec(&base, &spec)?;
    let mut pts = Vec::new();
    for g in &layer.interface {
        for (a, b) in g.knot_vector(0).spans() {
            for k in 0..=8 {
                pts.push(g.curve_point(a + (b - a) * k as f64 / 8.0)?.0);
            }
        }
    }
    let background = build_cartesian_mesh(&pts, cfg.background_h, cfg.background_kind, 0)?;
    let mat = Material::new(1.0, 0.0, Kinematics::Linear)?;
    let model = LayeredSetup {
        base,
        interface: Some(layer.interface.clone()),
        layer: BoundaryLayerSpec { refinement: Vec::new(), ..spec },
        background,
        closure: cfg.closure.clone(),
        cut: cfg.cut.clone(),
        layer_material: mat,
        background_material: mat,
        epsilon: 1.0,
    }
    .build()?;
    let mut sum = Summary::new("custom");
    let [m, c, v] = model.cut_counts();
    sum.metric("cells.material", m as f64);
    sum.metric("cells.cut", c as f64);
    sum.metric("cells.void", v as f64);
    sum.metric("material_area", model.cut.material_area());
    sum.metric("dofs", model.dofs() as f64);
    sum.metric("interface_points", model.cut.interface.len() as f64);
    let mut art = Artifacts::default();
    art.add("layer.vtk", format_vtk_cells(&model.bodies[LAYER].mesh, &[], &[], None, 4)?);
    let active: Vec<bool> = model.bodies[BACKGROUND].quadrature.iter().map(|q| !q.is_empty()).collect();
    art.add("background.vtk", format_vtk_cells(&model.bodies[BACKGROUND].mesh, &[], &[], Some(&active), 1)?);
    art.add("cells.csv", model.cut.format_csv());
    sum.finish();
    Ok((sum, art))
}
