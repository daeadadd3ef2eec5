//! Pure-bending beam with a stiff or fine layer overlapping a coarse cross-hatched mesh.

use super::config::{BeamConfig, BeamVariant};
use super::model::{body_vtk, LayeredModel, LayeredSetup, BACKGROUND, LAYER};
use super::patch::line;
use super::report::{fmt_f, Artifacts, Csv, Summary};
use crate::elasticity::{dead_traction, Kinematics, Material};
use crate::error::Result;
use crate::mesh::{parse_mesh, read_mesh, BoundaryLayerSpec, Mesh};
use crate::solver::{solve_quasi_static, Dirichlet, Load, LoadKind, Solution};

/// Bundled cross-hatched background mesh of the 1.5 x 1 beam.
pub const BEAM_MESH: &str = include_str!("../../assets/beam_crosshatch.mesh");

pub fn beam_background(cfg: &BeamConfig) -> Result<Mesh> {
    let mut m = if cfg.mesh.is_empty() { parse_mesh(BEAM_MESH)? } else { read_mesh(std::path::Path::new(&cfg.mesh))? };
    m.tag_aabb_sides();
    Ok(m)
}

/// Characteristic background cell size (mean edge of the first element).
fn cell_size(m: &Mesh) -> f64 {
    let b = m.aabb();
    ((b.max[0] - b.min[0]) * (b.max[1] - b.min[1]) / m.elements.iter().filter(|e| e.kind == crate::mesh::ElementKind::Quad4).count().max(1) as f64 * 0.5).sqrt()
}

#[derive(Clone, Debug)]
pub struct BeamOutcome {
    pub variant: BeamVariant,
    pub model: LayeredModel,
    pub solution: Solution,
    /// (y, λ*_x, λ*_y, analytic σ_xx) per interface multiplier.
    pub traction: Vec<[f64; 4]>,
    /// Max |λ*_x − σ_xx| over the peak |σ_xx|.
    pub deviation: f64,
    pub layer_h: f64,
    pub background_h: f64,
}

pub fn beam_setup(cfg: &BeamConfig, v: &BeamVariant) -> Result<(LayeredSetup, f64, f64)> {
    let background = beam_background(cfg)?;
    let bb = background.aabb();
    let (y0, y1) = (bb.min[1], bb.max[1]);
    let hb = cell_size(&background);
    let hl = hb / v.h_ratio;
    let ny = ((y1 - y0) / hl).round().max(1.0) as usize;
    let nx = ((bb.max[0] - cfg.interface_x) / hl).round().max(1.0) as usize;
    let base = line([bb.max[0], y1], [bb.max[0], y0])?;
    let gs = line([cfg.interface_x, y1], [cfg.interface_x, y0])?;
    let m = 0.2 * cfg.length;
    let setup = LayeredSetup {
        base: vec![base],
        interface: Some(vec![gs]),
        layer: BoundaryLayerSpec {
            distance: bb.max[0] - cfg.interface_x,
            method: crate::offset::OffsetMethod::Interpolation,
            thickness_elements: nx,
            thickness_degree: 2,
            refinement: vec![ny],
            optimizer: Default::default(),
        },
        background,
        closure: vec![[bb.min[0] - m, y0 - m], [bb.min[0] - m, y1 + m]],
        cut: cfg.cut.clone(),
        layer_material: Material::new(v.e_layer, cfg.nu, Kinematics::Linear)?,
        background_material: Material::new(cfg.e, cfg.nu, Kinematics::Linear)?,
        epsilon: cfg.epsilon,
    };
    Ok((setup, hl, hb))
}

pub fn run_beam_variant(cfg: &BeamConfig, v: &BeamVariant) -> Result<BeamOutcome> {
    let (setup, layer_h, background_h) = beam_setup(cfg, v)?;
    let model = setup.build()?;
    let mut pb = model.problem();
    let k = cfg.load_slope;
    let lm = &model.bodies[LAYER].mesh;
    let bm = &model.bodies[BACKGROUND].mesh;
    // σ_xx(y) = k y on both end faces: t = σ n.
    let right = dead_traction(lm, lm.edge_set("outer"), 3, |x| [k * x[1], 0.0])?;
    let left = dead_traction(bm, bm.edge_set("left"), 3, |x| [-k * x[1], 0.0])?;
    pb.loads.push(Load { body: LAYER, kind: LoadKind::Dead(right) });
    pb.loads.push(Load { body: BACKGROUND, kind: LoadKind::Dead(left) });
    let bb = bm.aabb();
    let ymid = 0.5 * (bb.min[1] + bb.max[1]);
    let tol = 1e-9 * bb.diagonal();
    let pin = bm.select_nodes(|x| (x[0] - bb.min[0]).abs() < tol && (x[1] - ymid).abs() < tol);
    let top = bm.select_nodes(|x| (x[0] - bb.min[0]).abs() < tol && (x[1] - bb.max[1]).abs() < tol);
    for &n in &pin {
        for c in 0..2 {
            pb.dirichlet.push(Dirichlet { body: BACKGROUND, node: n, component: c, value: 0.0 });
        }
    }
    for &n in &top {
        pb.dirichlet.push(Dirichlet { body: BACKGROUND, node: n, component: 0, value: 0.0 });
    }
    let solution = solve_quasi_static(&pb)?;
    let lam = model.coupling.multipliers(&solution.u);
    let peak = k.abs() * 0.5 * (bb.max[1] - bb.min[1]);
    let mut traction: Vec<[f64; 4]> = model
        .coupling
        .rows
        .iter()
        .zip(&lam)
        .map(|(r, l)| {
            let y = lm.nodes[r.node][1];
            [y, l[0], l[1], k * y]
        })
        .collect();
    traction.sort_by(|a, b| a[0].total_cmp(&b[0]));
    let deviation = traction.iter().map(|t| (t[1] - t[3]).abs()).fold(0.0, f64::max) / peak;
    Ok(BeamOutcome { variant: v.clone(), model, solution, traction, deviation, layer_h, background_h })
}

pub fn traction_csv(o: &BeamOutcome) -> String {
    let mut csv = Csv::new(&["y", "traction_x", "traction_y", "analytic_sigma_xx"]);
    for t in &o.traction {
        csv.push_f(t);
    }
    csv.render()
}

pub fn run_bending_beam(cfg: &BeamConfig) -> Result<(Summary, Artifacts)> {
    let mut sum = Summary::new("bending-beam");
    let mut art = Artifacts::default();
    let mut devs = Vec::new();
    for v in &cfg.variants {
        let o = run_beam_variant(cfg, v)?;
        sum.metric(&format!("{}.deviation", v.name), o.deviation);
        sum.metric(&format!("{}.h_ratio", v.name), o.background_h / o.layer_h);
        sum.metric(&format!("{}.dofs", v.name), o.model.dofs() as f64);
        art.add(format!("beam_{}_traction.csv", v.name), traction_csv(&o));
        art.add(format!("beam_{}_layer.vtk", v.name), body_vtk(&o.model.bodies[LAYER], &o.solution.u)?);
        art.add(format!("beam_{}_background.vtk", v.name), body_vtk(&o.model.bodies[BACKGROUND], &o.solution.u)?);
        devs.push((v.clone(), o.deviation));
    }
    // Default ladder: equal moduli at ratio ~1.2, equal at ~4.2, stiff layer at ~4.2.
    let base = devs.iter().find(|(v, _)| v.e_layer == cfg.e && v.h_ratio < 2.0);
    let fine = devs.iter().find(|(v, _)| v.e_layer == cfg.e && v.h_ratio >= 2.0);
    let stiff = devs.iter().find(|(v, _)| v.e_layer > cfg.e);
    if let Some((_, d1)) = base {
        sum.check("config 1: traction deviation / peak", *d1, "<= 0.05", *d1 <= 0.05);
        if let Some((_, d2)) = fine {
            sum.check("config 2: deviation > config 1", d2 - d1, "> 0", d2 > d1);
            sum.check("config 2: traction deviation / peak", *d2, "<= 0.30", *d2 <= 0.30);
            if let Some((_, d3)) = stiff {
                sum.check("config 3: deviation / config 2", d3 / d2, ">= 2", *d3 >= 2.0 * d2);
            }
        }
    }
    let mut table = Csv::new(&["variant", "h_ratio", "E_layer", "deviation"]);
    for (v, d) in &devs {
        table.push(vec![v.name.clone(), fmt_f(v.h_ratio), fmt_f(v.e_layer), fmt_f(*d)]);
    }
    art.add("beam_deviation.csv", table.render());
    sum.finish();
    Ok((sum, art))
}
