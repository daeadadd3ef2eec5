//! Energy-norm convergence of a block pressed onto a rigid NURBS surface.

use super::config::ConvergenceConfig;
use super::model::{body_vtk, LayeredModel, LayeredSetup, BACKGROUND, LAYER};
use super::patch::{line, quadratic};
use super::report::{fmt_f, loglog_slope, Artifacts, Csv, Summary};
use crate::contact::{ContactPair, RigidMaster};
use crate::elasticity::{dead_traction, Kinematics, Material};
use crate::error::Result;
use crate::mesh::{cartesian_grid, BoundaryLayerSpec, ElementKind};
use crate::solver::{energy_norm_error, solve_quasi_static, ContactSpec, Dirichlet, Load, LoadKind, Solution};
use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct BlockSolution {
    pub cells: usize,
    pub kind: ElementKind,
    pub model: LayeredModel,
    pub solution: Solution,
}

pub fn block_setup(cfg: &ConvergenceConfig, cells: usize, kind: ElementKind) -> Result<LayeredSetup> {
    let (hw, h) = (0.5 * cfg.width, cfg.height);
    let base = line([hw, 0.0], [-hw, 0.0])?;
    let gs = quadratic([hw, cfg.interface_end_height], [0.0, cfg.interface_mid_height], [-hw, cfg.interface_end_height])?;
    let background = cartesian_grid(-hw, hw, 0.0, h, cells, cells, kind)?;
    let m = 0.2 * cfg.width;
    let mat = Material::new(cfg.e, cfg.nu, Kinematics::Linear)?;
    Ok(LayeredSetup {
        base: vec![base],
        interface: Some(vec![gs]),
        layer: BoundaryLayerSpec {
            distance: cfg.interface_end_height,
            method: crate::offset::OffsetMethod::Interpolation,
            thickness_elements: cells.div_ceil(6),
            thickness_degree: 2,
            refinement: vec![cells],
            optimizer: Default::default(),
        },
        background,
        closure: vec![[-hw - m, h + m], [hw + m, h + m]],
        cut: cfg.cut.clone(),
        layer_material: mat,
        background_material: mat,
        epsilon: cfg.epsilon,
    })
}

pub fn solve_block(cfg: &ConvergenceConfig, cells: usize, kind: ElementKind) -> Result<BlockSolution> {
    let model = block_setup(cfg, cells, kind)?.build()?;
    let mut pb = model.problem();
    let lm = &model.bodies[LAYER].mesh;
    let bm = &model.bodies[BACKGROUND].mesh;
    let c = cfg.load_coefficient;
    let f = dead_traction(bm, bm.edge_set("top"), 4, |x| [0.0, -c * x[0].powi(4)])?;
    pb.loads.push(Load { body: BACKGROUND, kind: LoadKind::Dead(f) });
    let tol = 1e-9 * cfg.width;
    for n in bm.select_nodes(|x| x[0].abs() < tol) {
        pb.dirichlet.push(Dirichlet { body: BACKGROUND, node: n, component: 0, value: 0.0 });
    }
    let hw = cfg.width;
    let master = quadratic([-hw, 0.0], [0.0, 0.0], [hw, 0.0])?;
    pb.contact = Some(ContactSpec {
        body: LAYER,
        pair: ContactPair { edges: lm.edge_set("outer").to_vec(), master: RigidMaster::Curve(master), c_n: cfg.e, n_gauss: 4, current_geometry: false },
    });
    let solution = solve_quasi_static(&pb)?;
    Ok(BlockSolution { cells, kind, model, solution })
}

/// Run `f` over `items` on `jobs` threads (serially for jobs <= 1); order is preserved.
pub fn run_levels<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    if jobs <= 1 {
        return items.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| crate::Error::Solver(e.to_string()))?;
    pool.install(|| items.par_iter().map(&f).collect())
}

pub fn run_convergence_block(cfg: &ConvergenceConfig, jobs: usize) -> Result<(Summary, Artifacts)> {
    let mut sum = Summary::new("convergence-block");
    let mut art = Artifacts::default();
    let reference = solve_block(cfg, cfg.reference_cells, ElementKind::Quad8)?;
    sum.metric("reference.dofs", reference.model.dofs() as f64);
    let mut table = Csv::new(&["background", "cells", "h", "dofs", "energy_error", "relative_error", "fallbacks"]);
    for &kind in &cfg.kinds {
        let sols = run_levels(&cfg.levels, jobs, |&n| solve_block(cfg, n, kind))?;
        let mut hs = Vec::new();
        let mut es = Vec::new();
        for s in &sols {
            let e = energy_norm_error(&s.model.bodies, &s.solution.u, &reference.model.bodies, &reference.solution.u)?;
            let h = cfg.width / s.cells as f64;
            table.push(vec![kind.name().into(), s.cells.to_string(), fmt_f(h), s.model.dofs().to_string(), fmt_f(e.absolute), fmt_f(e.relative()), e.fallbacks.to_string()]);
            hs.push(h);
            es.push(e.absolute);
        }
        let slope = loglog_slope(&hs, &es)?;
        let monotone = es.windows(2).all(|w| w[1] < w[0]);
        let (target, tol) = if kind == ElementKind::Quad4 { (1.0, 0.15) } else { (2.0, 0.2) };
        sum.check(&format!("nurbs9+{} energy-norm slope", kind.name()), slope, &format!("{target} +- {tol}"), (slope - target).abs() <= tol && monotone);
        sum.metric(&format!("{}.slope", kind.name()), slope);
        if let Some(s) = sols.last() {
            art.add(format!("block_{}_layer.vtk", kind.name()), body_vtk(&s.model.bodies[LAYER], &s.solution.u)?);
            art.add(format!("block_{}_background.vtk", kind.name()), body_vtk(&s.model.bodies[BACKGROUND], &s.solution.u)?);
        }
    }
    art.add("convergence.csv", table.render());
    sum.finish();
    Ok((sum, art))
}
