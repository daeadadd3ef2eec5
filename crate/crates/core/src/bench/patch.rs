//! Constant-stress patch test of a layer tied to a cut Cartesian block.

use super::config::{PatchTestConfig, PatchVariant};
use super::model::{body_vtk, element_stresses, LayeredModel, LayeredSetup, BACKGROUND, LAYER};
use super::report::{fmt_f, linear_r2, Artifacts, Csv, Summary};
use crate::elasticity::{Kinematics, Material};
use crate::error::Result;
use crate::geom::{lerp, V2};
use crate::mesh::{cartesian_grid, BoundaryLayerSpec, ElementKind};
use crate::nurbs::{KnotVector, NurbsPatch};
use crate::solver::{solve_quasi_static, Dirichlet, Load, LoadKind, Solution};

/// Quadratic single-span curve through `a`, `mid` (control point) and `b`.
pub fn quadratic(a: V2, mid: V2, b: V2) -> Result<NurbsPatch> {
    NurbsPatch::curve2(KnotVector::uniform(2, 1, 0.0, 1.0), &[a, mid, b], &[1.0; 3])
}

pub fn line(a: V2, b: V2) -> Result<NurbsPatch> {
    quadratic(a, lerp(a, b, 0.5), b)
}

#[derive(Clone, Debug)]
pub struct PatchOutcome {
    pub variant: PatchVariant,
    pub model: LayeredModel,
    pub solution: Solution,
    /// Max element-wise |σ_YY − p| / |p| over both subdomains.
    pub stress_deviation: f64,
    /// Max element-wise |σ_XX|, |σ_XY| relative to |p|.
    pub shear_deviation: f64,
    /// Smallest per-subdomain R² of u_Y against Y.
    pub uy_r2: f64,
}

pub fn patch_setup(cfg: &PatchTestConfig, variant: PatchVariant) -> Result<LayeredSetup> {
    let a = cfg.a;
    let d = cfg.layer_depth;
    let base = line([0.0, a], [a, a])?;
    let gs = match variant {
        PatchVariant::Straight => line([0.0, a - d], [a, a - d])?,
        PatchVariant::Inclined => line([0.0, a - 0.75 * d], [a, a - 1.25 * d])?,
        PatchVariant::Curved => quadratic([0.0, a - d], [0.5 * a, a - 2.0 * d], [a, a - d])?,
    };
    let background = cartesian_grid(0.0, a, 0.0, a, cfg.background_cells, cfg.background_cells, ElementKind::Quad4)?;
    let m = 0.2 * a;
    let mat = Material::new(cfg.e, cfg.nu, Kinematics::Finite)?;
    Ok(LayeredSetup {
        base: vec![base],
        interface: Some(vec![gs]),
        layer: BoundaryLayerSpec {
            distance: d,
            method: crate::offset::OffsetMethod::Interpolation,
            thickness_elements: 1,
            thickness_degree: 2,
            refinement: vec![cfg.layer_elements],
            optimizer: Default::default(),
        },
        background,
        closure: vec![[a + m, -m], [-m, -m]],
        cut: cfg.cut.clone(),
        layer_material: mat,
        background_material: mat,
        epsilon: cfg.epsilon,
    })
}

pub fn run_patch_variant(cfg: &PatchTestConfig, variant: PatchVariant) -> Result<PatchOutcome> {
    let model = patch_setup(cfg, variant)?.build()?;
    let mut pb = model.problem();
    let lm = &model.bodies[LAYER].mesh;
    pb.loads.push(Load { body: LAYER, kind: LoadKind::FollowerPressure { edges: lm.edge_set("outer").to_vec(), p: cfg.p, n_gauss: 3 } });
    let bm = &model.bodies[BACKGROUND].mesh;
    for n in bm.select_nodes(|x| x[1].abs() < 1e-12) {
        pb.dirichlet.push(Dirichlet { body: BACKGROUND, node: n, component: 1, value: 0.0 });
    }
    for n in bm.select_nodes(|x| x[0].abs() < 1e-12 && x[1].abs() < 1e-12) {
        pb.dirichlet.push(Dirichlet { body: BACKGROUND, node: n, component: 0, value: 0.0 });
    }
    let solution = solve_quasi_static(&pb)?;
    let mut dev: f64 = 0.0;
    let mut shear: f64 = 0.0;
    let mut r2: f64 = 1.0;
    let used = pb.free_nodes();
    for b in &model.bodies {
        for s in element_stresses(b, &solution.u)?.iter().filter(|s| s[0].is_finite()) {
            dev = dev.max((s[1] - cfg.p).abs() / cfg.p.abs());
            shear = shear.max(s[0].abs().max(s[2].abs()) / cfg.p.abs());
        }
        let (ys, uy): (Vec<f64>, Vec<f64>) = (0..b.n_nodes())
            .filter(|&n| used[b.offset + n])
            .map(|n| (b.mesh.nodes[n][1], solution.u[2 * (b.offset + n) + 1]))
            .unzip();
        r2 = r2.min(linear_r2(&ys, &uy));
    }
    Ok(PatchOutcome { variant, model, solution, stress_deviation: dev, shear_deviation: shear, uy_r2: r2 })
}

/// Element-wise stress table of all active elements.
pub fn stress_csv(model: &LayeredModel, u: &[f64]) -> Result<String> {
    let mut csv = Csv::new(&["body", "element", "sigma_xx", "sigma_yy", "sigma_xy"]);
    for b in &model.bodies {
        for (e, s) in element_stresses(b, u)?.iter().enumerate().filter(|(_, s)| s[0].is_finite()) {
            csv.push(vec![b.name.clone(), e.to_string(), fmt_f(s[0]), fmt_f(s[1]), fmt_f(s[2])]);
        }
    }
    Ok(csv.render())
}

pub fn run_patch_test(cfg: &PatchTestConfig) -> Result<(Summary, Artifacts)> {
    let mut sum = Summary::new("patch-test");
    let mut art = Artifacts::default();
    for &v in &cfg.variants {
        let o = run_patch_variant(cfg, v)?;
        let n = v.name();
        match v {
            PatchVariant::Curved => sum.check(&format!("{n}: max |sigma_yy - p|/|p|"), o.stress_deviation, "<= 0.016", o.stress_deviation <= 0.016),
            _ => sum.check(&format!("{n}: max |sigma_yy - p|/|p|"), o.stress_deviation, "<= 1e-8", o.stress_deviation <= 1e-8),
        }
        if v == PatchVariant::Straight {
            sum.check(&format!("{n}: u_y linear in y (R^2)"), o.uy_r2, ">= 1 - 1e-10", o.uy_r2 >= 1.0 - 1e-10);
        }
        sum.metric(&format!("{n}.shear_deviation"), o.shear_deviation);
        sum.metric(&format!("{n}.uy_r2"), o.uy_r2);
        sum.metric(&format!("{n}.dofs"), o.model.dofs() as f64);
        sum.metric(&format!("{n}.newton_iterations"), o.solution.report.steps.iter().map(|s| s.iterations).sum::<usize>() as f64);
        art.add(format!("patch_{n}_stress.csv"), stress_csv(&o.model, &o.solution.u)?);
        art.add(format!("patch_{n}_layer.vtk"), body_vtk(&o.model.bodies[LAYER], &o.solution.u)?);
        art.add(format!("patch_{n}_background.vtk"), body_vtk(&o.model.bodies[BACKGROUND], &o.solution.u)?);
        art.add(format!("patch_{n}_cells.csv"), o.model.cut.format_csv());
        art.add(format!("patch_{n}_mortar.csv"), o.model.coupling.format_csv(&o.model.bodies[LAYER].mesh, &o.solution.u));
    }
    sum.finish();
    Ok((sum, art))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_patch_test() {
        let cfg = PatchTestConfig::default();
        let o = run_patch_variant(&cfg, PatchVariant::Straight).unwrap();
        assert!(o.stress_deviation <= 1e-8, "{}", o.stress_deviation);
        assert!(o.uy_r2 >= 1.0 - 1e-10);
    }
}
