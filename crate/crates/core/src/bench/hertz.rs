//! Hertzian contact of a half-cylinder pressed onto a rigid plate.

use super::config::{HertzConfig, SelectiveConfig};
use super::convergence::run_levels;
use super::model::{body_vtk, LayeredModel, LayeredSetup, BACKGROUND, LAYER};
use super::report::{fmt_f, Artifacts, Csv, Summary};
use crate::contact::{ContactPair, RigidMaster};
use crate::elasticity::{dead_traction, Kinematics, Material};
use crate::error::{Error, Result};
use crate::geom::V2;
use crate::mesh::{cartesian_grid, BoundaryLayerSpec};
use crate::nurbs::{KnotVector, NurbsPatch};
use crate::offset::OffsetMethod;
use crate::solver::{solve_quasi_static, ContactSpec, Dirichlet, Load, LoadKind, Solution};
use std::time::Instant;

/// Closed-form Hertz solution of a cylinder on a rigid plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HertzReference {
    pub b: f64,
    pub p_max: f64,
    coef: f64,
}

impl HertzReference {
    /// p_c(x) = 4Rp/(πb²) sqrt(b² − x²); fails for |x| > b.
    pub fn pressure(&self, x: f64) -> Result<f64> {
        if x.abs() > self.b * (1.0 + 1e-14) {
            return Err(Error::Config(format!("|x| = {} outside the contact half-width {}", x.abs(), self.b)));
        }
        Ok(self.coef * (self.b * self.b - x * x).max(0.0).sqrt())
    }

    /// Pressure extended by zero outside the contact zone.
    pub fn pressure_or_zero(&self, x: f64) -> f64 {
        self.pressure(x).unwrap_or(0.0)
    }
}

pub fn hertz_reference(p: f64, r: f64, e: f64, nu: f64) -> Result<HertzReference> {
    if !(p > 0.0 && r > 0.0 && e > 0.0) {
        return Err(Error::Config("Hertz reference needs positive p, R and E".into()));
    }
    let b = 2.0 * (2.0 * r * r * p * (1.0 - nu * nu) / (e * std::f64::consts::PI)).sqrt();
    let coef = 4.0 * r * p / (std::f64::consts::PI * b * b);
    Ok(HertzReference { b, p_max: coef * b, coef })
}

/// Rational quadratic arc of radius `r` about `c` from angle `a0` to `a1` (|a1 − a0| < π).
pub fn circular_arc(c: V2, r: f64, a0: f64, a1: f64) -> Result<NurbsPatch> {
    let half = 0.5 * (a1 - a0);
    let am = 0.5 * (a0 + a1);
    let w = half.cos();
    let p = |a: f64, s: f64| [c[0] + s * a.cos(), c[1] + s * a.sin()];
    NurbsPatch::curve2(KnotVector::uniform(2, 1, 0.0, 1.0), &[p(a0, r), p(am, r / w), p(a1, r)], &[1.0, w, 1.0])
}

/// Lower half-circle as three 60° arcs travelling clockwise from (R, 0) to (−R, 0).
pub fn half_cylinder(r: f64) -> Result<Vec<NurbsPatch>> {
    let t = std::f64::consts::FRAC_PI_3;
    (0..3).map(|k| circular_arc([0.0, 0.0], r, -(k as f64) * t, -((k + 1) as f64) * t)).collect()
}

/// Mesh resolution of one Hertz run.
#[derive(Clone, Debug, PartialEq)]
pub struct HertzMesh {
    /// Layer elements along each of the three patches.
    pub patch_elements: [usize; 3],
    pub thickness_elements: usize,
    pub background_h: f64,
}

impl HertzMesh {
    /// Uniform element size h = 1 / level.
    pub fn uniform(cfg: &HertzConfig, level: f64) -> Self {
        let h = 1.0 / level;
        let n = (cfg.radius * std::f64::consts::FRAC_PI_3 / h).ceil() as usize;
        let t = ((cfg.distance / h).round() as usize).max(1);
        Self { patch_elements: [n; 3], thickness_elements: t, background_h: h }
    }

    pub fn selective(s: &SelectiveConfig) -> Self {
        Self { patch_elements: [s.side_elements, s.center_elements, s.side_elements], thickness_elements: s.thickness_elements, background_h: s.background_h }
    }
}

#[derive(Clone, Debug)]
pub struct HertzRun {
    pub p: f64,
    pub mesh: HertzMesh,
    pub model: LayeredModel,
    pub solution: Solution,
    /// (x of the reference anchor, λ) sorted by x.
    pub profile: Vec<(f64, f64)>,
    pub p_max: f64,
}

pub fn hertz_setup(cfg: &HertzConfig, mesh: &HertzMesh) -> Result<LayeredSetup> {
    let base = half_cylinder(cfg.radius)?;
    let inner = cfg.radius - cfg.distance;
    // Bulk box: bounding box of Γ*, an even cell count puts nodes on x = 0.
    let nx = {
        let n = (2.0 * inner / mesh.background_h - 1e-9).ceil() as usize;
        n + n % 2
    };
    let ny = (inner / mesh.background_h - 1e-9).ceil().max(1.0) as usize;
    let background = cartesian_grid(-inner, inner, -inner, 0.0, nx, ny, cfg.background_kind)?;
    let mat = Material::new(cfg.e, cfg.nu, Kinematics::Linear)?;
    Ok(LayeredSetup {
        base,
        interface: None,
        layer: BoundaryLayerSpec {
            distance: cfg.distance,
            method: OffsetMethod::Interpolation,
            thickness_elements: mesh.thickness_elements,
            thickness_degree: 2,
            refinement: mesh.patch_elements.to_vec(),
            optimizer: Default::default(),
        },
        background,
        closure: Vec::new(),
        cut: cfg.cut.clone(),
        layer_material: mat,
        background_material: mat,
        epsilon: cfg.epsilon,
    })
}

pub fn solve_hertz(cfg: &HertzConfig, mesh: &HertzMesh, p: f64) -> Result<HertzRun> {
    let model = hertz_setup(cfg, mesh)?.build()?;
    let mut pb = model.problem();
    pb.load_steps = cfg.load_steps;
    let lm = &model.bodies[LAYER].mesh;
    let bm = &model.bodies[BACKGROUND].mesh;
    let down = |_: V2| [0.0, -p];
    let mut ends = lm.edge_set("start").to_vec();
    ends.extend_from_slice(lm.edge_set("end"));
    pb.loads.push(Load { body: LAYER, kind: LoadKind::Dead(dead_traction(lm, &ends, 3, down)?) });
    pb.loads.push(Load { body: BACKGROUND, kind: LoadKind::Dead(dead_traction(bm, bm.edge_set("top"), 3, down)?) });
    let tol = 1e-9 * cfg.radius;
    for n in bm.select_nodes(|x| x[0].abs() < tol) {
        pb.dirichlet.push(Dirichlet { body: BACKGROUND, node: n, component: 0, value: 0.0 });
    }
    pb.contact = Some(ContactSpec {
        body: LAYER,
        pair: ContactPair {
            edges: lm.edge_set("outer").to_vec(),
            master: RigidMaster::Line { point: [0.0, -cfg.radius], normal: [0.0, 1.0] },
            c_n: cfg.c_n,
            n_gauss: 4,
            current_geometry: true,
        },
    });
    let solution = solve_quasi_static(&pb)?;
    let profile: Vec<(f64, f64)> = solution.traction_profile().into_iter().map(|(x, l)| (x[0], l)).collect();
    let p_max = profile.iter().map(|v| v.1).fold(0.0, f64::max);
    Ok(HertzRun { p, mesh: mesh.clone(), model, solution, profile, p_max })
}

/// RMS of `profile − reference` over |x| ≤ window.
pub fn profile_rms(profile: &[(f64, f64)], window: f64, reference: impl Fn(f64) -> f64) -> f64 {
    let d: Vec<f64> = profile.iter().filter(|v| v.0.abs() <= window).map(|v| v.1 - reference(v.0)).collect();
    if d.is_empty() {
        return f64::INFINITY;
    }
    (d.iter().map(|v| v * v).sum::<f64>() / d.len() as f64).sqrt()
}

/// Piecewise-linear interpolation of a sorted profile (zero outside).
pub fn interpolate_profile(profile: &[(f64, f64)], x: f64) -> f64 {
    let k = profile.partition_point(|v| v.0 < x);
    if k == 0 || k == profile.len() {
        return 0.0;
    }
    let (a, b) = (profile[k - 1], profile[k]);
    a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
}

pub fn profile_csv(run: &HertzRun, reference: &HertzReference) -> String {
    let mut csv = Csv::new(&["x", "traction", "analytic"]);
    for &(x, l) in &run.profile {
        csv.push_f(&[x, l, reference.pressure_or_zero(x)]);
    }
    csv.render()
}

pub fn run_hertz(cfg: &HertzConfig, jobs: usize) -> Result<(Summary, Artifacts)> {
    let mut sum = Summary::new("hertz");
    let mut art = Artifacts::default();
    let mut pmax_csv = Csv::new(&["p", "inv_h", "dofs", "p_max", "analytic_p_max"]);
    let mut rel_dev: Vec<(f64, f64)> = Vec::new();
    let mut finest_03: Option<HertzRun> = None;
    let meshes: Vec<HertzMesh> = cfg.levels.iter().map(|&l| HertzMesh::uniform(cfg, l)).collect();
    for &p in &cfg.loads {
        let hr = hertz_reference(p, cfg.radius, cfg.e, cfg.nu)?;
        let runs = run_levels(&meshes, jobs, |m| solve_hertz(cfg, m, p))?;
        for (l, r) in cfg.levels.iter().zip(&runs) {
            pmax_csv.push(vec![fmt_f(p), fmt_f(*l), r.model.dofs().to_string(), fmt_f(r.p_max), fmt_f(hr.p_max)]);
        }
        let seq: Vec<f64> = runs.iter().map(|r| r.p_max).collect();
        let d: Vec<f64> = seq.windows(2).map(|w| w[1] - w[0]).collect();
        let monotone = d.iter().all(|&v| v >= 0.0) || d.iter().all(|&v| v <= 0.0);
        let fin = runs.last().ok_or_else(|| Error::Config("no Hertz levels".into()))?;
        let rel = (fin.p_max - hr.p_max).abs() / hr.p_max;
        rel_dev.push((p, rel));
        let tag = format!("p={p}");
        sum.metric(&format!("{tag}.p_max"), fin.p_max);
        sum.metric(&format!("{tag}.relative_deviation"), rel);
        sum.metric(&format!("{tag}.dofs"), fin.model.dofs() as f64);
        art.add(format!("hertz_p{p}_profile.csv"), profile_csv(fin, &hr));
        art.add(format!("hertz_p{p}_layer.vtk"), body_vtk(&fin.model.bodies[LAYER], &fin.solution.u)?);
        art.add(format!("hertz_p{p}_background.vtk"), body_vtk(&fin.model.bodies[BACKGROUND], &fin.solution.u)?);
        if (p - 0.3).abs() < 1e-12 {
            sum.check("p=0.3: finest p_max relative deviation", rel, "<= 0.03", rel <= 0.03);
            sum.check("p=0.3: monotone p_max trend over levels", seq.len() as f64, ">= 4 levels, monotone", monotone && seq.len() >= 4);
            let rms = profile_rms(&fin.profile, 0.9 * hr.b, |x| hr.pressure_or_zero(x)) / hr.p_max;
            sum.check("p=0.3: profile RMS / p_max over |x| <= 0.9b", rms, "<= 0.05", rms <= 0.05);
            finest_03 = runs.into_iter().last();
        }
    }
    let r03 = rel_dev.iter().find(|v| (v.0 - 0.3).abs() < 1e-12);
    let r05 = rel_dev.iter().find(|v| (v.0 - 0.5).abs() < 1e-12);
    if let (Some(a), Some(b)) = (r03, r05) {
        sum.check("p=0.5 deviates more than p=0.3 (relative)", b.1 - a.1, "> 0", b.1 > a.1);
    }
    art.add("hertz_pmax.csv", pmax_csv.render());
    if let (Some(sel), Some(fine)) = (&cfg.selective, &finest_03) {
        let hr = hertz_reference(0.3, cfg.radius, cfg.e, cfg.nu)?;
        let t = Instant::now();
        let run = solve_hertz(cfg, &HertzMesh::selective(sel), 0.3)?;
        sum.metric("selective.runtime_s", t.elapsed().as_secs_f64());
        let rms = profile_rms(&run.profile, 0.9 * hr.b, |x| interpolate_profile(&fine.profile, x)) / hr.p_max;
        sum.metric("selective.dofs", run.model.dofs() as f64);
        sum.metric("selective.p_max", run.p_max);
        sum.check("selective refinement: profile RMS / p_max vs finest", rms, "<= 0.05", rms <= 0.05);
        art.add("hertz_selective_profile.csv", profile_csv(&run, &hr));
        art.add("hertz_selective_layer.vtk", body_vtk(&run.model.bodies[LAYER], &run.solution.u)?);
    }
    sum.finish();
    Ok((sum, art))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let r = hertz_reference(0.3, 10.0, 250.0, 0.0).unwrap();
        assert!((r.b - 0.55279).abs() < 1e-5 && (r.p_max - 6.909883).abs() < 1e-6);
        assert!((r.p_max - 6.9101).abs() / 6.9101 < 1e-4);
        let r5 = hertz_reference(0.5, 10.0, 250.0, 0.0).unwrap();
        assert!((r5.b - 0.71365).abs() < 1e-5 && (r5.p_max - 8.9206).abs() < 1e-4);
        assert_eq!(r.pressure(r.b).unwrap(), 0.0);
        assert!(r.pressure(1.1 * r.b).is_err());
        assert!((r.pressure(0.0).unwrap() - r.p_max).abs() < 1e-12);
    }

    #[test]
    fn arc_is_circular() {
        for c in half_cylinder(10.0).unwrap() {
            for k in 0..=10 {
                let (p, _) = c.curve_point(k as f64 / 10.0).unwrap();
                assert!((p[0].hypot(p[1]) - 10.0).abs() < 1e-12);
            }
        }
    }
}
