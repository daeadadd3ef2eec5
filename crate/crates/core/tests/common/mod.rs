//! Property measures shared by the property suite and the acceptance report. Each
//! returns a defect that must vanish (up to round-off) for the property to hold.

#![allow(dead_code)]

use blayer_core::bench::convergence::solve_block;
use blayer_core::bench::ConvergenceConfig;
use blayer_core::contact::{kkt_measures, ContactPair, RigidMaster};
use blayer_core::cutcell::{build_cut_cell_quadrature, full_cell_quadrature, CutCellOptions};
use blayer_core::elasticity::{element_force_stiffness, Kinematics, Material};
use blayer_core::embedded::assemble_embedded_mortar;
use blayer_core::mesh::{build_boundary_layer, cartesian_grid, ElementKind, Mesh};
use blayer_core::nurbs::{KnotVector, NurbsPatch};

pub fn quadratic(a: [f64; 2], m: [f64; 2], b: [f64; 2]) -> NurbsPatch {
    NurbsPatch::curve2(KnotVector::uniform(2, 1, 0.0, 1.0), &[a, m, b], &[1.0; 3]).unwrap()
}

/// |Σ R_i − 1| + Σ|Σ ∂R_i| for a random open NURBS curve.
pub fn partition_of_unity_defect(degree: usize, interior: &[f64], weights: &[f64], u: f64) -> f64 {
    let mut knots = vec![0.0; degree + 1];
    let mut inner = interior.to_vec();
    inner.sort_by(f64::total_cmp);
    knots.extend(inner);
    knots.extend(vec![1.0; degree + 1]);
    let kv = KnotVector::new(knots, degree).unwrap();
    let n = kv.n_basis();
    let pts: Vec<[f64; 2]> = (0..n).map(|i| [i as f64, (i * i % 3) as f64]).collect();
    let c = NurbsPatch::curve2(kv, &pts, &weights[..n]).unwrap();
    let rb = c.rational_basis(&[u]).unwrap();
    let s: f64 = rb.values.iter().sum();
    let g: f64 = rb.grads.iter().map(|g| g[0]).sum();
    assert!(rb.values.iter().all(|&v| v >= -1e-15));
    (s - 1.0).abs() + g.abs()
}

/// Layer strip over a slave curve bowed by `bump` (slave side at the bottom).
pub fn slave_strip(h: f64, bump: f64, refinement: usize, thickness: usize) -> Mesh {
    let base = quadratic([2., h], [1., h - bump], [0., h]);
    let gs = quadratic([2., h + 0.5], [1., h + 0.5], [0., h + 0.5]);
    build_boundary_layer(&[base], &[gs], thickness, 2, &[refinement]).unwrap().mesh
}

/// Residual of ∫ Ψ_q N_r = δ_qr D_qq on the slave side.
pub fn biorthogonality_defect(h: f64, bump: f64, refinement: usize) -> f64 {
    let m = slave_strip(h, bump, refinement, 1);
    let pair = ContactPair {
        edges: m.edge_set("outer").to_vec(),
        master: RigidMaster::Line { point: [0., 0.], normal: [0., 1.] },
        c_n: 1.0,
        n_gauss: 6,
        current_geometry: true,
    };
    let st = pair.assemble(&m, &vec![0.0; 2 * m.nodes.len()]).unwrap();
    assert!(st.d.iter().all(|&d| d > 0.0));
    st.biorthogonality_residual
}

/// Relative deviation of the element tangent from central differences of the internal force.
pub fn tangent_defect(kind: ElementKind, skew: f64, amp: f64, seed: u64) -> f64 {
    let mut m = if kind == ElementKind::Nurbs {
        slave_strip(0.3, 0.2, 2, 1)
    } else {
        cartesian_grid(0., 1., 0., 1., 1, 1, kind).unwrap()
    };
    for x in m.nodes.iter_mut() {
        x[0] += skew * x[1];
    }
    let qp = full_cell_quadrature(&m, 0).unwrap();
    let nd = 2 * m.elements[0].nodes.len();
    let ue: Vec<f64> = (0..nd).map(|i| amp * ((((i as u64 + 1) * (seed % 97 + 3)) % 11) as f64 / 5.0 - 1.0)).collect();
    let mat = Material::new(3.0, 0.3, Kinematics::Finite).unwrap();
    let (_, k) = element_force_stiffness(&m, 0, &qp, &ue, &mat).unwrap();
    let kmax = k.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let h = 1e-6;
    let mut worst = 0.0f64;
    for q in 0..nd {
        let (mut a, mut b) = (ue.clone(), ue.clone());
        a[q] += h;
        b[q] -= h;
        let fa = element_force_stiffness(&m, 0, &qp, &a, &mat).unwrap().0;
        let fb = element_force_stiffness(&m, 0, &qp, &b, &mat).unwrap().0;
        for p in 0..nd {
            worst = worst.max(((fa[p] - fb[p]) / (2.0 * h) - k[p * nd + q]).abs() / kmax);
        }
    }
    worst
}

/// Embedded coupling rows: max over rows of |Σ_j D*_rj − κ_r| and |Σ_j D*_rj − Σ_k M*_rk|,
/// together with |Σ_r κ_r − |Γ*||.
pub fn row_sum_defect(mid: f64, cells: usize, refinement: usize) -> f64 {
    let base = quadratic([0., 3.], [1.5, 3.], [3., 3.]);
    let gs = quadratic([0., 2.6], [1.5, mid], [3., 2.6]);
    let layer = build_boundary_layer(&[base], &[gs.clone()], 1, 2, &[refinement]).unwrap();
    let bg = cartesian_grid(0., 3., 0., 3., cells, cells, ElementKind::Quad4).unwrap();
    let opts = CutCellOptions { segments_per_span: 16, prune_threshold: 0.0, ..Default::default() };
    let q = build_cut_cell_quadrature(&bg, &[gs.clone()], &[[4., -1.], [-1., -1.]], &opts).unwrap();
    let c = assemble_embedded_mortar(&layer.mesh, &bg, layer.mesh.nodes.len(), &q.interface, 1000.0).unwrap();
    let mut worst = 0.0f64;
    for r in &c.rows {
        let sd: f64 = r.d.iter().map(|e| e.1).sum();
        let sm: f64 = r.m.iter().map(|e| e.1).sum();
        worst = worst.max((sd - r.kappa).abs()).max((sd - sm).abs());
    }
    let kappa: f64 = c.rows.iter().map(|r| r.kappa).sum();
    let length: f64 = q.interface.iter().map(|p| p.weight).sum();
    worst.max((kappa - length).abs())
}

/// |Σ material areas − area below the linearized interface| / box area for a quadratic Γ*
/// crossing the box [0,3]² at heights `y0`, `y1` with middle control height `ym`.
pub fn area_conservation_defect(y0: f64, ym: f64, y1: f64, nx: usize, ny: usize, kind: ElementKind) -> f64 {
    let bg = cartesian_grid(0., 3., 0., 3., nx, ny, kind).unwrap();
    let gs = quadratic([0., y0], [1.5, ym], [3., y1]);
    let opts = CutCellOptions { segments_per_span: 12, prune_threshold: 0.0, ..Default::default() };
    let q = build_cut_cell_quadrature(&bg, &[gs], &[[4., -1.], [-1., -1.]], &opts).unwrap();
    let v = &q.polyline.vertices;
    let exact: f64 = v.windows(2).map(|w| (w[1][0] - w[0][0]) * 0.5 * (w[0][1] + w[1][1])).sum();
    let material: f64 = q.cells.iter().map(|c| c.material_area).sum();
    (material - exact).abs() / 9.0
}

/// Discrete KKT residual of the contact block after convergence: the worst of
/// max(−g̃/D), max(−λ) and max |λ g̃/D|, scaled by the peak multiplier.
pub fn kkt_defect(load: f64, cells: usize) -> f64 {
    let cfg = ConvergenceConfig { load_coefficient: load, ..Default::default() };
    let s = solve_block(&cfg, cells, ElementKind::Quad4).unwrap();
    let st = s.solution.contact.as_ref().unwrap();
    let (min_gap, min_lambda, compl) = kkt_measures(st, &s.solution.lambda);
    let scale = s.solution.lambda.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(1e-300);
    (-min_gap).max(0.0).max((-min_lambda).max(0.0) / scale).max(compl / scale)
}
