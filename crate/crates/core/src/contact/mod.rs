//! Frictionless mortar contact of a NURBS slave boundary against a rigid master.
//!
//! Dual multiplier shapes Φ = A_e Ψ with A_e = D_e M_e⁻¹ are built per slave element in
//! the current configuration. Weighted gaps g̃_q = ∫ Φ_q g_n dA and contact forces
//! f_a = -Σ_q λ_q ∫ Φ_q Ψ_a n dA are linearized by forward-mode dual numbers.

use crate::dual::Dual;
use crate::elasticity::loads::edge_gauss_points;
use crate::error::{geometry, Result};
use crate::geom::{dot, sub, V2};
use crate::mesh::{EdgeRef, Mesh};
use crate::nurbs::NurbsPatch;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub enum RigidMaster {
    /// Half-plane boundary through `point` with unit outward normal `normal`.
    Line { point: V2, normal: V2 },
    /// Fixed planar NURBS curve.
    Curve(NurbsPatch),
}

#[derive(Clone, Debug)]
pub struct ContactPair {
    /// Slave edges of the layer mesh (edges traversed counter-clockwise).
    pub edges: Vec<EdgeRef>,
    pub master: RigidMaster,
    /// Regularization constant of the complementarity function.
    pub c_n: f64,
    pub n_gauss: usize,
    /// Evaluate normals and Jacobians on the deformed slave (false: reference geometry).
    pub current_geometry: bool,
}

/// Linearized contact quantities at the current displacement state.
#[derive(Clone, Debug, Default)]
pub struct ContactState {
    /// Slave node ids (mesh numbering), one multiplier each.
    pub nodes: Vec<usize>,
    /// Reference anchor of each multiplier: slave curve point at the node's Greville parameter.
    pub anchors: Vec<V2>,
    /// Diagonal mortar entries D_qq = ∫ Ψ_q dA.
    pub d: Vec<f64>,
    pub gap: Vec<f64>,
    /// ∂g̃_q/∂u over mesh dofs.
    pub gap_lin: Vec<Vec<(usize, f64)>>,
    /// F_q over mesh dofs: ∫ Φ_q Ψ_a n dA (residual adds Σ λ_q F_q).
    pub force: Vec<Vec<(usize, f64)>>,
    /// ∂F_q/∂u triplets (row dof, col dof, value) per multiplier.
    pub force_lin: Vec<Vec<(usize, usize, f64)>>,
    pub dropped_points: usize,
    pub biorthogonality_residual: f64,
}

fn vec_dual(c: [f64; 2], n: usize) -> [Dual; 2] {
    [Dual::constant(c[0], n), Dual::constant(c[1], n)]
}

/// Closest point on a NURBS curve: Newton on (C - x)·C' = 0 with a sampled start.
fn project_on_curve(c: &NurbsPatch, x: V2) -> Option<f64> {
    let (a, b) = c.domain(0);
    let mut best = (f64::INFINITY, a);
    for (s0, s1) in c.knot_vector(0).spans() {
        for k in 0..=16 {
            let t = s0 + (s1 - s0) * k as f64 / 16.0;
            if let Ok((p, _)) = c.curve_point(t) {
                let d = crate::geom::dist(p, x);
                if d < best.0 {
                    best = (d, t);
                }
            }
        }
    }
    let mut t = best.1;
    for _ in 0..50 {
        let [p, d1, d2] = c.curve_derivs2(t).ok()?;
        let r = dot(sub(p, x), d1);
        let dr = dot(d1, d1) + dot(sub(p, x), d2);
        let step = r / dr;
        let tn = (t - step).clamp(a, b);
        let done = (tn - t).abs() <= 1e-14 * (b - a);
        t = tn;
        if done {
            break;
        }
    }
    let [p, d1, _] = c.curve_derivs2(t).ok()?;
    let orth = dot(sub(p, x), d1).abs() <= 1e-9 * crate::geom::norm(d1) * (1.0 + crate::geom::dist(p, x));
    orth.then_some(t)
}

/// Signed normal gap g_n = -n·(x - x̂) with x dual.
fn gap_dual(master: &RigidMaster, x: &[Dual; 2], n: &[Dual; 2]) -> Option<Dual> {
    let nd = x[0].n();
    let diff = match master {
        RigidMaster::Line { point, normal } => {
            let dist = (&x[0] - &Dual::constant(point[0], nd)).scale(normal[0]) + (&x[1] - &Dual::constant(point[1], nd)).scale(normal[1]);
            [dist.scale(normal[0]), dist.scale(normal[1])]
        }
        RigidMaster::Curve(c) => {
            let t = project_on_curve(c, [x[0].re, x[1].re])?;
            let [p, d1, d2] = c.curve_derivs2(t).ok()?;
            // One Newton step in dual arithmetic carries dt/dx.
            let pm = [&vec_dual(p, nd)[0] - &x[0], &vec_dual(p, nd)[1] - &x[1]];
            let r = &pm[0].scale(d1[0]) + &pm[1].scale(d1[1]);
            let dr = (&pm[0].scale(d2[0]) + &pm[1].scale(d2[1])).add_f(dot(d1, d1));
            let dt = -(&r / &dr);
            let xh = [&dt.scale(d1[0]).add_f(p[0]), &dt.scale(d1[1]).add_f(p[1])];
            [&x[0] - xh[0], &x[1] - xh[1]]
        }
    };
    Some(-(&(&n[0] * &diff[0]) + &(&n[1] * &diff[1])))
}

/// Solve A M = D (A = D M⁻¹, M symmetric) in dual arithmetic by Gauss–Jordan.
fn dual_coefficients(m: &[Vec<Dual>], dvec: &[Dual]) -> Result<Vec<Vec<Dual>>> {
    let k = dvec.len();
    let nd = dvec[0].n();
    // Augmented [M | I] -> [I | M⁻¹].
    let mut a: Vec<Vec<Dual>> = (0..k)
        .map(|i| {
            let mut row = m[i].clone();
            row.extend((0..k).map(|j| Dual::constant(if i == j { 1.0 } else { 0.0 }, nd)));
            row
        })
        .collect();
    let scale = m.iter().flatten().map(|v| v.re.abs()).fold(0.0, f64::max);
    for c in 0..k {
        let p = (c..k).max_by(|&x, &y| a[x][c].re.abs().total_cmp(&a[y][c].re.abs())).unwrap();
        if a[p][c].re.abs() <= 1e-14 * scale {
            return geometry("singular slave mass matrix");
        }
        a.swap(c, p);
        let piv = a[c][c].clone();
        for j in 0..2 * k {
            a[c][j] = &a[c][j] / &piv;
        }
        for i in 0..k {
            if i != c {
                let f = a[i][c].clone();
                for j in 0..2 * k {
                    let t = &f * &a[c][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
    }
    Ok((0..k).map(|q| (0..k).map(|b| &dvec[q] * &a[q][k + b]).collect()).collect())
}

impl ContactPair {
    /// Assemble D, g̃ and force operators with their linearizations for displacement `u`
    /// (2 per mesh node of `slave_mesh`).
    pub fn assemble(&self, slave_mesh: &Mesh, u: &[f64]) -> Result<ContactState> {
        let mut st = ContactState::default();
        let mut qmap: BTreeMap<usize, usize> = BTreeMap::new();
        let mut gap_lin: Vec<BTreeMap<usize, f64>> = Vec::new();
        let mut force: Vec<BTreeMap<usize, f64>> = Vec::new();
        for &edge in &self.edges {
            let gps = edge_gauss_points(slave_mesh, &[edge], self.n_gauss)?;
            let e = edge.0;
            let enodes = &slave_mesh.elements[e].nodes;
            let trace: Vec<usize> = (0..enodes.len()).filter(|&a| gps.iter().any(|g| g.values[a].abs() > 1e-14)).collect();
            let k = trace.len();
            let nd = 2 * k;
            let qs: Vec<usize> = trace
                .iter()
                .map(|&a| {
                    let node = enodes[a];
                    let next = qmap.len();
                    let q = *qmap.entry(node).or_insert(next);
                    if q == next {
                        st.nodes.push(node);
                        st.anchors.push(anchor(slave_mesh, e, a).unwrap_or(slave_mesh.nodes[node]));
                        st.d.push(0.0);
                        st.gap.push(0.0);
                        gap_lin.push(BTreeMap::new());
                        force.push(BTreeMap::new());
                        st.force_lin.push(Vec::new());
                    }
                    q
                })
                .collect();
            let dofs: Vec<usize> = trace.iter().flat_map(|&a| [2 * enodes[a], 2 * enodes[a] + 1]).collect();
            let xcur: Vec<[Dual; 2]> = trace
                .iter()
                .enumerate()
                .map(|(i, &a)| {
                    let n = enodes[a];
                    let x = slave_mesh.nodes[n];
                    [Dual::variable(x[0] + u[2 * n], nd, 2 * i), Dual::variable(x[1] + u[2 * n + 1], nd, 2 * i + 1)]
                })
                .collect();
            // Geometry per Gauss point.
            struct Gp {
                psi: Vec<f64>,
                x: [Dual; 2],
                n: [Dual; 2],
                jw: Dual,
            }
            let mut pts = Vec::with_capacity(gps.len());
            for g in &gps {
                let psi: Vec<f64> = trace.iter().map(|&a| g.values[a]).collect();
                let dps: Vec<f64> = trace.iter().map(|&a| g.ds[a]).collect();
                let mut x = vec_dual([0.0; 2], nd);
                let mut xs = vec_dual([0.0; 2], nd);
                for i in 0..k {
                    for c in 0..2 {
                        x[c] = &x[c] + &xcur[i][c].scale(psi[i]);
                        let coord = if self.current_geometry { xcur[i][c].clone() } else { Dual::constant(slave_mesh.nodes[enodes[trace[i]]][c], nd) };
                        xs[c] = &xs[c] + &coord.scale(dps[i]);
                    }
                }
                let j = (&(&xs[0] * &xs[0]) + &(&xs[1] * &xs[1])).sqrt();
                let n = [&xs[1] / &j, -(&xs[0] / &j)];
                pts.push(Gp { psi, x, n, jw: j.scale(g.weight) });
            }
            let mut me = vec![vec![Dual::constant(0.0, nd); k]; k];
            let mut de = vec![Dual::constant(0.0, nd); k];
            for p in &pts {
                for a in 0..k {
                    de[a] = &de[a] + &p.jw.scale(p.psi[a]);
                    for b in 0..k {
                        me[a][b] = &me[a][b] + &p.jw.scale(p.psi[a] * p.psi[b]);
                    }
                }
            }
            let ae = dual_coefficients(&me, &de)?;
            let mut gq = vec![Dual::constant(0.0, nd); k];
            let mut fq = vec![vec![[Dual::constant(0.0, nd), Dual::constant(0.0, nd)]; k]; k];
            let mut bio = vec![vec![0.0; k]; k];
            for p in &pts {
                let phi: Vec<Dual> = (0..k)
                    .map(|q| (0..k).fold(Dual::constant(0.0, nd), |acc, a| &acc + &ae[q][a].scale(p.psi[a])))
                    .collect();
                let gn = gap_dual(&self.master, &p.x, &p.n);
                if gn.is_none() {
                    st.dropped_points += 1;
                }
                for q in 0..k {
                    let pj = &phi[q] * &p.jw;
                    if let Some(g) = &gn {
                        gq[q] = &gq[q] + &(&pj * g);
                    }
                    for a in 0..k {
                        bio[q][a] += phi[q].re * p.psi[a] * p.jw.re;
                        let w = pj.scale(p.psi[a]);
                        fq[q][a][0] = &fq[q][a][0] + &(&w * &p.n[0]);
                        fq[q][a][1] = &fq[q][a][1] + &(&w * &p.n[1]);
                    }
                }
            }
            for q in 0..k {
                for a in 0..k {
                    let target = if q == a { de[a].re } else { 0.0 };
                    st.biorthogonality_residual = st.biorthogonality_residual.max((bio[q][a] - target).abs());
                }
            }
            for (i, &q) in qs.iter().enumerate() {
                st.d[q] += de[i].re;
                st.gap[q] += gq[i].re;
                for (c, &dof) in dofs.iter().enumerate() {
                    *gap_lin[q].entry(dof).or_default() += gq[i].eps[c];
                }
                for a in 0..k {
                    for comp in 0..2 {
                        let row = dofs[2 * a + comp];
                        let v = &fq[i][a][comp];
                        *force[q].entry(row).or_default() += v.re;
                        for (c, &dof) in dofs.iter().enumerate() {
                            if v.eps[c] != 0.0 {
                                st.force_lin[q].push((row, dof, v.eps[c]));
                            }
                        }
                    }
                }
            }
        }
        st.gap_lin = gap_lin.into_iter().map(|m| m.into_iter().collect()).collect();
        st.force = force.into_iter().map(|m| m.into_iter().collect()).collect();
        Ok(st)
    }
}

/// Slave boundary point at the Greville parameter of local node `a` of element `e`.
fn anchor(mesh: &Mesh, e: usize, a: usize) -> Option<V2> {
    let cell = mesh.elements[e].nurbs.as_ref()?;
    let patch = &mesh.patches[cell.patch];
    let node = mesh.elements[e].nodes[a];
    let idx = mesh.patch_nodes[cell.patch].iter().position(|&n| n == node)?;
    let nu = patch.counts()[0];
    let g = patch.knot_vector(0).greville()[idx % nu];
    let v = patch.domain(1).1;
    let p = patch.eval_point(&[g, v]).ok()?;
    Some([p[0], p[1]])
}

/// Primal-dual active-set test λ_q - c_n g̃_q / D_qq > 0 (gap normalized to length).
pub fn active_set_update(gap: &[f64], d: &[f64], lambda: &[f64], c_n: f64) -> Vec<bool> {
    gap.iter().zip(d).zip(lambda).map(|((&g, &dq), &l)| l - c_n * g / dq > 0.0).collect()
}

/// Discrete KKT measures: (min normalized gap, min λ, max |λ · normalized gap|).
pub fn kkt_measures(st: &ContactState, lambda: &[f64]) -> (f64, f64, f64) {
    let mut out = (f64::INFINITY, f64::INFINITY, 0.0f64);
    for q in 0..st.gap.len() {
        let g = st.gap[q] / st.d[q];
        out.0 = out.0.min(g);
        out.1 = out.1.min(lambda[q]);
        out.2 = out.2.max((lambda[q] * g).abs());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_boundary_layer;
    use crate::nurbs::KnotVector;

    fn strip(h: f64) -> Mesh {
        // Layer along y ∈ [h, h + 0.5], slave = bottom outer edge at y = h.
        let kv = KnotVector::uniform(2, 1, 0.0, 1.0);
        let base = NurbsPatch::curve2(kv.clone(), &[[2., h], [1., h], [0., h]], &[1.0; 3]).unwrap();
        let gs = NurbsPatch::curve2(kv, &[[2., h + 0.5], [1., h + 0.5], [0., h + 0.5]], &[1.0; 3]).unwrap();
        build_boundary_layer(&[base], &[gs], 1, 2, &[4]).unwrap().mesh
    }

    fn pair(m: &Mesh, master: RigidMaster, current: bool) -> ContactPair {
        ContactPair { edges: m.edge_set("outer").to_vec(), master, c_n: 10.0, n_gauss: 6, current_geometry: current }
    }

    #[test]
    fn dual_linear_element() {
        // Linear trace on [0,1]: Φ1 = 2N1 - N2.
        let n = 1;
        let m = vec![vec![Dual::constant(1.0 / 3.0, n), Dual::constant(1.0 / 6.0, n)], vec![Dual::constant(1.0 / 6.0, n), Dual::constant(1.0 / 3.0, n)]];
        let d = vec![Dual::constant(0.5, n), Dual::constant(0.5, n)];
        let a = dual_coefficients(&m, &d).unwrap();
        assert!((a[0][0].re - 2.0).abs() < 1e-14 && (a[0][1].re + 1.0).abs() < 1e-14);
    }

    #[test]
    fn flat_gaps_and_dual_properties() {
        let m = strip(0.25);
        let plane = RigidMaster::Line { point: [0., 0.], normal: [0., 1.] };
        let u = vec![0.0; 2 * m.nodes.len()];
        let st = pair(&m, plane.clone(), true).assemble(&m, &u).unwrap();
        assert!(st.biorthogonality_residual < 1e-12);
        assert_eq!(st.nodes.len(), 6);
        let total: f64 = st.d.iter().sum();
        assert!((total - 2.0).abs() < 1e-12);
        for q in 0..st.d.len() {
            assert!(st.d[q] > 0.0);
            assert!((st.gap[q] - 0.25 * st.d[q]).abs() < 1e-12);
            // Forces act along the slave normal (0, -1) only.
            for &(dof, v) in &st.force[q] {
                if dof % 2 == 0 {
                    assert!(v.abs() < 1e-14);
                }
            }
        }
        let touching = strip(0.0);
        let st = pair(&touching, plane, true).assemble(&touching, &u).unwrap();
        assert!(st.gap.iter().all(|g| g.abs() < 1e-14));
        // Rigid NURBS master coincident with the plane.
        let kv = KnotVector::uniform(2, 2, 0.0, 1.0);
        let c = NurbsPatch::curve2(kv, &[[-1., 0.], [0., 0.], [2., 0.], [3., 0.]], &[1.0; 4]).unwrap();
        let st2 = pair(&m, RigidMaster::Curve(c), true).assemble(&m, &u).unwrap();
        for q in 0..st2.gap.len() {
            assert!((st2.gap[q] - 0.25 * st2.d[q]).abs() < 1e-12);
        }
    }

    #[test]
    fn linearization_matches_finite_differences() {
        let m = strip(0.1);
        let kv = KnotVector::uniform(2, 1, 0.0, 1.0);
        let curved = NurbsPatch::curve2(kv, &[[-1., 0.2], [1., -0.3], [3., 0.1]], &[1.0, 0.8, 1.0]).unwrap();
        for master in [RigidMaster::Line { point: [0., 0.], normal: [0.1f64.sin(), 0.1f64.cos()] }, RigidMaster::Curve(curved)] {
            let cp = pair(&m, master, true);
            let u: Vec<f64> = (0..2 * m.nodes.len()).map(|i| 0.01 * ((i * 5 % 7) as f64 - 3.0)).collect();
            let st = cp.assemble(&m, &u).unwrap();
            let h = 1e-7;
            for dof in [0usize, 1, 5, 8, 13] {
                let (mut a, mut b) = (u.clone(), u.clone());
                a[dof] += h;
                b[dof] -= h;
                let (sa, sb) = (cp.assemble(&m, &a).unwrap(), cp.assemble(&m, &b).unwrap());
                for q in 0..st.gap.len() {
                    let fd = (sa.gap[q] - sb.gap[q]) / (2.0 * h);
                    let an: f64 = st.gap_lin[q].iter().filter(|e| e.0 == dof).map(|e| e.1).sum();
                    assert!((fd - an).abs() < 1e-6, "gap q={q} dof={dof} fd={fd} an={an}");
                    for &(row, fa) in &sa.force[q] {
                        let fb = sb.force[q].iter().find(|e| e.0 == row).map(|e| e.1).unwrap_or(0.0);
                        let fd = (fa - fb) / (2.0 * h);
                        let an: f64 = st.force_lin[q].iter().filter(|e| e.0 == row && e.1 == dof).map(|e| e.2).sum();
                        assert!((fd - an).abs() < 1e-6, "force q={q} row={row} dof={dof}");
                    }
                }
            }
        }
    }

    #[test]
    fn active_set_rule() {
        let d = [1.0; 3];
        let act = active_set_update(&[0.1, -0.1, 0.0], &d, &[0.0, 0.0, 1.0], 1.0);
        assert_eq!(act, vec![false, true, true]);
        assert_eq!(active_set_update(&[0.0], &[1.0], &[0.0], 1.0), vec![false]);
    }
}
