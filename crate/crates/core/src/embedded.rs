//! Embedded-mesh mortar coupling between the layer interface Γ* and background cells.
//!
//! D*[r,c] = ∫ Ψ_r Ψ_c, M*[r,d] = ∫ Ψ_r (N_d ∘ χ), κ_r = ∫ Ψ_r, with Ψ the layer basis
//! traced on Γ* and N the background basis at the paired cell point. The multiplier is
//! condensed by penalty: λ*_r = ε / κ_r · g*_r with g* = D* d_I − M* d_C.

use crate::cutcell::InterfacePoint;
use crate::elasticity::shape::element_shape;
use crate::error::{geometry, Result};
use crate::mesh::{ElementKind, Mesh};
use std::collections::BTreeMap;
use std::fmt::Write;

/// One multiplier row: coefficients over system nodes (layer nodes first, background
/// nodes shifted by `background_offset`).
#[derive(Clone, Debug, Default)]
pub struct MortarRow {
    /// Layer node carrying the multiplier.
    pub node: usize,
    pub kappa: f64,
    /// D* entries over layer nodes (system ids).
    pub d: Vec<(usize, f64)>,
    /// M* entries over background nodes (system ids).
    pub m: Vec<(usize, f64)>,
}

#[derive(Clone, Debug)]
pub struct EmbeddedCoupling {
    pub rows: Vec<MortarRow>,
    pub epsilon: f64,
    pub deactivated: Vec<usize>,
}

/// Layer element and local coordinates of the Γ* point with parameter t on patch p.
pub fn layer_point(layer: &Mesh, patch: usize, t: f64) -> Result<(usize, [f64; 2])> {
    let mut best: Option<(usize, [f64; 2])> = None;
    for (e, el) in layer.elements.iter().enumerate() {
        let Some(c) = &el.nurbs else { continue };
        if c.patch != patch || c.bounds[1].0 != layer.patches[patch].domain(1).0 {
            continue;
        }
        let (a, b) = c.bounds[0];
        if t >= a - 1e-12 && t <= b + 1e-12 {
            let xi = (2.0 * (t - a) / (b - a) - 1.0).clamp(-1.0, 1.0);
            best = Some((e, [xi, -1.0]));
            if t < b {
                break;
            }
        }
    }
    best.ok_or_else(|| crate::Error::Geometry(format!("no layer element at t = {t} on patch {patch}")))
}

/// Assemble D*, M*, κ from paired interface quadrature.
pub fn assemble_embedded_mortar(
    layer: &Mesh,
    background: &Mesh,
    background_offset: usize,
    points: &[InterfacePoint],
    epsilon: f64,
) -> Result<EmbeddedCoupling> {
    if !(epsilon > 0.0) {
        return geometry("penalty parameter must be positive");
    }
    let mut rows: BTreeMap<usize, (f64, BTreeMap<usize, f64>, BTreeMap<usize, f64>)> = BTreeMap::new();
    for ip in points {
        let (le, xi) = layer_point(layer, ip.patch, ip.t)?;
        let ls = element_shape(layer, le, xi)?;
        let bs = element_shape(background, ip.cell, ip.xi)?;
        let lnodes = &layer.elements[le].nodes;
        let bnodes = &background.elements[ip.cell].nodes;
        for (r, &nr) in lnodes.iter().enumerate() {
            let pr = ls.values[r];
            if pr.abs() < 1e-15 {
                continue;
            }
            let row = rows.entry(nr).or_default();
            row.0 += pr * ip.weight;
            for (c, &nc) in lnodes.iter().enumerate() {
                if ls.values[c] != 0.0 {
                    *row.1.entry(nc).or_default() += pr * ls.values[c] * ip.weight;
                }
            }
            for (d, &nd) in bnodes.iter().enumerate() {
                if bs.values[d] != 0.0 {
                    *row.2.entry(nd + background_offset).or_default() += pr * bs.values[d] * ip.weight;
                }
            }
        }
    }
    let kmax = rows.values().map(|r| r.0).fold(0.0, f64::max);
    let mut out = EmbeddedCoupling { rows: Vec::new(), epsilon, deactivated: Vec::new() };
    for (node, (kappa, d, m)) in rows {
        if kappa <= 1e-12 * kmax {
            log::warn!("multiplier at layer node {node} has no support; deactivated");
            out.deactivated.push(node);
            continue;
        }
        out.rows.push(MortarRow { node, kappa, d: d.into_iter().collect(), m: m.into_iter().collect() });
    }
    Ok(out)
}

impl EmbeddedCoupling {
    /// Constraint g*_r (two components) for system displacement vector `u` (2 per node).
    pub fn constraint(&self, u: &[f64]) -> Vec<[f64; 2]> {
        self.rows
            .iter()
            .map(|r| {
                let mut g = [0.0; 2];
                for &(n, v) in &r.d {
                    g[0] += v * u[2 * n];
                    g[1] += v * u[2 * n + 1];
                }
                for &(n, v) in &r.m {
                    g[0] -= v * u[2 * n];
                    g[1] -= v * u[2 * n + 1];
                }
                g
            })
            .collect()
    }

    /// Recovered multipliers λ*_r = ε g*_r / κ_r.
    pub fn multipliers(&self, u: &[f64]) -> Vec<[f64; 2]> {
        self.constraint(u)
            .into_iter()
            .zip(&self.rows)
            .map(|(g, r)| [self.epsilon * g[0] / r.kappa, self.epsilon * g[1] / r.kappa])
            .collect()
    }

    /// Coupling force f* (added to the residual) and constant stiffness triplets.
    pub fn force_stiffness(&self, u: &[f64]) -> (Vec<f64>, Vec<(usize, usize, f64)>) {
        let mut f = vec![0.0; u.len()];
        let mut k = Vec::new();
        let lam = self.multipliers(u);
        for (r, l) in self.rows.iter().zip(&lam) {
            let coef: Vec<(usize, f64)> = r.d.iter().copied().chain(r.m.iter().map(|&(n, v)| (n, -v))).collect();
            let s = self.epsilon / r.kappa;
            for &(a, ca) in &coef {
                f[2 * a] += ca * l[0];
                f[2 * a + 1] += ca * l[1];
                for &(b, cb) in &coef {
                    let v = s * ca * cb;
                    k.push((2 * a, 2 * b, v));
                    k.push((2 * a + 1, 2 * b + 1, v));
                }
            }
        }
        (f, k)
    }

    /// Per-multiplier CSV: node, position, κ, D/M row sums, λ* components.
    pub fn format_csv(&self, layer: &Mesh, u: &[f64]) -> String {
        let lam = self.multipliers(u);
        let mut s = String::from("node,x,y,kappa,row_sum_d,row_sum_m,lambda_x,lambda_y\n");
        for (r, l) in self.rows.iter().zip(&lam) {
            let x = layer.nodes[r.node];
            let sd: f64 = r.d.iter().map(|e| e.1).sum();
            let sm: f64 = r.m.iter().map(|e| e.1).sum();
            let _ = writeln!(
                s,
                "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                r.node, x[0], x[1], r.kappa, sd, sm, l[0], l[1]
            );
        }
        s
    }
}

/// Layer element kinds are NURBS; anything else is a caller error.
pub fn check_layer(layer: &Mesh) -> Result<()> {
    if layer.elements.iter().any(|e| e.kind != ElementKind::Nurbs) {
        return geometry("layer mesh must consist of NURBS elements");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutcell::{build_cut_cell_quadrature, CutCellOptions};
    use crate::mesh::{build_boundary_layer, cartesian_grid};
    use crate::nurbs::{KnotVector, NurbsPatch};

    fn setup(curved: bool) -> (Mesh, Mesh, EmbeddedCoupling) {
        let kv = KnotVector::uniform(2, 1, 0.0, 1.0);
        let base = NurbsPatch::curve2(kv.clone(), &[[0., 3.], [1.5, 3.], [3., 3.]], &[1.0; 3]).unwrap();
        let mid = if curved { 2.2 } else { 2.6 };
        let gs = NurbsPatch::curve2(kv, &[[0., 2.6], [1.5, mid], [3., 2.6]], &[1.0; 3]).unwrap();
        let layer = build_boundary_layer(&[base], &[gs.clone()], 1, 2, &[3]).unwrap();
        let bg = cartesian_grid(0., 3., 0., 3., 4, 4, ElementKind::Quad4).unwrap();
        let q = build_cut_cell_quadrature(&bg, &[gs], &[[4., -1.], [-1., -1.]], &CutCellOptions { segments_per_span: 16, ..Default::default() }).unwrap();
        let off = layer.mesh.nodes.len();
        let c = assemble_embedded_mortar(&layer.mesh, &bg, off, &q.interface, 1000.0).unwrap();
        (layer.mesh, bg, c)
    }

    #[test]
    fn row_sums_and_kappa() {
        let (_, _, c) = setup(false);
        let total: f64 = c.rows.iter().map(|r| r.kappa).sum();
        assert!((total - 3.0).abs() < 1e-12);
        for r in &c.rows {
            let sd: f64 = r.d.iter().map(|e| e.1).sum();
            let sm: f64 = r.m.iter().map(|e| e.1).sum();
            assert!((sd - r.kappa).abs() < 1e-12);
            assert!((sd - sm).abs() < 1e-10);
        }
    }

    #[test]
    fn affine_fields_and_jumps() {
        for curved in [false, true] {
            let (layer, bg, c) = setup(curved);
            let n = layer.nodes.len() + bg.nodes.len();
            let pos = |i: usize| if i < layer.nodes.len() { layer.nodes[i] } else { bg.nodes[i - layer.nodes.len()] };
            let u: Vec<f64> = (0..n).flat_map(|i| {
                let x = pos(i);
                [0.1 + 0.02 * x[0] - 0.03 * x[1], -0.2 + 0.01 * x[0] + 0.05 * x[1]]
            }).collect();
            let g = c.constraint(&u);
            assert!(g.iter().all(|v| v[0].abs() < 1e-12 && v[1].abs() < 1e-12));
            let (f, _) = c.force_stiffness(&u);
            assert!(f.iter().all(|v| v.abs() < 1e-8));
            // Constant jump δ on the layer side gives λ* = ε δ.
            let mut uj = vec![0.0; 2 * n];
            for i in 0..layer.nodes.len() {
                uj[2 * i + 1] = 1e-3;
            }
            for l in c.multipliers(&uj) {
                assert!((l[1] - 1.0).abs() < 1e-10 && l[0].abs() < 1e-10);
            }
            let (_, k) = c.force_stiffness(&uj);
            let mut kd = BTreeMap::new();
            for (a, b, v) in k {
                *kd.entry((a, b)).or_insert(0.0) += v;
            }
            for (&(a, b), v) in &kd {
                assert!((v - kd.get(&(b, a)).copied().unwrap_or(0.0)).abs() < 1e-12 * 1e3);
            }
        }
    }
}
