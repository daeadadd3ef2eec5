//! Cut-cell classification, material-region quadrature and paired interface quadrature.
//!
//! The bulk region is the polygon formed by the linearized interface Γ* (material on the
//! right of travel) and closure vertices. It is ear-clipped into triangles which are
//! clipped against each convex background cell.

mod locate;
pub mod polygon;

pub use locate::CellLocator;
pub use polygon::{clip_convex, segment_polygon_crossings, triangulate_polygon};

use crate::elasticity::shape::{element_geometry, inverse_isoparametric_map, standard_rule};
use crate::error::{geometry, Result};
use crate::geom::{add, dist, norm, scale, signed_area, sub, V2};
use crate::mesh::{Aabb, Mesh};
use crate::nurbs::{normal_from_tangent, NurbsPatch};
use crate::quadrature::{gauss_on, triangle_rule};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellClass {
    Material,
    Void,
    Cut,
}

impl CellClass {
    pub fn name(self) -> &'static str {
        match self {
            CellClass::Material => "material",
            CellClass::Void => "void",
            CellClass::Cut => "cut",
        }
    }
}

/// Quadrature point in element-local coordinates with physical weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadPoint {
    pub xi: [f64; 2],
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct CellQuadrature {
    pub class: CellClass,
    pub cell_area: f64,
    pub material_area: f64,
    pub points: Vec<QuadPoint>,
    /// Material sub-triangles of cut cells.
    pub triangles: Vec<[V2; 3]>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentRef {
    pub patch: usize,
    pub t0: f64,
    pub t1: f64,
}

#[derive(Clone, Debug, Default)]
pub struct InterfacePolyline {
    pub vertices: Vec<V2>,
    /// Segment k joins vertices k and k+1.
    pub segments: Vec<SegmentRef>,
}

/// Interface Gauss point paired between Γ* and a background cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterfacePoint {
    pub patch: usize,
    pub t: f64,
    pub x: V2,
    pub cell: usize,
    pub xi: [f64; 2],
    /// Gauss weight times ‖C'(t)‖ (physical length measure).
    pub weight: f64,
    /// Unit normal of Γ* pointing into the bulk region.
    pub normal: V2,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct CutCellOptions {
    pub segments_per_span: usize,
    /// Polynomial degree of the triangle rule in cut cells.
    pub triangle_order: usize,
    pub interface_gauss: usize,
    /// Cut cells with material fraction below this are demoted to void.
    pub prune_threshold: f64,
}

impl Default for CutCellOptions {
    fn default() -> Self {
        Self { segments_per_span: 4, triangle_order: 2, interface_gauss: 3, prune_threshold: 1e-3 }
    }
}

#[derive(Clone, Debug)]
pub struct CutCellQuadrature {
    pub cells: Vec<CellQuadrature>,
    pub interface: Vec<InterfacePoint>,
    pub polyline: InterfacePolyline,
    pub pruned: Vec<usize>,
}

impl CutCellQuadrature {
    pub fn material_area(&self) -> f64 {
        self.cells.iter().map(|c| c.material_area).sum()
    }

    pub fn count(&self, class: CellClass) -> usize {
        self.cells.iter().filter(|c| c.class == class).count()
    }

    /// CSV of cell id, classification and material fraction.
    pub fn format_csv(&self) -> String {
        let mut s = String::from("cell,class,fraction\n");
        for (i, c) in self.cells.iter().enumerate() {
            let _ = writeln!(s, "{},{},{:.17e}", i, c.class.name(), c.material_area / c.cell_area);
        }
        s
    }
}

/// Uniformly sampled polyline over each knot span of the interface curves.
pub fn linearize_interface(curves: &[NurbsPatch], segments_per_span: usize) -> Result<InterfacePolyline> {
    if segments_per_span == 0 {
        return geometry("segments per span must be at least 1");
    }
    let mut pl = InterfacePolyline::default();
    for (p, c) in curves.iter().enumerate() {
        let mut ts = Vec::new();
        for (a, b) in c.knot_vector(0).spans() {
            for k in 0..segments_per_span {
                ts.push(a + (b - a) * k as f64 / segments_per_span as f64);
            }
        }
        ts.push(c.domain(0).1);
        let pts: Vec<V2> = ts.iter().map(|&t| c.curve_point(t).map(|r| r.0)).collect::<Result<_>>()?;
        let start = match pl.vertices.last() {
            Some(&last) if dist(last, pts[0]) <= 1e-12 * (1.0 + norm(last)) => 1,
            Some(_) => return geometry("interface curves are not connected"),
            None => 0,
        };
        if start == 0 {
            pl.vertices.push(pts[0]);
        }
        for k in 1..pts.len() {
            pl.vertices.push(pts[k]);
            pl.segments.push(SegmentRef { patch: p, t0: ts[k - 1], t1: ts[k] });
        }
    }
    Ok(pl)
}

/// Bulk polygon: polyline extended by `margin` along its end chords, then `closure`.
pub fn bulk_polygon(pl: &InterfacePolyline, closure: &[V2], margin: f64) -> Vec<V2> {
    let v = &pl.vertices;
    let n = v.len();
    let ext = |a: V2, b: V2| {
        let d = sub(a, b);
        add(a, scale(d, margin / norm(d)))
    };
    let mut poly = Vec::with_capacity(n + closure.len() + 2);
    if margin > 0.0 {
        poly.push(ext(v[0], v[1]));
    }
    poly.extend_from_slice(v);
    if margin > 0.0 {
        poly.push(ext(v[n - 1], v[n - 2]));
    }
    poly.extend_from_slice(closure);
    poly
}

/// Clip the bulk polygon against every background cell.
pub fn classify_and_clip(background: &Mesh, bulk: &[V2], locator: &CellLocator) -> Vec<(f64, Vec<[V2; 3]>)> {
    let tris = triangulate_polygon(bulk);
    let mut per_cell: Vec<Vec<[V2; 3]>> = vec![Vec::new(); background.elements.len()];
    let pieces: Vec<Vec<(usize, Vec<V2>)>> = tris
        .par_iter()
        .map(|t| {
            let bb = Aabb::of(t);
            locator
                .candidates(&bb)
                .into_iter()
                .filter_map(|c| {
                    let poly = clip_convex(t, &background.corner_polygon(c));
                    (poly.len() >= 3 && signed_area(&poly) > 0.0).then_some((c, poly))
                })
                .collect()
        })
        .collect();
    for list in pieces {
        for (c, poly) in list {
            for k in 1..poly.len() - 1 {
                let tri = [poly[0], poly[k], poly[k + 1]];
                if signed_area(&tri) > 0.0 {
                    per_cell[c].push(tri);
                }
            }
        }
    }
    per_cell
        .into_iter()
        .map(|ts| (ts.iter().map(|t| signed_area(t)).sum::<f64>(), ts))
        .collect()
}

/// Material-region quadrature of one background cell from its sub-triangles.
pub fn volume_quadrature(background: &Mesh, cell: usize, triangles: &[[V2; 3]], order: usize) -> Result<Vec<QuadPoint>> {
    let rule = triangle_rule(order);
    let mut out = Vec::with_capacity(triangles.len() * rule.len());
    for t in triangles {
        let a2 = 2.0 * signed_area(t);
        for &(r, w) in &rule {
            let x = add(t[0], add(scale(sub(t[1], t[0]), r[0]), scale(sub(t[2], t[0]), r[1])));
            let xi = inverse_isoparametric_map(background, cell, x)?;
            out.push(QuadPoint { xi, weight: w * a2 });
        }
    }
    Ok(out)
}

/// Standard-rule quadrature of an uncut cell.
pub fn full_cell_quadrature(mesh: &Mesh, cell: usize) -> Result<Vec<QuadPoint>> {
    standard_rule(mesh.elements[cell].kind)
        .into_iter()
        .map(|(xi, w)| {
            let g = element_geometry(mesh, cell, xi)?;
            if g.det <= 0.0 {
                return geometry(format!("non-positive Jacobian in element {cell}"));
            }
            Ok(QuadPoint { xi, weight: w * g.det })
        })
        .collect()
}

/// Demote cut cells below the volume-fraction threshold; returns the demoted ids.
pub fn prune_small_cuts(cells: &mut [CellQuadrature], threshold: f64) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, c) in cells.iter_mut().enumerate() {
        if c.class == CellClass::Cut && c.material_area < threshold * c.cell_area {
            c.class = CellClass::Void;
            c.material_area = 0.0;
            c.points.clear();
            c.triangles.clear();
            out.push(i);
        }
    }
    out
}

/// Gauss points on Γ* paired with background-cell local coordinates.
///
/// Chords are split at cell edges; each piece is assigned to the cell containing its
/// midpoint nudged towards the bulk side, and Gauss points are placed on the true curve
/// at the chord's linearly mapped parameters.
pub fn interface_quadrature_pairs(
    background: &Mesh,
    locator: &CellLocator,
    curves: &[NurbsPatch],
    pl: &InterfacePolyline,
    n_gauss: usize,
    cells: &[CellQuadrature],
) -> Result<Vec<InterfacePoint>> {
    let nudge = 1e-9 * background.aabb().diagonal();
    let per_seg: Vec<Result<Vec<InterfacePoint>>> = pl
        .segments
        .par_iter()
        .enumerate()
        .map(|(k, seg)| {
            let (a, b) = (pl.vertices[k], pl.vertices[k + 1]);
            let bb = Aabb::of(&[a, b]);
            let mut ss = vec![0.0, 1.0];
            for c in locator.candidates(&bb) {
                ss.extend(segment_polygon_crossings(a, b, &background.corner_polygon(c)));
            }
            ss.sort_by(f64::total_cmp);
            ss.dedup_by(|x, y| (*x - *y).abs() <= 1e-12);
            let chord = sub(b, a);
            let right = scale([chord[1], -chord[0]], nudge / norm(chord));
            let mut out = Vec::new();
            for w in ss.windows(2) {
                let (s0, s1) = (w[0], w[1]);
                let mid = add(a, scale(chord, 0.5 * (s0 + s1)));
                let probe = add(mid, right);
                let Some((cell, _)) = locator.locate(background, probe, 1e-10) else {
                    log::warn!("interface piece outside the background mesh near ({}, {})", mid[0], mid[1]);
                    continue;
                };
                if cells[cell].class == CellClass::Void {
                    continue;
                }
                let c = &curves[seg.patch];
                let (t0, t1) = (seg.t0 + s0 * (seg.t1 - seg.t0), seg.t0 + s1 * (seg.t1 - seg.t0));
                for (t, wt) in gauss_on(t0, t1, n_gauss) {
                    let (x, d) = c.curve_point(t)?;
                    let xi = inverse_isoparametric_map(background, cell, x)?;
                    out.push(InterfacePoint { patch: seg.patch, t, x, cell, xi, weight: wt * norm(d), normal: normal_from_tangent(d)? });
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in per_seg {
        all.extend(r?);
    }
    Ok(all)
}

/// Full pipeline: linearize Γ*, classify and clip cells, build volume and interface quadrature.
pub fn build_cut_cell_quadrature(
    background: &Mesh,
    curves: &[NurbsPatch],
    closure: &[V2],
    opts: &CutCellOptions,
) -> Result<CutCellQuadrature> {
    let pl = linearize_interface(curves, opts.segments_per_span)?;
    let locator = CellLocator::new(background);
    let margin = 0.05 * background.aabb().diagonal();
    let bulk = bulk_polygon(&pl, closure, margin);
    let clipped = classify_and_clip(background, &bulk, &locator);
    let mut cells = clipped
        .into_par_iter()
        .enumerate()
        .map(|(c, (area, tris))| {
            let cell_area = signed_area(&background.corner_polygon(c));
            let frac = area / cell_area;
            if frac >= 1.0 - 1e-12 {
                Ok(CellQuadrature { class: CellClass::Material, cell_area, material_area: cell_area, points: full_cell_quadrature(background, c)?, triangles: Vec::new() })
            } else if frac <= 1e-14 {
                Ok(CellQuadrature { class: CellClass::Void, cell_area, material_area: 0.0, points: Vec::new(), triangles: Vec::new() })
            } else {
                let points = volume_quadrature(background, c, &tris, opts.triangle_order)?;
                Ok(CellQuadrature { class: CellClass::Cut, cell_area, material_area: area, points, triangles: tris })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let pruned = prune_small_cuts(&mut cells, opts.prune_threshold);
    let interface = interface_quadrature_pairs(background, &locator, curves, &pl, opts.interface_gauss, &cells)?;
    Ok(CutCellQuadrature { cells, interface, polyline: pl, pruned })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{cartesian_grid, ElementKind};
    use crate::nurbs::KnotVector;

    fn line(a: V2, b: V2) -> NurbsPatch {
        let kv = KnotVector::uniform(2, 1, 0.0, 1.0);
        NurbsPatch::curve2(kv, &[a, crate::geom::lerp(a, b, 0.5), b], &[1.0; 3]).unwrap()
    }

    #[test]
    fn patch_test_grid_counts() {
        let bg = cartesian_grid(0., 3., 0., 3., 3, 3, ElementKind::Quad4).unwrap();
        let gs = [line([0., 2.6], [3., 2.6])];
        let m = 1.0;
        let q = build_cut_cell_quadrature(&bg, &gs, &[[3. + m, -m], [-m, -m]], &CutCellOptions::default()).unwrap();
        assert_eq!((q.count(CellClass::Material), q.count(CellClass::Cut), q.count(CellClass::Void)), (6, 3, 0));
        assert!((q.material_area() - 3.0 * 2.6).abs() < 1e-12);
        let len: f64 = q.interface.iter().map(|p| p.weight).sum();
        assert!((len - 3.0).abs() < 1e-12);
        for p in &q.interface {
            let x = element_geometry(&bg, p.cell, p.xi).unwrap().x;
            assert!(dist(x, p.x) < 1e-10);
            assert!((p.normal[1] + 1.0).abs() < 1e-12);
        }
        // Weights are physical: ∫1 over cut cells equals their material area.
        for c in &q.cells {
            let s: f64 = c.points.iter().map(|p| p.weight).sum();
            assert!((s - c.material_area).abs() < 1e-12);
        }
    }

    #[test]
    fn interface_on_grid_line_is_counted_once() {
        let bg = cartesian_grid(0., 3., 0., 3., 3, 3, ElementKind::Quad4).unwrap();
        let gs = [line([0., 2.0], [3., 2.0])];
        let q = build_cut_cell_quadrature(&bg, &gs, &[[4., -1.], [-1., -1.]], &CutCellOptions::default()).unwrap();
        assert_eq!(q.count(CellClass::Material), 6);
        assert_eq!(q.count(CellClass::Void), 3);
        let len: f64 = q.interface.iter().map(|p| p.weight).sum();
        assert!((len - 3.0).abs() < 1e-12);
        assert!(q.interface.iter().all(|p| bg.nodes[bg.elements[p.cell].nodes[0]][1] < 2.0));
    }

    #[test]
    fn diagonal_cut_integrals() {
        let bg = cartesian_grid(0., 1., 0., 1., 1, 1, ElementKind::Quad4).unwrap();
        // Γ* from (0,0) to (1,1): material on the right (below the diagonal).
        let gs = [line([0., 0.], [1., 1.])];
        let q = build_cut_cell_quadrature(&bg, &gs, &[[2., -1.]], &CutCellOptions::default()).unwrap();
        let c = &q.cells[0];
        assert_eq!(c.class, CellClass::Cut);
        assert!((c.material_area - 0.5).abs() < 1e-14);
        let ix: f64 = c.points.iter().map(|p| p.weight * element_geometry(&bg, 0, p.xi).unwrap().x[0]).sum();
        assert!((ix - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn sagitta_and_counts() {
        let kv = KnotVector::new(vec![0., 0., 0., 1., 1., 1.], 2).unwrap();
        let w = std::f64::consts::FRAC_1_SQRT_2;
        let r = 0.75;
        let arc = NurbsPatch::curve2(kv, &[[r, 0.], [r, r], [0., r]], &[1., w, 1.]).unwrap();
        for k in [1, 2, 4, 8] {
            let pl = linearize_interface(std::slice::from_ref(&arc), k).unwrap();
            assert_eq!(pl.vertices.len(), k + 1);
            // Max chord deviation at segment midpoints never exceeds the uniform-angle sagitta bound.
            let max_dev = pl.vertices.windows(2).map(|v| r - norm(scale(add(v[0], v[1]), 0.5))).fold(0.0, f64::max);
            let bound = r * (1.0 - (std::f64::consts::PI / (4.0 * k as f64)).cos());
            assert!(max_dev > 0.0 && max_dev <= bound * 1.6, "k={k} dev={max_dev} bound={bound}");
        }
    }
}
