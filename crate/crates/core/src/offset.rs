//! Offsets of NURBS curves and surfaces that keep degrees, knots and weights.
//!
//! Curves must be planar; the offset side is given by n = (y', -x') / |C'|.
//! Surfaces must live in R^3; the offset side is S_u x S_v / |S_u x S_v|
//! (flip with `OffsetRequest::flip_normal`).

use crate::error::{geometry, Error, Result};
use crate::geom::V2;
use crate::nurbs::{normal_from_tangent, NurbsPatch};
use crate::quadrature::gauss_on;
use nalgebra::{DMatrix, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OffsetMethod {
    PolygonTranslation,
    Interpolation,
    Optimization,
}

impl OffsetMethod {
    pub const ALL: [OffsetMethod; 3] =
        [OffsetMethod::PolygonTranslation, OffsetMethod::Interpolation, OffsetMethod::Optimization];

    pub fn name(self) -> &'static str {
        match self {
            OffsetMethod::PolygonTranslation => "polygon-translation",
            OffsetMethod::Interpolation => "interpolation",
            OffsetMethod::Optimization => "optimization",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSettings {
    /// Uniform sampling points per parametric direction.
    pub samples: usize,
    /// Initial step; `None` uses 1 / lambda_max of the sampled normal matrix.
    pub step: Option<f64>,
    pub max_iterations: usize,
    /// Stop once |grad| <= tol * |grad_0|.
    pub gradient_tolerance: f64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self { samples: 100, step: None, max_iterations: 2000, gradient_tolerance: 1e-10 }
    }
}

#[derive(Clone, Debug)]
pub struct OffsetRequest {
    pub distance: f64,
    pub method: OffsetMethod,
    pub optimizer: OptimizerSettings,
    pub flip_normal: bool,
    /// Replace the offset direction at the curve start / end (multi-patch kinks).
    pub end_normals: [Option<V2>; 2],
}

impl OffsetRequest {
    pub fn new(distance: f64, method: OffsetMethod) -> Self {
        Self {
            distance,
            method,
            optimizer: OptimizerSettings::default(),
            flip_normal: false,
            end_normals: [None, None],
        }
    }
}

#[derive(Clone, Debug)]
pub struct OffsetResult {
    pub offset: NurbsPatch,
    pub iterations: usize,
    pub initial_energy: f64,
    pub energy: f64,
    /// Number of parallel-segment or ill-conditioned plane fallbacks used.
    pub fallbacks: usize,
    pub converged: bool,
}

/// Exact offset point and its base point at `params`.
pub fn exact_offset_point(base: &NurbsPatch, params: &[f64], ell: f64, flip: bool) -> Result<Vec<f64>> {
    let (x, dx) = base.eval(params)?;
    let n = base_normal(base.pdim(), base.dim(), &dx, flip)?;
    Ok(x.iter().zip(&n).map(|(a, b)| a + ell * b).collect())
}

fn base_normal(pdim: usize, dim: usize, dx: &[Vec<f64>], flip: bool) -> Result<Vec<f64>> {
    let s = if flip { -1.0 } else { 1.0 };
    match (pdim, dim) {
        (1, 2) => {
            let n = normal_from_tangent([dx[0][0], dx[0][1]])?;
            Ok(vec![s * n[0], s * n[1]])
        }
        (2, 3) => {
            let a = Vector3::new(dx[0][0], dx[0][1], dx[0][2]);
            let b = Vector3::new(dx[1][0], dx[1][1], dx[1][2]);
            let c = a.cross(&b);
            let l = c.norm();
            if !(l > 1e-14) {
                return geometry("degenerate surface normal");
            }
            Ok(vec![s * c[0] / l, s * c[1] / l, s * c[2] / l])
        }
        _ => geometry("offsets are defined for planar curves and surfaces in R^3"),
    }
}

fn validate(base: &NurbsPatch, req: &OffsetRequest) -> Result<()> {
    if !(req.distance > 0.0) {
        return Err(Error::Config("offset distance must be positive".into()));
    }
    if base.pdim() == 1 {
        let r = base.min_radius_of_curvature(200)?;
        if req.distance >= r {
            return geometry(format!(
                "offset distance {} not below minimum radius of curvature {r}",
                req.distance
            ));
        }
    }
    Ok(())
}

pub fn offset(base: &NurbsPatch, req: &OffsetRequest) -> Result<OffsetResult> {
    validate(base, req)?;
    match req.method {
        OffsetMethod::PolygonTranslation => polygon_translation(base, req),
        OffsetMethod::Interpolation => interpolation(base, req),
        OffsetMethod::Optimization => optimization(base, req),
    }
}

fn finish(offset: NurbsPatch, fallbacks: usize) -> OffsetResult {
    OffsetResult { offset, iterations: 0, initial_energy: 0.0, energy: 0.0, fallbacks, converged: true }
}

fn polygon_translation(base: &NurbsPatch, req: &OffsetRequest) -> Result<OffsetResult> {
    match (base.pdim(), base.dim()) {
        (1, 2) => polygon_translation_curve(base, req),
        (2, 3) => polygon_translation_surface(base, req),
        _ => geometry("polygon translation needs a planar curve or a surface in R^3"),
    }
}

fn polygon_translation_curve(base: &NurbsPatch, req: &OffsetRequest) -> Result<OffsetResult> {
    let ell = req.distance;
    let s = if req.flip_normal { -1.0 } else { 1.0 };
    let n = base.n_points();
    let p: Vec<V2> = (0..n).map(|i| [base.point(i)[0], base.point(i)[1]]).collect();
    let mut seg_n = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let d = crate::geom::sub(p[i + 1], p[i]);
        if crate::geom::norm(d) < 1e-14 {
            return geometry(format!("coincident control points {i} and {}", i + 1));
        }
        let m = normal_from_tangent(d)?;
        seg_n.push([s * m[0], s * m[1]]);
    }
    let mut out = Vec::with_capacity(2 * n);
    let mut fallbacks = 0;
    let start_dir = req.end_normals[0].unwrap_or(seg_n[0]);
    out.extend_from_slice(&crate::geom::add(p[0], crate::geom::scale(start_dir, ell)));
    for k in 1..n - 1 {
        let a0 = crate::geom::add(p[k - 1], crate::geom::scale(seg_n[k - 1], ell));
        let a1 = crate::geom::add(p[k], crate::geom::scale(seg_n[k - 1], ell));
        let b0 = crate::geom::add(p[k], crate::geom::scale(seg_n[k], ell));
        let b1 = crate::geom::add(p[k + 1], crate::geom::scale(seg_n[k], ell));
        let q = match crate::geom::line_intersection(a0, crate::geom::sub(a1, a0), b0, crate::geom::sub(b1, b0)) {
            Some((t, _)) => crate::geom::lerp(a0, a1, t),
            None => {
                fallbacks += 1;
                crate::geom::lerp(a1, b0, 0.5)
            }
        };
        out.extend_from_slice(&q);
    }
    let end_dir = req.end_normals[1].unwrap_or(seg_n[n - 2]);
    out.extend_from_slice(&crate::geom::add(p[n - 1], crate::geom::scale(end_dir, ell)));
    Ok(finish(base.with_points(out)?, fallbacks))
}

fn polygon_translation_surface(base: &NurbsPatch, req: &OffsetRequest) -> Result<OffsetResult> {
    let ell = req.distance;
    let s = if req.flip_normal { -1.0 } else { 1.0 };
    let c = base.counts();
    let (nu, nv) = (c[0], c[1]);
    let pt = |i: usize, j: usize| {
        let q = base.point(i + nu * j);
        Vector3::new(q[0], q[1], q[2])
    };
    let mut out = vec![0.0; base.points().len()];
    let mut fallbacks = 0;
    for j in 0..nv {
        for i in 0..nu {
            let p = pt(i, j);
            let mut normals: Vec<Vector3<f64>> = Vec::with_capacity(4);
            for (a, b) in [(i as isize - 1, j as isize - 1), (i as isize, j as isize - 1), (i as isize - 1, j as isize), (i as isize, j as isize)] {
                if a < 0 || b < 0 || a as usize >= nu - 1 || b as usize >= nv - 1 {
                    continue;
                }
                let du: isize = if a as usize == i { 1 } else { -1 };
                let dv: isize = if b as usize == j { 1 } else { -1 };
                let eu = pt((i as isize + du) as usize, j) - p;
                let ev = pt(i, (j as isize + dv) as usize) - p;
                let m = eu.cross(&ev) * (du * dv) as f64;
                let l = m.norm();
                if !(l > 1e-14) {
                    return geometry(format!("degenerate control-net facet at ({a}, {b})"));
                }
                normals.push(m * (s / l));
            }
            let avg = |ns: &[Vector3<f64>]| -> Result<Vector3<f64>> {
                let m: Vector3<f64> = ns.iter().sum();
                if m.norm() < 1e-8 {
                    return geometry("opposite facet normals");
                }
                Ok(m.normalize())
            };
            let disp = match normals.len() {
                1 => normals[0] * ell,
                2 => {
                    let (a, b) = (normals[0], normals[1]);
                    let g = nalgebra::Matrix2::new(a.dot(&a), a.dot(&b), b.dot(&a), b.dot(&b));
                    match g.try_inverse().filter(|_| (1.0 - a.dot(&b).abs()) > 1e-12) {
                        Some(gi) => {
                            let c = gi * nalgebra::Vector2::new(ell, ell);
                            a * c[0] + b * c[1]
                        }
                        None => {
                            fallbacks += 1;
                            avg(&normals)? * ell
                        }
                    }
                }
                _ => {
                    let m = Matrix3::from_rows(&[normals[0].transpose(), normals[1].transpose(), normals[2].transpose()]);
                    let sv = m.singular_values();
                    let cond = sv.max() / sv.min();
                    match m.try_inverse().filter(|_| cond.is_finite() && cond <= 1e12) {
                        Some(mi) => mi * Vector3::new(ell, ell, ell),
                        None => {
                            fallbacks += 1;
                            avg(&normals[..3])? * ell
                        }
                    }
                }
            };
            let q = p + disp;
            let k = (i + nu * j) * 3;
            out[k..k + 3].copy_from_slice(q.as_slice());
        }
    }
    Ok(finish(base.with_points(out)?, fallbacks))
}

/// Tensor grid of the given per-direction parameter lists (first direction fastest).
fn grid(lists: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let total: usize = lists.iter().map(|l| l.len()).product();
    (0..total)
        .map(|t| {
            let mut rem = t;
            lists
                .iter()
                .map(|l| {
                    let i = rem % l.len();
                    rem /= l.len();
                    l[i]
                })
                .collect()
        })
        .collect()
}

/// Rows of rational basis values at the given parameters.
fn collocation(base: &NurbsPatch, params: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let mut a = DMatrix::zeros(params.len(), base.n_points());
    for (r, prm) in params.iter().enumerate() {
        let rb = base.rational_basis(prm)?;
        for (k, &c) in rb.indices.iter().enumerate() {
            a[(r, c)] = rb.values[k];
        }
    }
    Ok(a)
}

fn target_points(base: &NurbsPatch, params: &[Vec<f64>], req: &OffsetRequest) -> Result<DMatrix<f64>> {
    let dim = base.dim();
    let mut x = DMatrix::zeros(params.len(), dim);
    let last = params.len().saturating_sub(1);
    for (r, prm) in params.iter().enumerate() {
        let mut q = exact_offset_point(base, prm, req.distance, req.flip_normal)?;
        if base.pdim() == 1 {
            let (a, b) = base.domain(0);
            let end = if r == 0 && prm[0] == a {
                req.end_normals[0]
            } else if r == last && prm[0] == b {
                req.end_normals[1]
            } else {
                None
            };
            if let Some(nrm) = end {
                let c = base.eval_point(prm)?;
                q = vec![c[0] + req.distance * nrm[0], c[1] + req.distance * nrm[1]];
            }
        }
        for c in 0..dim {
            x[(r, c)] = q[c];
        }
    }
    Ok(x)
}

fn to_points(m: &DMatrix<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.push(m[(r, c)]);
        }
    }
    out
}

fn interpolation(base: &NurbsPatch, req: &OffsetRequest) -> Result<OffsetResult> {
    let params = grid(&base.knot_vectors().iter().map(|k| k.greville()).collect::<Vec<_>>());
    let n = collocation(base, &params)?;
    let x = target_points(base, &params, req)?;
    let lu = n.lu();
    let p = lu.solve(&x).ok_or_else(|| Error::Geometry("singular Greville collocation matrix".into()))?;
    Ok(finish(base.with_points(to_points(&p))?, 0))
}

fn optimization(base: &NurbsPatch, req: &OffsetRequest) -> Result<OffsetResult> {
    let set = &req.optimizer;
    let counts = base.counts();
    if counts.iter().any(|&c| set.samples < c) {
        return Err(Error::Config(format!("optimization needs at least {} samples per direction", counts.iter().max().unwrap())));
    }
    let lists: Vec<Vec<f64>> = (0..base.pdim())
        .map(|d| {
            let (a, b) = base.domain(d);
            (0..set.samples).map(|i| a + (b - a) * i as f64 / (set.samples - 1) as f64).collect()
        })
        .collect();
    let params = grid(&lists);
    let a = collocation(base, &params)?;
    let x = target_points(base, &params, req)?;
    let seed = interpolation(base, req)?.offset;
    let npts = base.n_points();
    let dim = base.dim();
    let mut p = DMatrix::from_row_slice(npts, dim, seed.points());
    // endpoints held fixed when a kink normal prescribes them
    let mut fixed = vec![false; npts];
    if base.pdim() == 1 {
        fixed[0] = req.end_normals[0].is_some();
        fixed[npts - 1] = req.end_normals[1].is_some();
    }
    let energy = |p: &DMatrix<f64>| 0.5 * (&x - &a * p).norm_squared();
    let gradient = |p: &DMatrix<f64>| {
        let mut g = -(a.transpose() * (&x - &a * p));
        for (i, &f) in fixed.iter().enumerate() {
            if f {
                g.row_mut(i).fill(0.0);
            }
        }
        g
    };
    let step0 = match set.step {
        Some(s) => s,
        None => {
            let ata = a.transpose() * &a;
            let mut v = nalgebra::DVector::from_element(npts, 1.0);
            let mut lam = 1.0;
            for _ in 0..200 {
                let w = &ata * &v;
                lam = w.norm() / v.norm();
                v = w / lam;
            }
            1.0 / lam
        }
    };
    let e0 = energy(&p);
    let mut e = e0;
    let mut g = gradient(&p);
    let g0 = g.norm();
    // roundoff floor relative to the data scale
    let floor = 1e-13 * (a.transpose() * &x).norm();
    let mut it = 0;
    let mut converged = g0 <= floor;
    let mut step = step0;
    while !converged && it < set.max_iterations {
        let mut accepted = false;
        for _ in 0..60 {
            let trial = &p - &g * step;
            let et = energy(&trial);
            if et <= e {
                p = trial;
                e = et;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        it += 1;
        if !accepted {
            break;
        }
        g = gradient(&p);
        if g.norm() <= (set.gradient_tolerance * g0).max(floor) {
            converged = true;
        }
    }
    if !converged {
        log::warn!("offset optimization stopped after {it} iterations without reaching the gradient tolerance");
    }
    Ok(OffsetResult {
        offset: base.with_points(to_points(&p))?,
        iterations: it,
        initial_energy: e0,
        energy: e,
        fallbacks: 0,
        converged,
    })
}

/// Maximum and normalized L2 distance between `approx` and the exact offset of `base`.
pub fn offset_error_metrics(
    base: &NurbsPatch,
    approx: &NurbsPatch,
    ell: f64,
    flip: bool,
    samples_per_span: usize,
) -> Result<(f64, f64)> {
    let pd = base.pdim();
    if approx.pdim() != pd || (0..pd).any(|d| base.domain(d) != approx.domain(d)) {
        return geometry("base and approximation must share the parametric domain");
    }
    let dist = |prm: &[f64]| -> Result<f64> {
        let q = exact_offset_point(base, prm, ell, flip)?;
        let a = approx.eval_point(prm)?;
        Ok(q.iter().zip(&a).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
    };
    let dense: Vec<Vec<f64>> = (0..pd)
        .map(|d| {
            let mut v: Vec<f64> = Vec::new();
            for (a, b) in approx.knot_vector(d).spans() {
                for s in 0..samples_per_span {
                    v.push(a + (b - a) * s as f64 / samples_per_span as f64);
                }
            }
            v.push(approx.domain(d).1);
            v
        })
        .collect();
    let mut e_inf: f64 = 0.0;
    for prm in grid(&dense) {
        e_inf = e_inf.max(dist(&prm)?);
    }
    let gauss: Vec<Vec<(f64, f64)>> = (0..pd)
        .map(|d| {
            approx
                .knot_vector(d)
                .spans()
                .iter()
                .flat_map(|&(a, b)| gauss_on(a, b, 8))
                .collect()
        })
        .collect();
    let pts: Vec<Vec<f64>> = gauss.iter().map(|g| g.iter().map(|x| x.0).collect()).collect();
    let wts: Vec<Vec<f64>> = gauss.iter().map(|g| g.iter().map(|x| x.1).collect()).collect();
    let wgrid = grid(&wts);
    let (mut num, mut den) = (0.0, 0.0);
    for (prm, w) in grid(&pts).iter().zip(wgrid) {
        let (_, dx) = approx.eval(prm)?;
        let jac = match pd {
            1 => dx[0].iter().map(|v| v * v).sum::<f64>().sqrt(),
            _ => {
                let a = Vector3::new(dx[0][0], dx[0][1], dx[0][2]);
                let b = Vector3::new(dx[1][0], dx[1][1], dx[1][2]);
                a.cross(&b).norm()
            }
        };
        let wt: f64 = w.iter().product::<f64>() * jac;
        let d = dist(prm)?;
        num += wt * d * d;
        den += wt;
    }
    Ok((e_inf, (num / den).sqrt()))
}

/// Averaged unit normals at shared curve endpoints, one `[start, end]` pair per patch.
///
/// Endpoints coinciding within `tol` share the normalized mean of the adjacent
/// patch normals; unshared endpoints get `None`.
pub fn average_patch_edge_normals(patches: &[NurbsPatch], tol: f64) -> Result<Vec<[Option<V2>; 2]>> {
    let mut ends = Vec::with_capacity(patches.len() * 2);
    for p in patches {
        if p.pdim() != 1 || p.dim() != 2 {
            return geometry("edge-normal averaging is implemented for planar curves");
        }
        for (slot, u) in [(0usize, p.domain(0).0), (1, p.domain(0).1)] {
            let (x, _) = p.curve_point(u)?;
            ends.push((x, p.curve_inward_normal(u)?, slot));
        }
    }
    let mut out = vec![[None, None]; patches.len()];
    for i in 0..ends.len() {
        let mut sum = [0.0, 0.0];
        let mut shared = 0;
        for (j, e) in ends.iter().enumerate() {
            if crate::geom::dist(e.0, ends[i].0) <= tol {
                sum = crate::geom::add(sum, e.1);
                if j != i {
                    shared += 1;
                }
            }
        }
        if shared == 0 {
            continue;
        }
        let l = crate::geom::norm(sum);
        if l < 1e-8 {
            return geometry("opposite normals at a shared patch corner");
        }
        out[i / 2][ends[i].2] = Some([sum[0] / l, sum[1] / l]);
    }
    Ok(out)
}

/// Offsets a chain of planar curve patches with averaged normals at shared ends.
pub fn offset_curves(patches: &[NurbsPatch], req: &OffsetRequest, tol: f64) -> Result<Vec<OffsetResult>> {
    let normals = average_patch_edge_normals(patches, tol)?;
    patches
        .iter()
        .zip(normals)
        .map(|(p, nrm)| {
            let mut r = req.clone();
            r.end_normals = nrm;
            offset(p, &r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nurbs::KnotVector;

    fn arc_cw() -> NurbsPatch {
        // clockwise unit arc (0,1) -> (1,0): inward normal points at the origin
        let kv = KnotVector::new(vec![0., 0., 0., 1., 1., 1.], 2).unwrap();
        NurbsPatch::curve2(kv, &[[0., 1.], [1., 1.], [1., 0.]], &[1., 0.5f64.sqrt(), 1.]).unwrap()
    }

    #[test]
    fn circle_offsets_are_exact() {
        let c = arc_cw();
        for m in [OffsetMethod::PolygonTranslation, OffsetMethod::Interpolation] {
            let r = offset(&c, &OffsetRequest::new(0.25, m)).unwrap();
            let (ei, el) = offset_error_metrics(&c, &r.offset, 0.25, false, 200).unwrap();
            assert!(ei < 1e-10 && el <= ei + 1e-15, "{m:?}: {ei}");
            let (x, _) = r.offset.curve_point(0.3).unwrap();
            assert!((x[0].hypot(x[1]) - 0.75).abs() < 1e-10);
        }
    }

    #[test]
    fn optimization_from_exact_seed_does_nothing() {
        let c = arc_cw();
        let mut req = OffsetRequest::new(0.25, OffsetMethod::Optimization);
        req.optimizer.samples = 20;
        let r = offset(&c, &req).unwrap();
        assert!(r.iterations <= 1);
        assert!(r.energy < 1e-25);
    }

    #[test]
    fn perturbed_radius_metrics() {
        let c = arc_cw();
        let r = offset(&c, &OffsetRequest::new(0.25, OffsetMethod::Interpolation)).unwrap();
        let pts: Vec<f64> = r.offset.points().iter().map(|x| x * (0.76 / 0.75)).collect();
        let a = r.offset.with_points(pts).unwrap();
        let (ei, el) = offset_error_metrics(&c, &a, 0.25, false, 200).unwrap();
        assert!((ei - 0.01).abs() < 1e-12 && (el - 0.01).abs() < 1e-12);
    }

    #[test]
    fn straight_segment_parallel() {
        let kv = KnotVector::new(vec![0., 0., 0., 1., 1., 1.], 2).unwrap();
        let c = NurbsPatch::curve2(kv, &[[0., 0.], [0.5, 0.], [1., 0.]], &[1., 1., 1.]).unwrap();
        for m in OffsetMethod::ALL {
            let mut req = OffsetRequest::new(0.3, m);
            req.optimizer.samples = 10;
            let r = offset(&c, &req).unwrap();
            for i in 0..3 {
                assert!((r.offset.point(i)[1] + 0.3).abs() < 1e-12);
            }
            assert_eq!(r.offset.weights(), c.weights());
            assert_eq!(r.offset.knot_vectors(), c.knot_vectors());
        }
        // collinear segments trigger no fallback: the lines coincide and intersect nowhere
        let r = offset(&c, &OffsetRequest::new(0.3, OffsetMethod::PolygonTranslation)).unwrap();
        assert_eq!(r.fallbacks, 1);
    }

    #[test]
    fn curvature_bound_enforced() {
        assert!(offset(&arc_cw(), &OffsetRequest::new(1.2, OffsetMethod::Interpolation)).is_err());
    }

    #[test]
    fn l_shape_corner() {
        let kv = KnotVector::new(vec![0., 0., 1., 1.], 1).unwrap();
        // clockwise around a body lying below/right: (0,1)->(0,0)... use two lines sharing (0,0)
        let a = NurbsPatch::curve2(kv.clone(), &[[0., 1.], [0., 0.]], &[1., 1.]).unwrap();
        let b = NurbsPatch::curve2(kv, &[[0., 0.], [1., 0.]], &[1., 1.]).unwrap();
        let n = average_patch_edge_normals(&[a.clone(), b.clone()], 1e-12).unwrap();
        let s = 0.5f64.sqrt();
        let c = n[0][1].unwrap();
        assert!((c[0] + s).abs() < 1e-15 && (c[1] + s).abs() < 1e-15);
        assert!(n[0][0].is_none() && n[1][1].is_none());
        for m in OffsetMethod::ALL {
            let mut req = OffsetRequest::new(0.1, m);
            req.optimizer.samples = 5;
            let r = offset_curves(&[a.clone(), b.clone()], &req, 1e-12).unwrap();
            let e0 = r[0].offset.point(1).to_vec();
            let e1 = r[1].offset.point(0).to_vec();
            assert!((e0[0] - e1[0]).hypot(e0[1] - e1[1]) <= 1e-12, "{m:?}");
        }
    }
}
