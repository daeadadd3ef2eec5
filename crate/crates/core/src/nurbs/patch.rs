use super::knots::{KnotVector, KNOT_TOL};
use crate::error::{geometry, Error, Result};

/// Tensor-product NURBS curve, surface or volume with control points in R^dim.
///
/// Control point (i, j, k) is stored at `i + n_u * (j + n_v * k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NurbsPatch {
    kvs: Vec<KnotVector>,
    dim: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

/// Nonzero rational basis functions at one parametric point.
#[derive(Clone, Debug, Default)]
pub struct RationalBasis {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    /// d R / d xi_d, one entry per parametric direction (unused directions are zero).
    pub grads: Vec<[f64; 3]>,
}

impl NurbsPatch {
    pub fn new(kvs: Vec<KnotVector>, dim: usize, points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if kvs.is_empty() || kvs.len() > 3 {
            return geometry("parametric dimension must be 1, 2 or 3");
        }
        if dim == 0 || dim > 3 {
            return geometry("spatial dimension must be 1, 2 or 3");
        }
        let n: usize = kvs.iter().map(|k| k.n_basis()).product();
        if weights.len() != n || points.len() != n * dim {
            return geometry(format!(
                "control net size mismatch: expected {n} points, got {} points / {} weights",
                points.len() / dim,
                weights.len()
            ));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return geometry("weights must be positive and finite");
        }
        if points.iter().any(|x| !x.is_finite()) {
            return geometry("non-finite control point");
        }
        Ok(Self { kvs, dim, points, weights })
    }

    /// Planar curve from points and weights.
    pub fn curve2(kv: KnotVector, pts: &[[f64; 2]], weights: &[f64]) -> Result<Self> {
        let points = pts.iter().flat_map(|p| p.iter().copied()).collect();
        Self::new(vec![kv], 2, points, weights.to_vec())
    }

    pub fn pdim(&self) -> usize {
        self.kvs.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn knot_vector(&self, d: usize) -> &KnotVector {
        &self.kvs[d]
    }

    pub fn knot_vectors(&self) -> &[KnotVector] {
        &self.kvs
    }

    pub fn counts(&self) -> Vec<usize> {
        self.kvs.iter().map(|k| k.n_basis()).collect()
    }

    pub fn n_points(&self) -> usize {
        self.weights.len()
    }

    pub fn point(&self, idx: usize) -> &[f64] {
        &self.points[idx * self.dim..(idx + 1) * self.dim]
    }

    pub fn point_mut(&mut self, idx: usize) -> &mut [f64] {
        &mut self.points[idx * self.dim..(idx + 1) * self.dim]
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, idx: usize) -> f64 {
        self.weights[idx]
    }

    /// Same knots and weights, new control points.
    pub fn with_points(&self, points: Vec<f64>) -> Result<Self> {
        Self::new(self.kvs.clone(), self.dim, points, self.weights.clone())
    }

    pub fn index(&self, ijk: &[usize]) -> usize {
        let c = self.counts();
        let mut idx = 0;
        let mut stride = 1;
        for d in 0..self.pdim() {
            idx += ijk[d] * stride;
            stride *= c[d];
        }
        idx
    }

    pub fn domain(&self, d: usize) -> (f64, f64) {
        self.kvs[d].domain()
    }

    /// Rational basis and parametric gradients at `params`.
    pub fn rational_basis(&self, params: &[f64]) -> Result<RationalBasis> {
        let pd = self.pdim();
        if params.len() != pd {
            return geometry("parameter count does not match parametric dimension");
        }
        let evals = self
            .kvs
            .iter()
            .zip(params)
            .map(|(kv, &u)| kv.eval(u))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.combine_basis(&evals))
    }

    /// Rational basis with the knot span fixed per direction (element evaluation;
    /// parameters on the span's upper boundary stay in that span).
    pub fn rational_basis_in_span(&self, params: &[f64], spans: &[usize]) -> Result<RationalBasis> {
        let pd = self.pdim();
        if params.len() != pd || spans.len() != pd {
            return geometry("parameter count does not match parametric dimension");
        }
        let mut evals = Vec::with_capacity(pd);
        for d in 0..pd {
            let kv = &self.kvs[d];
            let p = kv.degree();
            let s = spans[d];
            if s < p || s + 1 >= kv.knots().len() - p || kv.knots()[s + 1] <= kv.knots()[s] {
                return geometry("invalid knot span");
            }
            let mut der = kv.ders_basis_funs(s, params[d], 1);
            let derivs = if p == 0 { vec![0.0] } else { der.pop().unwrap() };
            let values = der.swap_remove(0);
            evals.push(crate::nurbs::BasisEval { span: s, first: s - p, values, derivs });
        }
        Ok(self.combine_basis(&evals))
    }

    fn combine_basis(&self, evals: &[crate::nurbs::BasisEval]) -> RationalBasis {
        let pd = self.pdim();
        let counts = self.counts();
        let sizes: Vec<usize> = evals.iter().map(|e| e.values.len()).collect();
        let total: usize = sizes.iter().product();
        let mut out = RationalBasis {
            indices: Vec::with_capacity(total),
            values: Vec::with_capacity(total),
            grads: Vec::with_capacity(total),
        };
        let mut wsum = 0.0;
        let mut dwsum = [0.0; 3];
        for t in 0..total {
            let mut rem = t;
            let mut idx = 0;
            let mut stride = 1;
            let mut val = 1.0;
            let mut g = [1.0; 3];
            let mut loc = [0usize; 3];
            for d in 0..pd {
                loc[d] = rem % sizes[d];
                rem /= sizes[d];
                idx += (evals[d].first + loc[d]) * stride;
                stride *= counts[d];
            }
            for d in 0..pd {
                val *= evals[d].values[loc[d]];
                for (e, gd) in g.iter_mut().enumerate().take(pd) {
                    *gd *= if e == d { evals[d].derivs[loc[d]] } else { evals[d].values[loc[d]] };
                }
            }
            for gd in g.iter_mut().skip(pd) {
                *gd = 0.0;
            }
            let w = self.weights[idx];
            wsum += val * w;
            for d in 0..3 {
                dwsum[d] += g[d] * w;
            }
            out.indices.push(idx);
            out.values.push(val * w);
            out.grads.push([g[0] * w, g[1] * w, g[2] * w]);
        }
        for k in 0..total {
            let r = out.values[k] / wsum;
            for d in 0..3 {
                out.grads[k][d] = (out.grads[k][d] - r * dwsum[d]) / wsum;
            }
            out.values[k] = r;
        }
        out
    }

    /// Point and first partial derivatives (one vector per parametric direction).
    pub fn eval(&self, params: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let rb = self.rational_basis(params)?;
        let mut x = vec![0.0; self.dim];
        let mut dx = vec![vec![0.0; self.dim]; self.pdim()];
        for (k, &i) in rb.indices.iter().enumerate() {
            let p = self.point(i);
            for c in 0..self.dim {
                x[c] += rb.values[k] * p[c];
                for d in 0..self.pdim() {
                    dx[d][c] += rb.grads[k][d] * p[c];
                }
            }
        }
        Ok((x, dx))
    }

    pub fn eval_point(&self, params: &[f64]) -> Result<Vec<f64>> {
        Ok(self.eval(params)?.0)
    }

    /// Planar curve point and tangent.
    pub fn curve_point(&self, u: f64) -> Result<([f64; 2], [f64; 2])> {
        debug_assert!(self.pdim() == 1 && self.dim == 2);
        let (x, dx) = self.eval(&[u])?;
        Ok(([x[0], x[1]], [dx[0][0], dx[0][1]]))
    }

    /// Planar curve point, first and second derivative.
    pub fn curve_derivs2(&self, u: f64) -> Result<[[f64; 2]; 3]> {
        if self.pdim() != 1 || self.dim != 2 {
            return geometry("second derivatives are implemented for planar curves");
        }
        let kv = &self.kvs[0];
        let span = kv.find_span(u)?;
        let (a, b) = kv.domain();
        let d = kv.ders_basis_funs(span, u.clamp(a, b), 2);
        let p = kv.degree();
        let mut aw = [[0.0; 3]; 3];
        for k in 0..=2usize {
            if k > p {
                break;
            }
            for j in 0..=p {
                let i = span - p + j;
                let w = self.weights[i];
                let pt = self.point(i);
                aw[k][0] += d[k][j] * w * pt[0];
                aw[k][1] += d[k][j] * w * pt[1];
                aw[k][2] += d[k][j] * w;
            }
        }
        let w0 = aw[0][2];
        let c0 = [aw[0][0] / w0, aw[0][1] / w0];
        let c1 = [(aw[1][0] - aw[1][2] * c0[0]) / w0, (aw[1][1] - aw[1][2] * c0[1]) / w0];
        let c2 = [
            (aw[2][0] - 2.0 * aw[1][2] * c1[0] - aw[2][2] * c0[0]) / w0,
            (aw[2][1] - 2.0 * aw[1][2] * c1[1] - aw[2][2] * c0[1]) / w0,
        ];
        Ok([c0, c1, c2])
    }

    /// Unit normal (y', -x') / |C'| of a planar curve; points into the body for
    /// clockwise boundary traversal.
    pub fn curve_inward_normal(&self, u: f64) -> Result<[f64; 2]> {
        let (_, t) = self.curve_point(u)?;
        normal_from_tangent(t)
    }

    /// Smallest radius of curvature over dense samples (infinite for straight curves).
    pub fn min_radius_of_curvature(&self, samples_per_span: usize) -> Result<f64> {
        let mut rmin = f64::INFINITY;
        for (a, b) in self.kvs[0].spans() {
            for s in 0..=samples_per_span {
                let u = a + (b - a) * s as f64 / samples_per_span as f64;
                let [_, c1, c2] = self.curve_derivs2(u)?;
                let sp = (c1[0] * c1[0] + c1[1] * c1[1]).sqrt();
                let k = (c1[0] * c2[1] - c1[1] * c2[0]).abs() / (sp * sp * sp);
                if k > 0.0 {
                    rmin = rmin.min(1.0 / k);
                }
            }
        }
        Ok(rmin)
    }

    /// Boehm knot insertion of `u` in direction `dir`, `mult` times.
    pub fn insert_knot(&self, dir: usize, u: f64, mult: usize) -> Result<Self> {
        if dir >= self.pdim() {
            return geometry("direction out of range");
        }
        let kv = &self.kvs[dir];
        let p = kv.degree();
        let (a, b) = kv.domain();
        if !(u > a + KNOT_TOL && u < b - KNOT_TOL) {
            return geometry(format!("knot {u} must lie strictly inside ({a}, {b})"));
        }
        if kv.multiplicity(u) + mult > p {
            return Err(Error::Geometry(format!(
                "inserting {u} {mult} times exceeds multiplicity p = {p}"
            )));
        }
        let mut out = self.clone();
        for _ in 0..mult {
            out = out.insert_once(dir, u)?;
        }
        Ok(out)
    }

    fn insert_once(&self, dir: usize, u: f64) -> Result<Self> {
        let kv = &self.kvs[dir];
        let p = kv.degree();
        let k = kv.find_span(u)?;
        let new_kv = kv.with_knot(u);
        let counts = self.counts();
        let n_old = counts[dir];
        let mut new_counts = counts.clone();
        new_counts[dir] += 1;
        let n_new: usize = new_counts.iter().product();
        let dim = self.dim;
        let mut pts = vec![0.0; n_new * dim];
        let mut wts = vec![0.0; n_new];
        let kn = kv.knots();
        let alpha: Vec<f64> = (0..=n_old)
            .map(|i| {
                if i + p <= k {
                    1.0
                } else if i > k {
                    0.0
                } else {
                    (u - kn[i]) / (kn[i + p] - kn[i])
                }
            })
            .collect();
        // iterate over all lines along `dir`
        let other: Vec<usize> = (0..self.pdim()).filter(|&d| d != dir).collect();
        let n_lines: usize = other.iter().map(|&d| counts[d]).product();
        for line in 0..n_lines {
            let mut rem = line;
            let mut ijk_old = [0usize; 3];
            for &d in &other {
                ijk_old[d] = rem % counts[d];
                rem /= counts[d];
            }
            let flat = |ijk: &[usize; 3], c: &[usize]| {
                let mut idx = 0;
                let mut stride = 1;
                for d in 0..c.len() {
                    idx += ijk[d] * stride;
                    stride *= c[d];
                }
                idx
            };
            let hom = |i: usize| -> Vec<f64> {
                let mut ijk = ijk_old;
                ijk[dir] = i;
                let idx = flat(&ijk, &counts);
                let w = self.weights[idx];
                let mut h: Vec<f64> = self.point(idx).iter().map(|x| x * w).collect();
                h.push(w);
                h
            };
            for i in 0..=n_old {
                let h = if alpha[i] == 1.0 {
                    hom(i)
                } else if alpha[i] == 0.0 {
                    hom(i - 1)
                } else {
                    let (h1, h0) = (hom(i), hom(i - 1));
                    h1.iter().zip(&h0).map(|(x1, x0)| alpha[i] * x1 + (1.0 - alpha[i]) * x0).collect()
                };
                let mut ijk = ijk_old;
                ijk[dir] = i;
                let idx = flat(&ijk, &new_counts);
                let w = h[dim];
                wts[idx] = w;
                for c in 0..dim {
                    pts[idx * dim + c] = h[c] / w;
                }
            }
        }
        let mut kvs = self.kvs.clone();
        kvs[dir] = new_kv;
        Self::new(kvs, dim, pts, wts)
    }

    /// Split every span of direction `dir` into `factor` equal pieces.
    pub fn refine_uniform(&self, dir: usize, factor: usize) -> Result<Self> {
        let mut out = self.clone();
        if factor <= 1 {
            return Ok(out);
        }
        for (a, b) in self.kvs[dir].spans() {
            for s in 1..factor {
                out = out.insert_knot(dir, a + (b - a) * s as f64 / factor as f64, 1)?;
            }
        }
        Ok(out)
    }

    /// Reverse the parametrization of a curve (flips the normal side).
    pub fn reversed_curve(&self) -> Result<Self> {
        if self.pdim() != 1 {
            return geometry("reversal implemented for curves only");
        }
        let kv = &self.kvs[0];
        let (a, b) = kv.domain();
        let knots: Vec<f64> = kv.knots().iter().rev().map(|k| a + b - k).collect();
        let n = self.n_points();
        let mut pts = Vec::with_capacity(self.points.len());
        for i in (0..n).rev() {
            pts.extend_from_slice(self.point(i));
        }
        let w: Vec<f64> = self.weights.iter().rev().copied().collect();
        Self::new(vec![KnotVector::new(knots, kv.degree())?], self.dim, pts, w)
    }

    /// Parametric element boxes (products of nonzero knot spans), first direction fastest.
    pub fn elements(&self) -> Vec<Vec<(f64, f64)>> {
        let spans: Vec<Vec<(f64, f64)>> = self.kvs.iter().map(|k| k.spans()).collect();
        let total: usize = spans.iter().map(|s| s.len()).product();
        (0..total)
            .map(|t| {
                let mut rem = t;
                spans
                    .iter()
                    .map(|s| {
                        let i = rem % s.len();
                        rem /= s.len();
                        s[i]
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn normal_from_tangent(t: [f64; 2]) -> Result<[f64; 2]> {
    let s = (t[0] * t[0] + t[1] * t[1]).sqrt();
    if !(s > 1e-14) {
        return geometry("vanishing tangent: degenerate parametrization");
    }
    Ok([t[1] / s, -t[0] / s])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quarter_arc() -> NurbsPatch {
        let kv = KnotVector::new(vec![0., 0., 0., 1., 1., 1.], 2).unwrap();
        NurbsPatch::curve2(kv, &[[1., 0.], [1., 1.], [0., 1.]], &[1., 0.5f64.sqrt(), 1.]).unwrap()
    }

    #[test]
    fn quarter_arc_exact() {
        let c = quarter_arc();
        let (x, _) = c.curve_point(0.5).unwrap();
        let r = 0.5f64.sqrt();
        assert!((x[0] - r).abs() < 1e-14 && (x[1] - r).abs() < 1e-14);
        for s in 0..=100 {
            let (x, _) = c.curve_point(s as f64 / 100.0).unwrap();
            assert!(((x[0] * x[0] + x[1] * x[1]).sqrt() - 1.0).abs() < 1e-14);
        }
        let r = c.min_radius_of_curvature(50).unwrap();
        assert!((r - 1.0).abs() < 1e-10);
    }

    #[test]
    fn table_curve_start() {
        let kv = KnotVector::new(vec![0., 0., 0., 0.5, 1., 1., 1.], 2).unwrap();
        let s = 0.5f64.sqrt();
        let c = NurbsPatch::curve2(kv, &[[0., 0.], [0.2, 1.], [1., 1.3], [1.8, 0.8]], &[1., s, 1., s]).unwrap();
        let (x, _) = c.curve_point(0.0).unwrap();
        assert_eq!(x, [0.0, 0.0]);
        let (x, _) = c.curve_point(1.0).unwrap();
        assert!((x[0] - 1.8).abs() < 1e-15 && (x[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn normals() {
        let kv = KnotVector::new(vec![0., 0., 1., 1.], 1).unwrap();
        let seg = NurbsPatch::curve2(kv, &[[0., 0.], [1., 0.]], &[1., 1.]).unwrap();
        let n = seg.curve_inward_normal(0.3).unwrap();
        assert!((n[0]).abs() < 1e-15 && (n[1] + 1.0).abs() < 1e-15);
        // clockwise arc from (0,1) to (1,0)
        let cw = quarter_arc().reversed_curve().unwrap();
        let (x, _) = cw.curve_point(0.5).unwrap();
        let n = cw.curve_inward_normal(0.5).unwrap();
        let r = 0.5f64.sqrt();
        assert!((x[0] - r).abs() < 1e-14);
        assert!((n[0] + r).abs() < 1e-14 && (n[1] + r).abs() < 1e-14);
    }

    #[test]
    fn knot_insertion_preserves_geometry() {
        let c = quarter_arc();
        let r = c.insert_knot(0, 0.5, 1).unwrap();
        assert_eq!(r.n_points(), 4);
        for s in 1..10 {
            let u = s as f64 / 10.0;
            let (a, _) = c.curve_point(u).unwrap();
            let (b, _) = r.curve_point(u).unwrap();
            assert!((a[0] - b[0]).hypot(a[1] - b[1]) < 1e-12);
        }
        let r2 = r.insert_knot(0, 0.5, 1).unwrap();
        assert_eq!(r2.knot_vector(0).multiplicity(0.5), 2);
        assert!(r2.insert_knot(0, 0.5, 1).is_err());
        assert!(c.insert_knot(0, 0.0, 1).is_err());
    }

    #[test]
    fn surface_insertion_and_elements() {
        let kv = KnotVector::new(vec![0., 0., 0., 1., 1., 1.], 2).unwrap();
        let kv1 = KnotVector::new(vec![0., 0., 1., 1.], 1).unwrap();
        let mut pts = Vec::new();
        let mut w = Vec::new();
        let s = 0.5f64.sqrt();
        for j in 0..2 {
            let r = 1.0 - 0.25 * j as f64;
            for (p, wi) in [([r, 0.], 1.0), ([r, r], s), ([0., r], 1.0)] {
                pts.extend_from_slice(&p);
                w.push(wi);
            }
        }
        let sfc = NurbsPatch::new(vec![kv, kv1], 2, pts, w).unwrap();
        let r = sfc.insert_knot(0, 0.3, 1).unwrap().insert_knot(1, 0.6, 1).unwrap();
        assert_eq!(r.elements().len(), 4);
        for (u, v) in [(0.1, 0.2), (0.5, 0.9), (0.99, 0.01)] {
            let a = sfc.eval_point(&[u, v]).unwrap();
            let b = r.eval_point(&[u, v]).unwrap();
            assert!((a[0] - b[0]).hypot(a[1] - b[1]) < 1e-12);
        }
    }
}
