//! Polygon utilities: ear clipping, convex clipping, segment/cell intersections.

use crate::geom::{cross, signed_area, sub, V2};

/// Ear-clipping triangulation of a simple polygon (either orientation).
/// Triangles are returned counter-clockwise; zero-area vertices are dropped.
pub fn triangulate_polygon(poly: &[V2]) -> Vec<[V2; 3]> {
    let mut v: Vec<V2> = poly.to_vec();
    if signed_area(&v) < 0.0 {
        v.reverse();
    }
    let scale = {
        let bb = crate::mesh::Aabb::of(&v);
        bb.diagonal().max(1e-300)
    };
    let eps = 1e-14 * scale * scale;
    let mut out = Vec::with_capacity(v.len().saturating_sub(2));
    let mut guard = 0usize;
    while v.len() > 3 {
        let n = v.len();
        let mut clipped = false;
        for i in 0..n {
            let (a, b, c) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
            let cr = cross(sub(b, a), sub(c, b));
            if cr.abs() <= eps {
                // Collinear or spike vertex: remove without emitting area.
                v.remove(i);
                clipped = true;
                break;
            }
            if cr < 0.0 {
                continue;
            }
            let blocked = v.iter().enumerate().any(|(k, &p)| {
                k != i && k != (i + n - 1) % n && k != (i + 1) % n && p != a && p != b && p != c && in_triangle(p, a, b, c, eps)
            });
            if !blocked {
                out.push([a, b, c]);
                v.remove(i);
                clipped = true;
                break;
            }
        }
        if !clipped {
            guard += 1;
            if guard > 2 {
                break;
            }
            // Numerical stalemate: emit the largest convex fan triangle.
            let i = (0..v.len())
                .max_by(|&x, &y| {
                    let n = v.len();
                    let f = |i: usize| cross(sub(v[i], v[(i + n - 1) % n]), sub(v[(i + 1) % n], v[i]));
                    f(x).total_cmp(&f(y))
                })
                .unwrap();
            let n = v.len();
            out.push([v[(i + n - 1) % n], v[i], v[(i + 1) % n]]);
            v.remove(i);
        }
    }
    if v.len() == 3 && signed_area(&v).abs() > eps {
        out.push([v[0], v[1], v[2]]);
    }
    out
}

fn in_triangle(p: V2, a: V2, b: V2, c: V2, eps: f64) -> bool {
    cross(sub(b, a), sub(p, a)) >= -eps && cross(sub(c, b), sub(p, b)) >= -eps && cross(sub(a, c), sub(p, c)) >= -eps
}

/// Sutherland–Hodgman clip of `subject` by the convex counter-clockwise polygon `clip`.
pub fn clip_convex(subject: &[V2], clip: &[V2]) -> Vec<V2> {
    let mut out: Vec<V2> = subject.to_vec();
    let m = clip.len();
    for k in 0..m {
        if out.is_empty() {
            break;
        }
        let (e0, e1) = (clip[k], clip[(k + 1) % m]);
        let d = sub(e1, e0);
        let side = |p: V2| cross(d, sub(p, e0));
        let input = std::mem::take(&mut out);
        let n = input.len();
        for i in 0..n {
            let (p, q) = (input[i], input[(i + 1) % n]);
            let (sp, sq) = (side(p), side(q));
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
    }
    out
}

/// Parameters s ∈ (0,1) where segment a→b crosses the edges of `poly`.
pub fn segment_polygon_crossings(a: V2, b: V2, poly: &[V2]) -> Vec<f64> {
    let r = sub(b, a);
    let n = poly.len();
    let mut out = Vec::new();
    for k in 0..n {
        let (p, q) = (poly[k], poly[(k + 1) % n]);
        let d = sub(q, p);
        let den = cross(r, d);
        if den.abs() <= 1e-14 * (r[0].hypot(r[1]) * d[0].hypot(d[1])) {
            continue;
        }
        let ap = sub(p, a);
        let s = cross(ap, d) / den;
        let t = cross(ap, r) / den;
        if s > 0.0 && s < 1.0 && (-1e-12..=1.0 + 1e-12).contains(&t) {
            out.push(s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn area(ts: &[[V2; 3]]) -> f64 {
        ts.iter().map(|t| signed_area(t)).sum()
    }

    #[test]
    fn ear_clipping() {
        let sq = [[0., 0.], [1., 0.], [1., 1.], [0., 1.]];
        let t = triangulate_polygon(&sq);
        assert_eq!(t.len(), 2);
        assert!((area(&t) - 1.0).abs() < 1e-15);
        let pent: Vec<V2> = (0..5)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
                [a.cos(), a.sin()]
            })
            .collect();
        let t = triangulate_polygon(&pent);
        assert_eq!(t.len(), 3);
        assert!((area(&t) - signed_area(&pent)).abs() < 1e-14);
        let tri = [[0., 0.], [1., 0.], [0., 1.]];
        assert_eq!(triangulate_polygon(&tri).len(), 1);
        // Clockwise L-shape with collinear vertices.
        let l = [[0., 0.], [0., 2.], [1., 2.], [1., 1.], [2., 1.], [2., 0.], [1., 0.]];
        let t = triangulate_polygon(&l);
        assert!((area(&t) - 3.0).abs() < 1e-14);
        assert!(t.iter().all(|x| signed_area(x) > 0.0));
    }

    #[test]
    fn clipping() {
        let sq = [[0., 0.], [1., 0.], [1., 1.], [0., 1.]];
        let lower = [[0., 0.], [1., 0.], [1., 1.]];
        let c = clip_convex(&lower, &sq);
        assert!((signed_area(&c) - 0.5).abs() < 1e-15);
        let big = [[-1., -1.], [3., -1.], [-1., 3.]];
        assert!((signed_area(&clip_convex(&big, &sq)) - 1.0).abs() < 1e-15);
        let far = [[5., 5.], [6., 5.], [5., 6.]];
        assert!(clip_convex(&far, &sq).len() < 3);
        let s = segment_polygon_crossings([-1., 0.5], [2., 0.5], &sq);
        assert_eq!(s.len(), 2);
    }
}
