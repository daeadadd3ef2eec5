//! Small planar geometry helpers.

pub type V2 = [f64; 2];

#[inline]
pub fn sub(a: V2, b: V2) -> V2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add(a: V2, b: V2) -> V2 {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn scale(a: V2, s: f64) -> V2 {
    [a[0] * s, a[1] * s]
}

#[inline]
pub fn dot(a: V2, b: V2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn cross(a: V2, b: V2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm(a: V2) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn dist(a: V2, b: V2) -> f64 {
    norm(sub(a, b))
}

#[inline]
pub fn lerp(a: V2, b: V2, t: f64) -> V2 {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// Signed shoelace area (positive for counter-clockwise).
pub fn signed_area(poly: &[V2]) -> f64 {
    let n = poly.len();
    let mut a = 0.0;
    for i in 0..n {
        a += cross(poly[i], poly[(i + 1) % n]);
    }
    0.5 * a
}

/// Even-odd point-in-polygon test.
pub fn point_in_polygon(p: V2, poly: &[V2]) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Intersection of lines p + s r and q + t d; returns (s, t) or None if parallel.
pub fn line_intersection(p: V2, r: V2, q: V2, d: V2) -> Option<(f64, f64)> {
    let den = cross(r, d);
    if den.abs() <= 1e-14 * norm(r) * norm(d) {
        return None;
    }
    let qp = sub(q, p);
    Some((cross(qp, d) / den, cross(qp, r) / den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_and_inside() {
        let sq = [[0., 0.], [1., 0.], [1., 1.], [0., 1.]];
        assert_eq!(signed_area(&sq), 1.0);
        assert!(point_in_polygon([0.5, 0.5], &sq));
        assert!(!point_in_polygon([1.5, 0.5], &sq));
        let (s, t) = line_intersection([0., 0.], [1., 1.], [1., 0.], [-1., 1.]).unwrap();
        assert!((s - 0.5).abs() < 1e-15 && (t - 0.5).abs() < 1e-15);
    }
}
