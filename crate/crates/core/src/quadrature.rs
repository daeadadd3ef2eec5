//! Gauss–Legendre and triangle quadrature rules.

/// n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pnm1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Gauss points mapped to [a, b].
pub fn gauss_on(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    x.iter().zip(&w).map(|(&xi, &wi)| (0.5 * (a + b) + 0.5 * (b - a) * xi, 0.5 * (b - a) * wi)).collect()
}

/// Tensor Gauss rule on [-1,1]^2 with n points per direction.
pub fn gauss_square(n: usize) -> Vec<([f64; 2], f64)> {
    let (x, w) = gauss_legendre(n);
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            out.push(([x[i], x[j]], w[i] * w[j]));
        }
    }
    out
}

/// Symmetric rule on the reference triangle (0,0),(1,0),(0,1) exact for polynomials of
/// the given degree (1..=5): barycentric (l1, l2) coordinates and weights summing to 1/2.
pub fn triangle_rule(degree: usize) -> Vec<([f64; 2], f64)> {
    let s = |a: f64, b: f64, w: f64| -> Vec<([f64; 2], f64)> {
        // orbit of (a, b, 1-a-b) under permutation
        let c = 1.0 - a - b;
        let mut v = vec![([a, b], w), ([b, c], w), ([c, a], w)];
        if (a - b).abs() > 1e-15 {
            v.extend([([b, a], w), ([c, b], w), ([a, c], w)]);
        }
        v
    };
    let raw: Vec<([f64; 2], f64)> = match degree {
        0 | 1 => vec![([1.0 / 3.0, 1.0 / 3.0], 1.0)],
        2 => s(1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0),
        3 | 4 => {
            let mut v = s(0.445948490915965, 0.445948490915965, 0.223381589678011);
            v.extend(s(0.091576213509771, 0.091576213509771, 0.109951743655322));
            v
        }
        _ => {
            let mut v = vec![([1.0 / 3.0, 1.0 / 3.0], 0.225)];
            v.extend(s(0.470142064105115, 0.470142064105115, 0.132394152788506));
            v.extend(s(0.101286507323456, 0.101286507323456, 0.125939180544827));
            v
        }
    };
    let total: f64 = raw.iter().map(|r| r.1).sum();
    raw.into_iter().map(|(p, w)| (p, 0.5 * w / total)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_exactness() {
        for n in 1..8 {
            let (x, w) = gauss_legendre(n);
            for k in 0..2 * n {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
                let e = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((q - e).abs() < 1e-14, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn triangle_exactness() {
        // int x^a y^b over the unit triangle = a! b! / (a+b+2)!
        let fact = |n: u32| (1..=n).map(|k| k as f64).product::<f64>();
        for deg in 1..=5usize {
            let r = triangle_rule(deg);
            for a in 0..=deg as u32 {
                for b in 0..=(deg as u32 - a) {
                    let q: f64 = r.iter().map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32)).sum();
                    let e = fact(a) * fact(b) / fact(a + b + 2);
                    assert!((q - e).abs() < 1e-12, "deg {deg} a {a} b {b}: {q} vs {e}");
                }
            }
        }
    }
}
