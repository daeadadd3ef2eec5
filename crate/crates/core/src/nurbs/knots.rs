use crate::error::{geometry, Error, Result};

/// Absolute tolerance for parameter-at-knot comparisons.
pub const KNOT_TOL: f64 = 1e-12;

/// Open (clamped) knot vector of degree p.
#[derive(Clone, Debug, PartialEq)]
pub struct KnotVector {
    knots: Vec<f64>,
    degree: usize,
}

/// Nonzero basis functions at a parameter: `first` is the global index of `values[0]`.
#[derive(Clone, Debug)]
pub struct BasisEval {
    pub span: usize,
    pub first: usize,
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
}

impl KnotVector {
    pub fn new(knots: Vec<f64>, degree: usize) -> Result<Self> {
        let p = degree;
        if knots.len() < 2 * p + 2 {
            return geometry(format!("knot vector of length {} too short for degree {p}", knots.len()));
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return geometry("non-finite knot");
        }
        if knots.windows(2).any(|w| w[1] < w[0]) {
            return geometry("knots must be non-decreasing");
        }
        let m = knots.len();
        let open_start = knots[..=p].iter().all(|&k| k == knots[0]);
        let open_end = knots[m - p - 1..].iter().all(|&k| k == knots[m - 1]);
        if !open_start || !open_end {
            return geometry("knot vector must be open (end multiplicity p+1)");
        }
        if knots[p] >= knots[m - p - 1] {
            return geometry("knot vector has an empty domain");
        }
        for i in p + 1..m - p - 1 {
            let mult = knots.iter().filter(|&&k| k == knots[i]).count();
            if mult > p {
                return geometry(format!("interior knot {} has multiplicity {mult} > p", knots[i]));
            }
        }
        Ok(Self { knots, degree })
    }

    /// Open knot vector on [a, b] with `spans` equal elements.
    pub fn uniform(degree: usize, spans: usize, a: f64, b: f64) -> Self {
        assert!(spans >= 1 && b > a);
        let mut knots = vec![a; degree + 1];
        for i in 1..spans {
            knots.push(a + (b - a) * i as f64 / spans as f64);
        }
        knots.extend(std::iter::repeat(b).take(degree + 1));
        Self { knots, degree }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_basis(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[self.degree], self.knots[self.n_basis()])
    }

    /// Distinct knot values in order.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for &k in &self.knots {
            if out.last().map_or(true, |&l| k > l) {
                out.push(k);
            }
        }
        out
    }

    /// Nonzero-length knot spans (the elements).
    pub fn spans(&self) -> Vec<(f64, f64)> {
        self.breakpoints().windows(2).map(|w| (w[0], w[1])).collect()
    }

    pub fn n_spans(&self) -> usize {
        self.breakpoints().len() - 1
    }

    pub fn multiplicity(&self, u: f64) -> usize {
        self.knots.iter().filter(|&&k| (k - u).abs() <= KNOT_TOL).count()
    }

    /// Knot index i with knots[i] <= u < knots[i+1]; the last span is closed.
    pub fn find_span(&self, u: f64) -> Result<usize> {
        let (a, b) = self.domain();
        if !(u >= a - KNOT_TOL && u <= b + KNOT_TOL) {
            return Err(Error::Geometry(format!("parameter {u} outside domain [{a}, {b}]")));
        }
        let n = self.n_basis();
        let p = self.degree;
        if u >= self.knots[n] - KNOT_TOL {
            let mut i = n - 1;
            while self.knots[i] == self.knots[i + 1] {
                i -= 1;
            }
            return Ok(i);
        }
        if u <= self.knots[p] {
            return Ok(p);
        }
        let (mut lo, mut hi) = (p, n);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if u < self.knots[mid] {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(lo)
    }

    /// Basis functions and derivatives up to order `nd` at span (Piegl–Tiller A2.3).
    pub fn ders_basis_funs(&self, span: usize, u: f64, nd: usize) -> Vec<Vec<f64>> {
        let p = self.degree;
        let kn = &self.knots;
        let mut ndu = vec![vec![0.0; p + 1]; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        ndu[0][0] = 1.0;
        for j in 1..=p {
            left[j] = u - kn[span + 1 - j];
            right[j] = kn[span + j] - u;
            let mut saved = 0.0;
            for r in 0..j {
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }
        let mut ders = vec![vec![0.0; p + 1]; nd + 1];
        for j in 0..=p {
            ders[0][j] = ndu[j][p];
        }
        let mut a = vec![vec![0.0; p + 1]; 2];
        for r in 0..=p {
            let (mut s1, mut s2) = (0usize, 1usize);
            a[0][0] = 1.0;
            for k in 1..=nd.min(p) {
                let mut d = 0.0;
                let rk = r as isize - k as isize;
                let pk = p - k;
                if r >= k {
                    a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                    d = a[s2][0] * ndu[rk as usize][pk];
                }
                let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
                let j2 = if (r as isize - 1) <= pk as isize { k - 1 } else { p - r };
                for j in j1..=j2 {
                    let idx = (rk + j as isize) as usize;
                    a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                    d += a[s2][j] * ndu[idx][pk];
                }
                if r <= pk {
                    a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                    d += a[s2][k] * ndu[r][pk];
                }
                ders[k][r] = d;
                std::mem::swap(&mut s1, &mut s2);
            }
        }
        let mut fac = p as f64;
        for k in 1..=nd.min(p) {
            for v in ders[k].iter_mut() {
                *v *= fac;
            }
            fac *= (p - k) as f64;
        }
        ders
    }

    /// B-spline values and first derivatives of the p+1 nonzero functions at u.
    pub fn eval(&self, u: f64) -> Result<BasisEval> {
        let span = self.find_span(u)?;
        let (a, b) = self.domain();
        let uc = u.clamp(a, b);
        let mut d = self.ders_basis_funs(span, uc, 1);
        let derivs = if self.degree == 0 { vec![0.0] } else { d.pop().unwrap() };
        let values = d.swap_remove(0);
        Ok(BasisEval { span, first: span - self.degree, values, derivs })
    }

    /// Rational basis on this knot vector with per-function weights (global indexing).
    pub fn eval_rational(&self, weights: &[f64], u: f64) -> Result<BasisEval> {
        if weights.len() != self.n_basis() {
            return geometry("weight count does not match basis count");
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return geometry("weights must be positive");
        }
        let mut b = self.eval(u)?;
        let w = &weights[b.first..b.first + b.values.len()];
        let wsum: f64 = b.values.iter().zip(w).map(|(n, w)| n * w).sum();
        let dwsum: f64 = b.derivs.iter().zip(w).map(|(n, w)| n * w).sum();
        for k in 0..b.values.len() {
            let r = b.values[k] * w[k] / wsum;
            b.derivs[k] = (b.derivs[k] * w[k] - r * dwsum) / wsum;
            b.values[k] = r;
        }
        Ok(b)
    }

    /// Greville abscissae: averages of p consecutive interior knots.
    pub fn greville(&self) -> Vec<f64> {
        let p = self.degree;
        if p == 0 {
            return (0..self.n_basis()).map(|i| 0.5 * (self.knots[i] + self.knots[i + 1])).collect();
        }
        (0..self.n_basis())
            .map(|i| self.knots[i + 1..=i + p].iter().sum::<f64>() / p as f64)
            .collect()
    }

    pub(crate) fn with_knot(&self, u: f64) -> Self {
        let pos = self.knots.partition_point(|&k| k <= u);
        let mut knots = self.knots.clone();
        knots.insert(pos, u);
        Self { knots, degree: self.degree }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_and_midpoint_values() {
        let kv = KnotVector::new(vec![0., 0., 0., 1., 1., 1.], 2).unwrap();
        let b = kv.eval(0.0).unwrap();
        assert_eq!(b.values, vec![1.0, 0.0, 0.0]);
        let b = kv.eval(0.5).unwrap();
        for (v, e) in b.values.iter().zip([0.25, 0.5, 0.25]) {
            assert!((v - e).abs() < 1e-15);
        }
        assert!(b.derivs.iter().sum::<f64>().abs() < 1e-14);
        let b = kv.eval(1.0).unwrap();
        assert!((b.values[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn interior_knot_partition() {
        let kv = KnotVector::new(vec![0., 0., 0., 0.5, 1., 1., 1.], 2).unwrap();
        let b = kv.eval(0.5).unwrap();
        assert!((b.values.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(b.first, 1);
    }

    #[test]
    fn rational_quarter_circle_weights() {
        let kv = KnotVector::new(vec![0., 0., 0., 1., 1., 1.], 2).unwrap();
        let w = [1.0, 1.0 / 2f64.sqrt(), 1.0];
        let b = kv.eval_rational(&w, 0.5).unwrap();
        let e = [0.29289321881345, 0.41421356237309, 0.29289321881345];
        for (v, e) in b.values.iter().zip(e) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn greville_values() {
        let kv = KnotVector::new(vec![0., 0., 0., 0.5, 1., 1., 1.], 2).unwrap();
        assert_eq!(kv.greville(), vec![0.0, 0.25, 0.75, 1.0]);
        let kv = KnotVector::new(vec![0., 0., 1., 1.], 1).unwrap();
        assert_eq!(kv.greville(), vec![0.0, 1.0]);
        let kv = KnotVector::new(vec![0., 0., 0., 1., 1., 1.], 2).unwrap();
        assert_eq!(kv.greville(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn domain_errors() {
        let kv = KnotVector::new(vec![0., 0., 0., 1., 1., 1.], 2).unwrap();
        assert!(kv.eval(1.5).is_err());
        assert!(kv.eval(-0.1).is_err());
        assert!(KnotVector::new(vec![0., 0., 0.5, 1., 1., 1.], 2).is_err());
        assert!(KnotVector::new(vec![0., 0., 0., 0.5, 0.5, 0.5, 1., 1., 1.], 2).is_err());
    }

    #[test]
    fn second_derivatives_match_fd() {
        let kv = KnotVector::new(vec![0., 0., 0., 0., 0.3, 0.7, 1., 1., 1., 1.], 3).unwrap();
        let u = 0.41;
        let s = kv.find_span(u).unwrap();
        let d = kv.ders_basis_funs(s, u, 2);
        let h = 1e-5;
        let dp = kv.ders_basis_funs(s, u + h, 1);
        let dm = kv.ders_basis_funs(s, u - h, 1);
        for k in 0..4 {
            let fd = (dp[1][k] - dm[1][k]) / (2.0 * h);
            assert!((fd - d[2][k]).abs() < 1e-5 * (1.0 + d[2][k].abs()));
        }
    }
}
