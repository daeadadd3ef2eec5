//! Direct sparse solves (faer LU with partial pivoting).

use crate::error::{Error, Result};
use faer::prelude::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;

/// Coordinate-format accumulator; duplicate entries are summed.
#[derive(Clone, Debug, Default)]
pub struct TripletMatrix {
    pub n: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl TripletMatrix {
    pub fn new(n: usize) -> Self {
        Self { n, entries: Vec::new() }
    }

    #[inline]
    pub fn add(&mut self, r: usize, c: usize, v: f64) {
        if v != 0.0 {
            self.entries.push((r, c, v));
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    /// Dense copy (tests and small oracles only).
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for &(r, c, v) in &self.entries {
            d[r][c] += v;
        }
        d
    }
}

/// Solve A x = b by sparse LU; fails on singular or non-finite results.
pub fn linear_solve(a: &TripletMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.n;
    if b.len() != n {
        return Err(Error::Solver("right-hand side length mismatch".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let trip: Vec<Triplet<usize, usize, f64>> = a.entries.iter().map(|&(r, c, v)| Triplet::new(r, c, v)).collect();
    let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &trip)
        .map_err(|e| Error::Solver(format!("sparse assembly failed: {e:?}")))?;
    // faer panics on an exactly zero pivot; report it as a singular system
    let lu = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| mat.sp_lu()))
        .map_err(|_| Error::Solver("singular matrix: zero pivot".into()))?
        .map_err(|e| Error::Solver(format!("sparse LU failed: {e:?}")))?;
    let rhs = Mat::from_fn(n, 1, |i, _| b[i]);
    let x = lu.solve(&rhs);
    let out: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Solver("singular matrix: non-finite solution".into()));
    }
    // one step of iterative refinement guards against mild pivot growth
    let r: Vec<f64> = a.mul_vec(&out).iter().zip(b).map(|(ax, b)| b - ax).collect();
    let bn = b.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let rn = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    if rn > 1e-14 * bn {
        let rr = Mat::from_fn(n, 1, |i, _| r[i]);
        let dx = lu.solve(&rr);
        let refined: Vec<f64> = (0..n).map(|i| out[i] + dx[(i, 0)]).collect();
        let r2: f64 = a.mul_vec(&refined).iter().zip(b).map(|(ax, b)| (b - ax).powi(2)).sum::<f64>().sqrt();
        if r2 < rn {
            return check(refined, r2, bn);
        }
    }
    check(out, rn, bn)
}

fn check(x: Vec<f64>, rn: f64, bn: f64) -> Result<Vec<f64>> {
    if rn > 1e-6 * bn {
        return Err(Error::Solver(format!("singular matrix: relative residual {:.3e}", rn / bn)));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_bar() {
        let mut a = TripletMatrix::new(3);
        for i in 0..3 {
            a.add(i, i, 1.0);
        }
        assert_eq!(linear_solve(&a, &[1., 2., 3.]).unwrap(), vec![1., 2., 3.]);
        // two-element bar, EA/L = 1, fixed at node 0, load 1 at node 2
        let mut k = TripletMatrix::new(3);
        k.add(0, 0, 1.0);
        for (i, j) in [(1, 2)] {
            k.add(i, i, 1.0);
            k.add(j, j, 1.0);
            k.add(i, j, -1.0);
            k.add(j, i, -1.0);
        }
        k.add(1, 1, 1.0);
        let x = linear_solve(&k, &[0., 0., 1.]).unwrap();
        assert!((x[1] - 1.0).abs() < 1e-14 && (x[2] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn dense_oracle() {
        let n = 60;
        let mut a = TripletMatrix::new(n);
        let mut dense = nalgebra::DMatrix::zeros(n, n);
        let mut s = 1u64;
        let mut rnd = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for i in 0..n {
            for j in i..n.min(i + 5) {
                let v = rnd();
                a.add(i, j, v);
                dense[(i, j)] += v;
                if i != j {
                    a.add(j, i, v);
                    dense[(j, i)] += v;
                }
            }
            a.add(i, i, 4.0);
            dense[(i, i)] += 4.0;
        }
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = linear_solve(&a, &b).unwrap();
        let xd = dense.lu().solve(&nalgebra::DVector::from_vec(b)).unwrap();
        for i in 0..n {
            assert!((x[i] - xd[i]).abs() < 1e-12);
        }
        let mut sing = TripletMatrix::new(2);
        sing.add(0, 0, 1.0);
        sing.add(0, 1, 1.0);
        sing.add(1, 0, 1.0);
        sing.add(1, 1, 1.0);
        assert!(linear_solve(&sing, &[1.0, 0.0]).is_err());
    }
}
