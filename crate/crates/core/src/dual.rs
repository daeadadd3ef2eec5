//! Forward-mode dual numbers with a fixed number of directional components.
//!
//! Used to linearize the contact integrals with respect to slave displacements.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Dual {
    pub re: f64,
    pub eps: Vec<f64>,
}

impl Dual {
    pub fn constant(re: f64, n: usize) -> Self {
        Self { re, eps: vec![0.0; n] }
    }

    pub fn variable(re: f64, n: usize, k: usize) -> Self {
        let mut eps = vec![0.0; n];
        eps[k] = 1.0;
        Self { re, eps }
    }

    pub fn n(&self) -> usize {
        self.eps.len()
    }

    fn map(&self, f: f64, df: f64) -> Self {
        Self { re: f, eps: self.eps.iter().map(|e| e * df).collect() }
    }

    pub fn sqrt(&self) -> Self {
        let s = self.re.sqrt();
        self.map(s, 0.5 / s)
    }

    pub fn powi(&self, k: i32) -> Self {
        self.map(self.re.powi(k), k as f64 * self.re.powi(k - 1))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { re: self.re * s, eps: self.eps.iter().map(|e| e * s).collect() }
    }

    pub fn add_f(&self, s: f64) -> Self {
        Self { re: self.re + s, eps: self.eps.clone() }
    }
}

impl Add for &Dual {
    type Output = Dual;
    fn add(self, o: &Dual) -> Dual {
        Dual { re: self.re + o.re, eps: self.eps.iter().zip(&o.eps).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Dual {
    type Output = Dual;
    fn sub(self, o: &Dual) -> Dual {
        Dual { re: self.re - o.re, eps: self.eps.iter().zip(&o.eps).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &Dual {
    type Output = Dual;
    fn mul(self, o: &Dual) -> Dual {
        Dual {
            re: self.re * o.re,
            eps: self.eps.iter().zip(&o.eps).map(|(a, b)| a * o.re + self.re * b).collect(),
        }
    }
}

impl Div for &Dual {
    type Output = Dual;
    fn div(self, o: &Dual) -> Dual {
        let inv = 1.0 / o.re;
        let q = self.re * inv;
        Dual { re: q, eps: self.eps.iter().zip(&o.eps).map(|(a, b)| (a - q * b) * inv).collect() }
    }
}

impl Neg for &Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        self.scale(-1.0)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Dual {
            type Output = Dual;
            fn $f(self, o: Dual) -> Dual { (&self).$f(&o) }
        }
        impl $tr<&Dual> for Dual {
            type Output = Dual;
            fn $f(self, o: &Dual) -> Dual { (&self).$f(o) }
        }
        impl $tr<Dual> for &Dual {
            type Output = Dual;
            fn $f(self, o: Dual) -> Dual { self.$f(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_rule() {
        let x = Dual::variable(2.0, 2, 0);
        let y = Dual::variable(3.0, 2, 1);
        let f = (&x * &y + x.powi(2)) / y.sqrt();
        // f = (xy + x^2)/sqrt(y)
        let df_dx = (3.0 + 4.0) / 3f64.sqrt();
        let df_dy = 2.0 / 3f64.sqrt() - 0.5 * (6.0 + 4.0) * 3f64.powf(-1.5);
        assert!((f.eps[0] - df_dx).abs() < 1e-14);
        assert!((f.eps[1] - df_dy).abs() < 1e-14);
    }
}
