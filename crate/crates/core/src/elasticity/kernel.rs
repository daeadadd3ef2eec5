//! St. Venant–Kirchhoff plane-strain kernels (total Lagrangian) and small-strain mode.

use super::shape::{element_geometry, physical_gradients};
use crate::cutcell::QuadPoint;
use crate::error::{geometry, Error, Result};
use crate::mesh::Mesh;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kinematics {
    Linear,
    Finite,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Material {
    #[serde(rename = "E")]
    pub e: f64,
    pub nu: f64,
    pub kinematics: Kinematics,
}

impl Material {
    pub fn new(e: f64, nu: f64, kinematics: Kinematics) -> Result<Self> {
        let m = Self { e, nu, kinematics };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e > 0.0) || !(self.nu > -1.0 && self.nu < 0.5) {
            return Err(Error::Config(format!("invalid material E={} nu={}", self.e, self.nu)));
        }
        Ok(())
    }

    /// Plane-strain Lamé constants (λ, μ).
    pub fn lame(&self) -> (f64, f64) {
        let (e, nu) = (self.e, self.nu);
        (e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), e / (2.0 * (1.0 + nu)))
    }

    /// Voigt constitutive matrix for [E11, E22, 2 E12].
    pub fn tangent(&self) -> [[f64; 3]; 3] {
        let (l, m) = self.lame();
        [[l + 2.0 * m, l, 0.0], [l, l + 2.0 * m, 0.0], [0.0, 0.0, m]]
    }
}

/// S = λ tr(E) I + 2μ E; strain in Voigt form [E11, E22, 2 E12], stress [S11, S22, S12].
pub fn svk_stress_tangent(egl: [f64; 3], mat: &Material) -> ([f64; 3], [[f64; 3]; 3]) {
    let c = mat.tangent();
    let mut s = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            s[i] += c[i][j] * egl[j];
        }
    }
    (s, c)
}

/// Deformation gradient from physical gradients and element displacements.
pub fn deformation_gradient(dn: &[[f64; 2]], ue: &[f64]) -> [[f64; 2]; 2] {
    let mut f = [[1.0, 0.0], [0.0, 1.0]];
    for (a, g) in dn.iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                f[i][j] += ue[2 * a + i] * g[j];
            }
        }
    }
    f
}

fn strain(f: &[[f64; 2]; 2], kin: Kinematics) -> [f64; 3] {
    match kin {
        Kinematics::Finite => {
            let c11 = f[0][0] * f[0][0] + f[1][0] * f[1][0];
            let c22 = f[0][1] * f[0][1] + f[1][1] * f[1][1];
            let c12 = f[0][0] * f[0][1] + f[1][0] * f[1][1];
            [0.5 * (c11 - 1.0), 0.5 * (c22 - 1.0), c12]
        }
        Kinematics::Linear => [f[0][0] - 1.0, f[1][1] - 1.0, f[0][1] + f[1][0]],
    }
}

/// Internal force and dense tangent (row-major, 2·n_nodes square) of one element.
pub fn element_force_stiffness(mesh: &Mesh, e: usize, points: &[QuadPoint], ue: &[f64], mat: &Material) -> Result<(Vec<f64>, Vec<f64>)> {
    let nn = mesh.elements[e].nodes.len();
    let nd = 2 * nn;
    if ue.len() != nd {
        return geometry("element displacement length mismatch");
    }
    let mut f = vec![0.0; nd];
    let mut k = vec![0.0; nd * nd];
    let mut b = vec![[0.0; 3]; nd];
    for qp in points {
        let g = element_geometry(mesh, e, qp.xi)?;
        if g.det <= 0.0 {
            return geometry(format!("non-positive Jacobian in element {e}"));
        }
        let dn = physical_gradients(&g);
        let fg = deformation_gradient(&dn, ue);
        let (s, c) = svk_stress_tangent(strain(&fg, mat.kinematics), mat);
        let fb = if mat.kinematics == Kinematics::Finite { fg } else { [[1.0, 0.0], [0.0, 1.0]] };
        for (a, d) in dn.iter().enumerate() {
            for i in 0..2 {
                b[2 * a + i] = [fb[i][0] * d[0], fb[i][1] * d[1], fb[i][0] * d[1] + fb[i][1] * d[0]];
            }
        }
        let w = qp.weight;
        let mut cb = vec![[0.0; 3]; nd];
        for p in 0..nd {
            for r in 0..3 {
                cb[p][r] = (0..3).map(|q| c[r][q] * b[p][q]).sum();
            }
            f[p] += w * (0..3).map(|r| b[p][r] * s[r]).sum::<f64>();
        }
        for p in 0..nd {
            for q in 0..nd {
                k[p * nd + q] += w * (0..3).map(|r| b[p][r] * cb[q][r]).sum::<f64>();
            }
        }
        if mat.kinematics == Kinematics::Finite {
            for a in 0..nn {
                for bb in 0..nn {
                    let (da, db) = (dn[a], dn[bb]);
                    let gsc = da[0] * (s[0] * db[0] + s[2] * db[1]) + da[1] * (s[2] * db[0] + s[1] * db[1]);
                    for i in 0..2 {
                        k[(2 * a + i) * nd + 2 * bb + i] += w * gsc;
                    }
                }
            }
        }
    }
    Ok((f, k))
}

/// Cauchy stress [σxx, σyy, σxy] at local coordinates (equals S in linear mode).
pub fn cauchy_stress(mesh: &Mesh, e: usize, xi: [f64; 2], ue: &[f64], mat: &Material) -> Result<[f64; 3]> {
    let g = element_geometry(mesh, e, xi)?;
    let dn = physical_gradients(&g);
    let f = deformation_gradient(&dn, ue);
    let (s, _) = svk_stress_tangent(strain(&f, mat.kinematics), mat);
    if mat.kinematics == Kinematics::Linear {
        return Ok(s);
    }
    let sm = [[s[0], s[2]], [s[2], s[1]]];
    let j = f[0][0] * f[1][1] - f[0][1] * f[1][0];
    let mut sig = [[0.0; 2]; 2];
    for i in 0..2 {
        for l in 0..2 {
            for a in 0..2 {
                for bb in 0..2 {
                    sig[i][l] += f[i][a] * sm[a][bb] * f[l][bb] / j;
                }
            }
        }
    }
    Ok([sig[0][0], sig[1][1], sig[0][1]])
}
