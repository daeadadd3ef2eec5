//! Quasi-static solution of the coupled layer/background/contact system.

pub mod energy;
pub mod linear;
pub mod newton;
pub mod problem;

pub use energy::energy_norm_error;
pub use linear::{linear_solve, TripletMatrix};
pub use newton::{solve_quasi_static, Solution, SolveReport, StepReport};
pub use problem::{Body, ContactSpec, Dirichlet, Load, LoadKind, Problem, Tolerances};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elasticity::{dead_traction, Kinematics, Material};
    use crate::mesh::{cartesian_grid, ElementKind};

    fn bar(kin: Kinematics, load: f64) -> Problem {
        let mesh = cartesian_grid(0., 2., 0., 1., 4, 2, ElementKind::Quad4).unwrap();
        let right = mesh.edge_set("right").to_vec();
        let f = dead_traction(&mesh, &right, 2, |_| [load, 0.0]).unwrap();
        let mut dirichlet = Vec::new();
        for &n in mesh.node_set("left") {
            dirichlet.push(Dirichlet { body: 0, node: n, component: 0, value: 0.0 });
        }
        let pin = mesh.select_nodes(|x| x[0] == 0.0 && x[1] == 0.0)[0];
        dirichlet.push(Dirichlet { body: 0, node: pin, component: 1, value: 0.0 });
        let body = Body::full("bar", mesh, Material::new(100.0, 0.0, kin).unwrap(), 0).unwrap();
        Problem {
            bodies: vec![body],
            loads: vec![Load { body: 0, kind: LoadKind::Dead(f) }],
            dirichlet,
            coupling: None,
            contact: None,
            load_steps: 2,
            tolerances: None,
        }
    }

    #[test]
    fn zero_load_is_trivial() {
        let s = solve_quasi_static(&bar(Kinematics::Finite, 0.0)).unwrap();
        assert!(s.u.iter().all(|v| *v == 0.0));
        assert!(s.report.steps.iter().all(|st| st.iterations == 1));
    }

    #[test]
    fn uniaxial_bar() {
        let p = bar(Kinematics::Linear, 1.0);
        let s = solve_quasi_static(&p).unwrap();
        let m = &p.bodies[0].mesh;
        for (n, x) in m.nodes.iter().enumerate() {
            assert!((s.u[2 * n] - x[0] / 100.0).abs() < 1e-12);
            assert!(s.u[2 * n + 1].abs() < 1e-12);
        }
        // SVK uniaxial: S = E (λ + λ²/2 - ... ) with ν = 0 gives P = E(λ³ - λ)/2 per unit reference area
        let p = bar(Kinematics::Finite, 10.0);
        let s = solve_quasi_static(&p).unwrap();
        let n = m.select_nodes(|x| x[0] == 2.0 && x[1] == 0.0)[0];
        let stretch = 1.0 + s.u[2 * n] / 2.0;
        assert!((100.0 * (stretch.powi(3) - stretch) / 2.0 - 10.0).abs() < 1e-8);
        let it = s.report.steps[1].iterations;
        assert!(it <= 6, "Newton iterations {it}");
        let e = energy_norm_error(&p.bodies, &s.u, &p.bodies, &s.u).unwrap();
        assert!(e.absolute < 1e-12 * e.reference_norm);
        assert!(e.reference_norm > 0.0 && e.fallbacks == 0);
    }

    #[test]
    fn deterministic() {
        let p = bar(Kinematics::Finite, 5.0);
        let a = solve_quasi_static(&p).unwrap();
        let b = solve_quasi_static(&p).unwrap();
        assert_eq!(a.u, b.u);
    }
}
