//! Load-stepped Newton iteration with a primal-dual active set for contact.

use super::linear::{linear_solve, TripletMatrix};
use super::problem::Problem;
use crate::contact::{active_set_update, ContactState};
use crate::error::{Error, Result};
use crate::geom::V2;

#[derive(Clone, Debug, Default)]
pub struct StepReport {
    pub load_factor: f64,
    pub iterations: usize,
    pub residual_norms: Vec<f64>,
    pub active_counts: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct SolveReport {
    pub steps: Vec<StepReport>,
    pub success: bool,
}

#[derive(Clone, Debug)]
pub struct Solution {
    /// System displacements, 2 per node.
    pub u: Vec<f64>,
    /// Contact multipliers (tractions) per slave node.
    pub lambda: Vec<f64>,
    pub active: Vec<bool>,
    pub contact: Option<ContactState>,
    pub history: Vec<Vec<f64>>,
    pub report: SolveReport,
}

impl Solution {
    /// Contact traction profile: (anchor position, λ_q) sorted by x.
    pub fn traction_profile(&self) -> Vec<(V2, f64)> {
        let Some(st) = &self.contact else { return Vec::new() };
        let mut v: Vec<(V2, f64)> = st.anchors.iter().copied().zip(self.lambda.iter().copied()).collect();
        v.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]));
        v
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solve the quasi-static problem over `load_steps` equal load increments.
pub fn solve_quasi_static(problem: &Problem) -> Result<Solution> {
    let nn = problem.n_nodes();
    let nd = 2 * nn;
    let fext = problem.dead_load();
    let diag = problem.bodies.iter().map(|b| b.mesh.aabb().diagonal()).fold(0.0, f64::max);
    let tol = problem.tolerances.clone().unwrap_or(super::problem::Tolerances {
        residual: 1e-8 * norm(&fext).max(1.0),
        displacement: 1e-8 * diag,
        max_iterations: 50,
        max_active_set_changes: 10,
    });
    let free = problem.free_nodes();
    let mut fixed: Vec<Option<f64>> = vec![None; nd];
    for (n, &f) in free.iter().enumerate() {
        if !f {
            fixed[2 * n] = Some(0.0);
            fixed[2 * n + 1] = Some(0.0);
        }
    }
    for d in &problem.dirichlet {
        fixed[2 * (problem.bodies[d.body].offset + d.node) + d.component] = Some(d.value);
    }
    let mut u = vec![0.0; nd];
    let contact = problem.contact.as_ref();
    let n_lambda = match contact {
        Some(c) => {
            let b = &problem.bodies[c.body];
            c.pair.assemble(&b.mesh, b.slice(&u))?.nodes.len()
        }
        None => 0,
    };
    let mut lambda = vec![0.0; n_lambda];
    let mut active = vec![false; n_lambda];
    let mut report = SolveReport::default();
    let mut history = Vec::new();
    let mut last_state = None;
    let steps = problem.load_steps.max(1);
    for step in 1..=steps {
        let lf = step as f64 / steps as f64;
        let mut sr = StepReport { load_factor: lf, ..Default::default() };
        let mut changes = 0usize;
        let mut converged = false;
        let mut last_du = f64::INFINITY;
        for it in 0..=tol.max_iterations {
            let (mut r, mut k) = problem.assemble(&u, lf)?;
            let mut state = None;
            let mut new_active = active.clone();
            if let Some(c) = contact {
                let b = &problem.bodies[c.body];
                let st = c.pair.assemble(&b.mesh, b.slice(&u))?;
                new_active = if step == 1 && it == 0 {
                    let mut a: Vec<bool> = st.gap.iter().zip(&st.d).map(|(g, d)| *g <= 1e-10 * d * diag.max(1.0)).collect();
                    // Point contact at rest: seed with the closest multiplier node.
                    if !a.iter().any(|&x| x) {
                        if let Some(q) = (0..st.gap.len()).min_by(|&i, &j| (st.gap[i] / st.d[i]).total_cmp(&(st.gap[j] / st.d[j]))) {
                            a[q] = true;
                        }
                    }
                    a
                } else {
                    active_set_update(&st.gap, &st.d, &lambda, c.pair.c_n)
                };
                state = Some(st);
            }
            let set_changed = new_active != active;
            if set_changed && !(step == 1 && it == 0) {
                changes += 1;
                if changes > tol.max_active_set_changes {
                    return Err(Error::Solver(format!("active set oscillates in load step {step}")));
                }
            }
            active = new_active;
            // Contact contributions to the displacement rows.
            if let (Some(c), Some(st)) = (contact, &state) {
                let off = 2 * problem.bodies[c.body].offset;
                for q in 0..n_lambda {
                    for &(dof, v) in &st.force[q] {
                        r[off + dof] += lambda[q] * v;
                    }
                    for &(a, bb, v) in &st.force_lin[q] {
                        k.add(off + a, off + bb, lambda[q] * v);
                    }
                }
            }
            let mut rfree: Vec<f64> = r.iter().enumerate().filter(|(i, _)| fixed[*i].is_none()).map(|(_, v)| *v).collect();
            let mut ktot = TripletMatrix::new(nd + n_lambda);
            ktot.entries = k.entries.into_iter().filter(|e| fixed[e.0].is_none()).collect();
            let mut rhs: Vec<f64> = r.iter().map(|v| -v).collect();
            for (i, f) in fixed.iter().enumerate() {
                if let Some(val) = f {
                    ktot.add(i, i, 1.0);
                    rhs[i] = lf * val - u[i];
                }
            }
            rhs.resize(nd + n_lambda, 0.0);
            if let (Some(c), Some(st)) = (contact, &state) {
                let off = 2 * problem.bodies[c.body].offset;
                let cn = c.pair.c_n;
                for q in 0..n_lambda {
                    let row = nd + q;
                    for &(dof, v) in &st.force[q] {
                        if fixed[off + dof].is_none() {
                            ktot.add(off + dof, row, v);
                        }
                    }
                    if active[q] {
                        for &(dof, v) in &st.gap_lin[q] {
                            ktot.add(row, off + dof, cn * v);
                        }
                        rhs[row] = -cn * st.gap[q];
                        rfree.push(cn * st.gap[q]);
                    } else {
                        ktot.add(row, row, 1.0);
                        rhs[row] = -lambda[q];
                        rfree.push(lambda[q]);
                    }
                }
            }
            let rn = norm(&rfree);
            sr.residual_norms.push(rn);
            sr.active_counts.push(active.iter().filter(|&&a| a).count());
            let bc_ok = fixed.iter().enumerate().all(|(i, f)| f.map_or(true, |v| (lf * v - u[i]).abs() <= tol.displacement));
            if it > 0 && rn <= tol.residual && last_du <= tol.displacement && !set_changed && bc_ok {
                converged = true;
                last_state = state;
                sr.iterations = it;
                break;
            }
            if it == tol.max_iterations {
                break;
            }
            let du = linear_solve(&ktot, &rhs)?;
            for i in 0..nd {
                u[i] += du[i];
            }
            for q in 0..n_lambda {
                lambda[q] += du[nd + q];
            }
            last_du = norm(&du[..nd]);
            if !last_du.is_finite() {
                return Err(Error::Solver("non-finite Newton update".into()));
            }
            log::debug!("step {step} it {it}: |r| = {rn:.3e}, |du| = {last_du:.3e}");
        }
        report.steps.push(sr);
        if !converged {
            report.success = false;
            return Err(Error::Solver(format!("Newton did not converge in load step {step}")));
        }
        history.push(u.clone());
    }
    report.success = true;
    Ok(Solution { u, lambda, active, contact: last_state, history, report })
}
