//! Legacy ASCII VTK output; NURBS elements are tessellated into sub-quads.

use super::{ElementKind, Mesh};
use crate::error::Result;
use std::fmt::Write;

/// Field sampled per output point: receives (element, local coords, basis node ids, values).
pub struct PointField<'a> {
    pub name: &'a str,
    /// Nodal values, `ncomp` per mesh node.
    pub nodal: &'a [f64],
    pub ncomp: usize,
}

/// Per-element values, `ncomp` per element; NURBS sub-quads repeat their element's value.
pub struct CellField<'a> {
    pub name: &'a str,
    pub values: &'a [f64],
    pub ncomp: usize,
}

/// Write the mesh with nodal fields interpolated to the output points.
pub fn format_vtk(mesh: &Mesh, fields: &[PointField], nurbs_subdiv: usize) -> Result<String> {
    format_vtk_cells(mesh, fields, &[], None, nurbs_subdiv)
}

/// As [`format_vtk`], with cell fields and an optional element mask.
pub fn format_vtk_cells(
    mesh: &Mesh,
    fields: &[PointField],
    cell_fields: &[CellField],
    include: Option<&[bool]>,
    nurbs_subdiv: usize,
) -> Result<String> {
    let mut pts: Vec<[f64; 2]> = Vec::new();
    let mut vals: Vec<Vec<f64>> = vec![Vec::new(); fields.len()];
    let mut cells: Vec<(u8, Vec<usize>)> = Vec::new();
    let mut owner: Vec<usize> = Vec::new();
    let push_node = |pts: &mut Vec<[f64; 2]>, vals: &mut Vec<Vec<f64>>, x: [f64; 2], basis: &[(usize, f64)]| {
        for (f, v) in fields.iter().zip(vals.iter_mut()) {
            for c in 0..f.ncomp {
                v.push(basis.iter().map(|&(n, w)| w * f.nodal[n * f.ncomp + c]).sum());
            }
        }
        pts.push(x);
        pts.len() - 1
    };
    for (e, el) in mesh.elements.iter().enumerate() {
        if include.is_some_and(|m| !m[e]) {
            continue;
        }
        let first = cells.len();
        match el.kind {
            ElementKind::Nurbs => {
                let cell = el.nurbs.as_ref().expect("nurbs element without cell");
                let patch = &mesh.patches[cell.patch];
                let s = nurbs_subdiv.max(1);
                let mut grid = vec![0usize; (s + 1) * (s + 1)];
                for j in 0..=s {
                    for i in 0..=s {
                        let (a0, b0) = cell.bounds[0];
                        let (a1, b1) = cell.bounds[1];
                        let u = [a0 + (b0 - a0) * i as f64 / s as f64, a1 + (b1 - a1) * j as f64 / s as f64];
                        let rb = patch.rational_basis_in_span(&u, &cell.spans)?;
                        let mut x = [0.0; 2];
                        let basis: Vec<(usize, f64)> =
                            el.nodes.iter().zip(&rb.values).map(|(&n, &w)| (n, w)).collect();
                        for &(n, w) in &basis {
                            x[0] += w * mesh.nodes[n][0];
                            x[1] += w * mesh.nodes[n][1];
                        }
                        grid[i + (s + 1) * j] = push_node(&mut pts, &mut vals, x, &basis);
                    }
                }
                for j in 0..s {
                    for i in 0..s {
                        let c = |a: usize, b: usize| grid[a + (s + 1) * b];
                        cells.push((9, vec![c(i, j), c(i + 1, j), c(i + 1, j + 1), c(i, j + 1)]));
                    }
                }
            }
            kind => {
                let ids: Vec<usize> = el
                    .nodes
                    .iter()
                    .map(|&n| push_node(&mut pts, &mut vals, mesh.nodes[n], &[(n, 1.0)]))
                    .collect();
                let t = match kind {
                    ElementKind::Quad4 => 9,
                    ElementKind::Quad8 => 23,
                    _ => 5,
                };
                cells.push((t, ids));
            }
        }
        owner.extend(std::iter::repeat(e).take(cells.len() - first));
    }
    let mut s = String::from("# vtk DataFile Version 3.0\nblayer\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {} double", pts.len());
    for p in &pts {
        let _ = writeln!(s, "{:?} {:?} 0", p[0], p[1]);
    }
    let size: usize = cells.iter().map(|c| c.1.len() + 1).sum();
    let _ = writeln!(s, "CELLS {} {}", cells.len(), size);
    for (_, ids) in &cells {
        let v: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(s, "{} {}", ids.len(), v.join(" "));
    }
    let _ = writeln!(s, "CELL_TYPES {}", cells.len());
    for (t, _) in &cells {
        let _ = writeln!(s, "{t}");
    }
    if !fields.is_empty() {
        let _ = writeln!(s, "POINT_DATA {}", pts.len());
        for (f, v) in fields.iter().zip(&vals) {
            let nc = if f.ncomp == 2 { 3 } else { f.ncomp };
            let _ = writeln!(s, "SCALARS {} double {}\nLOOKUP_TABLE default", f.name, nc);
            for row in v.chunks(f.ncomp) {
                let mut r: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
                if f.ncomp == 2 {
                    r.push("0".into());
                }
                let _ = writeln!(s, "{}", r.join(" "));
            }
        }
    }
    if !cell_fields.is_empty() {
        let _ = writeln!(s, "CELL_DATA {}", cells.len());
        for f in cell_fields {
            let _ = writeln!(s, "SCALARS {} double {}\nLOOKUP_TABLE default", f.name, f.ncomp);
            for &e in &owner {
                let r: Vec<String> = f.values[e * f.ncomp..(e + 1) * f.ncomp].iter().map(|x| format!("{x:?}")).collect();
                let _ = writeln!(s, "{}", r.join(" "));
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::cartesian_grid;

    #[test]
    fn writes_counts() {
        let m = cartesian_grid(0., 1., 0., 1., 2, 1, ElementKind::Quad4).unwrap();
        let u: Vec<f64> = m.nodes.iter().flat_map(|p| [p[0], 0.0]).collect();
        let s = format_vtk(&m, &[PointField { name: "u", nodal: &u, ncomp: 2 }], 2).unwrap();
        assert!(s.contains("CELLS 2 10"));
        assert!(s.contains("POINT_DATA 8"));
        let sig = [1.0, 2.0];
        let s = format_vtk_cells(&m, &[], &[CellField { name: "s", values: &sig, ncomp: 1 }], Some(&[false, true]), 2).unwrap();
        assert!(s.contains("CELLS 1 5") && s.contains("CELL_DATA 1\nSCALARS s double 1\nLOOKUP_TABLE default\n2.0"));
    }
}
