use super::Mesh;
use crate::geom::dist;

/// Collapse nodes closer than `tol`; unused nodes are kept but unreferenced.
pub fn merge_conforming_nodes(mesh: &Mesh, tol: f64) -> Mesh {
    let n = mesh.nodes.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| mesh.nodes[a][0].total_cmp(&mesh.nodes[b][0]));
    let mut rep: Vec<usize> = (0..n).collect();
    for (k, &a) in order.iter().enumerate() {
        if rep[a] != a {
            continue;
        }
        for &b in &order[k + 1..] {
            if mesh.nodes[b][0] - mesh.nodes[a][0] > tol {
                break;
            }
            if rep[b] == b && dist(mesh.nodes[a], mesh.nodes[b]) <= tol {
                rep[b] = a;
            }
        }
    }
    // Renumber kept nodes in original order.
    let mut new_id = vec![usize::MAX; n];
    let mut out = Mesh::default();
    for i in 0..n {
        if rep[i] == i {
            new_id[i] = out.nodes.len();
            out.nodes.push(mesh.nodes[i]);
        }
    }
    let map = |i: usize| new_id[rep[i]];
    out.elements = mesh
        .elements
        .iter()
        .map(|e| {
            let mut e = e.clone();
            e.nodes.iter_mut().for_each(|x| *x = map(*x));
            e
        })
        .collect();
    out.patches = mesh.patches.clone();
    out.patch_nodes = mesh.patch_nodes.iter().map(|v| v.iter().map(|&x| map(x)).collect()).collect();
    for (k, v) in &mesh.node_sets {
        let mut s: Vec<usize> = v.iter().map(|&x| map(x)).collect();
        s.sort_unstable();
        s.dedup();
        out.node_sets.insert(k.clone(), s);
    }
    out.edge_sets = mesh.edge_sets.clone();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{Element, ElementKind};

    #[test]
    fn merges_duplicates() {
        let mut m = Mesh::default();
        m.nodes = vec![[0., 0.], [1., 0.], [0., 1.], [1., 0.0 + 1e-14], [1., 1.], [0., 1.]];
        m.elements.push(Element { kind: ElementKind::Tri3, nodes: vec![0, 1, 2], nurbs: None });
        m.elements.push(Element { kind: ElementKind::Tri3, nodes: vec![3, 4, 5], nurbs: None });
        let r = merge_conforming_nodes(&m, 1e-10);
        assert_eq!(r.nodes.len(), 4);
        assert_eq!(r.elements[1].nodes, vec![1, 3, 2]);
    }
}
