//! Minor models: width-bounded partitions into connected branch sets,
//! contraction, and lifting subgraphs of the quotient back to the host.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Branch sets over a host graph. Vertices of the host outside every branch
/// set are treated as singletons by `contract`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorModel {
    pub branch_sets: Vec<Vec<u32>>,
    pub width: usize,
}

impl MinorModel {
    pub fn new(mut branch_sets: Vec<Vec<u32>>, width: usize) -> Self {
        for s in &mut branch_sets {
            s.sort_unstable();
            s.dedup();
        }
        branch_sets.sort_by_key(|s| s.first().copied());
        MinorModel { branch_sets, width }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelCheck {
    Ok,
    Violation(String),
}

fn connected_in(g: &Graph, set: &[u32]) -> bool {
    if set.is_empty() {
        return false;
    }
    let members: BTreeSet<u32> = set.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut stack = vec![set[0]];
    seen.insert(set[0]);
    while let Some(u) = stack.pop() {
        for v in g.neighbors(u) {
            if members.contains(&v) && seen.insert(v) {
                stack.push(v);
            }
        }
    }
    seen.len() == members.len()
}

/// Checks disjointness, connectivity, and the width bound; names the first
/// failing branch set.
pub fn validate_model(g: &Graph, model: &MinorModel) -> ModelCheck {
    let mut used: BTreeSet<u32> = BTreeSet::new();
    for (i, set) in model.branch_sets.iter().enumerate() {
        if set.is_empty() {
            return ModelCheck::Violation(format!("branch set {i}: empty"));
        }
        for &v in set {
            if g.check_vertex(v).is_err() {
                return ModelCheck::Violation(format!("branch set {i}: vertex {v} out of range"));
            }
            if !used.insert(v) {
                return ModelCheck::Violation(format!("branch set {i}: disjointness (vertex {v})"));
            }
        }
        if set.len() > model.width {
            return ModelCheck::Violation(format!("branch set {i}: width ({} > {})", set.len(), model.width));
        }
        if !connected_in(g, set) {
            return ModelCheck::Violation(format!("branch set {i}: connectivity"));
        }
    }
    ModelCheck::Ok
}

/// A materialized contraction. Branch set `i` becomes quotient vertex `i`;
/// host vertices outside every branch set follow in ascending order.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub quotient: Graph,
    /// host vertex -> quotient vertex
    pub class_of: Vec<u32>,
    /// quotient vertex -> host vertices, ascending
    pub classes: Vec<Vec<u32>>,
}

/// Contracts each branch set to a single vertex, keeps every uncovered host
/// vertex as a singleton, drops loops, and collapses parallel edges.
pub fn contract(g: &Graph, model: &MinorModel) -> Result<Contraction> {
    if let ModelCheck::Violation(why) = validate_model(g, model) {
        return Err(Error::InvalidModel(why));
    }
    let mut class_of: Vec<u32> = vec![u32::MAX; g.n()];
    let mut classes: Vec<Vec<u32>> = Vec::new();
    for (i, set) in model.branch_sets.iter().enumerate() {
        for &v in set {
            class_of[v as usize] = i as u32;
        }
        classes.push(set.clone());
    }
    for v in g.vertices() {
        if class_of[v as usize] == u32::MAX {
            class_of[v as usize] = classes.len() as u32;
            classes.push(vec![v]);
        }
    }
    let mut quotient = Graph::new(classes.len());
    for (u, v) in g.edges() {
        let cu = class_of[u as usize];
        let cv = class_of[v as usize];
        if cu != cv {
            quotient.add_edge(cu, cv)?;
        }
    }
    Ok(Contraction {
        quotient,
        class_of,
        classes,
    })
}

/// A subgraph of the host given by explicit vertices and edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedSubgraph {
    pub vertices: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
}

fn spanning_tree_edges(g: &Graph, set: &[u32]) -> Vec<(u32, u32)> {
    let members: BTreeSet<u32> = set.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(set[0]);
    seen.insert(set[0]);
    while let Some(u) = queue.pop_front() {
        for v in g.neighbors(u) {
            if members.contains(&v) && seen.insert(v) {
                out.push((u.min(v), u.max(v)));
                queue.push_back(v);
            }
        }
    }
    out
}

/// Lifts a subgraph `H'` of the quotient back into the host: the union of
/// the classes of `V(H')`, a spanning tree inside each class, and one
/// witnessing host edge per edge of `H'`. Guarantees
/// `v(H) <= width * v(H')` and `e(H) >= e(H')`.
pub fn lift_subgraph(
    g: &Graph,
    con: &Contraction,
    h_vertices: &[u32],
    h_edges: &[(u32, u32)],
) -> Result<LiftedSubgraph> {
    let nq = con.quotient.n() as u32;
    let mut verts: BTreeSet<u32> = BTreeSet::new();
    for &q in h_vertices {
        if q >= nq {
            return Err(Error::InvalidModel(format!("quotient vertex {q} unknown")));
        }
        verts.extend(con.classes[q as usize].iter().copied());
    }
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    for &q in h_vertices {
        let class = &con.classes[q as usize];
        for e in spanning_tree_edges(g, class) {
            edges.insert(e);
        }
    }
    for &(p, q) in h_edges {
        if p >= nq || q >= nq {
            return Err(Error::InvalidModel(format!("quotient edge ({p},{q}) unknown")));
        }
        if !con.quotient.has_edge(p, q) {
            return Err(Error::InvalidModel(format!("({p},{q}) is not a quotient edge")));
        }
        // first host edge between the classes, lexicographically
        let mut found = None;
        'outer: for &u in &con.classes[p as usize] {
            for v in g.neighbors(u) {
                if con.class_of[v as usize] == q {
                    found = Some((u.min(v), u.max(v)));
                    break 'outer;
                }
            }
        }
        let e = found.ok_or_else(|| {
            Error::InvalidModel(format!("no host edge witnesses quotient edge ({p},{q})"))
        })?;
        edges.insert(e);
    }
    Ok(LiftedSubgraph {
        vertices: verts.into_iter().collect(),
        edges: edges.into_iter().collect(),
    })
}

/// Lift of the induced quotient subgraph on `h_vertices`.
pub fn lift_induced(g: &Graph, con: &Contraction, h_vertices: &[u32]) -> Result<LiftedSubgraph> {
    let set: BTreeSet<u32> = h_vertices.iter().copied().collect();
    let mut h_edges = Vec::new();
    for &p in &set {
        if p >= con.quotient.n() as u32 {
            return Err(Error::InvalidModel(format!("quotient vertex {p} unknown")));
        }
        for q in con.quotient.neighbors(p) {
            if q > p && set.contains(&q) {
                h_edges.push((p, q));
            }
        }
    }
    lift_subgraph(g, con, h_vertices, &h_edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n as u32 {
            g.add_edge(u, (u + 1) % n as u32).unwrap();
        }
        g
    }

    #[test]
    fn contract_triangle_edge() {
        let mut g = Graph::new(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g.add_edge(0, 2).unwrap();
        let model = MinorModel::new(vec![vec![0, 1]], 2);
        let c = contract(&g, &model).unwrap();
        assert_eq!(c.quotient.n(), 2);
        assert_eq!(c.quotient.e(), 1);
    }

    #[test]
    fn contract_c4_to_k2() {
        let g = cycle(4);
        let model = MinorModel::new(vec![vec![0, 1], vec![2, 3]], 2);
        let c = contract(&g, &model).unwrap();
        assert_eq!(c.quotient.n(), 2);
        assert_eq!(c.quotient.e(), 1);
    }

    #[test]
    fn contract_nothing_is_identity() {
        let g = cycle(5);
        let c = contract(&g, &MinorModel::new(vec![], 1)).unwrap();
        assert_eq!(c.quotient.n(), 5);
        assert_eq!(c.quotient.edges(), g.edges());
    }

    #[test]
    fn validate_violations() {
        let g = cycle(4);
        let overlapping = MinorModel::new(vec![vec![0, 1], vec![1, 2]], 2);
        match validate_model(&g, &overlapping) {
            ModelCheck::Violation(s) => assert!(s.contains("disjointness"), "{s}"),
            _ => panic!(),
        }
        let mut p3 = Graph::new(3);
        p3.add_edge(0, 1).unwrap();
        p3.add_edge(1, 2).unwrap();
        let disconnected = MinorModel::new(vec![vec![0, 2]], 2);
        match validate_model(&p3, &disconnected) {
            ModelCheck::Violation(s) => assert!(s.contains("connectivity"), "{s}"),
            _ => panic!(),
        }
        let singletons = MinorModel::new(vec![vec![0], vec![1], vec![2]], 1);
        assert_eq!(validate_model(&p3, &singletons), ModelCheck::Ok);
        let wide = MinorModel::new(vec![vec![0, 1]], 1);
        match validate_model(&p3, &wide) {
            ModelCheck::Violation(s) => assert!(s.contains("width"), "{s}"),
            _ => panic!(),
        }
    }

    #[test]
    fn lift_width_one_is_identity() {
        let g = cycle(5);
        let con = contract(&g, &MinorModel::new(vec![], 1)).unwrap();
        let lifted = lift_induced(&g, &con, &[0, 1, 2]).unwrap();
        assert_eq!(lifted.vertices, vec![0, 1, 2]);
        assert_eq!(lifted.edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn lift_c4_pairs() {
        let g = cycle(4);
        let con = contract(&g, &MinorModel::new(vec![vec![0, 1], vec![2, 3]], 2)).unwrap();
        let lifted = lift_induced(&g, &con, &[0, 1]).unwrap();
        assert_eq!(lifted.vertices, vec![0, 1, 2, 3]);
        // one spanning edge per class plus one crossing witness
        assert_eq!(lifted.edges.len(), 3);
        assert!(lifted.edges.contains(&(0, 1)));
        assert!(lifted.edges.contains(&(2, 3)));
    }

    #[test]
    fn lift_single_class() {
        let mut g = Graph::new(4);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g.add_edge(2, 3).unwrap();
        let con = contract(&g, &MinorModel::new(vec![vec![0, 1, 2]], 3)).unwrap();
        let lifted = lift_induced(&g, &con, &[0]).unwrap();
        assert_eq!(lifted.vertices, vec![0, 1, 2]);
        assert_eq!(lifted.edges.len(), 2);
    }
}
