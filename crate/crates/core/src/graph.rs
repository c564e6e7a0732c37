//! Simple undirected graphs over dense ids `0..n`, exact density, degree
//! classes, mates, and the small-dense-subgraph extraction.
//!
//! All scans run in ascending vertex id so that every result is reproducible
//! across platforms.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ratio::{ceil_usize, count_ge, ratio_usize, Ratio};

/// Simple undirected graph. Symmetric, irreflexive, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<u32>>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
            m: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn e(&self) -> usize {
        self.m
    }

    pub fn check_vertex(&self, v: u32) -> Result<()> {
        if (v as usize) < self.adj.len() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v))
        }
    }

    /// Adds an edge; returns false when it was already present.
    pub fn add_edge(&mut self, u: u32, v: u32) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let inserted = self.adj[u as usize].insert(v);
        if inserted {
            self.adj[v as usize].insert(u);
            self.m += 1;
        }
        Ok(inserted)
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        (u as usize) < self.adj.len() && self.adj[u as usize].contains(&v)
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[v as usize].iter().copied()
    }

    pub fn neighbor_set(&self, v: u32) -> &BTreeSet<u32> {
        &self.adj[v as usize]
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        0..self.adj.len() as u32
    }

    /// Edges as sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.m);
        for u in self.vertices() {
            for &v in &self.adj[u as usize] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn common_neighbors(&self, u: u32, v: u32) -> usize {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a as usize]
            .iter()
            .filter(|w| self.adj[b as usize].contains(w))
            .count()
    }

    /// Exact density e(G)/v(G).
    pub fn density(&self) -> Result<Ratio> {
        if self.adj.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(ratio_usize(self.m) / ratio_usize(self.adj.len()))
    }

    /// Induced subgraph on `verts` (deduplicated, sorted). Returns the compact
    /// graph plus the map from new id to old id.
    pub fn induced(&self, verts: &[u32]) -> Result<(Graph, Vec<u32>)> {
        let mut ids: Vec<u32> = verts.to_vec();
        ids.sort_unstable();
        ids.dedup();
        for &v in &ids {
            self.check_vertex(v)?;
        }
        let index = |v: u32| ids.binary_search(&v).ok().map(|i| i as u32);
        let mut g = Graph::new(ids.len());
        for (new_u, &old_u) in ids.iter().enumerate() {
            for &old_v in &self.adj[old_u as usize] {
                if old_v > old_u {
                    if let Some(new_v) = index(old_v) {
                        g.add_edge(new_u as u32, new_v)?;
                    }
                }
            }
        }
        Ok((g, ids))
    }

    /// Number of edges of the induced subgraph on `verts` without
    /// materializing it.
    pub fn induced_edge_count(&self, verts: &[u32]) -> usize {
        let set: BTreeSet<u32> = verts.iter().copied().collect();
        let mut e = 0;
        for &u in &set {
            for &v in &self.adj[u as usize] {
                if v > u && set.contains(&v) {
                    e += 1;
                }
            }
        }
        e
    }
}

/// Disjoint vertex classes `(A, B)` with `A ∪ B ⊆ V(G)`.
#[derive(Debug, Clone)]
pub struct Bipartition {
    a: Vec<u32>,
    b: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl Bipartition {
    pub fn new(mut a: Vec<u32>, mut b: Vec<u32>) -> Result<Self> {
        a.sort_unstable();
        a.dedup();
        b.sort_unstable();
        b.dedup();
        for x in &a {
            if b.binary_search(x).is_ok() {
                return Err(Error::BadParameter(format!("vertex {x} on both sides")));
            }
        }
        Ok(Bipartition { a, b })
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn b(&self) -> &[u32] {
        &self.b
    }

    pub fn side_of(&self, v: u32) -> Option<Side> {
        if self.a.binary_search(&v).is_ok() {
            Some(Side::A)
        } else if self.b.binary_search(&v).is_ok() {
            Some(Side::B)
        } else {
            None
        }
    }

    pub fn in_a(&self, v: u32) -> bool {
        self.a.binary_search(&v).is_ok()
    }

    pub fn in_b(&self, v: u32) -> bool {
        self.b.binary_search(&v).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeClass {
    Small,
    Big,
}

/// Small iff deg(v) <= K*d, by exact comparison.
pub fn degree_class(g: &Graph, v: u32, big_k: &Ratio, d: &Ratio) -> Result<DegreeClass> {
    g.check_vertex(v)?;
    let bound = big_k * d;
    if ratio_usize(g.degree(v)) <= bound {
        Ok(DegreeClass::Small)
    } else {
        Ok(DegreeClass::Big)
    }
}

pub fn is_small(g: &Graph, v: u32, big_k: &Ratio, d: &Ratio) -> bool {
    ratio_usize(g.degree(v)) <= big_k * d
}

/// True iff u and v share at least eps*d common neighbors.
pub fn are_mates(g: &Graph, u: u32, v: u32, eps: &Ratio, d: &Ratio) -> Result<bool> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(Error::BadParameter("mates require two distinct vertices".into()));
    }
    Ok(count_ge(g.common_neighbors(u, v), &(eps * d)))
}

/// All mates of `v`, ascending: vertices sharing >= eps*d common neighbors.
///
/// Computed by one pass over the distance-2 neighborhood; vertices with no
/// common neighbor can only be mates when eps*d <= 0, which the parameter
/// domain excludes.
pub fn mates_of(g: &Graph, v: u32, eps: &Ratio, d: &Ratio) -> Vec<u32> {
    let threshold = eps * d;
    let mut count: std::collections::BTreeMap<u32, usize> = std::collections::BTreeMap::new();
    for w in g.neighbors(v) {
        for u in g.neighbors(w) {
            if u != v {
                *count.entry(u).or_insert(0) += 1;
            }
        }
    }
    count
        .into_iter()
        .filter(|(_, c)| count_ge(*c, &threshold))
        .map(|(u, _)| u)
        .collect()
}

/// Witness that some (K,d)-small vertex has at least eps*d mates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MateWitness {
    pub v: u32,
    pub mates: Vec<u32>,
}

#[derive(Debug, Clone)]
pub enum Unmated {
    /// Every (K,d)-small vertex has strictly fewer than eps*d mates.
    Unmated,
    Witness(MateWitness),
}

/// Scans small vertices in ascending id and returns the first one whose mate
/// count reaches eps*d, or `Unmated` when none exists.
pub fn unmated_or_witness(g: &Graph, big_k: &Ratio, eps: &Ratio, d: &Ratio) -> Unmated {
    let threshold = eps * d;
    for v in g.vertices() {
        if !is_small(g, v, big_k, d) {
            continue;
        }
        let mates = mates_of(g, v, eps, d);
        if count_ge(mates.len(), &threshold) {
            return Unmated::Witness(MateWitness { v, mates });
        }
    }
    Unmated::Unmated
}

/// Checks a witness against (K, eps, d) and returns the vertex set of
/// `G[{v} ∪ N(v) ∪ {first ⌈eps*d⌉ mates}]`.
pub fn small_dense_from_witness(
    g: &Graph,
    w: &MateWitness,
    big_k: &Ratio,
    eps: &Ratio,
    d: &Ratio,
) -> Result<Vec<u32>> {
    g.check_vertex(w.v)?;
    if !is_small(g, w.v, big_k, d) {
        return Err(Error::InvalidWitness(format!("vertex {} is not small", w.v)));
    }
    let threshold = eps * d;
    if !count_ge(w.mates.len(), &threshold) {
        return Err(Error::InvalidWitness("too few mates".into()));
    }
    let need = ceil_usize(&threshold).max(1);
    let mut picked = 0usize;
    let mut set: BTreeSet<u32> = BTreeSet::new();
    set.insert(w.v);
    set.extend(g.neighbors(w.v));
    for &m in &w.mates {
        if m == w.v {
            return Err(Error::InvalidWitness("witness lists itself as a mate".into()));
        }
        if !count_ge(g.common_neighbors(w.v, m), &threshold) {
            return Err(Error::InvalidWitness(format!("{} is not a mate of {}", m, w.v)));
        }
        if picked < need {
            set.insert(m);
            picked += 1;
        }
    }
    if picked < need {
        return Err(Error::InvalidWitness("too few mates".into()));
    }
    Ok(set.into_iter().collect())
}

/// Peels minimum-degree vertices until every remaining vertex has degree
/// strictly above the running density. Returns the induced core and the map
/// from core id to input id.
///
/// Peeling removes the smallest-id vertex with deg <= e/v and recomputes the
/// density after every removal; density never decreases, so the result has
/// density >= d(G) and minimum degree > density(core) >= d(G).
pub fn dense_core(g: &Graph) -> Result<(Graph, Vec<u32>)> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if g.e() == 0 {
        return Err(Error::EdgelessGraph);
    }
    let mut alive: Vec<bool> = vec![true; g.n()];
    let mut deg: Vec<usize> = (0..g.n()).map(|v| g.degree(v as u32)).collect();
    let mut n_live = g.n();
    let mut e_live = g.e();
    loop {
        if n_live <= 1 {
            break;
        }
        // deg <= e/v  <=>  deg * v <= e, all in integers
        let mut peel: Option<u32> = None;
        for v in g.vertices() {
            if alive[v as usize] && deg[v as usize] * n_live <= e_live {
                peel = Some(v);
                break;
            }
        }
        match peel {
            None => break,
            Some(v) => {
                alive[v as usize] = false;
                n_live -= 1;
                e_live -= deg[v as usize];
                for w in g.neighbors(v) {
                    if alive[w as usize] {
                        deg[w as usize] -= 1;
                    }
                }
                deg[v as usize] = 0;
            }
        }
    }
    let keep: Vec<u32> = g.vertices().filter(|&v| alive[v as usize]).collect();
    g.induced(&keep)
}

/// Bundle of constants threading the pipeline.
#[derive(Debug, Clone)]
pub struct Params {
    pub k: usize,
    pub ell: usize,
    pub big_k: Ratio,
    pub eps: Ratio,
    pub d: Ratio,
}

impl Params {
    pub fn cleanliness(&self) -> Ratio {
        // c = 2*k*eps
        ratio_usize(2 * self.k) * &self.eps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{ratio, ratio_int};

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n as u32 {
            g.add_edge(u, (u + 1) % n as u32).unwrap();
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..(n as u32 - 1) {
            g.add_edge(u, u + 1).unwrap();
        }
        g
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut g = Graph::new(a + b);
        for u in 0..a as u32 {
            for v in a as u32..(a + b) as u32 {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    #[test]
    fn density_examples() {
        assert_eq!(complete(4).density().unwrap(), ratio(3, 2));
        assert_eq!(cycle(5).density().unwrap(), ratio_int(1));
        assert_eq!(path(2).density().unwrap(), ratio(1, 2));
        assert!(Graph::new(0).density().is_err());
    }

    #[test]
    fn dense_core_peels_pendant() {
        // triangle 0-1-2 plus pendant 3 attached to 0
        let mut g = complete(3);
        let mut big = Graph::new(4);
        for (u, v) in g.edges() {
            big.add_edge(u, v).unwrap();
        }
        big.add_edge(0, 3).unwrap();
        g = big;
        let (core, ids) = dense_core(&g).unwrap();
        assert_eq!(ids, vec![0, 1, 2]);
        assert_eq!(core.e(), 3);
        let d = core.density().unwrap();
        for v in core.vertices() {
            assert!(ratio_usize(core.degree(v)) > d);
        }
    }

    #[test]
    fn dense_core_fixed_points() {
        let g = complete(4);
        let (core, ids) = dense_core(&g).unwrap();
        assert_eq!(ids.len(), 4);
        assert_eq!(core.e(), 6);

        // star: leaves have degree 1 > 5/6, nothing peels
        let star = complete_bipartite(1, 5);
        let (core, ids) = dense_core(&star).unwrap();
        assert_eq!(ids.len(), 6);
        let d = core.density().unwrap();
        for v in core.vertices() {
            assert!(ratio_usize(core.degree(v)) > d);
        }
        assert!(core.density().unwrap() >= star.density().unwrap());

        let edgeless = Graph::new(3);
        assert!(dense_core(&edgeless).is_err());
    }

    #[test]
    fn degree_class_boundary_inclusive() {
        let c5 = cycle(5);
        assert_eq!(
            degree_class(&c5, 0, &ratio_int(1), &ratio_int(2)).unwrap(),
            DegreeClass::Small
        );
        let k5 = complete(5);
        assert_eq!(
            degree_class(&k5, 0, &ratio_int(1), &ratio_int(3)).unwrap(),
            DegreeClass::Big
        );
        let mut g = Graph::new(1);
        g.add_edge(0, 0).unwrap_err();
        let iso = Graph::new(2);
        assert_eq!(
            degree_class(&iso, 1, &ratio_int(1), &ratio_int(0)).unwrap(),
            DegreeClass::Small
        );
        assert!(degree_class(&iso, 5, &ratio_int(1), &ratio_int(0)).is_err());
    }

    #[test]
    fn mates_examples() {
        // two degree-3 vertices of K_{2,3} share 3 common neighbors
        let g = complete_bipartite(2, 3);
        assert!(are_mates(&g, 0, 1, &ratio_int(1), &ratio_int(2)).unwrap());
        // adjacent triangle vertices share one
        let t = complete(3);
        assert!(!are_mates(&t, 0, 1, &ratio_int(1), &ratio_int(2)).unwrap());
        // opposite C4 vertices share exactly 2: boundary is inclusive
        let c4 = cycle(4);
        assert!(are_mates(&c4, 0, 2, &ratio_int(1), &ratio_int(2)).unwrap());
        assert!(are_mates(&c4, 0, 0, &ratio_int(1), &ratio_int(2)).is_err());
    }

    #[test]
    fn unmated_on_c5_and_edgeless() {
        // C5 with eps*d = 1: each vertex has the two distance-2 vertices as mates
        let c5 = cycle(5);
        match unmated_or_witness(&c5, &ratio_int(2), &ratio(1, 2), &ratio_int(2)) {
            Unmated::Witness(w) => {
                assert_eq!(w.v, 0);
                assert_eq!(w.mates, vec![2, 3]);
            }
            Unmated::Unmated => panic!("expected witness"),
        }
        let edgeless = Graph::new(4);
        assert!(matches!(
            unmated_or_witness(&edgeless, &ratio_int(1), &ratio(1, 2), &ratio_int(2)),
            Unmated::Unmated
        ));
    }

    #[test]
    fn unmated_on_k2m() {
        // K_{2,4}: vertex 0 has exactly one mate (vertex 1), count 1 >= eps*d = 1
        let g = complete_bipartite(2, 4);
        match unmated_or_witness(&g, &ratio_int(10), &ratio(1, 2), &ratio_int(2)) {
            Unmated::Witness(w) => {
                assert_eq!(w.v, 0);
                assert_eq!(w.mates, vec![1]);
            }
            Unmated::Unmated => panic!("expected witness"),
        }
    }

    #[test]
    fn small_dense_construction() {
        // K_{2,3}, witness at vertex 0 with mate 1; eps*d = 1, K*d = 6
        let g = complete_bipartite(2, 3);
        let w = MateWitness { v: 0, mates: vec![1] };
        let verts =
            small_dense_from_witness(&g, &w, &ratio_int(3), &ratio(1, 2), &ratio_int(2)).unwrap();
        assert_eq!(verts, vec![0, 1, 2, 3, 4]);
        assert_eq!(g.induced_edge_count(&verts), 6);

        // invalid witness: not enough mates
        let bad = MateWitness { v: 0, mates: vec![] };
        assert!(
            small_dense_from_witness(&g, &bad, &ratio_int(3), &ratio(1, 2), &ratio_int(2)).is_err()
        );
        // invalid witness: listed vertex is not a mate (0 and 2 share nothing)
        let bad = MateWitness { v: 0, mates: vec![2] };
        assert!(
            small_dense_from_witness(&g, &bad, &ratio_int(3), &ratio(1, 2), &ratio_int(2)).is_err()
        );
    }
}
