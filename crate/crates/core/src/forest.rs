//! Forests inside a host graph: star/claw-matchings, shrubbery and
//! cleanliness predicates, centroids, peripheral pieces, and contraction
//! bookkeeping.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Bipartition, Graph};
use crate::minor::{contract, MinorModel};
use crate::ratio::{count_ge, ratio_usize, Ratio};

struct Dsu {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            let p = self.parent[v as usize];
            self.parent[v as usize] = self.parent[p as usize];
            v = self.parent[v as usize];
        }
        v
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (hi, lo) = if self.rank[ra as usize] >= self.rank[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo as usize] = hi;
        if self.rank[hi as usize] == self.rank[lo as usize] {
            self.rank[hi as usize] += 1;
        }
        true
    }
}

/// An acyclic edge set over vertex universe `0..n`. `V(F)` is the set of
/// endpoints; component indexing is maintained by union-find and rebuilt
/// after deletions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    n: usize,
    edges: BTreeSet<(u32, u32)>,
}

fn norm(u: u32, v: u32) -> (u32, u32) {
    (u.min(v), u.max(v))
}

impl Forest {
    pub fn new(n: usize) -> Self {
        Forest {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut f = Forest::new(n);
        for &(u, v) in edges {
            f.add_edge(u, v)?;
        }
        Ok(f)
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn e(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.contains(&norm(u, v))
    }

    fn dsu(&self) -> Dsu {
        let mut d = Dsu::new(self.n);
        for &(u, v) in &self.edges {
            d.union(u, v);
        }
        d
    }

    pub fn add_edge(&mut self, u: u32, v: u32) -> Result<()> {
        if u as usize >= self.n {
            return Err(Error::VertexOutOfRange(u));
        }
        if v as usize >= self.n {
            return Err(Error::VertexOutOfRange(v));
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.edges.contains(&norm(u, v)) {
            return Err(Error::CycleEdge(u, v));
        }
        let mut d = self.dsu();
        if d.find(u) == d.find(v) {
            return Err(Error::CycleEdge(u, v));
        }
        self.edges.insert(norm(u, v));
        Ok(())
    }

    pub fn remove_edge(&mut self, u: u32, v: u32) -> Result<()> {
        if !self.edges.remove(&norm(u, v)) {
            return Err(Error::NotInForest(u, v));
        }
        Ok(())
    }

    pub fn degree_in(&self, v: u32) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn neighbors_in(&self, v: u32) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// V(F): endpoints of forest edges, ascending.
    pub fn vertices(&self) -> Vec<u32> {
        let mut set = BTreeSet::new();
        for &(u, v) in &self.edges {
            set.insert(u);
            set.insert(v);
        }
        set.into_iter().collect()
    }

    pub fn v_count(&self) -> usize {
        self.vertices().len()
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.edges.iter().any(|&(a, b)| a == v || b == v)
    }

    /// Components with at least one edge, sorted by minimum vertex; each
    /// component's vertices ascending.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let mut d = self.dsu();
        let mut by_root: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
        for &(u, v) in &self.edges {
            let r = d.find(u);
            let entry = by_root.entry(r).or_default();
            entry.insert(u);
            entry.insert(v);
        }
        let mut comps: Vec<Vec<u32>> = by_root
            .into_values()
            .map(|s| s.into_iter().collect())
            .collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    /// Vertices of the component containing `v`.
    pub fn component_of(&self, v: u32) -> Result<Vec<u32>> {
        if !self.contains_vertex(v) {
            return Err(Error::VertexNotInForest(v));
        }
        let mut d = self.dsu();
        let root = d.find(v);
        let mut out: Vec<u32> = self
            .vertices()
            .into_iter()
            .filter(|&u| d.find(u) == root)
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    pub fn same_component(&self, u: u32, v: u32) -> bool {
        if !self.contains_vertex(u) || !self.contains_vertex(v) {
            return false;
        }
        let mut d = self.dsu();
        d.find(u) == d.find(v)
    }

    /// Model whose branch sets are the components of this forest.
    pub fn as_model(&self) -> MinorModel {
        let comps = self.components();
        let width = comps.iter().map(|c| c.len()).max().unwrap_or(1);
        MinorModel::new(comps, width)
    }
}

/// e(G) - e(G/F), computed by materializing the contraction.
pub fn contraction_loss(g: &Graph, f: &Forest) -> Result<usize> {
    for (u, v) in f.edges() {
        if !g.has_edge(u, v) {
            return Err(Error::NotAnEdge(u, v));
        }
    }
    let con = contract(g, &f.as_model())?;
    Ok(g.e() - con.quotient.e())
}

/// Closed form for a single edge: 1 + |N(u) ∩ N(v)|.
pub fn edge_contraction_loss(g: &Graph, u: u32, v: u32) -> Result<usize> {
    if !g.has_edge(u, v) {
        return Err(Error::NotAnEdge(u, v));
    }
    Ok(1 + g.common_neighbors(u, v))
}

/// Every vertex of V(F) has degree <= K*d in the induced subgraph G[V(F)].
pub fn is_small_forest(g: &Graph, f: &Forest, big_k: &Ratio, d: &Ratio) -> bool {
    let verts = f.vertices();
    let members: BTreeSet<u32> = verts.iter().copied().collect();
    let bound = big_k * d;
    verts.iter().all(|&v| {
        let induced_deg = g.neighbors(v).filter(|w| members.contains(w)).count();
        ratio_usize(induced_deg) <= bound
    })
}

/// No component contains two distinct vertices that are (eps,d)-mates in G.
pub fn is_mate_free(g: &Graph, f: &Forest, eps: &Ratio, d: &Ratio) -> bool {
    let threshold = eps * d;
    for comp in f.components() {
        for (i, &u) in comp.iter().enumerate() {
            for &v in &comp[i + 1..] {
                if count_ge(g.common_neighbors(u, v), &threshold) {
                    return false;
                }
            }
        }
    }
    true
}

/// e(G) - e(G/F) <= c*d*v(F), exactly.
pub fn is_clean(g: &Graph, f: &Forest, c: &Ratio, d: &Ratio) -> Result<bool> {
    if f.is_empty() {
        return Err(Error::EmptyForest);
    }
    let loss = contraction_loss(g, f)?;
    Ok(ratio_usize(loss) <= c * d * ratio_usize(f.v_count()))
}

/// Every component size lies in (k/2, k].
pub fn is_shrubbery(f: &Forest, k: usize) -> Result<bool> {
    if f.is_empty() {
        return Err(Error::EmptyForest);
    }
    Ok(f.components()
        .iter()
        .all(|c| 2 * c.len() > k && c.len() <= k))
}

/// A star component: its center and leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarShape {
    pub center: u32,
    pub leaves: Vec<u32>,
}

/// Identifies a component as a star with center in B and leaves in A.
/// A single edge takes its B endpoint as the center.
pub fn star_shape(f: &Forest, comp: &[u32], part: &Bipartition) -> Option<StarShape> {
    if comp.len() < 2 {
        return None;
    }
    let center = if comp.len() == 2 {
        let (x, y) = (comp[0], comp[1]);
        match (part.in_b(x), part.in_b(y)) {
            (true, false) => x,
            (false, true) => y,
            _ => return None,
        }
    } else {
        // the unique vertex of forest degree > 1
        let mut center = None;
        for &v in comp {
            if f.degree_in(v) > 1 {
                if center.is_some() {
                    return None;
                }
                center = Some(v);
            }
        }
        center?
    };
    if !part.in_b(center) {
        return None;
    }
    if f.degree_in(center) != comp.len() - 1 {
        return None;
    }
    let leaves: Vec<u32> = comp.iter().copied().filter(|&v| v != center).collect();
    if !leaves.iter().all(|&v| part.in_a(v) && f.degree_in(v) == 1) {
        return None;
    }
    Some(StarShape { center, leaves })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarMode {
    /// between 1 and ell leaves
    AtMost,
    /// exactly ell leaves
    Exactly,
}

/// Every component is a star with center in B, leaves in A, and an
/// admissible leaf count.
pub fn is_star_matching(f: &Forest, part: &Bipartition, ell: usize, mode: StarMode) -> bool {
    if f.is_empty() {
        return false;
    }
    f.components().iter().all(|comp| {
        star_shape(f, comp, part).is_some_and(|s| match mode {
            StarMode::AtMost => !s.leaves.is_empty() && s.leaves.len() <= ell,
            StarMode::Exactly => s.leaves.len() == ell,
        })
    })
}

/// Star matching whose components are induced in G: no G-edge joins two
/// leaves of one star.
pub fn is_claw_matching(
    g: &Graph,
    f: &Forest,
    part: &Bipartition,
    ell: usize,
    mode: StarMode,
) -> bool {
    if !is_star_matching(f, part, ell, mode) {
        return false;
    }
    f.components().iter().all(|comp| {
        let s = star_shape(f, comp, part).expect("star matching verified");
        s.leaves
            .iter()
            .enumerate()
            .all(|(i, &x)| s.leaves[i + 1..].iter().all(|&y| !g.has_edge(x, y)))
    })
}

/// Centroids of the component containing `v`: vertices all of whose incident
/// edges keep at least half the tree on their side. Computed by directing
/// every edge toward the strictly larger side and collecting the sinks.
pub fn centroids(f: &Forest, v: u32) -> Result<Vec<u32>> {
    let comp = f.component_of(v)?;
    let total = comp.len();
    let index: BTreeMap<u32, usize> = comp.iter().copied().enumerate().map(|(i, x)| (x, i)).collect();
    if total <= 2 {
        return Ok(comp);
    }
    // subtree sizes from a DFS rooted at the smallest vertex
    let root = comp[0];
    let mut order = Vec::with_capacity(total);
    let mut parent: Vec<Option<u32>> = vec![None; total];
    let mut seen = vec![false; total];
    let mut stack = vec![root];
    seen[index[&root]] = true;
    while let Some(u) = stack.pop() {
        order.push(u);
        for w in f.neighbors_in(u) {
            let wi = index[&w];
            if !seen[wi] {
                seen[wi] = true;
                parent[wi] = Some(u);
                stack.push(w);
            }
        }
    }
    let mut size = vec![1usize; total];
    for &u in order.iter().rev() {
        if let Some(p) = parent[index[&u]] {
            size[index[&p]] += size[index[&u]];
        }
    }
    // outdegree of each vertex in the orientation toward larger sides
    let mut outdeg = vec![0usize; total];
    for &u in &comp {
        for w in f.neighbors_in(u) {
            // side of w when edge (u,w) is removed
            let w_side = if parent[index[&w]] == Some(u) {
                size[index[&w]]
            } else {
                total - size[index[&u]]
            };
            if 2 * w_side > total {
                outdeg[index[&u]] += 1;
            }
        }
    }
    let sinks: Vec<u32> = comp
        .iter()
        .copied()
        .filter(|&u| outdeg[index[&u]] == 0)
        .collect();
    Ok(sinks)
}

/// For a non-centroid `v`, an incident central edge and the peripheral piece
/// (the v-side of the split, at most (v(T)-1)/2 vertices). Among qualifying
/// edges: minimum piece, ties broken by the smaller neighbor id.
pub fn peripheral_piece(f: &Forest, v: u32) -> Result<((u32, u32), Vec<u32>)> {
    let comp = f.component_of(v)?;
    let total = comp.len();
    let mut best: Option<(usize, u32, Vec<u32>)> = None;
    for w in f.neighbors_in(v) {
        // v-side of the component after removing (v, w)
        let mut side = BTreeSet::new();
        side.insert(v);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for x in f.neighbors_in(u) {
                if (u == v && x == w) || side.contains(&x) {
                    continue;
                }
                side.insert(x);
                stack.push(x);
            }
        }
        // |side| <= (total - 1) / 2 in exact arithmetic
        if 2 * side.len() <= total - 1 {
            let piece: Vec<u32> = side.into_iter().collect();
            let better = match &best {
                None => true,
                Some((len, nb, _)) => piece.len() < *len || (piece.len() == *len && w < *nb),
            };
            if better {
                best = Some((piece.len(), w, piece));
            }
        }
    }
    match best {
        Some((_, w, piece)) => Ok((norm(v, w), piece)),
        None => Err(Error::NoCentralEdge(v)),
    }
}

/// Pairs of forest edges in distinct components that lie on a common
/// 4-cycle carrying the only edges between the two components.
///
/// The definition forces exactly two crossing edges between the component
/// pair, so candidates are enumerated from pairs with crossing count 2.
pub fn bad_pairs(g: &Graph, f: &Forest) -> Vec<((u32, u32), (u32, u32))> {
    let comps = f.components();
    let mut comp_of: BTreeMap<u32, usize> = BTreeMap::new();
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of.insert(v, i);
        }
    }
    let mut crossing: BTreeMap<(usize, usize), Vec<(u32, u32)>> = BTreeMap::new();
    for (i, c) in comps.iter().enumerate() {
        for &u in c {
            for w in g.neighbors(u) {
                if let Some(&j) = comp_of.get(&w) {
                    if j > i {
                        crossing.entry((i, j)).or_default().push((u, w));
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for ((_, _), cross) in crossing {
        if cross.len() != 2 {
            continue;
        }
        let (a1, b1) = cross[0];
        let (a2, b2) = cross[1];
        if a1 == a2 || b1 == b2 {
            continue;
        }
        if f.has_edge(a1, a2) && f.has_edge(b1, b2) {
            let e1 = norm(a1, a2);
            let e2 = norm(b1, b2);
            out.push(if e1 <= e2 { (e1, e2) } else { (e2, e1) });
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{ratio, ratio_int};

    fn path_graph(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..(n as u32 - 1) {
            g.add_edge(u, u + 1).unwrap();
        }
        g
    }

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    #[test]
    fn forest_rejects_cycles() {
        let mut f = Forest::new(3);
        f.add_edge(0, 1).unwrap();
        f.add_edge(1, 2).unwrap();
        assert!(matches!(f.add_edge(0, 2), Err(Error::CycleEdge(0, 2))));
        assert_eq!(f.components(), vec![vec![0, 1, 2]]);
        f.remove_edge(1, 2).unwrap();
        f.add_edge(0, 2).unwrap();
        assert_eq!(f.v_count(), 3);
    }

    #[test]
    fn edge_loss_examples() {
        assert_eq!(edge_contraction_loss(&complete(3), 0, 1).unwrap(), 2);
        let mut c4 = Graph::new(4);
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            c4.add_edge(u, v).unwrap();
        }
        assert_eq!(edge_contraction_loss(&c4, 0, 1).unwrap(), 1);
        assert_eq!(edge_contraction_loss(&complete(5), 0, 1).unwrap(), 4);
        assert!(edge_contraction_loss(&c4, 0, 2).is_err());
    }

    #[test]
    fn contraction_loss_examples() {
        let t = complete(3);
        let f = Forest::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(contraction_loss(&t, &f).unwrap(), 2);

        let p3 = path_graph(3);
        let f = Forest::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(contraction_loss(&p3, &f).unwrap(), 1);

        let mut c4 = Graph::new(4);
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            c4.add_edge(u, v).unwrap();
        }
        let matching = Forest::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(contraction_loss(&c4, &matching).unwrap(), 3);
    }

    #[test]
    fn small_forest_predicate() {
        let k5 = complete(5);
        let spanning = Forest::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert!(!is_small_forest(&k5, &spanning, &ratio_int(1), &ratio_int(3)));
        let p3 = path_graph(3);
        let f = Forest::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(is_small_forest(&p3, &f, &ratio_int(1), &ratio_int(2)));
    }

    #[test]
    fn mate_free_predicate() {
        // both degree-3 vertices of K_{2,3} in one component: 3 common >= 2
        let mut g = Graph::new(5);
        for u in 0..2u32 {
            for v in 2..5u32 {
                g.add_edge(u, v).unwrap();
            }
        }
        let f = Forest::from_edges(5, &[(0, 2), (1, 2)]).unwrap();
        assert!(!is_mate_free(&g, &f, &ratio_int(1), &ratio_int(2)));
        let matching = Forest::from_edges(5, &[(0, 2), (1, 3)]).unwrap();
        // 0 and 2 are adjacent, zero common neighbors in bipartite graph
        assert!(is_mate_free(&g, &matching, &ratio_int(1), &ratio_int(2)));
    }

    #[test]
    fn clean_predicate() {
        let p3 = path_graph(3);
        let f = Forest::from_edges(3, &[(0, 1)]).unwrap();
        // loss 1 <= c*d*v(F) with c*d = 1/2, v(F) = 2
        assert!(is_clean(&p3, &f, &ratio(1, 4), &ratio_int(2)).unwrap());
        let k4 = complete(4);
        let f = Forest::from_edges(4, &[(0, 1)]).unwrap();
        // loss 3 > (1/8)*2*2 = 1/2
        assert!(!is_clean(&k4, &f, &ratio(1, 16), &ratio_int(2)).unwrap());
        let empty = Forest::new(4);
        assert!(is_clean(&k4, &empty, &ratio(1, 16), &ratio_int(2)).is_err());
    }

    #[test]
    fn shrubbery_predicate() {
        let f = Forest::from_edges(
            10,
            &[(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8), (8, 9)],
        )
        .unwrap();
        // component sizes 3, 3, 4 with k = 4
        assert!(is_shrubbery(&f, 4).unwrap());
        let with_pair = Forest::from_edges(10, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        // a size-2 component fails the strict lower bound for k = 4
        assert!(!is_shrubbery(&with_pair, 4).unwrap());
        let matching = Forest::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(is_shrubbery(&matching, 2).unwrap());
        assert!(is_shrubbery(&Forest::new(3), 2).is_err());
    }

    #[test]
    fn star_and_claw_predicates() {
        let part = Bipartition::new(vec![0, 1, 2, 3], vec![4, 5]).unwrap();
        let f = Forest::from_edges(6, &[(4, 0), (4, 1), (5, 2)]).unwrap();
        let mut g = Graph::new(6);
        for (u, v) in f.edges() {
            g.add_edge(u, v).unwrap();
        }
        assert!(is_star_matching(&f, &part, 3, StarMode::AtMost));
        assert!(!is_star_matching(&f, &part, 2, StarMode::Exactly));
        assert!(is_claw_matching(&g, &f, &part, 3, StarMode::AtMost));
        // adjacent leaves break the claw condition
        g.add_edge(0, 1).unwrap();
        assert!(!is_claw_matching(&g, &f, &part, 3, StarMode::AtMost));
        // component with both endpoints in A is not a star matching
        let bad = Forest::from_edges(6, &[(0, 1)]).unwrap();
        assert!(!is_star_matching(&bad, &part, 3, StarMode::AtMost));
    }

    #[test]
    fn centroid_examples() {
        let p5 = Forest::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(centroids(&p5, 0).unwrap(), vec![2]);
        let p2 = Forest::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(centroids(&p2, 0).unwrap(), vec![0, 1]);
        let star = Forest::from_edges(7, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6)]).unwrap();
        assert_eq!(centroids(&star, 3).unwrap(), vec![0]);
        assert!(centroids(&star, 7).is_err());
    }

    #[test]
    fn peripheral_examples() {
        let p5 = Forest::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let (e, piece) = peripheral_piece(&p5, 1).unwrap();
        assert_eq!(e, (1, 2));
        assert_eq!(piece, vec![0, 1]);
        // leaf of any tree with >= 3 vertices
        let (e, piece) = peripheral_piece(&p5, 0).unwrap();
        assert_eq!(e, (0, 1));
        assert_eq!(piece, vec![0]);
        // the middle of P5 is the centroid
        assert!(matches!(peripheral_piece(&p5, 2), Err(Error::NoCentralEdge(2))));
    }

    #[test]
    fn bad_pair_detection() {
        // two stars joined by a 4-cycle: centers 0 and 3, leaves 1,2 and 4,5
        let mut g = Graph::new(6);
        for (u, v) in [(0, 1), (0, 2), (3, 4), (3, 5)] {
            g.add_edge(u, v).unwrap();
        }
        // crossing edges 1-3 and 0-4 complete the cycle 0-1-3-4
        g.add_edge(1, 3).unwrap();
        g.add_edge(0, 4).unwrap();
        let f = Forest::from_edges(6, &[(0, 1), (0, 2), (3, 4), (3, 5)]).unwrap();
        let pairs = bad_pairs(&g, &f);
        assert_eq!(pairs, vec![((0, 1), (3, 4))]);
        // a third crossing edge kills the pair
        let mut g3 = g.clone();
        g3.add_edge(2, 3).unwrap();
        assert!(bad_pairs(&g3, &f).is_empty());
    }
}
