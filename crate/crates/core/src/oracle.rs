//! Brute-force reference implementations, kept independent of the main
//! algorithm paths. Used by the test suites and by the `selftest` command to
//! cross-check results on small instances.

use std::collections::BTreeSet;

use crate::forest::Forest;
use crate::graph::{Bipartition, Graph};
use crate::ratio::{count_ge, ratio_usize, Ratio};

/// Edge count of the quotient, recomputed from scratch by collecting the
/// distinct class pairs that carry at least one host edge.
pub fn quotient_edges_naive(g: &Graph, classes: &[Vec<u32>]) -> usize {
    let mut class_of = vec![u32::MAX; g.n()];
    for (i, c) in classes.iter().enumerate() {
        for &v in c {
            class_of[v as usize] = i as u32;
        }
    }
    let mut next = classes.len() as u32;
    for v in 0..g.n() {
        if class_of[v] == u32::MAX {
            class_of[v] = next;
            next += 1;
        }
    }
    let mut pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
    for (u, v) in g.edges() {
        let (cu, cv) = (class_of[u as usize], class_of[v as usize]);
        if cu != cv {
            pairs.insert((cu.min(cv), cu.max(cv)));
        }
    }
    pairs.len()
}

/// Contraction loss of a forest, via the naive quotient count.
pub fn contraction_loss_naive(g: &Graph, f: &Forest) -> usize {
    g.e() - quotient_edges_naive(g, &f.components())
}

/// Definitional centroid check: `v` is a centroid of its tree iff for every
/// incident edge, the side containing `v` keeps at least half the vertices.
pub fn is_centroid_by_definition(f: &Forest, comp: &[u32], v: u32) -> bool {
    let total = comp.len();
    for w in f.neighbors_in(v) {
        // size of the v-side of the tree minus edge (v, w)
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
        if 2 * side.len() < total {
            return false;
        }
    }
    true
}

/// All bad pairs by scanning every pair of forest edges in distinct
/// components and testing both 4-cycle completions against the definition.
pub fn bad_pairs_naive(g: &Graph, f: &Forest) -> Vec<((u32, u32), (u32, u32))> {
    let comps = f.components();
    let mut comp_of: std::collections::BTreeMap<u32, usize> = Default::default();
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of.insert(v, i);
        }
    }
    let edges: Vec<(u32, u32)> = f.edges().collect();
    let mut out = BTreeSet::new();
    for (i, &e1) in edges.iter().enumerate() {
        for &e2 in &edges[i + 1..] {
            let c1 = comp_of[&e1.0];
            let c2 = comp_of[&e2.0];
            if c1 == c2 {
                continue;
            }
            // the only edges between the components must be the two cycle
            // edges that are neither e1 nor e2
            let t1: BTreeSet<u32> = comps[c1].iter().copied().collect();
            let t2: BTreeSet<u32> = comps[c2].iter().copied().collect();
            let mut crossing: BTreeSet<(u32, u32)> = BTreeSet::new();
            for &u in &t1 {
                for w in g.neighbors(u) {
                    if t2.contains(&w) {
                        crossing.insert((u.min(w), u.max(w)));
                    }
                }
            }
            let (x1, y1) = e1;
            let (x2, y2) = e2;
            // two ways to thread a 4-cycle through e1 and e2
            for (p, q, r, s) in [(x1, y1, x2, y2), (x1, y1, y2, x2)] {
                // cycle p-q, q-r, r-s, s-p with q-r and s-p crossing
                if g.has_edge(q, r) && g.has_edge(s, p) {
                    let cyc: BTreeSet<(u32, u32)> =
                        [(q.min(r), q.max(r)), (s.min(p), s.max(p))].into();
                    if crossing == cyc {
                        let a = (e1.0.min(e1.1), e1.0.max(e1.1));
                        let b = (e2.0.min(e2.1), e2.0.max(e2.1));
                        out.insert(if a <= b { (a, b) } else { (b, a) });
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Alternating reachability by exhaustive depth-first path enumeration with
/// the same extension rules as the search, evaluated per whole path.
pub fn alternating_reach_naive(g: &Graph, part: &Bipartition, f0: &Forest, u: u32) -> Vec<u32> {
    fn extend(
        g: &Graph,
        part: &Bipartition,
        f0: &Forest,
        path: &mut Vec<u32>,
        on_path: &mut BTreeSet<u32>,
        reach: &mut BTreeSet<u32>,
    ) {
        let x = *path.last().unwrap();
        if part.in_a(x) {
            for y in g.neighbors(x) {
                if !part.in_b(y) || f0.has_edge(x, y) || on_path.contains(&y) {
                    continue;
                }
                // reject when a triangle mixes a forest edge with this one
                let mut bad = false;
                for z in g.neighbors(x) {
                    if g.has_edge(y, z) && (f0.has_edge(x, z) || f0.has_edge(y, z)) {
                        bad = true;
                        break;
                    }
                }
                if bad {
                    continue;
                }
                reach.insert(y);
                path.push(y);
                on_path.insert(y);
                extend(g, part, f0, path, on_path, reach);
                on_path.remove(&y);
                path.pop();
            }
        } else if f0.degree_in(x) == 1 {
            let y = f0.neighbors_in(x)[0];
            if !on_path.contains(&y) {
                path.push(y);
                on_path.insert(y);
                extend(g, part, f0, path, on_path, reach);
                on_path.remove(&y);
                path.pop();
            }
        }
    }
    let mut reach = BTreeSet::new();
    let mut path = vec![u];
    let mut on_path: BTreeSet<u32> = [u].into();
    extend(g, part, f0, &mut path, &mut on_path, &mut reach);
    reach.into_iter().collect()
}

/// Mate count by direct pairwise common-neighbor counting.
pub fn mate_count_naive(g: &Graph, v: u32, eps: &Ratio, d: &Ratio) -> usize {
    let threshold = eps * d;
    g.vertices()
        .filter(|&u| u != v)
        .filter(|&u| count_ge(g.common_neighbors(u, v), &threshold))
        .count()
}

/// Whether a vertex set satisfies the dense-core contract for `g`: at least
/// the host density, and every vertex with degree at least the host density
/// inside the induced subgraph.
pub fn satisfies_core_contract(g: &Graph, verts: &[u32]) -> bool {
    if verts.is_empty() {
        return false;
    }
    let d_host = match g.density() {
        Ok(d) => d,
        Err(_) => return false,
    };
    let (h, _) = match g.induced(verts) {
        Ok(x) => x,
        Err(_) => return false,
    };
    let d_h = match h.density() {
        Ok(d) => d,
        Err(_) => return false,
    };
    if d_h < d_host {
        return false;
    }
    h.vertices().all(|v| ratio_usize(h.degree(v)) >= d_host)
}

/// All vertex subsets of a small graph that satisfy the core contract.
pub fn core_candidates_exhaustive(g: &Graph) -> Vec<Vec<u32>> {
    assert!(g.n() <= 16, "exhaustive search only for tiny graphs");
    let mut out = Vec::new();
    for mask in 1u32..(1 << g.n()) {
        let verts: Vec<u32> = (0..g.n() as u32).filter(|&v| mask & (1 << v) != 0).collect();
        if satisfies_core_contract(g, &verts) {
            out.push(verts);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::bad_pairs;
    use crate::graph::dense_core;
    use crate::ratio::ratio;

    #[test]
    fn naive_quotient_matches_contract() {
        let mut g = Graph::new(5);
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)] {
            g.add_edge(u, v).unwrap();
        }
        let f = Forest::from_edges(5, &[(0, 1), (2, 3)]).unwrap();
        let fast = crate::forest::contraction_loss(&g, &f).unwrap();
        assert_eq!(fast, contraction_loss_naive(&g, &f));
    }

    #[test]
    fn bad_pairs_agree_on_example() {
        let mut g = Graph::new(6);
        for (u, v) in [(0, 1), (0, 2), (3, 4), (3, 5), (1, 3), (0, 4)] {
            g.add_edge(u, v).unwrap();
        }
        let f = Forest::from_edges(6, &[(0, 1), (0, 2), (3, 4), (3, 5)]).unwrap();
        assert_eq!(bad_pairs(&g, &f), bad_pairs_naive(&g, &f));
    }

    #[test]
    fn dense_core_is_a_valid_candidate() {
        // triangle with a pendant: the oracle enumerates all contract-satisfying
        // subsets and the peeled core must be among them
        let mut g = Graph::new(4);
        for (u, v) in [(0, 1), (1, 2), (0, 2), (0, 3)] {
            g.add_edge(u, v).unwrap();
        }
        let (_, ids) = dense_core(&g).unwrap();
        let candidates = core_candidates_exhaustive(&g);
        assert!(candidates.contains(&ids));
        assert_eq!(ids, vec![0, 1, 2]);
    }

    #[test]
    fn mate_counts_match() {
        let g = crate::gen::gen_gnp(30, &ratio(1, 4), 5).unwrap();
        let eps = ratio(1, 2);
        let d = g.density().unwrap();
        for v in g.vertices() {
            assert_eq!(
                crate::graph::mates_of(&g, v, &eps, &d).len(),
                mate_count_naive(&g, v, &eps, &d)
            );
        }
    }
}
