//! Claw matchings via triangle-excluding alternating paths, the mate-free
//! variant over a mate-augmented graph, bad-pair cleaning, and the
//! bipartite-to-minor pipeline.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::forest::{
    bad_pairs, contraction_loss, is_claw_matching, is_mate_free, is_small_forest, star_shape,
    Forest, StarMode,
};
use crate::graph::{
    is_small, mates_of, small_dense_from_witness, unmated_or_witness, Bipartition, Graph,
    MateWitness, Unmated,
};
use crate::minor::{contract, lift_induced};
use crate::ratio::{ceil_usize, count_ge, pow_ratio, ratio_usize, Ratio};
use num::One;

/// Reachability by alternating paths from an uncovered origin: paths in
/// G(A,B) that alternate non-forest and forest edges, where a non-forest
/// edge xy is rejected whenever some triangle xyz of G carries a forest edge
/// xz or yz.
#[derive(Debug, Clone)]
pub struct AlternationState {
    pub origin: u32,
    /// reached vertex -> predecessor on its alternating path
    pub pred: BTreeMap<u32, u32>,
    pub depth: BTreeMap<u32, usize>,
    /// reached B vertices, ascending
    pub reach_b: Vec<u32>,
}

impl AlternationState {
    /// Vertex sequence from the origin to `v`.
    pub fn path_to(&self, v: u32) -> Vec<u32> {
        let mut path = vec![v];
        let mut cur = v;
        while cur != self.origin {
            cur = self.pred[&cur];
            path.push(cur);
        }
        path.reverse();
        path
    }
}

fn triangle_filter_rejects(g: &Graph, f0: &Forest, x: u32, y: u32) -> bool {
    let (a, b) = if g.degree(x) <= g.degree(y) { (x, y) } else { (y, x) };
    for z in g.neighbors(a) {
        if g.has_edge(b, z) && (f0.has_edge(x, z) || f0.has_edge(y, z)) {
            return true;
        }
    }
    false
}

/// Breadth-first alternating reachability from `u ∈ A \ V(F0)`.
///
/// From an A vertex the search extends along any non-forest edge into B that
/// passes the triangle filter; from a B vertex of forest degree exactly one
/// it is forced along the unique forest edge; B vertices of other degrees
/// are terminal.
pub fn alternating_reachability(
    g: &Graph,
    part: &Bipartition,
    f0: &Forest,
    u: u32,
) -> Result<AlternationState> {
    g.check_vertex(u)?;
    if !part.in_a(u) {
        return Err(Error::Precondition(format!("origin {u} not in A")));
    }
    if f0.contains_vertex(u) {
        return Err(Error::Precondition(format!("origin {u} already covered")));
    }
    let mut st = AlternationState {
        origin: u,
        pred: BTreeMap::new(),
        depth: BTreeMap::new(),
        reach_b: Vec::new(),
    };
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    seen.insert(u);
    st.depth.insert(u, 0);
    let mut queue = VecDeque::new();
    queue.push_back(u);
    while let Some(x) = queue.pop_front() {
        let dx = st.depth[&x];
        if part.in_a(x) {
            for y in g.neighbors(x) {
                if !part.in_b(y) || f0.has_edge(x, y) || seen.contains(&y) {
                    continue;
                }
                if triangle_filter_rejects(g, f0, x, y) {
                    continue;
                }
                seen.insert(y);
                st.pred.insert(y, x);
                st.depth.insert(y, dx + 1);
                st.reach_b.push(y);
                queue.push_back(y);
            }
        } else if f0.degree_in(x) == 1 {
            let y = f0.neighbors_in(x)[0];
            if !seen.contains(&y) {
                seen.insert(y);
                st.pred.insert(y, x);
                st.depth.insert(y, dx + 1);
                queue.push_back(y);
            }
        }
    }
    st.reach_b.sort_unstable();
    Ok(st)
}

#[derive(Debug, Clone, Default)]
pub struct ClawStats {
    pub augmentations: usize,
}

fn side_neighbor_count(g: &Graph, part: &Bipartition, v: u32, want_b: bool) -> usize {
    g.neighbors(v)
        .filter(|&w| if want_b { part.in_b(w) } else { part.in_a(w) })
        .count()
}

fn verify_touched_components(
    g: &Graph,
    f0: &Forest,
    part: &Bipartition,
    ell: usize,
    touched: &[u32],
) -> Result<()> {
    let mut done: BTreeSet<u32> = BTreeSet::new();
    for &v in touched {
        if !f0.contains_vertex(v) || done.contains(&v) {
            continue;
        }
        let comp = f0.component_of(v)?;
        done.extend(comp.iter().copied());
        let star = star_shape(f0, &comp, part)
            .ok_or_else(|| Error::Diagnostic(format!("component of {v} is not a B-to-A star")))?;
        if star.leaves.is_empty() || star.leaves.len() > ell {
            return Err(Error::Diagnostic(format!(
                "component of {v} has {} leaves",
                star.leaves.len()
            )));
        }
        for (i, &x) in star.leaves.iter().enumerate() {
            for &y in &star.leaves[i + 1..] {
                if g.has_edge(x, y) {
                    return Err(Error::Diagnostic(format!(
                        "augmentation broke the claw invariant at {x}-{y}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Greedy alternating-path construction of an exact-ell claw matching from B
/// to A. Every leaf of the result has at most `d_a` neighbors in B outside
/// the matching.
pub fn build_claw_matching(
    g: &Graph,
    part: &Bipartition,
    ell: usize,
    d_a: &Ratio,
) -> Result<(Forest, ClawStats)> {
    if ell < 1 {
        return Err(Error::Precondition("ell must be at least 1".into()));
    }
    if part.a().len() < ell * part.b().len() {
        return Err(Error::Precondition("|A| < ell * |B|".into()));
    }
    let ell_da = ratio_usize(ell) * d_a;
    for &a in part.a() {
        let nb = side_neighbor_count(g, part, a, true);
        if !count_gt_ratio(nb, &ell_da) {
            return Err(Error::Precondition(format!(
                "A-vertex {a} has only {nb} B-neighbors"
            )));
        }
        let na = side_neighbor_count(g, part, a, false);
        if !count_le_ratio(na, d_a) {
            return Err(Error::Precondition(format!(
                "A-vertex {a} has {na} A-neighbors"
            )));
        }
    }
    let mut f0 = Forest::new(g.n());
    let mut stats = ClawStats::default();
    loop {
        let uncovered = part
            .a()
            .iter()
            .copied()
            .find(|&a| !f0.contains_vertex(a));
        let u = match uncovered {
            None => {
                // full coverage: pigeonhole forces every star to be exact
                let covered_a = part.a().len();
                for comp in f0.components() {
                    let star = star_shape(&f0, &comp, part)
                        .ok_or_else(|| Error::Diagnostic("non-star component".into()))?;
                    if star.leaves.len() != ell {
                        return Err(Error::Diagnostic(format!(
                            "full cover with a {}-leaf star over {covered_a} leaves",
                            star.leaves.len()
                        )));
                    }
                }
                check_leaf_outside_degrees(g, part, &f0, d_a)?;
                return Ok((f0, stats));
            }
            Some(u) => u,
        };
        let st = alternating_reachability(g, part, &f0, u)?;
        let target = st
            .reach_b
            .iter()
            .copied()
            .filter(|&v| f0.degree_in(v) <= ell - 1)
            .min_by_key(|&v| (st.depth[&v], v));
        match target {
            Some(v) => {
                let path = st.path_to(v);
                let before = part.a().iter().filter(|&&a| f0.contains_vertex(a)).count();
                // symmetric difference, removals first
                let mut adds = Vec::new();
                for w in path.windows(2) {
                    let (x, y) = (w[0], w[1]);
                    if f0.has_edge(x, y) {
                        f0.remove_edge(x, y)?;
                    } else {
                        adds.push((x, y));
                    }
                }
                for (x, y) in adds {
                    f0.add_edge(x, y)?;
                }
                let after = part.a().iter().filter(|&&a| f0.contains_vertex(a)).count();
                if after != before + 1 {
                    return Err(Error::Diagnostic(format!(
                        "augmentation changed A-coverage by {}",
                        after as isize - before as isize
                    )));
                }
                verify_touched_components(g, &f0, part, ell, &path)?;
                stats.augmentations += 1;
            }
            None => {
                // every reached B vertex is saturated; keep exactly those stars
                if st.reach_b.is_empty() {
                    return Err(Error::Diagnostic(format!(
                        "vertex {u} has no alternating reach"
                    )));
                }
                for &v in &st.reach_b {
                    if f0.degree_in(v) != ell {
                        return Err(Error::Diagnostic(format!(
                            "saturation failed: reached {v} has degree {}",
                            f0.degree_in(v)
                        )));
                    }
                }
                let reach: BTreeSet<u32> = st.reach_b.iter().copied().collect();
                let mut f = Forest::new(g.n());
                for comp in f0.components() {
                    if comp.iter().any(|v| reach.contains(v)) {
                        for &x in &comp {
                            for y in f0.neighbors_in(x) {
                                if x < y {
                                    f.add_edge(x, y)?;
                                }
                            }
                        }
                    }
                }
                check_leaf_outside_degrees(g, part, &f, d_a)?;
                if !is_claw_matching(g, &f, part, ell, StarMode::Exactly) {
                    return Err(Error::Diagnostic("result is not an exact claw matching".into()));
                }
                return Ok((f, stats));
            }
        }
    }
}

fn count_gt_ratio(count: usize, threshold: &Ratio) -> bool {
    ratio_usize(count) > *threshold
}

fn count_le_ratio(count: usize, threshold: &Ratio) -> bool {
    ratio_usize(count) <= *threshold
}

fn check_leaf_outside_degrees(
    g: &Graph,
    part: &Bipartition,
    f: &Forest,
    d_a: &Ratio,
) -> Result<()> {
    let members: BTreeSet<u32> = f.vertices().into_iter().collect();
    for &v in &f.vertices() {
        if !part.in_a(v) {
            continue;
        }
        let outside = g
            .neighbors(v)
            .filter(|w| part.in_b(*w) && !members.contains(w))
            .count();
        if !count_le_ratio(outside, d_a) {
            return Err(Error::Diagnostic(format!(
                "leaf {v} keeps {outside} neighbors outside the matching"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub enum MateFreeOutcome {
    /// Some A vertex has at least eps0*d0 mates.
    Witness(MateWitness),
    Matching { forest: Forest, d_a: usize },
}

fn assert_bipartite(g: &Graph, part: &Bipartition) -> Result<()> {
    for (u, v) in g.edges() {
        let cross = (part.in_a(u) && part.in_b(v)) || (part.in_b(u) && part.in_a(v));
        if !cross {
            return Err(Error::Precondition(format!(
                "edge {u}-{v} does not cross the bipartition"
            )));
        }
    }
    Ok(())
}

/// Mate-free claw matching over the mate-augmented graph. Either returns a
/// witness A-vertex with at least eps0*d0 mates, or an exact-ell claw
/// matching none of whose components contains an (eps0,d0)-mate pair.
pub fn mate_free_claw_matching(
    g: &Graph,
    part: &Bipartition,
    ell: usize,
    eps0: &Ratio,
    d0: &Ratio,
) -> Result<MateFreeOutcome> {
    assert_bipartite(g, part)?;
    if part.a().len() < ell * part.b().len() {
        return Err(Error::Precondition("|A| < ell * |B|".into()));
    }
    if !(eps0 > &Ratio::from_integer(0.into()) && eps0 * ratio_usize(ell) < Ratio::one()) {
        return Err(Error::Precondition("need 0 < eps0 < 1/ell".into()));
    }
    for &a in part.a() {
        if !count_ge(g.degree(a), d0) {
            return Err(Error::Precondition(format!(
                "A-vertex {a} has fewer than d0 B-neighbors"
            )));
        }
    }
    let threshold = eps0 * d0;
    let mut mate_lists: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for &a in part.a() {
        let mates = mates_of(g, a, eps0, d0);
        if count_ge(mates.len(), &threshold) {
            return Ok(MateFreeOutcome::Witness(MateWitness { v: a, mates }));
        }
        mate_lists.insert(a, mates);
    }
    let d_a = mate_lists.values().map(|m| m.len()).max().unwrap_or(0);
    let mut ghat = g.clone();
    for (&a, mates) in &mate_lists {
        for &m in mates {
            debug_assert!(part.in_a(m));
            ghat.add_edge(a, m)?;
        }
    }
    let (forest, _) = build_claw_matching(&ghat, part, ell, &ratio_usize(d_a))?;
    if !is_mate_free(g, &forest, eps0, d0) {
        return Err(Error::Diagnostic("claw matching is not mate-free".into()));
    }
    Ok(MateFreeOutcome::Matching { forest, d_a })
}

#[derive(Debug, Clone)]
pub enum CleanOutcome {
    SmallDense { vertices: Vec<u32> },
    Clean { forest: Forest, swaps: usize, warnings: Vec<String> },
}

/// Crossing edges between two vertex sets, as (in-first, in-second) pairs.
fn crossing_edges(g: &Graph, c1: &[u32], c2: &[u32]) -> Vec<(u32, u32)> {
    let s2: BTreeSet<u32> = c2.iter().copied().collect();
    let mut out = Vec::new();
    for &u in c1 {
        for w in g.neighbors(u) {
            if s2.contains(&w) {
                out.push((u, w));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Swaps the 4-cycle through `e1` (in comp1) and `e2` (in comp2): the two
/// crossing edges become forest edges and e1, e2 leave the forest.
fn apply_swap(f: &mut Forest, e1: (u32, u32), e2: (u32, u32), cross: &[(u32, u32)]) -> Result<()> {
    f.remove_edge(e1.0, e1.1)?;
    f.remove_edge(e2.0, e2.1)?;
    for &(x, y) in cross {
        f.add_edge(x, y)?;
    }
    Ok(())
}

/// Bad-pair cleaning: drops components containing a (K,d1)-big vertex, then
/// swaps 4-cycles while some edge exceeds the `ell*(eps1*d1+1)` bad-pair
/// bound, maintaining mate-freeness and strictly decreasing the total
/// bad-pair count. `active` is the working vertex set of `g`.
#[allow(clippy::too_many_arguments)]
pub fn clean_claw_matching(
    g: &Graph,
    part: &Bipartition,
    f1: &Forest,
    active: &[u32],
    ell: usize,
    big_k: &Ratio,
    eps1: &Ratio,
    d1: &Ratio,
    strict: bool,
) -> Result<CleanOutcome> {
    if !is_claw_matching(g, f1, part, ell, StarMode::Exactly) {
        return Err(Error::Precondition("input is not an exact claw matching".into()));
    }
    if eps1 * d1 < Ratio::one() {
        return Err(Error::Precondition("need d1 >= 1/eps1".into()));
    }
    let mut warnings = Vec::new();
    // drop components touching big vertices
    let mut f = Forest::new(g.n());
    for comp in f1.components() {
        if comp.iter().all(|&v| is_small(g, v, big_k, d1)) {
            for &x in &comp {
                for y in f1.neighbors_in(x) {
                    if x < y {
                        f.add_edge(x, y)?;
                    }
                }
            }
        }
    }
    if f.is_empty() {
        return Err(Error::Diagnostic("every component contains a big vertex".into()));
    }
    let pair_bound = ratio_usize(ell) * (eps1 * d1 + Ratio::one());
    let quotient_k = big_k * ratio_usize(ell + 1);
    let mut swaps = 0usize;
    loop {
        let pairs = bad_pairs(g, &f);
        let mut per_edge: BTreeMap<(u32, u32), usize> = BTreeMap::new();
        for &(e1, e2) in &pairs {
            *per_edge.entry(e1).or_insert(0) += 1;
            *per_edge.entry(e2).or_insert(0) += 1;
        }
        let offender = per_edge
            .iter()
            .find(|(_, &c)| count_gt_ratio(c, &pair_bound))
            .map(|(&e, _)| e);
        let offender = match offender {
            None => break,
            Some(e) => e,
        };
        let con = contract(g, &f.as_model())?;
        match unmated_or_witness(&con.quotient, &quotient_k, eps1, d1) {
            Unmated::Witness(w) => {
                let qverts = small_dense_from_witness(&con.quotient, &w, &quotient_k, eps1, d1)?;
                let lifted = lift_induced(g, &con, &qverts)?;
                return Ok(CleanOutcome::SmallDense { vertices: lifted.vertices });
            }
            Unmated::Unmated => {
                let v_t = con.class_of[offender.0 as usize];
                let quotient_mates: BTreeSet<u32> =
                    mates_of(&con.quotient, v_t, eps1, d1).into_iter().collect();
                let t_comp = f.component_of(offender.0)?;
                let partners: Vec<(u32, u32)> = pairs
                    .iter()
                    .filter_map(|&(e1, e2)| {
                        if e1 == offender {
                            Some(e2)
                        } else if e2 == offender {
                            Some(e1)
                        } else {
                            None
                        }
                    })
                    .collect();
                let total_before = pairs.len();
                let mut committed = false;
                for e_i in partners {
                    let vi = con.class_of[e_i.0 as usize];
                    if quotient_mates.contains(&vi) {
                        continue;
                    }
                    let i_comp = f.component_of(e_i.0)?;
                    let cross = crossing_edges(g, &t_comp, &i_comp);
                    if cross.len() != 2 {
                        return Err(Error::Diagnostic("bad pair without two crossing edges".into()));
                    }
                    let mut trial = f.clone();
                    apply_swap(&mut trial, offender, e_i, &cross)?;
                    if !is_mate_free(g, &trial, eps1, d1) {
                        continue;
                    }
                    if bad_pairs(g, &trial).len() < total_before {
                        f = trial;
                        swaps += 1;
                        committed = true;
                        break;
                    }
                }
                if !committed {
                    return Err(Error::Diagnostic(
                        "bad-pair bound exceeded but no improving swap exists".into(),
                    ));
                }
            }
        }
    }
    // exit checks
    let c = ratio_usize(ell * ell) * eps1;
    let loss = contraction_loss(g, &f)?;
    let clean_ok = ratio_usize(loss) <= &c * d1 * ratio_usize(f.v_count());
    let small_ok = is_small_forest_on(g, &f, big_k, d1);
    let mate_ok = is_mate_free(g, &f, eps1, d1);
    let coverage_ok = {
        // v(F) >= |active| * (1 - (1/K) * ell/(ell+1))
        let frac = Ratio::one() - (Ratio::one() / big_k) * ratio_usize(ell) / ratio_usize(ell + 1);
        ratio_usize(f.v_count()) >= ratio_usize(active.len()) * frac
    };
    for (ok, what) in [
        (clean_ok, "cleanliness"),
        (small_ok, "smallness"),
        (mate_ok, "mate-freeness"),
        (coverage_ok, "coverage"),
    ] {
        if !ok {
            if strict {
                return Err(Error::Diagnostic(format!("clean matching failed {what}")));
            }
            warnings.push(format!("clean matching failed {what}"));
        }
    }
    Ok(CleanOutcome::Clean { forest: f, swaps, warnings })
}

/// Smallness of V(F) measured inside G[V(F)].
fn is_small_forest_on(g: &Graph, f: &Forest, big_k: &Ratio, d: &Ratio) -> bool {
    is_small_forest(g, f, big_k, d)
}

/// Restricts every A-side vertex to exactly `target` B-neighbors, keeping
/// forest edges and then the lowest ids; drops B-side incidences accordingly.
pub fn regularize_a_degrees(
    g: &Graph,
    part: &Bipartition,
    f: &Forest,
    target: usize,
) -> Result<Graph> {
    let mut out = Graph::new(g.n());
    for &a in part.a() {
        if !f.contains_vertex(a) {
            continue;
        }
        let partner = f.neighbors_in(a);
        if partner.len() != 1 {
            return Err(Error::Precondition(format!("vertex {a} is not a leaf")));
        }
        let partner = partner[0];
        let mut kept = vec![partner];
        for b in g.neighbors(a) {
            if kept.len() >= target {
                break;
            }
            if b != partner && part.in_b(b) {
                kept.push(b);
            }
        }
        if kept.len() < target {
            return Err(Error::Precondition(format!(
                "vertex {a} has degree below the regularization target"
            )));
        }
        for b in kept {
            out.add_edge(a, b)?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub enum BipOutcome {
    SmallDense {
        vertices: Vec<u32>,
    },
    Minor {
        branch_sets: Vec<Vec<u32>>,
        singletons: Vec<u32>,
        width: usize,
        measured_density: Ratio,
        bound: Ratio,
        swaps: usize,
        warnings: Vec<String>,
    },
}

/// (ell/2) * (1 - 3*ell^3*eps0) * d0
pub fn bipartite_minor_bound(ell: usize, eps0: &Ratio, d0: &Ratio) -> Ratio {
    let ell_r = ratio_usize(ell);
    (ell_r.clone() / ratio_usize(2))
        * (Ratio::one() - ratio_usize(3) * pow_ratio(&ell_r, 3) * eps0)
        * d0
}

/// Bipartite pipeline: unmated check, mate-free claw matching, degree
/// regularization, cleaning, and the contracted minor. `h` must be a
/// bipartite graph on the partition; the minor's branch sets are the final
/// star components and every other active vertex stays a singleton.
#[allow(clippy::too_many_arguments)]
pub fn bipartite_dense_minor(
    h: &Graph,
    part: &Bipartition,
    ell: usize,
    big_k: &Ratio,
    eps0: &Ratio,
    d0: &Ratio,
    strict: bool,
) -> Result<BipOutcome> {
    assert_bipartite(h, part)?;
    if part.a().len() < ell * part.b().len() {
        return Err(Error::Precondition("|X| < ell * |Y|".into()));
    }
    if big_k < &ratio_usize(ell) || ell < 1 {
        return Err(Error::Precondition("need K >= ell >= 1".into()));
    }
    if !(eps0 > &Ratio::from_integer(0.into()) && eps0 * ratio_usize(ell) < Ratio::one()) {
        return Err(Error::Precondition("need eps0 in (0, 1/ell)".into()));
    }
    if eps0 * d0 < Ratio::one() {
        return Err(Error::Precondition("need d0 >= 1/eps0".into()));
    }
    for &x in part.a() {
        if !count_ge(h.degree(x), d0) {
            return Err(Error::Precondition(format!(
                "X-vertex {x} has fewer than d0 neighbors"
            )));
        }
    }

    if let Unmated::Witness(w) = unmated_or_witness(h, big_k, eps0, d0) {
        let vertices = small_dense_from_witness(h, &w, big_k, eps0, d0)?;
        return Ok(BipOutcome::SmallDense { vertices });
    }

    // every X vertex small from here on: restrict X degrees to exactly ⌈d0⌉
    let trimmed = {
        let target = ceil_usize(d0).max(1);
        let mut t = Graph::new(h.n());
        for &a in part.a() {
            let mut kept = 0usize;
            for b in h.neighbors(a) {
                if kept >= target {
                    break;
                }
                if part.in_b(b) {
                    t.add_edge(a, b)?;
                    kept += 1;
                }
            }
        }
        t
    };

    let f1 = match mate_free_claw_matching(&trimmed, part, ell, eps0, d0)? {
        MateFreeOutcome::Witness(w) => {
            let vertices = small_dense_from_witness(&trimmed, &w, big_k, eps0, d0)?;
            return Ok(BipOutcome::SmallDense { vertices });
        }
        MateFreeOutcome::Matching { forest, .. } => forest,
    };

    let active = f1.vertices();
    let d1 = d0 * (Ratio::one() - eps0);
    let eps1 = eps0 / (Ratio::one() - eps0);

    // restrict to edges inside V(F1) and regularize leaf degrees to ⌈d1⌉
    let g_prime = {
        let members: BTreeSet<u32> = active.iter().copied().collect();
        let mut g2 = Graph::new(h.n());
        for (u, v) in trimmed.edges() {
            if members.contains(&u) && members.contains(&v) {
                g2.add_edge(u, v)?;
            }
        }
        g2
    };
    let sub_part = {
        let members: BTreeSet<u32> = active.iter().copied().collect();
        Bipartition::new(
            part.a().iter().copied().filter(|v| members.contains(v)).collect(),
            part.b().iter().copied().filter(|v| members.contains(v)).collect(),
        )?
    };
    let g_reg = regularize_a_degrees(&g_prime, &sub_part, &f1, ceil_usize(&d1).max(1))?;

    let cleaned = clean_claw_matching(
        &g_reg, &sub_part, &f1, &active, ell, big_k, &eps1, &d1, strict,
    )?;
    let (forest, swaps, mut warnings) = match cleaned {
        CleanOutcome::SmallDense { vertices } => {
            return Ok(BipOutcome::SmallDense { vertices })
        }
        CleanOutcome::Clean { forest, swaps, warnings } => (forest, swaps, warnings),
    };

    // measure the quotient of the untrimmed bipartite restriction
    let g_meas = {
        let members: BTreeSet<u32> = active.iter().copied().collect();
        let mut g2 = Graph::new(h.n());
        for (u, v) in h.edges() {
            if members.contains(&u) && members.contains(&v) {
                g2.add_edge(u, v)?;
            }
        }
        g2
    };
    let con = contract(&g_meas, &forest.as_model())?;
    let covered: BTreeSet<u32> = forest.vertices().into_iter().collect();
    let singletons: Vec<u32> = active.iter().copied().filter(|v| !covered.contains(v)).collect();
    let v_eff = forest.components().len() + singletons.len();
    let measured_density = ratio_usize(con.quotient.e()) / ratio_usize(v_eff);
    let bound = bipartite_minor_bound(ell, eps0, d0);
    if measured_density < bound {
        if strict {
            return Err(Error::Diagnostic(format!(
                "minor density below the guarantee: {measured_density} < {bound}"
            )));
        }
        warnings.push("minor density below the stated guarantee".into());
    }
    Ok(BipOutcome::Minor {
        branch_sets: forest.components(),
        singletons,
        width: ell + 1,
        measured_density,
        bound,
        swaps,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{ratio, ratio_int};

    fn two_sided(n_a: usize, n_b: usize) -> Bipartition {
        Bipartition::new(
            (0..n_a as u32).collect(),
            (n_a as u32..(n_a + n_b) as u32).collect(),
        )
        .unwrap()
    }

    #[test]
    fn reachability_empty_forest() {
        // u = 0 in A, B = {2, 3}; no forest edges: reach = N(u) ∩ B
        let mut g = Graph::new(4);
        g.add_edge(0, 2).unwrap();
        g.add_edge(0, 3).unwrap();
        g.add_edge(1, 2).unwrap();
        let part = two_sided(2, 2);
        let f0 = Forest::new(4);
        let st = alternating_reachability(&g, &part, &f0, 0).unwrap();
        assert_eq!(st.reach_b, vec![2, 3]);
    }

    #[test]
    fn reachability_forced_continuation() {
        // A = {0, 1}, B = {2, 3}; star 2-0; from 1: 1-2 then forced 2-0 then 0-3
        let mut g = Graph::new(4);
        g.add_edge(1, 2).unwrap();
        g.add_edge(0, 2).unwrap();
        g.add_edge(0, 3).unwrap();
        let part = two_sided(2, 2);
        let f0 = Forest::from_edges(4, &[(0, 2)]).unwrap();
        let st = alternating_reachability(&g, &part, &f0, 1).unwrap();
        assert_eq!(st.reach_b, vec![2, 3]);
        assert_eq!(st.depth[&2], 1);
        assert_eq!(st.depth[&3], 3);
        assert_eq!(st.path_to(3), vec![1, 2, 0, 3]);
    }

    #[test]
    fn reachability_triangle_filter() {
        // u=0, its only B-neighbor 1 sits in triangle 0-1-2 with 1-2 a star edge
        let mut g = Graph::new(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g.add_edge(0, 2).unwrap();
        let part = Bipartition::new(vec![0, 2], vec![1]).unwrap();
        let f0 = Forest::from_edges(3, &[(1, 2)]).unwrap();
        let st = alternating_reachability(&g, &part, &f0, 0).unwrap();
        assert!(st.reach_b.is_empty());
    }

    #[test]
    fn build_on_complete_bipartite() {
        // K_{6,3} with ell = 2: full cover by three 2-claws
        let mut g = Graph::new(9);
        for a in 0..6u32 {
            for b in 6..9u32 {
                g.add_edge(a, b).unwrap();
            }
        }
        let part = two_sided(6, 3);
        let (f, stats) = build_claw_matching(&g, &part, 2, &ratio_int(0)).unwrap();
        assert!(is_claw_matching(&g, &f, &part, 2, StarMode::Exactly));
        assert_eq!(f.vertices().len(), 9);
        assert_eq!(stats.augmentations, 6);
    }

    #[test]
    fn build_on_disjoint_stars() {
        // G is already a union of 2-stars
        let mut g = Graph::new(6);
        g.add_edge(4, 0).unwrap();
        g.add_edge(4, 1).unwrap();
        g.add_edge(5, 2).unwrap();
        g.add_edge(5, 3).unwrap();
        let part = two_sided(4, 2);
        let (f, _) = build_claw_matching(&g, &part, 2, &ratio_int(0)).unwrap();
        assert_eq!(f.edges().collect::<Vec<_>>(), g.edges());
    }

    #[test]
    fn build_uses_length_three_path() {
        // ell = 1: covering vertex 1 requires rerouting 0 to B-vertex 3
        let mut g = Graph::new(4);
        g.add_edge(0, 2).unwrap();
        g.add_edge(1, 2).unwrap();
        g.add_edge(0, 3).unwrap();
        let part = two_sided(2, 2);
        let (f, stats) = build_claw_matching(&g, &part, 1, &ratio_int(0)).unwrap();
        assert!(f.has_edge(1, 2) && f.has_edge(0, 3));
        assert_eq!(stats.augmentations, 2);
    }

    #[test]
    fn mate_free_reduces_when_no_mates() {
        // disjoint 2-stars: no common neighbors at all
        let mut g = Graph::new(6);
        g.add_edge(4, 0).unwrap();
        g.add_edge(4, 1).unwrap();
        g.add_edge(5, 2).unwrap();
        g.add_edge(5, 3).unwrap();
        let part = two_sided(4, 2);
        match mate_free_claw_matching(&g, &part, 2, &ratio(1, 4), &ratio_int(1)).unwrap() {
            MateFreeOutcome::Matching { forest, d_a } => {
                assert_eq!(d_a, 0);
                assert_eq!(forest.v_count(), 6);
            }
            _ => panic!("expected matching"),
        }
    }

    #[test]
    fn mate_free_witness_on_complete_bipartite() {
        // K_{6,3}: every X-pair shares all of Y
        let mut g = Graph::new(9);
        for a in 0..6u32 {
            for b in 6..9u32 {
                g.add_edge(a, b).unwrap();
            }
        }
        let part = two_sided(6, 3);
        match mate_free_claw_matching(&g, &part, 2, &ratio(1, 3), &ratio_int(3)).unwrap() {
            MateFreeOutcome::Witness(w) => {
                assert_eq!(w.v, 0);
                assert_eq!(w.mates, vec![1, 2, 3, 4, 5]);
            }
            _ => panic!("expected witness"),
        }
    }

    #[test]
    fn regularize_keeps_forest_edges() {
        let mut g = Graph::new(4);
        g.add_edge(0, 1).unwrap();
        g.add_edge(0, 2).unwrap();
        g.add_edge(0, 3).unwrap();
        let part = Bipartition::new(vec![0], vec![1, 2, 3]).unwrap();
        let f = Forest::from_edges(4, &[(0, 3)]).unwrap();
        let reg = regularize_a_degrees(&g, &part, &f, 2).unwrap();
        assert_eq!(reg.degree(0), 2);
        assert!(reg.has_edge(0, 3));
        assert!(reg.has_edge(0, 1));
        assert!(!reg.has_edge(0, 2));
    }
}
