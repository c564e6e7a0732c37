//! Grows a small, mate-free, clean k-shrubbery by exchange moves over the
//! dense core, or exits early with a small dense subgraph or an unbalanced
//! bipartite subgraph.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::forest::{centroids, contraction_loss, is_mate_free, is_shrubbery, peripheral_piece, Forest};
use crate::graph::{dense_core, is_small, mates_of, small_dense_from_witness, unmated_or_witness, Graph, Unmated};
use crate::minor::{contract, lift_induced, Contraction};
use crate::ratio::{count_gt, ratio_usize, Ratio};
use num::{One, Zero};

#[derive(Debug, Clone)]
pub enum ShrubberyOutcome {
    SmallDense { vertices: Vec<u32> },
    UnbalancedBipartite { x: Vec<u32>, y: Vec<u32> },
    Shrubbery { components: Vec<Vec<u32>>, edges: Vec<(u32, u32)> },
}

#[derive(Debug, Clone)]
pub struct ShrubberyRun {
    /// Vertices of the dense core, in input-graph ids.
    pub core_vertices: Vec<u32>,
    /// Reference density, frozen at the density of the dense core.
    pub d: Ratio,
    /// Outcome, expressed in input-graph ids.
    pub outcome: ShrubberyOutcome,
    pub moves: usize,
    pub warnings: Vec<String>,
}

enum MoveResult {
    Committed,
    SmallDense(Vec<u32>),
    NotApplicable,
}

struct Builder<'a> {
    core: &'a Graph,
    k: usize,
    ell: usize,
    big_k: &'a Ratio,
    eps: &'a Ratio,
    d: Ratio,
    /// multiplier for smallness on contracted graphs
    qk: Ratio,
    strict: bool,
    warnings: Vec<String>,
}

impl<'a> Builder<'a> {
    fn quotient_witness_exit(&self, con: &Contraction) -> Result<Option<Vec<u32>>> {
        match unmated_or_witness(&con.quotient, &self.qk, self.eps, &self.d) {
            Unmated::Unmated => Ok(None),
            Unmated::Witness(w) => {
                let qverts =
                    small_dense_from_witness(&con.quotient, &w, &self.qk, self.eps, &self.d)?;
                let lifted = lift_induced(self.core, con, &qverts)?;
                Ok(Some(lifted.vertices))
            }
        }
    }

    fn note(&mut self, msg: String) -> Result<()> {
        if self.strict {
            Err(Error::Diagnostic(msg))
        } else {
            self.warnings.push(msg);
            Ok(())
        }
    }

    /// Invariants that must hold after every committed move.
    fn verify_committed(&mut self, f: &Forest, grew_from: usize) -> Result<()> {
        if f.v_count() <= grew_from {
            return Err(Error::Diagnostic("move did not grow the forest".into()));
        }
        if !is_shrubbery(f, self.k)? {
            self.note("forest is not a shrubbery after a move".into())?;
        }
        if !is_mate_free(self.core, f, self.eps, &self.d) {
            self.note("forest is not mate-free after a move".into())?;
        }
        let c = ratio_usize(2 * self.k) * self.eps;
        let loss = contraction_loss(self.core, f)?;
        if ratio_usize(loss) > &c * &self.d * ratio_usize(f.v_count()) {
            self.note("forest is not clean after a move".into())?;
        }
        Ok(())
    }

    /// Attaches `v` to a component of size < k that avoids its mates.
    fn try_attach_small_component(&mut self, f: &mut Forest, v: u32) -> Result<MoveResult> {
        let nv: BTreeSet<u32> = self.core.neighbors(v).collect();
        let vmates: BTreeSet<u32> =
            mates_of(self.core, v, self.eps, &self.d).into_iter().collect();
        let candidates: Vec<Vec<u32>> = f
            .components()
            .into_iter()
            .filter(|c| c.len() < self.k)
            .filter(|c| c.iter().any(|x| nv.contains(x)))
            .filter(|c| !c.iter().any(|x| vmates.contains(x)))
            .collect();
        if candidates.is_empty() {
            return Ok(MoveResult::NotApplicable);
        }
        let con = contract(self.core, &f.as_model())?;
        if let Some(verts) = self.quotient_witness_exit(&con)? {
            return Ok(MoveResult::SmallDense(verts));
        }
        let vq = con.class_of[v as usize];
        let qmates: BTreeSet<u32> =
            mates_of(&con.quotient, vq, self.eps, &self.d).into_iter().collect();
        for c in candidates {
            let v_t = con.class_of[c[0] as usize];
            if qmates.contains(&v_t) {
                continue;
            }
            let w = c.iter().copied().find(|x| nv.contains(x)).expect("filtered");
            let before = f.v_count();
            f.add_edge(v, w)?;
            self.verify_committed(f, before)?;
            return Ok(MoveResult::Committed);
        }
        Ok(MoveResult::NotApplicable)
    }

    /// Grows a star at `v` from non-mate uncovered neighbors until its
    /// component size clears k/2.
    fn try_grow_star(&mut self, f: &mut Forest, v: u32, a_prime: &BTreeSet<u32>) -> Result<MoveResult> {
        let vmates: BTreeSet<u32> =
            mates_of(self.core, v, self.eps, &self.d).into_iter().collect();
        let cands: Vec<u32> = self
            .core
            .neighbors(v)
            .filter(|x| a_prime.contains(x) && !vmates.contains(x))
            .collect();
        if cands.is_empty() {
            return Ok(MoveResult::NotApplicable);
        }
        let mut f_s = f.clone();
        let mut chosen: Vec<u32> = Vec::new();
        loop {
            if 2 * chosen.len() >= self.k {
                let before = f.v_count();
                *f = f_s;
                self.verify_committed(f, before)?;
                return Ok(MoveResult::Committed);
            }
            let con = contract(self.core, &f_s.as_model())?;
            if let Some(verts) = self.quotient_witness_exit(&con)? {
                return Ok(MoveResult::SmallDense(verts));
            }
            let v_ts = con.class_of[v as usize];
            let qmates: BTreeSet<u32> =
                mates_of(&con.quotient, v_ts, self.eps, &self.d).into_iter().collect();
            let threshold = self.eps * &self.d;
            let next = cands.iter().copied().find(|&vi| {
                !chosen.contains(&vi)
                    && chosen.iter().all(|&vj| {
                        !crate::ratio::count_ge(self.core.common_neighbors(vi, vj), &threshold)
                    })
                    && !qmates.contains(&con.class_of[vi as usize])
            });
            match next {
                Some(vi) => {
                    f_s.add_edge(v, vi)?;
                    chosen.push(vi);
                }
                None => {
                    return Ok(MoveResult::NotApplicable);
                }
            }
        }
    }

    /// Grafts peripheral pieces of full components onto a new tree at `v`.
    fn try_graft_peripheral(&mut self, f: &mut Forest, v: u32) -> Result<MoveResult> {
        let nv: BTreeSet<u32> = self.core.neighbors(v).collect();
        let vmates: BTreeSet<u32> =
            mates_of(self.core, v, self.eps, &self.d).into_iter().collect();
        let mut cands: Vec<Vec<u32>> = Vec::new();
        for c in f.components() {
            if c.len() != self.k || c.iter().any(|x| vmates.contains(x)) {
                continue;
            }
            let cents: BTreeSet<u32> = centroids(f, c[0])?.into_iter().collect();
            if c.iter().any(|x| nv.contains(x) && !cents.contains(x)) {
                cands.push(c);
            }
        }
        if cands.is_empty() {
            return Ok(MoveResult::NotApplicable);
        }
        let mut f_s = f.clone();
        let mut used: Vec<usize> = Vec::new();
        let mut piece_union: Vec<u32> = vec![v];
        let threshold = self.eps * &self.d;
        loop {
            if 2 * piece_union.len() > self.k {
                let before = f.v_count();
                *f = f_s;
                self.verify_committed(f, before)?;
                return Ok(MoveResult::Committed);
            }
            let con = contract(self.core, &f_s.as_model())?;
            if let Some(verts) = self.quotient_witness_exit(&con)? {
                return Ok(MoveResult::SmallDense(verts));
            }
            let v_ts = con.class_of[v as usize];
            let qmates: BTreeSet<u32> =
                mates_of(&con.quotient, v_ts, self.eps, &self.d).into_iter().collect();
            let mut advanced = false;
            'cand: for (i, c) in cands.iter().enumerate() {
                if used.contains(&i) {
                    continue;
                }
                let v_ti = con.class_of[c[0] as usize];
                if qmates.contains(&v_ti) {
                    continue;
                }
                let cents: BTreeSet<u32> = centroids(&f_s, c[0])?.into_iter().collect();
                let vi = match c.iter().copied().find(|x| nv.contains(x) && !cents.contains(x)) {
                    Some(vi) => vi,
                    None => continue,
                };
                let (e_i, piece) = peripheral_piece(&f_s, vi)?;
                if piece_union.len() + piece.len() > self.k {
                    continue;
                }
                for &p in &piece {
                    for &q in &piece_union {
                        if crate::ratio::count_ge(self.core.common_neighbors(p, q), &threshold) {
                            continue 'cand;
                        }
                    }
                }
                f_s.remove_edge(e_i.0, e_i.1)?;
                f_s.add_edge(v, vi)?;
                piece_union.extend(piece);
                used.push(i);
                advanced = true;
                break;
            }
            if !advanced {
                return Ok(MoveResult::NotApplicable);
            }
        }
    }
}

/// Shrubbery construction over the dense core of `g`.
///
/// The reference density `d` is frozen at the density of the dense core;
/// both the big-vertex count and the edge count of the core are measured
/// against exactly that value.
pub fn build_shrubbery(
    g: &Graph,
    k: usize,
    ell: usize,
    big_k: &Ratio,
    eps: &Ratio,
    strict: bool,
) -> Result<ShrubberyRun> {
    if !(k >= ell && ell >= 2) {
        return Err(Error::Precondition("need k >= ell >= 2".into()));
    }
    if big_k < &ratio_usize(k) {
        return Err(Error::Precondition("need K >= k".into()));
    }
    if !(eps > &Ratio::zero() && eps * ratio_usize(k) < Ratio::one()) {
        return Err(Error::Precondition("need eps in (0, 1/k)".into()));
    }
    if strict {
        // d >= 2/eps  <=>  d*eps >= 2
        let d_in = g.density()?;
        if &d_in * eps < ratio_usize(2) {
            return Err(Error::Precondition("need d(G) >= 2/eps".into()));
        }
    }
    let (core, ids) = dense_core(g)?;
    let d = core.density()?;
    let mut builder = Builder {
        core: &core,
        k,
        ell,
        big_k,
        eps,
        d: d.clone(),
        qk: big_k * ratio_usize(k),
        strict,
        warnings: Vec::new(),
    };
    let smalls: BTreeSet<u32> = core
        .vertices()
        .filter(|&v| is_small(&core, v, big_k, &d))
        .collect();
    let bigs: Vec<u32> = core.vertices().filter(|v| !smalls.contains(v)).collect();
    let th_leftover = ratio_usize(8 * k * k) * eps * &d;
    let th_f2 = ratio_usize(2 * k) * eps * &d;
    let th_ap = ratio_usize(4 * k) * eps * &d;
    let th_w = ratio_usize(4 * k * k) * eps * &d;

    let mut f = Forest::new(core.n());
    let mut moves = 0usize;
    let mut global_checked = false;

    let map_out = |verts: &[u32]| -> Vec<u32> { verts.iter().map(|&v| ids[v as usize]).collect() };

    loop {
        if moves > core.n() {
            return Err(Error::Diagnostic("move budget exceeded".into()));
        }
        let comps = f.components();
        let covered: BTreeSet<u32> = f.vertices().into_iter().collect();
        let a_prime: Vec<u32> = smalls.iter().copied().filter(|v| !covered.contains(v)).collect();
        let mut cents: BTreeSet<u32> = BTreeSet::new();
        for c in &comps {
            if c.len() == k {
                cents.extend(centroids(&f, c[0])?);
            }
        }
        let coverage_reached = a_prime.len() * k <= 4 * ell * core.n();
        if coverage_reached && !f.is_empty() {
            let outcome = finish_shrubbery(&mut builder, &core, &f, &smalls, &ids)?;
            return Ok(ShrubberyRun {
                core_vertices: ids.clone(),
                d,
                outcome,
                moves,
                warnings: builder.warnings,
            });
        }
        let forced = coverage_reached;
        let bc: BTreeSet<u32> = bigs.iter().copied().chain(cents.iter().copied()).collect();
        let outside_count =
            |v: u32| -> usize { core.neighbors(v).filter(|w| !bc.contains(w)).count() };
        let violators: Vec<u32> = a_prime
            .iter()
            .copied()
            .filter(|&v| count_gt(outside_count(v), &th_leftover))
            .collect();
        if !forced && violators.is_empty() {
            let outcome =
                finish_unbalanced(&mut builder, &core, &a_prime, &bc, &th_leftover, &ids)?;
            return Ok(ShrubberyRun {
                core_vertices: ids.clone(),
                d,
                outcome,
                moves,
                warnings: builder.warnings,
            });
        }

        // outcome (i) preempts every move: one global mate scan
        if !global_checked {
            global_checked = true;
            if let Unmated::Witness(w) = unmated_or_witness(&core, big_k, eps, &d) {
                let verts = small_dense_from_witness(&core, &w, big_k, eps, &d)?;
                return Ok(ShrubberyRun {
                    core_vertices: ids.clone(),
                    d,
                    outcome: ShrubberyOutcome::SmallDense { vertices: map_out(&verts) },
                    moves,
                    warnings: builder.warnings,
                });
            }
        }

        let a_prime_set: BTreeSet<u32> = a_prime.iter().copied().collect();
        let f2_vertices: BTreeSet<u32> = comps
            .iter()
            .filter(|c| c.len() < k)
            .flat_map(|c| c.iter().copied())
            .collect();
        let w_vertices: BTreeSet<u32> = comps
            .iter()
            .filter(|c| c.len() == k)
            .flat_map(|c| c.iter().copied())
            .filter(|v| !cents.contains(v))
            .collect();

        let mut progressed = false;
        let to_try: Vec<u32> = if forced { a_prime.clone() } else { violators };
        for v in to_try {
            let n_f2 = core.neighbors(v).filter(|w| f2_vertices.contains(w)).count();
            let n_ap = core.neighbors(v).filter(|w| a_prime_set.contains(w)).count();
            let n_w = core.neighbors(v).filter(|w| w_vertices.contains(w)).count();
            let attempts: [(bool, u8); 3] = [
                (forced || count_gt(n_f2, &th_f2), 0),
                (forced || count_gt(n_ap, &th_ap), 1),
                (forced || count_gt(n_w, &th_w), 2),
            ];
            let mut last = MoveResult::NotApplicable;
            for (fire, which) in attempts {
                if !fire {
                    continue;
                }
                last = match which {
                    0 => builder.try_attach_small_component(&mut f, v)?,
                    1 => builder.try_grow_star(&mut f, v, &a_prime_set)?,
                    _ => builder.try_graft_peripheral(&mut f, v)?,
                };
                match last {
                    MoveResult::Committed => {
                        moves += 1;
                        progressed = true;
                        break;
                    }
                    MoveResult::SmallDense(ref verts) => {
                        return Ok(ShrubberyRun {
                            core_vertices: ids.clone(),
                            d,
                            outcome: ShrubberyOutcome::SmallDense { vertices: map_out(verts) },
                            moves,
                            warnings: builder.warnings,
                        });
                    }
                    MoveResult::NotApplicable => continue,
                }
            }
            if progressed {
                break;
            }
            if !forced {
                return Err(Error::Diagnostic(format!(
                    "vertex {v} exceeds the leftover threshold but no move applies"
                )));
            }
            drop(last);
        }
        if progressed {
            continue;
        }
        // forced mode with no applicable move anywhere
        let all_below = a_prime
            .iter()
            .all(|&v| !count_gt(outside_count(v), &th_leftover));
        if all_below && !a_prime.is_empty() {
            let outcome =
                finish_unbalanced(&mut builder, &core, &a_prime, &bc, &th_leftover, &ids)?;
            return Ok(ShrubberyRun {
                core_vertices: ids.clone(),
                d,
                outcome,
                moves,
                warnings: builder.warnings,
            });
        }
        return Err(Error::Diagnostic(
            "coverage reached with an empty forest and no applicable move".into(),
        ));
    }
}

fn finish_shrubbery(
    builder: &mut Builder,
    core: &Graph,
    f: &Forest,
    smalls: &BTreeSet<u32>,
    ids: &[u32],
) -> Result<ShrubberyOutcome> {
    let covered: BTreeSet<u32> = f.vertices().into_iter().collect();
    if !covered.iter().all(|v| smalls.contains(v)) {
        builder.note("shrubbery contains a big vertex".into())?;
    }
    // v(F) >= (1 - (2 + 4*ell)/k) * v(core)
    let bound = (Ratio::one()
        - ratio_usize(2 + 4 * builder.ell) / ratio_usize(builder.k))
        * ratio_usize(core.n());
    if ratio_usize(f.v_count()) < bound {
        builder.note("shrubbery coverage below the guarantee".into())?;
    }
    let components = f.components().iter().map(|c| c.iter().map(|&v| ids[v as usize]).collect()).collect();
    let edges = f
        .edges()
        .map(|(u, v)| (ids[u as usize], ids[v as usize]))
        .collect();
    Ok(ShrubberyOutcome::Shrubbery { components, edges })
}

fn finish_unbalanced(
    builder: &mut Builder,
    core: &Graph,
    a_prime: &[u32],
    bc: &BTreeSet<u32>,
    th_leftover: &Ratio,
    ids: &[u32],
) -> Result<ShrubberyOutcome> {
    if a_prime.len() < builder.ell * bc.len() {
        builder.note("unbalanced exit: |X| < ell * |Y|".into())?;
    }
    let min_deg = (Ratio::one() - ratio_usize(8 * builder.k * builder.k) * builder.eps) * &builder.d;
    for &v in a_prime {
        let into_y = core.neighbors(v).filter(|w| bc.contains(w)).count();
        if ratio_usize(into_y) < min_deg {
            builder.note(format!("unbalanced exit: X-vertex {v} has low Y-degree"))?;
        }
        let outside = core.degree(v) - into_y;
        if count_gt(outside, th_leftover) {
            return Err(Error::Diagnostic(format!(
                "unbalanced exit with a violating vertex {v}"
            )));
        }
    }
    Ok(ShrubberyOutcome::UnbalancedBipartite {
        x: a_prime.iter().map(|&v| ids[v as usize]).collect(),
        y: bc.iter().map(|&v| ids[v as usize]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{ratio, ratio_int};

    fn disjoint_edges(pairs: usize) -> Graph {
        let mut g = Graph::new(2 * pairs);
        for i in 0..pairs as u32 {
            g.add_edge(2 * i, 2 * i + 1).unwrap();
        }
        g
    }

    #[test]
    fn matching_host_yields_shrubbery() {
        let g = disjoint_edges(50);
        let run = build_shrubbery(&g, 2, 2, &ratio_int(2), &ratio(1, 4), false).unwrap();
        match run.outcome {
            ShrubberyOutcome::Shrubbery { components, .. } => {
                assert_eq!(components[0], vec![0, 1]);
            }
            other => panic!("expected shrubbery, got {other:?}"),
        }
        assert_eq!(run.moves, 1);
        assert_eq!(run.d, ratio(1, 2));
        assert!(run.warnings.is_empty());
    }

    #[test]
    fn pendant_host_yields_unbalanced() {
        // K9 core (vertices 9..18) with 18 pendant-side vertices 0..18 each
        // adjacent to 3 core vertices
        let mut g = Graph::new(27);
        for u in 18..27u32 {
            for v in (u + 1)..27u32 {
                g.add_edge(u, v).unwrap();
            }
        }
        for x in 0..18u32 {
            for j in 0..3u32 {
                g.add_edge(x, 18 + (3 * x + j) % 9).unwrap();
            }
        }
        // d = (36 + 54)/27 = 10/3; pendants deg 3: 3 <= 10/3 keeps them in the
        // core boundary-tight; use K = 2 so core side is big (8 + 6 > 20/3)
        let run = build_shrubbery(&g, 2, 2, &ratio_int(2), &ratio(1, 64), false).unwrap();
        match run.outcome {
            ShrubberyOutcome::UnbalancedBipartite { x, y } => {
                assert_eq!(y, (18..27).collect::<Vec<u32>>());
                assert_eq!(x.len(), 18);
            }
            other => panic!("expected unbalanced bipartite, got {other:?}"),
        }
    }

    #[test]
    fn clique_host_yields_small_dense() {
        // disjoint K4s: every pair inside a clique shares two neighbors, so
        // the very first small vertex is a witness
        let mut g = Graph::new(40);
        for c in 0..10u32 {
            let base = 4 * c;
            for i in 0..4u32 {
                for j in (i + 1)..4u32 {
                    g.add_edge(base + i, base + j).unwrap();
                }
            }
        }
        let run = build_shrubbery(&g, 4, 2, &ratio_int(4), &ratio(1, 100), false).unwrap();
        match run.outcome {
            ShrubberyOutcome::SmallDense { vertices } => {
                assert_eq!(vertices, vec![0, 1, 2, 3]);
            }
            other => panic!("expected small dense, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = disjoint_edges(4);
        assert!(build_shrubbery(&g, 2, 3, &ratio_int(3), &ratio(1, 4), false).is_err());
        assert!(build_shrubbery(&g, 2, 2, &ratio_int(1), &ratio(1, 4), false).is_err());
        assert!(build_shrubbery(&g, 2, 2, &ratio_int(2), &ratio(1, 2), false).is_err());
        // theorem mode needs d >= 2/eps
        assert!(build_shrubbery(&g, 2, 2, &ratio_int(2), &ratio(1, 4), true).is_err());
    }
}
