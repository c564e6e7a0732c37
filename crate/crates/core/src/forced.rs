//! Iterated amplification with lift accounting, the alpha-parameterization,
//! and its exact arithmetic checks.

use crate::amplify::amplify_with;
use crate::certificate::{Mode, Outcome};
use crate::error::{Error, Result};
use crate::graph::{dense_core, Graph};
use crate::minor::{contract, lift_subgraph, MinorModel};
use crate::ratio::{le_pow, pow_ratio, ratio_usize, Int, Ratio};
use num::{BigInt, One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone)]
pub struct ForcedParams {
    /// density scale: every graph of density >= D carries the target minor
    pub big_d: Ratio,
    pub t: u32,
    pub r: Ratio,
    pub alpha: Ratio,
    pub lambda: Ratio,
}

impl ForcedParams {
    pub fn new(big_d: Ratio, t: u32, r: Ratio, alpha: Ratio) -> Result<Self> {
        if !(alpha.is_positive() && alpha <= crate::ratio::ratio(1, 2)) {
            return Err(Error::BadParameter("alpha must lie in (0, 1/2]".into()));
        }
        if r < Ratio::one() {
            return Err(Error::BadParameter("r must be at least 1".into()));
        }
        let lambda = Ratio::one() / (Ratio::one() - &alpha);
        Ok(ForcedParams { big_d, t, r, alpha, lambda })
    }

    /// D(t) = c * t * sqrt(log2 t), rounded to an exact rational via integer
    /// square-root scaling. The constant is configurable; the scale of D is
    /// all that matters downstream.
    pub fn default_density_for(t: u32, c: &Ratio) -> Ratio {
        let t = t.max(2);
        let log2_t = 64 - (t as u64).leading_zeros() as u64; // ceil-ish log2 t
        // integer sqrt of log2_t scaled by 2^20 for a few exact digits
        let scaled: BigInt = BigInt::from(log2_t) << 40u32;
        let root = scaled.sqrt();
        c * ratio_usize(t as usize) * Ratio::new(root, BigInt::one() << 20u32)
    }
}

/// ell = 2^(2/alpha) - 1, k = 2^(4/alpha^2), eps = 1/(28 k^2); requires
/// 1/alpha integer.
pub fn params_from_alpha(alpha: &Ratio) -> Result<(Int, Int, Ratio)> {
    if !alpha.is_positive() || alpha > &crate::ratio::ratio(1, 2) {
        return Err(Error::BadParameter("alpha must lie in (0, 1/2]".into()));
    }
    if alpha.numer() != &BigInt::one() {
        return Err(Error::BadParameter("1/alpha must be an integer".into()));
    }
    let a = alpha
        .denom()
        .to_u32()
        .ok_or_else(|| Error::BadParameter("1/alpha too large".into()))?;
    let ell = (BigInt::one() << (2 * a) as usize) - BigInt::one();
    let k = BigInt::one() << (4 * a * a) as usize;
    let eps = Ratio::new(BigInt::one(), BigInt::from(28) * &k * &k);
    Ok((ell, k, eps))
}

#[derive(Debug, Clone)]
pub struct Cor51Item {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct Cor51Report {
    pub alpha: Ratio,
    pub items: Vec<Cor51Item>,
}

impl Cor51Report {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }
}

/// Exact big-integer checks of the alpha-parameterization: the small-dense
/// allowances against 2^(16/alpha^2), the identity 14 k^2 eps = 1/2, and the
/// two amplification-factor inequalities as integer power comparisons.
pub fn check_cor51_inequalities(alpha: &Ratio) -> Result<Cor51Report> {
    let (ell, k, eps) = params_from_alpha(alpha)?;
    let a = alpha.denom().to_u32().expect("validated");
    let mut items = Vec::new();

    let lhs1 = BigInt::from(6) * &k * &k * &k;
    let rhs1 = BigInt::one() << (16 * a * a) as usize;
    items.push(Cor51Item {
        name: "6*k^3 <= 2^(16/alpha^2)".into(),
        lhs: lhs1.to_string(),
        rhs: format!("2^{}", 16 * a * a),
        pass: lhs1 <= rhs1,
    });

    let lhs2 = pow_ratio(&eps, 2) / ratio_usize(2);
    let rhs2 = Ratio::new(BigInt::one(), BigInt::one() << (16 * a * a) as usize);
    items.push(Cor51Item {
        name: "eps^2/2 >= 2^(-16/alpha^2)".into(),
        lhs: crate::ratio::format_ratio(&lhs2),
        rhs: format!("1/2^{}", 16 * a * a),
        pass: lhs2 >= rhs2,
    });

    let ident = Ratio::from_integer(BigInt::from(14) * &k * &k) * &eps;
    items.push(Cor51Item {
        name: "14*k^2*eps == 1/2".into(),
        lhs: crate::ratio::format_ratio(&ident),
        rhs: "1/2".into(),
        pass: ident == crate::ratio::ratio(1, 2),
    });

    // ell*(1 - 14 k^2 eps) >= (ell+1)^(1-alpha), via lhs^a >= (ell+1)^(a-1)
    let lhs4 = Ratio::from_integer(ell.clone())
        * (Ratio::one() - Ratio::from_integer(BigInt::from(14) * &k * &k) * &eps);
    let lhs4_pow = pow_ratio(&lhs4, a);
    let rhs4_pow = Ratio::from_integer(num::pow::pow(&ell + BigInt::one(), (a - 1) as usize));
    items.push(Cor51Item {
        name: "ell*(1-14*k^2*eps) >= (ell+1)^(1-alpha)".into(),
        lhs: crate::ratio::format_ratio(&lhs4),
        rhs: format!("({})^({}/{})", &ell + BigInt::one(), a - 1, a),
        pass: lhs4_pow >= rhs4_pow,
    });

    // (k/(8 ell))*(1 - 2 k eps) >= k^(1-alpha)
    let lhs5 = Ratio::new(k.clone(), BigInt::from(8) * &ell)
        * (Ratio::one() - Ratio::from_integer(BigInt::from(2) * &k) * &eps);
    let lhs5_pow = pow_ratio(&lhs5, a);
    let rhs5_pow = Ratio::from_integer(num::pow::pow(k.clone(), (a - 1) as usize));
    items.push(Cor51Item {
        name: "(k/8ell)*(1-2*k*eps) >= k^(1-alpha)".into(),
        lhs: crate::ratio::format_ratio(&lhs5),
        rhs: format!("({})^({}/{})", k, a - 1, a),
        pass: lhs5_pow >= rhs5_pow,
    });

    Ok(Cor51Report { alpha: alpha.clone(), items })
}

#[derive(Debug, Clone)]
pub struct LevelRecord {
    pub level: usize,
    pub n: usize,
    pub e: usize,
    pub d: Ratio,
    pub outcome_kind: String,
    pub width: Option<usize>,
    /// r at this level: D / d(G_level)
    pub r_level: Ratio,
}

#[derive(Debug, Clone)]
pub struct LiftRecord {
    pub level: usize,
    pub width: usize,
    pub inner_v: usize,
    pub inner_e: usize,
    pub outer_v: usize,
    pub outer_e: usize,
    pub v_ok: bool,
    pub e_ok: bool,
}

#[derive(Debug, Clone)]
pub struct ForcedTrace {
    pub levels: Vec<LevelRecord>,
    pub lifts: Vec<LiftRecord>,
    /// true when the recursion stopped at the depth limit instead of a
    /// small-dense base
    pub capped: bool,
    pub base_v: usize,
    pub base_e: usize,
    pub final_v: usize,
    pub final_e: usize,
    pub widths_product: usize,
    /// final_v <= widths_product * base_v, exact
    pub v_accounting_ok: bool,
    /// d(final) >= d(base) / widths_product, exact
    pub d_accounting_ok: bool,
    /// 1 - lambda*(1-alpha) == 0
    pub identity_ok: bool,
    /// v(H) <= 2^(16/alpha^2) * r^lambda * D, when 1/alpha is integer
    pub final_v_ok: Option<bool>,
    /// d(H) >= 2^(-16/alpha^2) * r^(-lambda) * D, when 1/alpha is integer
    pub final_d_ok: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct ForcedOutcome {
    /// the lifted subgraph, in input-graph ids
    pub vertices: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    pub trace: ForcedTrace,
}

struct Level {
    sub: Graph,
    sub_ids: Vec<u32>,
    con: crate::minor::Contraction,
    width: usize,
}

/// Iterates `amplify`, recursing on each contracted minor. A small dense
/// outcome becomes the base subgraph; reaching `depth_limit` bottoms out on
/// the dense core of the current level instead. The base is then lifted back
/// through the contraction chain with exact per-level accounting.
#[allow(clippy::too_many_arguments)]
pub fn forced_search(
    g: &Graph,
    fp: &ForcedParams,
    k: usize,
    ell: usize,
    big_k: &Ratio,
    eps: &Ratio,
    mode: Mode,
    depth_limit: usize,
) -> Result<ForcedOutcome> {
    let mut levels: Vec<LevelRecord> = Vec::new();
    let mut chain: Vec<Level> = Vec::new();
    let mut current = g.clone();
    let mut capped = false;

    let (base_vertices, base_edges) = loop {
        let level = chain.len();
        if current.e() == 0 {
            return Err(Error::Diagnostic("level graph has no edges".into()));
        }
        let d_level = current.density()?;
        let r_level = &fp.big_d / &d_level;
        if level >= depth_limit {
            capped = true;
            let (core, core_ids) = dense_core(&current)?;
            levels.push(LevelRecord {
                level,
                n: current.n(),
                e: current.e(),
                d: d_level,
                outcome_kind: "depth_capped_core".into(),
                width: None,
                r_level,
            });
            let verts: Vec<u32> = core_ids.clone();
            let mut edges = Vec::new();
            for (u, v) in core.edges() {
                edges.push((core_ids[u as usize], core_ids[v as usize]));
            }
            break (verts, edges);
        }
        let (cert, _) = amplify_with(&current, k, ell, big_k, eps, mode)?;
        match &cert.outcome {
            Outcome::SmallDense { vertices, .. } => {
                levels.push(LevelRecord {
                    level,
                    n: current.n(),
                    e: current.e(),
                    d: d_level,
                    outcome_kind: "small_dense".into(),
                    width: None,
                    r_level,
                });
                let (sub, sub_ids) = current.induced(vertices)?;
                let mut edges = Vec::new();
                for (u, v) in sub.edges() {
                    edges.push((sub_ids[u as usize], sub_ids[v as usize]));
                }
                break (vertices.clone(), edges);
            }
            Outcome::EllMinor { width, branch_sets, singletons, .. }
            | Outcome::KMinor { width, branch_sets, singletons, .. } => {
                let width = *width as usize;
                levels.push(LevelRecord {
                    level,
                    n: current.n(),
                    e: current.e(),
                    d: d_level,
                    outcome_kind: cert.outcome.kind().into(),
                    width: Some(width),
                    r_level,
                });
                let mut union: Vec<u32> = singletons.clone();
                for s in branch_sets {
                    union.extend_from_slice(s);
                }
                let (sub, sub_ids) = current.induced(&union)?;
                let to_sub = |v: u32| sub_ids.binary_search(&v).unwrap() as u32;
                let mut sets: Vec<Vec<u32>> = branch_sets
                    .iter()
                    .map(|s| s.iter().map(|&v| to_sub(v)).collect())
                    .collect();
                sets.extend(singletons.iter().map(|&v| vec![to_sub(v)]));
                let con = contract(&sub, &MinorModel::new(sets, width))?;
                let next = con.quotient.clone();
                chain.push(Level { sub, sub_ids, con, width });
                current = next;
            }
        }
    };

    let base_v = base_vertices.len();
    let base_e = base_edges.len();
    let mut cur_v = base_vertices;
    let mut cur_e = base_edges;
    let mut lifts = Vec::new();
    for (idx, lvl) in chain.iter().enumerate().rev() {
        let lifted = lift_subgraph(&lvl.sub, &lvl.con, &cur_v, &cur_e)?;
        let rec = LiftRecord {
            level: idx,
            width: lvl.width,
            inner_v: cur_v.len(),
            inner_e: cur_e.len(),
            outer_v: lifted.vertices.len(),
            outer_e: lifted.edges.len(),
            v_ok: lifted.vertices.len() <= lvl.width * cur_v.len(),
            e_ok: lifted.edges.len() >= cur_e.len(),
        };
        lifts.push(rec);
        cur_v = lifted
            .vertices
            .iter()
            .map(|&v| lvl.sub_ids[v as usize])
            .collect();
        cur_e = lifted
            .edges
            .iter()
            .map(|&(u, v)| (lvl.sub_ids[u as usize], lvl.sub_ids[v as usize]))
            .collect();
    }

    let widths_product: usize = chain.iter().map(|l| l.width).product();
    let final_v = cur_v.len();
    let final_e = cur_e.len();
    let v_accounting_ok = final_v <= widths_product * base_v;
    // e_f/v_f >= (e_b/v_b) / prod  <=>  e_f * v_b * prod >= e_b * v_f
    let d_accounting_ok = final_e * base_v * widths_product >= base_e * final_v;
    let identity_ok = {
        let expr = Ratio::one() - &fp.lambda * (Ratio::one() - &fp.alpha);
        expr.is_zero()
    };
    let (final_v_ok, final_d_ok) = if fp.alpha.numer() == &BigInt::one() {
        let a = fp.alpha.denom().to_u32().unwrap_or(0);
        if a >= 2 {
            let scale = Ratio::from_integer(BigInt::one() << (16 * a * a) as usize);
            let c_v = &scale * &fp.big_d;
            let c_d = &fp.big_d / &scale;
            // v <= c_v * r^lambda  <=>  v/c_v <= r^(a/(a-1))
            let v_ok = le_pow(&(ratio_usize(final_v) / &c_v), &fp.r, a, a - 1);
            // d >= c_d * r^(-lambda)  <=>  c_d/d <= r^(a/(a-1))
            let d_final = ratio_usize(final_e) / ratio_usize(final_v);
            let d_ok = le_pow(&(&c_d / &d_final), &fp.r, a, a - 1);
            (Some(v_ok), Some(d_ok))
        } else {
            (None, None)
        }
    } else {
        (None, None)
    };

    Ok(ForcedOutcome {
        vertices: cur_v,
        edges: cur_e,
        trace: ForcedTrace {
            levels,
            lifts,
            capped,
            base_v,
            base_e,
            final_v,
            final_e,
            widths_product,
            v_accounting_ok,
            d_accounting_ok,
            identity_ok,
            final_v_ok,
            final_d_ok,
        },
    })
}
