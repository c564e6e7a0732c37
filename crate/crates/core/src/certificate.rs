//! Certificates: a serializable record of an amplification outcome together
//! with an independent verifier that re-derives every claim from the host
//! graph and exact arithmetic. Rationals travel as `p/q` strings and the
//! document round-trips bit-exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{dense_core, Graph};
use crate::minor::{contract, validate_model, MinorModel, ModelCheck};
use crate::ratio::{format_ratio, parse_ratio, pow_ratio, ratio_usize, Ratio};
use num::One;

pub const SCHEMA: &str = "minoramp-cert-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Theorem,
    Relaxed,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Theorem => write!(f, "theorem"),
            Mode::Relaxed => write!(f, "relaxed"),
        }
    }
}

mod ratio_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Ratio, D::Error> {
        let s = String::deserialize(d)?;
        parse_ratio(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub n: u64,
    pub e: u64,
    pub hash: String,
}

/// 64-bit FNV-1a over the sorted edge list, little-endian u32 pairs.
pub fn fingerprint(g: &Graph) -> Fingerprint {
    const OFFSET: u64 = 0xcbf29ce484222325;
    const PRIME: u64 = 0x100000001b3;
    let mut h = OFFSET;
    for (u, v) in g.edges() {
        for byte in u.to_le_bytes().into_iter().chain(v.to_le_bytes()) {
            h ^= byte as u64;
            h = h.wrapping_mul(PRIME);
        }
    }
    Fingerprint {
        n: g.n() as u64,
        e: g.e() as u64,
        hash: format!("{h:016x}"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertParams {
    pub k: u64,
    pub ell: u64,
    #[serde(rename = "K", with = "ratio_str")]
    pub big_k: Ratio,
    #[serde(with = "ratio_str")]
    pub eps: Ratio,
    /// reference density: the density of the dense core of the host
    #[serde(with = "ratio_str")]
    pub d: Ratio,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    SmallDense {
        vertices: Vec<u32>,
        #[serde(with = "ratio_str")]
        claimed_v_bound: Ratio,
        #[serde(with = "ratio_str")]
        claimed_e_bound: Ratio,
    },
    EllMinor {
        width: u64,
        branch_sets: Vec<Vec<u32>>,
        singletons: Vec<u32>,
        #[serde(with = "ratio_str")]
        claimed_density: Ratio,
        #[serde(with = "ratio_str")]
        bound_construction: Ratio,
        #[serde(with = "ratio_str")]
        bound_target: Ratio,
        met_target: bool,
    },
    KMinor {
        width: u64,
        branch_sets: Vec<Vec<u32>>,
        singletons: Vec<u32>,
        #[serde(with = "ratio_str")]
        claimed_density: Ratio,
        #[serde(with = "ratio_str")]
        bound_construction: Ratio,
    },
}

impl Outcome {
    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::SmallDense { .. } => "small_dense",
            Outcome::EllMinor { .. } => "ell_minor",
            Outcome::KMinor { .. } => "k_minor",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub mode: Mode,
    pub fingerprint: Fingerprint,
    pub params: CertParams,
    pub outcome: Outcome,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        serde_json::from_str(text).map_err(|e| Error::MalformedCertificate(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyResult {
    Accept,
    Reject(String),
}

impl VerifyResult {
    pub fn is_accept(&self) -> bool {
        matches!(self, VerifyResult::Accept)
    }
}

macro_rules! reject {
    ($($arg:tt)*) => {
        return Ok(VerifyResult::Reject(format!($($arg)*)))
    };
}

fn strictly_increasing(v: &[u32]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// Density of the quotient of `G[union of the sets]` under the model made of
/// `branch_sets` plus the listed singletons.
pub fn model_quotient_density(
    g: &Graph,
    branch_sets: &[Vec<u32>],
    singletons: &[u32],
    width: usize,
) -> Result<Ratio> {
    let mut union: Vec<u32> = singletons.to_vec();
    for s in branch_sets {
        union.extend_from_slice(s);
    }
    let (sub, sub_ids) = g.induced(&union)?;
    let to_sub = |v: u32| -> Result<u32> {
        sub_ids
            .binary_search(&v)
            .map(|i| i as u32)
            .map_err(|_| Error::InvalidModel(format!("vertex {v} missing from the union")))
    };
    let mut sets: Vec<Vec<u32>> = Vec::with_capacity(branch_sets.len() + singletons.len());
    for s in branch_sets {
        sets.push(s.iter().map(|&v| to_sub(v)).collect::<Result<_>>()?);
    }
    for &v in singletons {
        sets.push(vec![to_sub(v)?]);
    }
    let model = MinorModel::new(sets, width);
    if let ModelCheck::Violation(why) = validate_model(&sub, &model) {
        return Err(Error::InvalidModel(why));
    }
    let con = contract(&sub, &model)?;
    con.quotient.density()
}

/// (k / 8*ell) * (1 - 2*k*eps) * d
pub fn k_minor_bound(k: usize, ell: usize, eps: &Ratio, d: &Ratio) -> Ratio {
    (ratio_usize(k) / ratio_usize(8 * ell)) * (Ratio::one() - ratio_usize(2 * k) * eps) * d
}

/// ell * (1 - 14*k^2*eps) * d
pub fn ell_minor_target_bound(k: usize, ell: usize, eps: &Ratio, d: &Ratio) -> Ratio {
    ratio_usize(ell) * (Ratio::one() - ratio_usize(14 * k * k) * eps) * d
}

/// The pipeline derivation for the ell-minor branch: eps0 = 2*eps and
/// d0 = (1 - 8*k^2*eps) * d feed the bipartite guarantee.
pub fn ell_minor_construction_bound(k: usize, ell: usize, eps: &Ratio, d: &Ratio) -> Ratio {
    let eps0 = ratio_usize(2) * eps;
    let d0 = (Ratio::one() - ratio_usize(8 * k * k) * eps) * d;
    crate::claw::bipartite_minor_bound(ell, &eps0, &d0)
}

/// 6*k^3*d and eps^2*d^2/2, the small-dense allowances.
pub fn small_dense_bounds(k: usize, eps: &Ratio, d: &Ratio) -> (Ratio, Ratio) {
    let v = ratio_usize(6 * k * k * k) * d;
    let e = pow_ratio(eps, 2) * pow_ratio(d, 2) / ratio_usize(2);
    (v, e)
}

/// Re-derives every claim of a certificate from the host graph: fingerprint,
/// reference density, model validity, measured counts and densities, and in
/// theorem mode the parameter domain and the theorem-level bounds.
pub fn verify_certificate(g: &Graph, cert: &Certificate) -> Result<VerifyResult> {
    if cert.schema != SCHEMA {
        reject!("schema: expected {SCHEMA}, found {}", cert.schema);
    }
    let fp = fingerprint(g);
    if fp != cert.fingerprint {
        reject!("fingerprint mismatch");
    }
    let k = cert.params.k as usize;
    let ell = cert.params.ell as usize;
    let eps = &cert.params.eps;
    if !(k >= ell && ell >= 2) {
        reject!("parameter domain: need k >= ell >= 2");
    }
    if !(eps > &ratio_usize(0) && eps < &Ratio::one()) {
        reject!("parameter domain: need eps in (0,1)");
    }
    if g.e() == 0 {
        reject!("reference density mismatch: host has no edges");
    }
    let (core, _) = dense_core(g)?;
    let d = core.density()?;
    if d != cert.params.d {
        reject!("reference density mismatch");
    }
    let theorem = cert.mode == Mode::Theorem;
    if theorem {
        if &cert.params.big_k < &ratio_usize(k) {
            reject!("parameter domain: need K >= k");
        }
        if eps * ratio_usize(16 * k * k) > Ratio::one() {
            reject!("parameter domain: need eps <= 1/(16 k^2)");
        }
        if g.density()? * eps < ratio_usize(2) {
            reject!("parameter domain: need d(G) >= 2/eps");
        }
    }
    match &cert.outcome {
        Outcome::SmallDense {
            vertices,
            claimed_v_bound,
            claimed_e_bound,
        } => {
            if vertices.is_empty() || !strictly_increasing(vertices) {
                reject!("malformed certificate: vertex list not strictly increasing");
            }
            if let Some(&max) = vertices.last() {
                if g.check_vertex(max).is_err() {
                    reject!("malformed certificate: vertex {max} out of range");
                }
            }
            if &ratio_usize(vertices.len()) > claimed_v_bound {
                reject!("vertex bound: {} exceeds the claim", vertices.len());
            }
            let e_measured = g.induced_edge_count(vertices);
            if &ratio_usize(e_measured) < claimed_e_bound {
                reject!("edge bound: {e_measured} below the claim");
            }
            if theorem {
                let (vb, eb) = small_dense_bounds(k, eps, &d);
                if claimed_v_bound > &vb {
                    reject!("theorem bound: claimed vertex allowance too large");
                }
                if claimed_e_bound < &eb {
                    reject!("theorem bound: claimed edge guarantee too small");
                }
            }
        }
        Outcome::EllMinor {
            width,
            branch_sets,
            singletons,
            claimed_density,
            bound_construction,
            bound_target,
            met_target,
        } => {
            if *width as usize != ell + 1 {
                reject!("width: ell-minor must have width ell+1");
            }
            if let Err(Error::MalformedCertificate(why)) =
                check_minor_shape(g, branch_sets, singletons, *width as usize)
            {
                reject!("malformed certificate: {why}");
            }
            let measured =
                match model_quotient_density(g, branch_sets, singletons, *width as usize) {
                    Ok(r) => r,
                    Err(Error::InvalidModel(why)) => reject!("{why}"),
                    Err(e) => return Err(e),
                };
            if &measured < claimed_density {
                reject!("density bound: measured {measured} below claim {claimed_density}");
            }
            if theorem {
                let expect = ell_minor_construction_bound(k, ell, eps, &d);
                if bound_construction != &expect {
                    reject!("construction bound: recorded value does not match the parameters");
                }
                if claimed_density < bound_construction {
                    reject!("construction bound: claim below the guarantee");
                }
                let target = ell_minor_target_bound(k, ell, eps, &d);
                if bound_target != &target {
                    reject!("target bound: recorded value does not match the parameters");
                }
                if *met_target != (claimed_density >= &target) {
                    reject!("target flag: inconsistent with the recorded densities");
                }
            }
        }
        Outcome::KMinor {
            width,
            branch_sets,
            singletons,
            claimed_density,
            bound_construction,
        } => {
            if *width as usize != k {
                reject!("width: k-minor must have width k");
            }
            if let Err(Error::MalformedCertificate(why)) =
                check_minor_shape(g, branch_sets, singletons, *width as usize)
            {
                reject!("malformed certificate: {why}");
            }
            let measured =
                match model_quotient_density(g, branch_sets, singletons, *width as usize) {
                    Ok(r) => r,
                    Err(Error::InvalidModel(why)) => reject!("{why}"),
                    Err(e) => return Err(e),
                };
            if &measured < claimed_density {
                reject!("density bound: measured {measured} below claim {claimed_density}");
            }
            if theorem {
                let expect = k_minor_bound(k, ell, eps, &d);
                if bound_construction != &expect {
                    reject!("construction bound: recorded value does not match the parameters");
                }
                if claimed_density < bound_construction {
                    reject!("construction bound: claim below the guarantee");
                }
            }
        }
    }
    Ok(VerifyResult::Accept)
}

fn check_minor_shape(
    g: &Graph,
    branch_sets: &[Vec<u32>],
    singletons: &[u32],
    width: usize,
) -> Result<()> {
    let shape_err = |msg: &str| Err(Error::MalformedCertificate(msg.into()));
    if branch_sets.is_empty() {
        return shape_err("no branch sets");
    }
    for s in branch_sets {
        if s.is_empty() || !strictly_increasing(s) {
            return shape_err("branch set not strictly increasing");
        }
    }
    if !strictly_increasing(singletons) && !singletons.is_empty() {
        return shape_err("singleton list not strictly increasing");
    }
    for &v in branch_sets.iter().flatten().chain(singletons.iter()) {
        if g.check_vertex(v).is_err() {
            return shape_err("vertex out of range");
        }
    }
    let _ = width;
    Ok(())
}

/// The full model (branch sets plus singletons) for structural validation;
/// overlap, connectivity and width violations surface as `Reject`s with the
/// violation text.
pub fn minor_model_check(
    g: &Graph,
    branch_sets: &[Vec<u32>],
    singletons: &[u32],
    width: usize,
) -> ModelCheck {
    let mut sets: Vec<Vec<u32>> = branch_sets.to_vec();
    sets.extend(singletons.iter().map(|&v| vec![v]));
    validate_model(g, &MinorModel::new(sets, width))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::ratio;

    #[test]
    fn fingerprint_is_stable() {
        let mut g = Graph::new(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        let f1 = fingerprint(&g);
        let f2 = fingerprint(&g);
        assert_eq!(f1, f2);
        let mut h = Graph::new(3);
        h.add_edge(0, 1).unwrap();
        h.add_edge(0, 2).unwrap();
        assert_ne!(fingerprint(&h).hash, f1.hash);
    }

    #[test]
    fn json_roundtrip_bit_exact() {
        let cert = Certificate {
            schema: SCHEMA.into(),
            mode: Mode::Relaxed,
            fingerprint: Fingerprint { n: 4, e: 2, hash: "00ff00ff00ff00ff".into() },
            params: CertParams {
                k: 2,
                ell: 2,
                big_k: ratio(2, 1),
                eps: ratio(1, 4),
                d: ratio(1, 2),
            },
            outcome: Outcome::SmallDense {
                vertices: vec![0, 1, 2],
                claimed_v_bound: ratio(3, 1),
                claimed_e_bound: ratio(2, 1),
            },
        };
        let json = cert.to_json();
        let back = Certificate::from_json(&json).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_json(), json);
    }
}
