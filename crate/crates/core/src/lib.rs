//! Certified density amplification on graphs.
//!
//! Given a dense host graph, the pipeline produces one of three outcomes,
//! each with an independently verifiable certificate: a small dense
//! subgraph, a bounded minor built from a claw matching, or a bounded minor
//! built from a shrubbery. All quantitative claims are computed and checked
//! in exact rational arithmetic.

pub mod amplify;
pub mod certificate;
pub mod claw;
pub mod error;
pub mod forced;
pub mod forest;
pub mod gen;
pub mod graph;
pub mod minor;
pub mod oracle;
pub mod ratio;
pub mod shrubbery;

pub use amplify::{amplify, amplify_with, RunStats};
pub use certificate::{fingerprint, verify_certificate, Certificate, Mode, Outcome, VerifyResult};
pub use error::{Error, Result};
pub use forest::Forest;
pub use graph::{Bipartition, Graph, MateWitness, Params};
pub use minor::MinorModel;
pub use ratio::{format_ratio, parse_ratio, Ratio};
