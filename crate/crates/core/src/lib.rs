//! Extremal signless Laplacian spectral radius among graphs without a
//! `K_{1,t}` minor: graph families, Q-index computation, star-minor tests,
//! spectral perturbations and exhaustive extremal search.

pub mod acceptance;
pub mod cache;
pub mod canon;
pub mod error;
pub mod families;
pub mod graph;
pub mod graph6;
pub mod minor;
pub mod report;
pub mod search;
pub mod spectral;
pub mod transforms;

pub use canon::{canonical_form, is_isomorphic, CanonicalForm};
pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub use spectral::{q_index, SpectralResult};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
