//! Node roles at a given neighbourhood depth.
//!
//! Three notions of role are provided, from finest to coarsest:
//!
//! * [`exact`]: equivalence of node-identified unravellings (small graphs only)
//! * [`snp`]: equality of sorted walk-count embeddings
//! * [`wl`]: colour refinement
//!
//! plus TUDataset loading ([`dataset`]), partition utilities ([`partition`]),
//! role statistics ([`metrics`]) and randomised cross-checks ([`verify`]).

pub mod dataset;
pub mod error;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod metrics;
pub mod partition;
pub mod snp;
pub mod verify;
pub mod wl;

pub use error::{Error, Result};
pub use exact::ExactConfig;
pub use graph::{constant_coloring, disjoint_union, Coloring, Graph, GraphCollection};
pub use metrics::Method;
