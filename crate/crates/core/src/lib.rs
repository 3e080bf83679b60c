//! Bundle graphs from their depth codes.
//!
//! The crate builds `T_{W,κ}` from a depth word, evaluates its shortest-path
//! metric in closed form, constructs three bi-Lipschitz embeddings (a
//! canonical ℓ∞-tree model, `L₁[0, M+1]` and a summing-basis sequence space)
//! with exact arithmetic, and checks their distortion bounds against
//! brute-force oracles.

pub mod cli;
pub mod coding;
pub mod embed_esa;
pub mod embed_l1;
pub mod embed_linf;
pub mod error;
pub mod graph;
pub mod harness;
pub mod products;
pub mod report;

pub use coding::{meet, nm, p_param, updown, Address, Code, IndexConvention, Vertex, Xyz};
pub use error::{Error, Result};
pub use graph::{dist_formula, BundleGraph};
