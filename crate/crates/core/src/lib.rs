//! Exact computational toolkit for Grassmann graphs over GF(q) and the
//! subgraph of non-degenerate linear [n,k]_q codes.
//!
//! The crate builds the Grassmann graph on all k-dimensional subspaces of
//! F_q^n and its subgraph on non-degenerate subspaces (those not inside a
//! coordinate hyperplane), classifies the maximal cliques of the subgraph,
//! and reconstructs the full graph from the subgraph alone through special
//! families of disjoint maximal cliques, verifying the reconstruction by
//! exact edge-set comparison under an explicit vertex map. Small-field
//! counterexamples showing where the construction breaks are packaged as
//! executable checks.
//!
//! Everything is exact and deterministic: arithmetic is table-driven GF(q),
//! subspaces are unique RREF matrices, and every enumeration has a fixed
//! order independent of thread count.

pub mod error;
pub mod field;
pub mod linalg;
pub mod subspace;
mod bitset;
pub mod graph;
pub mod grassmann;
pub mod recovery;
pub mod n4dual;
pub mod counterexamples;
pub mod report;
pub mod cache;

pub use error::{Error, Result};

/// Resource limits shared by enumeration-heavy entry points.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    /// Maximum number of subspaces a single enumeration may produce.
    pub subspace_cap: u64,
    /// Maximum number of maximal cliques a single enumeration may emit.
    pub clique_limit: usize,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps {
            subspace_cap: 2_000_000,
            clique_limit: 1_000_000,
        }
    }
}
