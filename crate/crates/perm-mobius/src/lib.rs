//! Möbius function computation on the permutation pattern-containment poset.
//!
//! Permutations are ordered by classical pattern containment: `σ ≤ π` when `π`
//! has a subsequence order-isomorphic to `σ`. This crate computes the Möbius
//! function `μ[σ,π]` of that poset three independent slow ways (memoized
//! recursion, Hall chain sums, zeta-matrix inversion) and through a collection
//! of theorem-backed fast paths (zero certificates, decomposition recursions,
//! contributing sets, increasing-oscillation inequalities, balloon and wedge
//! recursions), plus a census engine for exhaustive sweeps and named-family
//! value tables.

pub mod census;
pub mod engines;
pub mod families;
pub mod fast_paths;
pub mod perm;
pub mod poset;

use thiserror::Error;

/// Unified error type; variants map onto the CLI exit-code contract.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed permutation text or invalid value sequence (CLI exit 2).
    #[error("parse error: {0}")]
    Parse(String),
    /// A size guard refused the computation (CLI exit 3).
    #[error("size guard exceeded: {0}")]
    Guard(String),
    /// Exact integer arithmetic would overflow (CLI exit 4).
    #[error("integer overflow during {0}")]
    Overflow(&'static str),
    /// A constructor or operation was given out-of-range parameters (CLI exit 2).
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    /// Filesystem failure while reading or writing artifacts.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
