//! Numeric defaults, kept in one place so every run can cite a single table.
//!
//! | constant | value | used by |
//! |---|---|---|
//! | [`RELATIVE_TOL`] | 1e-9 | triangle tolerance and zero-collapse threshold, times the diameter |
//! | [`ISOMETRY_EXHAUSTIVE_CAP`] | 10 | `find_isometry` searches without a node budget up to this size |
//! | [`ISOMETRY_NODE_BUDGET`] | 2,000,000 | backtracking nodes allowed above the cap |
//! | [`GH_EXACT_CAP`] | 16 | max `|X|·|Y|` for exhaustive correspondence enumeration |
//! | [`NET_EXHAUSTIVE_K`] | 8 | net matchings are solved exactly up to this size |
//! | [`NET_NODE_BUDGET`] | 200,000 | branch-and-bound nodes for larger net matchings |
//! | [`HEURISTIC_BUDGET`] | 16 | restarts for `gh_heuristic` |
//! | [`CONVERGENCE_VERTEX_CAP`] | 400 | warped complexes larger than this are net-subsampled |
//! | [`SEED`] | 0 | default seed |

/// Relative tolerance; absolute tolerances are this times the space diameter.
pub const RELATIVE_TOL: f64 = 1e-9;

pub const ISOMETRY_EXHAUSTIVE_CAP: usize = 10;

pub const ISOMETRY_NODE_BUDGET: u64 = 2_000_000;

pub const GH_EXACT_CAP: usize = 16;

pub const NET_EXHAUSTIVE_K: usize = 8;

pub const NET_NODE_BUDGET: u64 = 200_000;

pub const HEURISTIC_BUDGET: usize = 16;

pub const CONVERGENCE_VERTEX_CAP: usize = 400;

pub const SEED: u64 = 0;

/// `RELATIVE_TOL × diameter`.
pub fn relative_tol(diameter: f64) -> f64 {
    RELATIVE_TOL * diameter
}
