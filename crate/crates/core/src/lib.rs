//! Hausdorff leaf spaces of discretized codimension-one foliations.
//!
//! Finite metric spaces are the common currency. A [`FoliatedComplex`] is a
//! leaf-labelled weighted graph; [`hls`] collapses it to the metric space of
//! leaf classes, and the [`gh`] module estimates Gromov–Hausdorff distances
//! between the results.

pub mod convergence;
pub mod defaults;
pub mod dot;
pub mod error;
pub mod foliated;
pub mod generators;
pub mod gh;
pub mod graph;
pub mod metric;
pub mod quotient;
pub mod union_find;

mod paths;

pub use convergence::{
    check_density_condition, iff_audit, run_convergence, AuditReport, AuditStatus, ConditionReport,
    ConvergenceOptions, ConvergenceReport, Verdict, WarpFamily, WarpSequence,
};
pub use error::{Error, Result};
pub use foliated::{
    fuse_leaves, glue_complexes, hls, leaf_distance_matrix, segment_parameter, warp, EdgeKind,
    FoliatedComplex, GlueMode, HlsSpace, WarpSpec,
};
pub use generators::{generate, realize_graph, Generator, Realization};
pub use gh::{
    estimate, gh_exact, gh_heuristic, gromov_net_bound, lower_bounds, Correspondence,
    EstimateOptions, GhEstimate, GhMethod,
};
pub use graph::{extract_graph, measure_ball_check, sample_graph, MetricGraph};
pub use metric::{
    eps_net, find_isometry, geodesic_metric, k_net, validate_metric, Bijection, EpsNet,
    FiniteMetricSpace, MetricMode, ValidationReport, WeightedGraphSpace,
};
pub use quotient::{
    collapse_subset, glue, orbit_quotient, quotient_metric, PointRelation, QuotientResult,
};
