use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Structural failures. Axiom violations of otherwise well-formed spaces are
/// reported through [`crate::metric::ValidationReport`] instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distance table is not square: {rows} rows for {points} points (row {row} has {len} entries)")]
    NonSquare {
        points: usize,
        rows: usize,
        row: usize,
        len: usize,
    },

    #[error("distance entry ({0}, {1}) is negative: {2}")]
    NegativeEntry(String, String, f64),

    #[error("distance entry ({0}, {1}) is not finite")]
    NonFinite(String, String),

    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },

    #[error("unknown {kind} id `{id}`")]
    UnknownId { kind: &'static str, id: String },

    #[error("edge ({0}, {1}) has non-positive length {2}")]
    NonPositiveLength(String, String, f64),

    #[error("disconnected: `{0}` cannot reach `{1}`")]
    Disconnected(String, String),

    #[error("leaf `{leaf}` has a tangentially disconnected vertex set (`{a}` cannot reach `{b}` along the leaf)")]
    LeafDisconnected { leaf: String, a: String, b: String },

    #[error("{kind} edge ({u}, {v}) violates leaf incidence")]
    EdgeKindMismatch {
        kind: &'static str,
        u: String,
        v: String,
    },

    #[error("vertex `{vertex}` has no vertex of another leaf within mesh {mesh}")]
    MeshContract { vertex: String, mesh: f64 },

    #[error("map is not a bijection: `{0}` appears twice")]
    NotBijective(String),

    #[error("identification ({0}, {1}) does not map leaves onto leaves")]
    NotLeafRespecting(String, String),

    #[error("warp value for leaf `{leaf}` is {value}; expected {expected}")]
    BadWarpValue {
        leaf: String,
        value: f64,
        expected: &'static str,
    },

    #[error("warp spec has no value for leaf `{0}`")]
    MissingLeaf(String),

    #[error("no warp term for index {0}")]
    MissingTerm(usize),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("exact search refused: {size} exceeds cap {cap}; use an estimator instead")]
    CapExceeded { size: usize, cap: usize },

    #[error("not a segment-like HLS: {0}")]
    NotSegmentLike(String),

    #[error("region {index} ({kind}) fails its precondition: {reason}")]
    BadRegion {
        index: usize,
        kind: &'static str,
        reason: String,
    },
}
