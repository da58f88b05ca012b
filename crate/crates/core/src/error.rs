use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("complex has no facets")]
    EmptyComplex,
    #[error("facet {index} is empty")]
    EmptyFacet { index: usize },
    #[error("simplex has {0} vertices; at most 64 are supported")]
    SimplexTooLarge(usize),
    #[error("facet {index} repeats vertex {vertex}")]
    DuplicateVertex { index: usize, vertex: usize },
    #[error("vertex {vertex} out of range for a complex with {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("simplex {0:?} is not a simplex of the complex")]
    NotASimplex(Vec<usize>),
    #[error("a vertex has no boundary")]
    VertexHasNoBoundary,
    #[error("every barycentric coordinate is below the zero tolerance")]
    NoContainingSimplex,
    #[error("complex is not pure: facet {index} has dimension {found}, expected {expected}")]
    NotPure {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear map has {positions} positions but the complex has {vertices} vertices")]
    MapSizeMismatch { positions: usize, vertices: usize },
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("restricted facet list for point {0} is empty")]
    EmptyRestriction(usize),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
