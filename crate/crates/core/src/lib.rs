//! Simplicial means: fit a linearly mapped simplicial complex to a point
//! cloud, then prune the complex down to the simplices the data supports.
//!
//! The fitting stage ([`fitting::fit`]) generalizes Lloyd's k-means: every
//! point is projected onto the nearest point of the mapped complex, and each
//! vertex moves toward the points that landed on simplices containing it,
//! weighted by barycentric coordinate. The pruning stage
//! ([`pruning::prune`]) then slides each projection onto boundary faces
//! while the move stays under a threshold and keeps only the simplices that
//! still carry points, which leaves a locally linear approximation and a
//! short barycentric code for every point.

pub mod cloud;
pub mod complex;
pub mod error;
pub mod fitting;
pub mod io;
pub mod meshgen;
pub mod metrics;
pub mod nearest;
pub mod presets;
pub mod pruning;
pub mod sampling;

pub use cloud::PointCloud;
pub use complex::{boundary_faces, smallest_containing_simplex, BarycentricPoint, SimplexRef, SimplicialComplex};
pub use error::{Error, Result};
pub use fitting::{fit, FitConfig, FitResult, Neighborhood};
pub use meshgen::{Mesh, MeshSpec, Placement};
pub use nearest::{nearest_on_complex, nearest_on_simplex, pseudoinverse, Descent, LinearMap, ProjectionResult, Projector};
pub use pruning::{prune, reduced_representation, PruneConfig, PruneMode, PruneResult};
pub use sampling::{sample, SampleKind, SampleSpec};
