//! The refinement stage: move fitted points onto boundary faces while they
//! stay close, then keep only the simplices that still hold a point.

use serde::{Deserialize, Serialize};

use crate::cloud::dist;
use crate::complex::{boundary_faces, BarycentricPoint, SimplexRef, SimplicialComplex};
use crate::error::{Error, Result};
use crate::fitting::FitResult;
use crate::nearest::{LinearMap, Projector};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PruneMode {
    /// Accept a step when the image moves at most `alpha`.
    #[default]
    Euclidean,
    /// Accept a step when the smallest barycentric coordinate of the current
    /// point is at most `alpha`. Scale independent.
    BarycentricMin,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PruneConfig {
    pub alpha: f64,
    #[serde(default)]
    pub mode: PruneMode,
    /// `alpha` is multiplied by this after every accepted step.
    #[serde(default = "one")]
    pub decay: f64,
}

fn one() -> f64 {
    1.0
}

impl PruneConfig {
    pub fn new(alpha: f64, mode: PruneMode) -> Self {
        Self { alpha, mode, decay: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return Err(Error::InvalidConfig(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        if !(self.decay > 0.0 && self.decay <= 1.0) {
            return Err(Error::InvalidConfig(format!("decay must lie in (0, 1], got {}", self.decay)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrunedPoint {
    /// The final point, on its final simplex.
    pub point: BarycentricPoint,
    /// Accepted descent steps.
    pub steps: usize,
    /// Distances `|g(z~) - g(z)|` of the accepted steps.
    pub step_lengths: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct PruneResult {
    /// Union of the final simplices, in the original vertex numbering.
    pub complex: SimplicialComplex,
    pub points: Vec<PrunedPoint>,
}

/// Descends a single point. `start` must be the point on its smallest simplex.
pub fn descend(start: &BarycentricPoint, map: &LinearMap, cfg: &PruneConfig, projector: &Projector) -> PrunedPoint {
    let mut z = start.clone();
    let mut alpha = cfg.alpha;
    let mut step_lengths = Vec::new();
    while !z.simplex.is_vertex() {
        let gz = map.apply(&z);
        let faces = boundary_faces(&z.simplex).expect("not a vertex");
        let mut best: Option<(f64, BarycentricPoint)> = None;
        for face in &faces {
            let r = projector.point_on_simplex(face, map, &gz);
            // boundary faces come ordered by removed vertex; the first wins ties
            if best.as_ref().is_none_or(|(d, _)| r.distance < *d) {
                best = Some((r.distance, r.point));
            }
        }
        let (step, next) = best.expect("a simplex has boundary faces");
        let accept = match cfg.mode {
            PruneMode::Euclidean => step <= alpha,
            PruneMode::BarycentricMin => z.min_coordinate() <= alpha,
        };
        if !accept {
            break;
        }
        debug_assert!(next.simplex.len() < z.simplex.len());
        step_lengths.push(step);
        z = next;
        alpha *= cfg.decay;
    }
    PrunedPoint {
        point: z,
        steps: step_lengths.len(),
        step_lengths,
    }
}

/// Runs the descent for every fitted point and assembles the subcomplex.
pub fn prune(fit: &FitResult, k: &SimplicialComplex, cfg: &PruneConfig) -> Result<PruneResult> {
    prune_with(fit, k, cfg, &Projector::default())
}

pub fn prune_with(fit: &FitResult, k: &SimplicialComplex, cfg: &PruneConfig, projector: &Projector) -> Result<PruneResult> {
    cfg.validate()?;
    fit.map.check_covers(k)?;
    for a in &fit.assignments {
        if !k.contains_simplex(&a.point.simplex) {
            return Err(Error::NotASimplex(a.point.simplex.vertices().to_vec()));
        }
    }
    use rayon::prelude::*;
    let points: Vec<PrunedPoint> = fit
        .assignments
        .par_iter()
        .map(|a| descend(&a.point, &fit.map, cfg, projector))
        .collect();
    let complex = union_of(k.vertex_count(), points.iter().map(|p| &p.point.simplex))?;
    Ok(PruneResult { complex, points })
}

fn union_of<'a>(vertex_count: usize, simplices: impl Iterator<Item = &'a SimplexRef>) -> Result<SimplicialComplex> {
    let facets: Vec<Vec<usize>> = simplices.map(|s| s.vertices().to_vec()).collect();
    SimplicialComplex::with_vertex_count(vertex_count, facets)
}

/// A point's code in the pruned complex and its image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedCode {
    pub simplex: SimplexRef,
    pub lambda: Vec<f64>,
    pub reconstruction: Vec<f64>,
}

pub fn reduced_representation(result: &PruneResult, map: &LinearMap, index: usize) -> Result<ReducedCode> {
    let p = result
        .points
        .get(index)
        .ok_or_else(|| Error::InvalidConfig(format!("point index {index} out of range")))?;
    Ok(ReducedCode {
        simplex: p.point.simplex.clone(),
        lambda: p.point.lambda.clone(),
        reconstruction: map.apply(&p.point),
    })
}

/// One line of the codes output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeRecord {
    pub y_index: usize,
    pub simplex: Vec<usize>,
    pub lambda: Vec<f64>,
    pub reconstruction: Vec<f64>,
    pub residual: f64,
}

impl CodeRecord {
    pub fn new(y_index: usize, code: ReducedCode, y: &[f64]) -> Self {
        let residual = dist(y, &code.reconstruction);
        Self {
            y_index,
            simplex: code.simplex.vertices().to_vec(),
            lambda: code.lambda,
            reconstruction: code.reconstruction,
            residual,
        }
    }
}
