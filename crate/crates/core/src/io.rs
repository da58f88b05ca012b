//! On-disk forms of fitted and pruned results.
//!
//! Every `from_json` here validates what it reads, so a parsed file always
//! converts back into consistent in-memory values.

use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::complex::{BarycentricPoint, ComplexFile, SimplexRef, SimplicialComplex};
use crate::error::{Error, Result};
use crate::fitting::{FitConfig, FitResult};
use crate::nearest::{LinearMap, ProjectionResult};
use crate::pruning::PruneResult;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentRecord {
    pub facet: Vec<usize>,
    pub simplex: Vec<usize>,
    pub lambda: Vec<f64>,
    pub image: Vec<f64>,
    pub distance: f64,
}

/// Everything a fit produced, plus the data it was fitted to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitFile {
    pub complex: ComplexFile,
    pub positions: Vec<Vec<f64>>,
    pub points: Vec<Vec<f64>>,
    pub config: FitConfig,
    pub iterations_run: usize,
    pub ssd_trace: Vec<f64>,
    pub displacement_trace: Vec<f64>,
    pub assignments: Vec<AssignmentRecord>,
}

/// Validated contents of a [`FitFile`].
#[derive(Clone, Debug)]
pub struct LoadedFit {
    pub complex: SimplicialComplex,
    pub cloud: PointCloud,
    pub config: FitConfig,
    pub result: FitResult,
}

impl FitFile {
    pub fn new(k: &SimplicialComplex, cloud: &PointCloud, cfg: &FitConfig, fit: &FitResult) -> Self {
        Self {
            complex: k.to_file(),
            positions: fit.map.to_file().positions,
            points: cloud.iter().map(<[f64]>::to_vec).collect(),
            config: cfg.clone(),
            iterations_run: fit.iterations_run,
            ssd_trace: fit.ssd_trace.clone(),
            displacement_trace: fit.displacement_trace.clone(),
            assignments: fit
                .assignments
                .iter()
                .map(|a| AssignmentRecord {
                    facet: a.facet.vertices().to_vec(),
                    simplex: a.point.simplex.vertices().to_vec(),
                    lambda: a.point.lambda.clone(),
                    image: a.image.clone(),
                    distance: a.distance,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fit file serializes")
    }

    pub fn from_json(text: &str) -> Result<LoadedFit> {
        let file: FitFile = serde_json::from_str(text)?;
        file.load()
    }

    pub fn load(self) -> Result<LoadedFit> {
        let complex = self.complex.into_complex()?;
        let map = LinearMap::from_rows(&self.positions)?;
        map.check_covers(&complex)?;
        let cloud = PointCloud::from_rows(&self.points)?;
        if cloud.dim() != map.dim() {
            return Err(Error::DimensionMismatch {
                expected: map.dim(),
                found: cloud.dim(),
            });
        }
        if self.assignments.len() != cloud.len() {
            return Err(Error::DimensionMismatch {
                expected: cloud.len(),
                found: self.assignments.len(),
            });
        }
        let mut assignments = Vec::with_capacity(self.assignments.len());
        for a in self.assignments {
            let facet = SimplexRef::new(a.facet)?;
            if !complex.facets().contains(&facet) {
                return Err(Error::NotASimplex(facet.vertices().to_vec()));
            }
            let simplex = SimplexRef::new(a.simplex)?;
            if !simplex.is_face_of(&facet) {
                return Err(Error::NotASimplex(simplex.vertices().to_vec()));
            }
            let point = BarycentricPoint::new(simplex, a.lambda)?;
            if !point.is_normalized() {
                return Err(Error::Parse("assignment coordinates are not barycentric".into()));
            }
            if a.image.len() != map.dim() {
                return Err(Error::DimensionMismatch {
                    expected: map.dim(),
                    found: a.image.len(),
                });
            }
            if !(a.distance >= 0.0 && a.distance.is_finite()) || a.image.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("assignment".into()));
            }
            assignments.push(ProjectionResult {
                point,
                image: a.image,
                distance: a.distance,
                facet,
            });
        }
        self.config.validate()?;
        Ok(LoadedFit {
            complex,
            cloud,
            config: self.config,
            result: FitResult {
                map,
                assignments,
                iterations_run: self.iterations_run,
                ssd_trace: self.ssd_trace,
                displacement_trace: self.displacement_trace,
            },
        })
    }
}

/// `iter,mean_ssd,max_displacement`, one row per map.
pub fn trace_csv(fit: &FitResult) -> String {
    let mut out = String::from("iter,mean_ssd,max_displacement\n");
    for (i, ssd) in fit.ssd_trace.iter().enumerate() {
        let disp = fit.displacement_trace.get(i).copied().unwrap_or(0.0);
        out.push_str(&format!("{i},{ssd:?},{disp:?}\n"));
    }
    out
}

/// Vertex positions saved at one iteration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub iter: usize,
    pub positions: Vec<Vec<f64>>,
}

impl Checkpoint {
    pub fn new(iter: usize, map: &LinearMap) -> Self {
        Self {
            iter,
            positions: map.to_file().positions,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrunedPointRecord {
    pub y_index: usize,
    pub simplex: Vec<usize>,
    pub lambda: Vec<f64>,
}

/// The pruned complex renumbered to its own vertices. `vertex_map[i]` is
/// the original index of vertex `i`; point simplices use original indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PruneFile {
    pub complex: ComplexFile,
    pub vertex_map: Vec<usize>,
    pub positions: Vec<Vec<f64>>,
    pub points: Vec<PrunedPointRecord>,
}

impl PruneFile {
    pub fn new(result: &PruneResult, map: &LinearMap) -> Self {
        let (compact, vertex_map) = result.complex.compact();
        Self {
            complex: compact.to_file(),
            positions: vertex_map.iter().map(|&v| map.position(v).to_vec()).collect(),
            vertex_map,
            points: result
                .points
                .iter()
                .enumerate()
                .map(|(i, p)| PrunedPointRecord {
                    y_index: i,
                    simplex: p.point.simplex.vertices().to_vec(),
                    lambda: p.point.lambda.clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("prune file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PruneFile = serde_json::from_str(text)?;
        let complex = file.complex.clone().into_complex()?;
        if file.vertex_map.len() != complex.vertex_count() || file.positions.len() != complex.vertex_count() {
            return Err(Error::MapSizeMismatch {
                positions: file.positions.len(),
                vertices: complex.vertex_count(),
            });
        }
        LinearMap::from_rows(&file.positions)?;
        Ok(file)
    }
}
