//! The fitting stage: repeatedly project every data point onto the mapped
//! complex and pull each vertex toward the points whose projections lie on
//! simplices containing it. A 0-dimensional complex gives Lloyd's k-means.

use serde::{Deserialize, Serialize};

use crate::cloud::{dist, PointCloud};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::metrics;
use crate::nearest::{LinearMap, ProjectionResult, Projector};

/// Which points pull on a vertex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Neighborhood {
    /// Points whose projection lies in the interior of a simplex having the
    /// vertex as a corner.
    #[default]
    Interior,
    /// Points whose projection was found through a facet having the vertex as
    /// a corner, including those on the opposite boundary (with weight 0).
    Closed,
}

/// Full search is forced this often while the adjacent-facet search is on.
pub const ACCEL_RESYNC_EVERY: usize = 25;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitConfig {
    pub learning_rate: f64,
    pub neighborhood: Neighborhood,
    /// Stop once no vertex moves farther than this. `None` means 1e-6 times
    /// the diagonal of the bounding box of the data and initial vertices.
    pub stop_tol: Option<f64>,
    pub max_iters: usize,
    pub adjacent_facet_accel: bool,
    pub accel_warmup_iters: usize,
    #[serde(skip)]
    pub projector: Projector,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            neighborhood: Neighborhood::Interior,
            stop_tol: None,
            max_iters: 200,
            adjacent_facet_accel: false,
            accel_warmup_iters: 10,
            projector: Projector::default(),
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be a finite value >= 0, got {}",
                self.learning_rate
            )));
        }
        if let Some(t) = self.stop_tol {
            if t.is_nan() || t <= 0.0 {
                return Err(Error::InvalidConfig(format!("stop tolerance must be > 0, got {t}")));
            }
        }
        if self.max_iters < 1 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct FitResult {
    pub map: LinearMap,
    /// Projections of every data point onto the final map.
    pub assignments: Vec<ProjectionResult>,
    pub iterations_run: usize,
    /// Mean squared distance under each map `f^0, ..., f^iterations_run`.
    pub ssd_trace: Vec<f64>,
    /// Largest vertex move into each map; the first entry is 0.
    pub displacement_trace: Vec<f64>,
}

/// One vertex's pull list: `(lambda_jy, index of y)`.
pub type Pulls = Vec<(f64, usize)>;

/// Groups points by the vertices they pull on.
pub fn build_neighborhoods(assignments: &[ProjectionResult], vertex_count: usize, mode: Neighborhood) -> Vec<Pulls> {
    let mut out = vec![Vec::new(); vertex_count];
    for (i, a) in assignments.iter().enumerate() {
        match mode {
            Neighborhood::Interior => {
                for (&v, &l) in a.point.simplex.vertices().iter().zip(&a.point.lambda) {
                    out[v].push((l, i));
                }
            }
            Neighborhood::Closed => {
                for &v in a.facet.vertices() {
                    out[v].push((a.point.coordinate(v), i));
                }
            }
        }
    }
    out
}

/// Centroid of `((1 - l) / (1 + s)) * current + ((l + s) / (1 + s)) * y` over
/// the pulls; `current` itself when there are none.
pub fn vertex_update<'a, I>(current: &[f64], pulls: I, s: f64) -> Vec<f64>
where
    I: IntoIterator<Item = (f64, &'a [f64])>,
{
    let mut acc = vec![0.0; current.len()];
    let mut count = 0usize;
    for (l, y) in pulls {
        let keep = (1.0 - l) / (1.0 + s);
        let pull = (l + s) / (1.0 + s);
        for ((a, c), yi) in acc.iter_mut().zip(current).zip(y) {
            *a += keep * c + pull * yi;
        }
        count += 1;
    }
    if count == 0 {
        return current.to_vec();
    }
    acc.iter().map(|a| a / count as f64).collect()
}

fn default_tolerance(f0: &LinearMap, cloud: &PointCloud) -> f64 {
    let mut lo = vec![f64::INFINITY; cloud.dim()];
    let mut hi = vec![f64::NEG_INFINITY; cloud.dim()];
    for p in cloud.iter().chain(f0.rows()) {
        for ((l, h), &x) in lo.iter_mut().zip(hi.iter_mut()).zip(p) {
            *l = l.min(x);
            *h = h.max(x);
        }
    }
    let diag = dist(&lo, &hi);
    (1e-6 * diag).max(f64::MIN_POSITIVE)
}

pub fn fit(k: &SimplicialComplex, f0: &LinearMap, cloud: &PointCloud, cfg: &FitConfig) -> Result<FitResult> {
    fit_with(k, f0, cloud, cfg, |_, _| {})
}

/// Like [`fit`], calling `observe(l, &f^l)` for every map produced,
/// starting with `f^0`.
pub fn fit_with<F>(k: &SimplicialComplex, f0: &LinearMap, cloud: &PointCloud, cfg: &FitConfig, mut observe: F) -> Result<FitResult>
where
    F: FnMut(usize, &LinearMap),
{
    cfg.validate()?;
    f0.check_covers(k)?;
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if cloud.dim() != f0.dim() {
        return Err(Error::DimensionMismatch {
            expected: f0.dim(),
            found: cloud.dim(),
        });
    }
    if cfg.neighborhood == Neighborhood::Closed && cfg.learning_rate == 0.0 {
        log::warn!("closed neighborhoods with learning rate 0 leave vertices with only boundary pulls stuck");
    }
    let tol = cfg.stop_tol.unwrap_or_else(|| default_tolerance(f0, cloud));
    let projector = &cfg.projector;

    let mut map = f0.clone();
    let mut ssd_trace = Vec::new();
    let mut displacement_trace = vec![0.0];
    let mut previous: Option<Vec<ProjectionResult>> = None;
    let mut iterations_run = 0;
    observe(0, &map);

    for iter in 0..cfg.max_iters {
        let restrict = match &previous {
            Some(prev) if cfg.adjacent_facet_accel && iter > cfg.accel_warmup_iters && iter % ACCEL_RESYNC_EVERY != 0 => {
                Some(
                    prev.iter()
                        .map(|a| k.adjacent_facets(&a.point.simplex))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            _ => None,
        };
        let assignments = projector.on_complex(k, &map, cloud, restrict.as_deref())?;
        ssd_trace.push(metrics::mean_ssd_of(&assignments));

        let pulls = build_neighborhoods(&assignments, map.len(), cfg.neighborhood);
        let mut next = map.clone();
        let mut displacement: f64 = 0.0;
        for (v, list) in pulls.iter().enumerate() {
            if list.is_empty() {
                continue;
            }
            let updated = vertex_update(
                map.position(v),
                list.iter().map(|&(l, i)| (l, cloud.point(i))),
                cfg.learning_rate,
            );
            displacement = displacement.max(dist(map.position(v), &updated));
            next.position_mut(v).copy_from_slice(&updated);
        }
        if !next.is_finite() {
            return Err(Error::NonFinite(format!("vertex positions after iteration {iter}")));
        }
        map = next;
        iterations_run = iter + 1;
        displacement_trace.push(displacement);
        observe(iterations_run, &map);
        previous = Some(assignments);
        if displacement < tol {
            break;
        }
    }

    let assignments = projector.on_complex(k, &map, cloud, None)?;
    ssd_trace.push(metrics::mean_ssd_of(&assignments));
    Ok(FitResult {
        map,
        assignments,
        iterations_run,
        ssd_trace,
        displacement_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{BarycentricPoint, SimplexRef};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn full_weight_moves_to_point() {
        let y = [3.0, -1.0];
        for s in [0.0, 0.1, 2.0] {
            let out = vertex_update(&[0.0, 0.0], [(1.0, &y[..])], s);
            assert!(close(&out, &y, 1e-15), "s = {s}: {out:?}");
        }
    }

    #[test]
    fn zero_weight_without_rate_stays() {
        let y = [3.0, -1.0];
        assert_eq!(vertex_update(&[0.5, 0.25], [(0.0, &y[..])], 0.0), vec![0.5, 0.25]);
    }

    #[test]
    fn two_half_pulls() {
        let (a, b) = ([2.0, 0.0], [0.0, 2.0]);
        let out = vertex_update(&[0.0, 0.0], [(0.5, &a[..]), (0.5, &b[..])], 0.0);
        // ((0.5*0 + 0.5*(2,0)) + (0.5*0 + 0.5*(0,2))) / 2
        assert!(close(&out, &[0.5, 0.5], 1e-15));
    }

    #[test]
    fn learning_rate_pull() {
        let y = [1.0, 0.0];
        let out = vertex_update(&[0.0, 0.0], [(0.0, &y[..])], 0.1);
        // (0.1 / 1.1) * (1, 0)
        assert!(close(&out, &[1.0 / 11.0, 0.0], 1e-15));
    }

    #[test]
    fn empty_pulls_unchanged() {
        let out = vertex_update(&[4.0, 2.0], std::iter::empty(), 0.3);
        assert_eq!(out, vec![4.0, 2.0]);
    }

    fn result(simplex: &[usize], lambda: &[f64], facet: &[usize]) -> ProjectionResult {
        ProjectionResult {
            point: BarycentricPoint::new(SimplexRef::new(simplex.to_vec()).unwrap(), lambda.to_vec()).unwrap(),
            image: vec![0.0],
            distance: 0.0,
            facet: SimplexRef::new(facet.to_vec()).unwrap(),
        }
    }

    #[test]
    fn neighborhoods_edge_inside_triangle() {
        let a = [result(&[1, 2], &[0.4, 0.6], &[1, 2, 3])];
        let interior = build_neighborhoods(&a, 4, Neighborhood::Interior);
        assert_eq!(interior[1], vec![(0.4, 0)]);
        assert_eq!(interior[2], vec![(0.6, 0)]);
        assert!(interior[3].is_empty());
        let closed = build_neighborhoods(&a, 4, Neighborhood::Closed);
        assert_eq!(closed[3], vec![(0.0, 0)]);
        assert_eq!(closed[1], vec![(0.4, 0)]);
    }

    #[test]
    fn neighborhoods_at_vertex() {
        let a = [result(&[1], &[1.0], &[0, 1, 2])];
        let interior = build_neighborhoods(&a, 3, Neighborhood::Interior);
        assert_eq!(interior[1], vec![(1.0, 0)]);
        assert!(interior[0].is_empty() && interior[2].is_empty());
    }

    #[test]
    fn config_validation() {
        let mut c = FitConfig::default();
        assert!(c.validate().is_ok());
        c.learning_rate = -0.1;
        assert!(c.validate().is_err());
        c = FitConfig { stop_tol: Some(0.0), ..FitConfig::default() };
        assert!(c.validate().is_err());
        c = FitConfig { max_iters: 0, ..FitConfig::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn size_mismatch_rejected() {
        let k = SimplicialComplex::build(vec![vec![0, 1, 2]]).unwrap();
        let f0 = LinearMap::from_rows(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let cloud = PointCloud::from_rows(&[[0.0, 0.0]]).unwrap();
        assert!(matches!(
            fit(&k, &f0, &cloud, &FitConfig::default()),
            Err(Error::MapSizeMismatch { .. })
        ));
    }

    #[test]
    fn data_on_vertices_is_a_fixed_point() {
        let k = SimplicialComplex::build(vec![vec![0, 1], vec![1, 2]]).unwrap();
        let rows = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]];
        let f0 = LinearMap::from_rows(&rows).unwrap();
        let cloud = PointCloud::from_rows(&rows).unwrap();
        let r = fit(&k, &f0, &cloud, &FitConfig::default()).unwrap();
        assert_eq!(r.iterations_run, 1);
        assert_eq!(r.displacement_trace, vec![0.0, 0.0]);
        assert_eq!(r.map, f0);
    }
}
