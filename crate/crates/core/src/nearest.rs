//! Nearest points on mapped simplices and complexes, with barycentric output.
//!
//! A batch of query points is solved against one simplex at a time. Each
//! face's affine hull is handled with a single pseudoinverse: the
//! barycentric coordinates of every query's projection onto the hull come
//! out of one matrix product. Queries whose coordinates are all nonnegative
//! are done; the rest descend to boundary faces opposite a negative
//! coordinate, and the faces are worked through from the largest down.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cloud::{dist, PointCloud};
use crate::complex::{smallest_containing_simplex, BarycentricPoint, SimplexRef, SimplicialComplex, DEFAULT_EPS_LAMBDA};
use crate::error::{Error, Result};

/// Relative singular-value cutoff used by the pseudoinverse.
pub const DEFAULT_SV_CUTOFF: f64 = 1e-10;

/// Facets up to this many vertices get all face pseudoinverses precomputed.
const MAX_CACHED_FACET_VERTICES: usize = 8;

/// Distances closer than this are ties, won by the lower facet index.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Vertex positions of a map from a complex into R^m; linear on each simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    dim: usize,
    positions: Vec<f64>,
}

impl LinearMap {
    pub fn new(dim: usize, positions: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("ambient dimension must be positive".into()));
        }
        if !positions.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: positions.len() % dim,
            });
        }
        if let Some(i) = positions.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("vertex {} position", i / dim)));
        }
        Ok(Self { dim, positions })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows
            .first()
            .map(|r| r.as_ref().len())
            .ok_or_else(|| Error::InvalidConfig("linear map needs at least one vertex".into()))?;
        let mut data = Vec::with_capacity(dim * rows.len());
        for r in rows {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.positions.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn position(&self, v: usize) -> &[f64] {
        &self.positions[v * self.dim..(v + 1) * self.dim]
    }

    pub fn position_mut(&mut self, v: usize) -> &mut [f64] {
        &mut self.positions[v * self.dim..(v + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.positions.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.positions
    }

    pub fn is_finite(&self) -> bool {
        self.positions.iter().all(|x| x.is_finite())
    }

    /// `sum_j lambda_j g(v_j)` over the point's simplex.
    pub fn apply(&self, p: &BarycentricPoint) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (&v, &l) in p.simplex.vertices().iter().zip(&p.lambda) {
            for (o, x) in out.iter_mut().zip(self.position(v)) {
                *o += l * x;
            }
        }
        out
    }

    pub fn check_covers(&self, k: &SimplicialComplex) -> Result<()> {
        if self.len() < k.vertex_count() {
            return Err(Error::MapSizeMismatch {
                positions: self.len(),
                vertices: k.vertex_count(),
            });
        }
        Ok(())
    }

    pub fn to_file(&self) -> PositionsFile {
        PositionsFile {
            positions: self.rows().map(<[f64]>::to_vec).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PositionsFile = serde_json::from_str(text)?;
        file.into_map()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("positions serialize")
    }
}

/// Wire form of a map: `{"positions": [[x, y, ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositionsFile {
    pub positions: Vec<Vec<f64>>,
}

impl PositionsFile {
    pub fn into_map(self) -> Result<LinearMap> {
        LinearMap::from_rows(&self.positions)
    }
}

/// Moore-Penrose pseudoinverse via SVD. Singular values at or below
/// `sv_cutoff` times the largest one are treated as zero.
pub fn pseudoinverse(m: &DMatrix<f64>, sv_cutoff: f64) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return DMatrix::zeros(cols, rows);
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.max();
    let threshold = sv_cutoff * smax;
    let mut out = DMatrix::zeros(cols, rows);
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > threshold && s > 0.0 {
            // out += v_i * u_i^T / s
            let vi = v_t.row(i);
            let ui = u.column(i);
            for c in 0..rows {
                let uc = ui[c] / s;
                for r in 0..cols {
                    out[(r, c)] += vi[r] * uc;
                }
            }
        }
    }
    out
}

/// Which boundary faces a query descends to when its affine coordinates
/// include a negative entry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Descent {
    /// Every face opposite a negative coordinate; the closest result wins.
    /// Always finds the true nearest point.
    #[default]
    AllNegative,
    /// Only the face opposite the first negative coordinate, so the
    /// queries are partitioned between faces. Cheaper, but can miss the
    /// nearest point on obtuse simplices.
    FirstNegative,
}

/// The nearest point found for one query.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionResult {
    /// The nearest point, on the smallest simplex containing it.
    pub point: BarycentricPoint,
    /// Its image in R^m.
    pub image: Vec<f64>,
    pub distance: f64,
    /// The facet (or the simplex passed in) the point was found through.
    pub facet: SimplexRef,
}

impl ProjectionResult {
    /// Coordinates against the whole facet, zero off the point's simplex.
    pub fn facet_lambda(&self) -> Vec<f64> {
        self.point.expand_to(&self.facet)
    }
}

/// Counters from one batched simplex solve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Number of proper faces that received queries.
    pub recursive_calls: usize,
    /// Largest drop in dimension from the starting simplex.
    pub max_depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projector {
    pub sv_cutoff: f64,
    pub eps_lambda: f64,
    pub descent: Descent,
}

impl Default for Projector {
    fn default() -> Self {
        Self {
            sv_cutoff: DEFAULT_SV_CUTOFF,
            eps_lambda: DEFAULT_EPS_LAMBDA,
            descent: Descent::default(),
        }
    }
}

/// Best candidate per query, in facet-local coordinates.
struct Best {
    width: usize,
    dist2: Vec<f64>,
    lambda: Vec<f64>,
}

impl Best {
    fn new(queries: usize, width: usize) -> Self {
        Self {
            width,
            dist2: vec![f64::INFINITY; queries],
            lambda: vec![0.0; queries * width],
        }
    }

    fn offer(&mut self, q: usize, d2: f64, coords: impl Iterator<Item = (usize, f64)>) {
        if d2 < self.dist2[q] {
            self.dist2[q] = d2;
            let row = &mut self.lambda[q * self.width..(q + 1) * self.width];
            row.iter_mut().for_each(|x| *x = 0.0);
            for (i, l) in coords {
                row[i] = l;
            }
        }
    }

    fn row(&self, q: usize) -> &[f64] {
        &self.lambda[q * self.width..(q + 1) * self.width]
    }
}

impl Projector {
    /// Solves every query against the simplex with vertex images `w`.
    /// Returns facet-local coordinates, `w.len()` per query.
    /// Pseudoinverses of the edge matrices of every face with at least two
    /// vertices, indexed by vertex mask.
    fn face_pinvs(&self, w: &[&[f64]]) -> Vec<Option<DMatrix<f64>>> {
        let n = w.len();
        (0..1u64 << n)
            .map(|mask| {
                let local: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                (local.len() >= 2).then(|| self.edge_pinv(w, &local))
            })
            .collect()
    }

    fn edge_pinv(&self, w: &[&[f64]], local: &[usize]) -> DMatrix<f64> {
        let base = w[local[0]];
        let edges = DMatrix::from_fn(base.len(), local.len() - 1, |r, c| w[local[c + 1]][r] - base[r]);
        pseudoinverse(&edges, self.sv_cutoff)
    }

    fn solve_local(
        &self,
        w: &[&[f64]],
        queries: &[&[f64]],
        stats: &mut SolveStats,
        cache: Option<&[Option<DMatrix<f64>>]>,
    ) -> Best {
        let n = w.len();
        let m = w[0].len();
        let mut best = Best::new(queries.len(), n);
        let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

        // faces still to solve: larger faces first
        let mut pending: BTreeMap<(Reverse<u32>, u64), Vec<usize>> = BTreeMap::new();
        pending.insert((Reverse(n as u32), full), (0..queries.len()).collect());

        let mut diff = vec![0.0; m];
        let mut coords = Vec::with_capacity(n);
        while let Some(((Reverse(size), mask), mut members)) = pending.pop_first() {
            if mask != full {
                stats.recursive_calls += 1;
                stats.max_depth = stats.max_depth.max(n - size as usize);
            }
            // a query can arrive from several parents
            members.sort_unstable();
            members.dedup();
            let local: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if local.len() == 1 {
                let i = local[0];
                for &q in &members {
                    let d2 = crate::cloud::dist2(queries[q], w[i]);
                    best.offer(q, d2, std::iter::once((i, 1.0)));
                }
                continue;
            }
            let base = w[local[0]];
            let k = local.len() - 1;
            let computed;
            let pinv = match cache.and_then(|c| c[mask as usize].as_ref()) {
                Some(p) => p,
                None => {
                    computed = self.edge_pinv(w, &local);
                    &computed
                }
            };
            let mut children: Vec<Vec<usize>> = vec![Vec::new(); local.len()];
            for &q in &members {
                let y = queries[q];
                for (d, (a, b)) in diff.iter_mut().zip(y.iter().zip(base)) {
                    *d = a - b;
                }
                coords.clear();
                coords.push(0.0);
                let mut total = 0.0;
                for r in 0..k {
                    let b: f64 = (0..m).map(|c| pinv[(r, c)] * diff[c]).sum();
                    total += b;
                    coords.push(b);
                }
                coords[0] = 1.0 - total;
                let mut any_negative = false;
                for (row, &c) in coords.iter().enumerate() {
                    if c < 0.0 {
                        any_negative = true;
                        children[row].push(q);
                        if self.descent == Descent::FirstNegative {
                            break;
                        }
                    }
                }
                if !any_negative {
                    let mut d2 = 0.0;
                    for (r, yr) in y.iter().enumerate() {
                        let img: f64 = local.iter().zip(&coords).map(|(&i, &c)| c * w[i][r]).sum();
                        d2 += (yr - img) * (yr - img);
                    }
                    best.offer(q, d2, local.iter().copied().zip(coords.iter().copied()));
                }
            }
            for (row, qs) in children.into_iter().enumerate() {
                if qs.is_empty() {
                    continue;
                }
                let child = mask & !(1u64 << local[row]);
                pending
                    .entry((Reverse(size - 1), child))
                    .or_default()
                    .extend(qs);
            }
        }
        best
    }

    fn finish(&self, simplex: &SimplexRef, map: &LinearMap, y: &[f64], local: &[f64]) -> ProjectionResult {
        let raw = BarycentricPoint {
            simplex: simplex.clone(),
            lambda: local.to_vec(),
        };
        let point = smallest_containing_simplex(&raw, self.eps_lambda)
            .or_else(|_| smallest_containing_simplex(&raw, 0.0))
            .unwrap_or_else(|_| BarycentricPoint::at_vertex(simplex.vertices()[0]));
        let image = map.apply(&point);
        let distance = dist(y, &image);
        ProjectionResult {
            point,
            image,
            distance,
            facet: simplex.clone(),
        }
    }

    fn check_inputs(&self, map: &LinearMap, batch: &PointCloud) -> Result<()> {
        if batch.dim() != map.dim() {
            return Err(Error::DimensionMismatch {
                expected: map.dim(),
                found: batch.dim(),
            });
        }
        if !batch.is_finite() {
            return Err(Error::NonFinite("query point".into()));
        }
        if !map.is_finite() {
            return Err(Error::NonFinite("vertex position".into()));
        }
        Ok(())
    }

    fn check_simplex(sigma: &SimplexRef, map: &LinearMap) -> Result<()> {
        match sigma.vertices().last() {
            Some(&v) if v < map.len() => Ok(()),
            _ => Err(Error::MapSizeMismatch {
                positions: map.len(),
                vertices: sigma.vertices().last().map_or(0, |v| v + 1),
            }),
        }
    }

    /// Nearest point of `map(sigma)` to each point of `batch`.
    pub fn on_simplex(&self, sigma: &SimplexRef, map: &LinearMap, batch: &PointCloud) -> Result<Vec<ProjectionResult>> {
        self.on_simplex_with_stats(sigma, map, batch).map(|(r, _)| r)
    }

    pub fn on_simplex_with_stats(
        &self,
        sigma: &SimplexRef,
        map: &LinearMap,
        batch: &PointCloud,
    ) -> Result<(Vec<ProjectionResult>, SolveStats)> {
        self.check_inputs(map, batch)?;
        Self::check_simplex(sigma, map)?;
        if batch.is_empty() {
            return Err(Error::EmptyCloud);
        }
        let w: Vec<&[f64]> = sigma.vertices().iter().map(|&v| map.position(v)).collect();
        let queries: Vec<&[f64]> = batch.iter().collect();
        let mut stats = SolveStats::default();
        let best = self.solve_local(&w, &queries, &mut stats, None);
        let results = queries
            .iter()
            .enumerate()
            .map(|(q, y)| self.finish(sigma, map, y, best.row(q)))
            .collect();
        Ok((results, stats))
    }

    /// Nearest point of `map(sigma)` to a single point.
    pub fn point_on_simplex(&self, sigma: &SimplexRef, map: &LinearMap, y: &[f64]) -> ProjectionResult {
        let w: Vec<&[f64]> = sigma.vertices().iter().map(|&v| map.position(v)).collect();
        let mut stats = SolveStats::default();
        let best = self.solve_local(&w, &[y], &mut stats, None);
        self.finish(sigma, map, y, best.row(0))
    }

    /// Nearest point of `map(K)` to each point of `batch`, searching every
    /// facet, or for point `i` only the facets listed in `restrict[i]`.
    pub fn on_complex(
        &self,
        k: &SimplicialComplex,
        map: &LinearMap,
        batch: &PointCloud,
        restrict: Option<&[Vec<usize>]>,
    ) -> Result<Vec<ProjectionResult>> {
        self.check_inputs(map, batch)?;
        map.check_covers(k)?;
        if let Some(r) = restrict {
            if r.len() != batch.len() {
                return Err(Error::DimensionMismatch {
                    expected: batch.len(),
                    found: r.len(),
                });
            }
            if let Some(i) = r.iter().position(Vec::is_empty) {
                return Err(Error::EmptyRestriction(i));
            }
            if let Some(&f) = r.iter().flatten().find(|&&f| f >= k.facet_count()) {
                return Err(Error::InvalidConfig(format!("facet index {f} out of range")));
            }
        }

        // computed once here and shared by every chunk
        let facets: Vec<FacetData> = k
            .facets()
            .par_iter()
            .map(|facet| {
                let w: Vec<&[f64]> = facet.vertices().iter().map(|&v| map.position(v)).collect();
                let mut center = vec![0.0; map.dim()];
                for p in &w {
                    for (c, x) in center.iter_mut().zip(*p) {
                        *c += x / w.len() as f64;
                    }
                }
                let radius = w.iter().map(|p| dist(p, &center)).fold(0.0, f64::max);
                FacetData {
                    pinvs: (facet.len() <= MAX_CACHED_FACET_VERTICES).then(|| self.face_pinvs(&w)),
                    center,
                    radius,
                }
            })
            .collect();
        let mut used: Vec<usize> = k.facets().iter().flat_map(|f| f.vertices().iter().copied()).collect();
        used.sort_unstable();
        used.dedup();

        let n = batch.len();
        let threads = rayon::current_num_threads().max(1);
        let chunk = n.div_ceil(threads * 4).clamp(32, 1024);
        let starts: Vec<usize> = (0..n).step_by(chunk).collect();
        let parts: Vec<Vec<ProjectionResult>> = starts
            .par_iter()
            .map(|&start| {
                let end = (start + chunk).min(n);
                self.complex_chunk(k, map, batch, start..end, restrict, &facets, &used)
            })
            .collect();
        Ok(parts.into_iter().flatten().collect())
    }

    #[allow(clippy::too_many_arguments)]
    fn complex_chunk(
        &self,
        k: &SimplicialComplex,
        map: &LinearMap,
        batch: &PointCloud,
        range: std::ops::Range<usize>,
        restrict: Option<&[Vec<usize>]>,
        facets: &[FacetData],
        used: &[usize],
    ) -> Vec<ProjectionResult> {
        let len = range.len();
        let point = |l: usize| batch.point(range.start + l);
        // An upper bound on each answer. A facet whose bounding ball lies
        // farther away than the bound cannot win, not even on a tie.
        let mut bound: Vec<f64> = match restrict {
            Some(_) => vec![f64::INFINITY; len],
            None => (0..len)
                .map(|l| used.iter().map(|&v| dist(point(l), map.position(v))).fold(f64::INFINITY, f64::min))
                .collect(),
        };
        let reachable = |f: usize, l: usize, bound: f64| {
            let data = &facets[f];
            let to_center = dist(point(l), &data.center);
            let slack = 1e-9 * (1.0 + to_center + data.radius);
            to_center - data.radius <= bound + slack
        };

        // facet -> chunk-local query indices
        let mut by_facet: Vec<Vec<usize>> = vec![Vec::new(); k.facet_count()];
        match restrict {
            Some(r) => {
                for (local, i) in range.clone().enumerate() {
                    for &f in &r[i] {
                        by_facet[f].push(local);
                    }
                }
                for list in &mut by_facet {
                    list.sort_unstable();
                    list.dedup();
                }
            }
            None => {
                for (f, list) in by_facet.iter_mut().enumerate() {
                    list.extend((0..len).filter(|&l| reachable(f, l, bound[l])));
                }
            }
        }

        let mut best_facet = vec![usize::MAX; len];
        let mut best_dist = vec![f64::INFINITY; len];
        let mut best_lambda: Vec<Vec<f64>> = vec![Vec::new(); len];
        let mut stats = SolveStats::default();
        let mut queries: Vec<&[f64]> = Vec::with_capacity(len);
        let mut members: Vec<usize> = Vec::with_capacity(len);
        for (f, candidates) in by_facet.iter().enumerate() {
            members.clear();
            members.extend(candidates.iter().copied().filter(|&l| reachable(f, l, bound[l])));
            if members.is_empty() {
                continue;
            }
            let facet = k.facet(f);
            let w: Vec<&[f64]> = facet.vertices().iter().map(|&v| map.position(v)).collect();
            queries.clear();
            queries.extend(members.iter().map(|&l| point(l)));
            let best = self.solve_local(&w, &queries, &mut stats, facets[f].pinvs.as_deref());
            for (q, &l) in members.iter().enumerate() {
                let d = best.dist2[q].sqrt();
                if d < best_dist[l] - TIE_TOLERANCE {
                    best_dist[l] = d;
                    best_facet[l] = f;
                    best_lambda[l] = best.row(q).to_vec();
                    bound[l] = bound[l].min(d);
                }
            }
        }
        range
            .enumerate()
            .map(|(l, i)| self.finish(k.facet(best_facet[l]), map, batch.point(i), &best_lambda[l]))
            .collect()
    }
}

struct FacetData {
    pinvs: Option<Vec<Option<DMatrix<f64>>>>,
    center: Vec<f64>,
    radius: f64,
}

/// [`Projector::on_simplex`] with default settings.
pub fn nearest_on_simplex(sigma: &SimplexRef, map: &LinearMap, batch: &PointCloud) -> Result<Vec<ProjectionResult>> {
    Projector::default().on_simplex(sigma, map, batch)
}

/// [`Projector::on_complex`] with default settings.
pub fn nearest_on_complex(
    k: &SimplicialComplex,
    map: &LinearMap,
    batch: &PointCloud,
    restrict: Option<&[Vec<usize>]>,
) -> Result<Vec<ProjectionResult>> {
    Projector::default().on_complex(k, map, batch, restrict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s(v: &[usize]) -> SimplexRef {
        SimplexRef::new(v.to_vec()).unwrap()
    }

    fn one(p: [f64; 2]) -> PointCloud {
        PointCloud::from_rows(&[p]).unwrap()
    }

    fn triangle() -> LinearMap {
        LinearMap::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap()
    }

    #[test]
    fn pinv_identity_and_column() {
        let id = DMatrix::<f64>::identity(3, 3);
        assert!((pseudoinverse(&id, DEFAULT_SV_CUTOFF) - &id).norm() < 1e-14);
        let col = DMatrix::from_column_slice(3, 1, &[2.0, 0.0, 0.0]);
        let p = pseudoinverse(&col, DEFAULT_SV_CUTOFF);
        assert_eq!(p.shape(), (1, 3));
        assert!((p[(0, 0)] - 0.5).abs() < 1e-15 && p[(0, 1)] == 0.0 && p[(0, 2)] == 0.0);
    }

    #[test]
    fn pinv_penrose_conditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = DMatrix::from_fn(5, 3, |_, _| rng.random::<f64>() * 2.0 - 1.0);
        let p = pseudoinverse(&a, DEFAULT_SV_CUTOFF);
        assert!((&a * &p * &a - &a).norm() < 1e-8);
        assert!((&p * &a * &p - &p).norm() < 1e-8);
        let ap = &a * &p;
        let pa = &p * &a;
        assert!((&ap - ap.transpose()).norm() < 1e-8);
        assert!((&pa - pa.transpose()).norm() < 1e-8);
    }

    #[test]
    fn pinv_rank_deficient() {
        // two equal columns: rank one
        let a = DMatrix::from_column_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let p = pseudoinverse(&a, DEFAULT_SV_CUTOFF);
        assert!((&a * &p * &a - &a).norm() < 1e-12);
        assert!((p[(0, 0)] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn vertex_simplex() {
        let map = LinearMap::from_rows(&[[1.0, 2.0]]).unwrap();
        let r = nearest_on_simplex(&s(&[0]), &map, &one([4.0, 6.0])).unwrap();
        assert_eq!(r[0].image, vec![1.0, 2.0]);
        assert_eq!(r[0].distance, 5.0);
        assert_eq!(r[0].point.lambda, vec![1.0]);
    }

    #[test]
    fn hypotenuse_projection() {
        let r = nearest_on_simplex(&s(&[0, 1, 2]), &triangle(), &one([1.0, 1.0])).unwrap();
        let r = &r[0];
        assert_eq!(r.point.simplex, s(&[1, 2]));
        assert!((r.point.lambda[0] - 0.5).abs() < 1e-12 && (r.point.lambda[1] - 0.5).abs() < 1e-12);
        assert!((r.image[0] - 0.5).abs() < 1e-12 && (r.image[1] - 0.5).abs() < 1e-12);
        assert!((r.distance - 0.5f64.sqrt()).abs() < 1e-12);
        let full = r.facet_lambda();
        assert_eq!(full[0], 0.0);
        assert!((full[1] - 0.5).abs() < 1e-12 && (full[2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn interior_point() {
        let r = nearest_on_simplex(&s(&[0, 1, 2]), &triangle(), &one([0.2, 0.3])).unwrap();
        let expected = [0.5, 0.2, 0.3];
        for (a, b) in r[0].point.lambda.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(r[0].distance < 1e-12);
    }

    #[test]
    fn beyond_a_vertex() {
        let r = nearest_on_simplex(&s(&[0, 1, 2]), &triangle(), &one([-1.0, -2.0])).unwrap();
        assert_eq!(r[0].point.simplex, s(&[0]));
        assert!((r[0].distance - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_simplex() {
        // all three images on a line
        let map = LinearMap::from_rows(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).unwrap();
        let r = nearest_on_simplex(&s(&[0, 1, 2]), &map, &one([1.5, 1.0])).unwrap();
        assert!((r[0].distance - 1.0).abs() < 1e-12);
        assert!((r[0].image[0] - 1.5).abs() < 1e-12);
        assert!(r[0].point.is_normalized());
    }

    #[test]
    fn first_negative_misses_on_obtuse_triangle() {
        let map = LinearMap::from_rows(&[[-5.0, 0.2], [0.0, 0.0], [1.0, 0.0]]).unwrap();
        let q = one([-3.0, -0.01]);
        let exact = Projector::default().on_simplex(&s(&[0, 1, 2]), &map, &q).unwrap();
        let first = Projector {
            descent: Descent::FirstNegative,
            ..Projector::default()
        }
        .on_simplex(&s(&[0, 1, 2]), &map, &q)
        .unwrap();
        assert!(exact[0].distance < 0.2);
        assert_eq!(first[0].point.simplex, s(&[1]));
        assert!((first[0].distance - (9.0f64 + 1e-4).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn stats_bounded() {
        let map = triangle();
        let batch = PointCloud::from_rows(&[[1.0, 1.0], [-1.0, -1.0], [0.2, 0.2], [3.0, -1.0]]).unwrap();
        for descent in [Descent::AllNegative, Descent::FirstNegative] {
            let p = Projector { descent, ..Projector::default() };
            let (_, stats) = p.on_simplex_with_stats(&s(&[0, 1, 2]), &map, &batch).unwrap();
            assert!(stats.max_depth <= 2);
            assert!(stats.recursive_calls <= 6);
        }
    }

    #[test]
    fn complex_ties_go_to_lower_facet() {
        let k = SimplicialComplex::build(vec![vec![0, 1], vec![1, 2]]).unwrap();
        let map = LinearMap::from_rows(&[[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]).unwrap();
        let r = nearest_on_complex(&k, &map, &one([0.0, 1.0]), None).unwrap();
        assert_eq!(r[0].facet, s(&[0, 1]));
        assert_eq!(r[0].point.simplex, s(&[1]));
    }

    #[test]
    fn restriction() {
        let k = SimplicialComplex::build(vec![vec![0, 1], vec![1, 2]]).unwrap();
        let map = LinearMap::from_rows(&[[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]).unwrap();
        let q = one([0.8, 0.1]);
        let r = nearest_on_complex(&k, &map, &q, Some(&[vec![0]])).unwrap();
        assert_eq!(r[0].facet, s(&[0, 1]));
        assert!((r[0].distance - (0.64f64 + 0.01).sqrt()).abs() < 1e-12);
        assert!(matches!(
            nearest_on_complex(&k, &map, &q, Some(&[vec![]])),
            Err(Error::EmptyRestriction(0))
        ));
        assert!(nearest_on_complex(&k, &map, &q, Some(&[vec![5]])).is_err());
        assert!(nearest_on_complex(&k, &map, &q, Some(&[vec![0], vec![1]])).is_err());
    }

    #[test]
    fn input_errors() {
        let k = SimplicialComplex::build(vec![vec![0, 1, 2]]).unwrap();
        let short = LinearMap::from_rows(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        assert!(nearest_on_complex(&k, &short, &one([0.0, 0.0]), None).is_err());
        let batch = PointCloud::from_rows(&[[0.0, 0.0, 0.0]]).unwrap();
        assert!(nearest_on_complex(&k, &triangle(), &batch, None).is_err());
        assert!(LinearMap::from_rows(&[[f64::NAN, 0.0]]).is_err());
        assert!(nearest_on_simplex(&s(&[0, 3]), &triangle(), &one([0.0, 0.0])).is_err());
    }

    #[test]
    fn positions_json_round_trip() {
        let map = triangle();
        assert_eq!(LinearMap::from_json(&map.to_json()).unwrap(), map);
        assert!(LinearMap::from_json(r#"{"positions": [[0.0], [1.0, 2.0]]}"#).is_err());
        assert!(LinearMap::from_json(r#"{"positions": []}"#).is_err());
    }
}
