//! Fit-quality measures.

use serde::{Deserialize, Serialize};

use crate::cloud::{dist2, PointCloud};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::nearest::{nearest_on_complex, LinearMap, ProjectionResult};

pub const DEFAULT_SAMPLE_DENSITY: usize = 10;

pub(crate) fn mean_ssd_of(assignments: &[ProjectionResult]) -> f64 {
    if assignments.is_empty() {
        return 0.0;
    }
    assignments.iter().map(|a| a.distance * a.distance).sum::<f64>() / assignments.len() as f64
}

/// Mean squared distance between each point and its assigned image.
pub fn mean_ssd(cloud: &PointCloud, k: &SimplicialComplex, map: &LinearMap, assignments: &[ProjectionResult]) -> Result<f64> {
    map.check_covers(k)?;
    if assignments.len() != cloud.len() {
        return Err(Error::DimensionMismatch {
            expected: cloud.len(),
            found: assignments.len(),
        });
    }
    Ok(mean_ssd_of(assignments))
}

/// Barycentric lattice points `i / n` with denominators `n = 1..=density`,
/// for a simplex with `vertices` corners. Including every coarser lattice
/// makes the set grow monotonically with `density`.
pub fn barycentric_samples(vertices: usize, density: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for n in 1..=density.max(1) {
        let mut counts = vec![0usize; vertices];
        compositions(n, 0, &mut counts, &mut |c| {
            // reduce to lowest terms so each point is kept once
            let g = c.iter().fold(n, |g, &x| gcd(g, x));
            let key: Vec<usize> = c.iter().map(|x| x / g).chain(std::iter::once(n / g)).collect();
            if seen.insert(key) {
                out.push(c.iter().map(|&x| x as f64 / n as f64).collect());
            }
        });
    }
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn compositions(remaining: usize, at: usize, counts: &mut [usize], emit: &mut dyn FnMut(&[usize])) {
    if at + 1 == counts.len() {
        counts[at] = remaining;
        emit(counts);
        return;
    }
    for c in 0..=remaining {
        counts[at] = c;
        compositions(remaining - c, at + 1, counts, emit);
    }
}

/// Hausdorff distance between the cloud and the mapped complex. The
/// cloud-to-complex side is exact; the complex-to-cloud side takes the
/// worst of a barycentric lattice sampling of every facet, so it can only
/// underestimate and it grows with `sample_density`.
pub fn hausdorff(cloud: &PointCloud, k: &SimplicialComplex, map: &LinearMap, sample_density: usize) -> Result<f64> {
    if sample_density < 1 {
        return Err(Error::InvalidConfig("sample density must be at least 1".into()));
    }
    let to_complex = nearest_on_complex(k, map, cloud, None)?
        .iter()
        .map(|a| a.distance)
        .fold(0.0, f64::max);
    Ok(to_complex.max(complex_to_cloud(cloud, k, map, sample_density)))
}

/// The sampled complex-to-cloud direction on its own.
pub fn complex_to_cloud(cloud: &PointCloud, k: &SimplicialComplex, map: &LinearMap, sample_density: usize) -> f64 {
    use rayon::prelude::*;
    let m = map.dim();
    k.facets()
        .par_iter()
        .map(|facet| {
            let mut worst: f64 = 0.0;
            let mut p = vec![0.0; m];
            for lambda in barycentric_samples(facet.len(), sample_density) {
                p.iter_mut().for_each(|x| *x = 0.0);
                for (&v, &l) in facet.vertices().iter().zip(&lambda) {
                    for (x, w) in p.iter_mut().zip(map.position(v)) {
                        *x += l * w;
                    }
                }
                let nearest = cloud.iter().map(|y| dist2(y, &p)).fold(f64::INFINITY, f64::min);
                worst = worst.max(nearest);
            }
            worst.sqrt()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub mean_ssd: f64,
    pub hausdorff: f64,
    pub sample_density: usize,
}
