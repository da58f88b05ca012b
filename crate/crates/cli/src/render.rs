//! Flat SVG drawings: data points plus the mapped edges of a complex.

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use simplicial_means::presets::Projection;
use simplicial_means::{LinearMap, PointCloud, SimplicialComplex};

use crate::failure::Failure;

const SIZE: f64 = 600.0;
const PAD: f64 = 20.0;

/// Linear map from R^m to the drawing plane.
pub struct Plane {
    rows: [Vec<f64>; 2],
}

impl Plane {
    pub fn new(proj: Projection, cloud: &PointCloud) -> Result<Self, Failure> {
        let m = cloud.dim();
        let axes = |a: usize, b: usize| -> Result<Self, Failure> {
            if b >= m {
                return Err(Failure::Data(format!("projection {proj:?} needs at least {} coordinates, data has {m}", b + 1)));
            }
            let unit = |i: usize| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect();
            Ok(Plane { rows: [unit(a), unit(b)] })
        };
        match proj {
            Projection::Xy => axes(0, 1),
            Projection::Xz => axes(0, 2),
            Projection::Yz => axes(1, 2),
            Projection::Pca2 => Ok(Self::principal(cloud)),
        }
    }

    /// The two leading principal directions of the cloud, each signed so its
    /// largest component is positive.
    fn principal(cloud: &PointCloud) -> Self {
        let m = cloud.dim();
        let n = cloud.len() as f64;
        let mut mean = vec![0.0; m];
        for p in cloud.iter() {
            for (s, x) in mean.iter_mut().zip(p) {
                *s += x / n;
            }
        }
        let mut cov = DMatrix::<f64>::zeros(m, m);
        for p in cloud.iter() {
            for i in 0..m {
                for j in 0..m {
                    cov[(i, j)] += (p[i] - mean[i]) * (p[j] - mean[j]) / n;
                }
            }
        }
        let eig = SymmetricEigen::new(cov);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
        let direction = |k: usize| -> Vec<f64> {
            let Some(&c) = order.get(k) else { return vec![0.0; m] };
            let mut v: Vec<f64> = eig.eigenvectors.column(c).iter().copied().collect();
            let lead = v.iter().copied().fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
            if lead < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            v
        };
        Plane {
            rows: [direction(0), direction(1)],
        }
    }

    pub fn project(&self, p: &[f64]) -> [f64; 2] {
        let dot = |r: &[f64]| r.iter().zip(p).map(|(a, b)| a * b).sum::<f64>();
        [dot(&self.rows[0]), dot(&self.rows[1])]
    }
}

/// Draws `cloud` and the edges (and vertices) of `map(k)`.
pub fn svg(cloud: &PointCloud, k: &SimplicialComplex, map: &LinearMap, proj: Projection, title: &str) -> Result<String, Failure> {
    if cloud.dim() != map.dim() {
        return Err(Failure::Data(format!(
            "cloud has {} coordinates but the fit has {}",
            cloud.dim(),
            map.dim()
        )));
    }
    let plane = Plane::new(proj, cloud)?;
    let points: Vec<[f64; 2]> = cloud.iter().map(|p| plane.project(p)).collect();
    let mut used = vec![false; map.len()];
    for f in k.facets() {
        for &v in f.vertices() {
            used[v] = true;
        }
    }
    let vertices: Vec<Option<[f64; 2]>> = (0..map.len())
        .map(|v| used[v].then(|| plane.project(map.position(v))))
        .collect();

    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in points.iter().chain(vertices.iter().flatten()) {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    if lo.iter().chain(&hi).any(|x| !x.is_finite()) {
        return Err(Failure::Numeric("nothing finite to draw".into()));
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::EPSILON);
    let scale = (SIZE - 2.0 * PAD) / span;
    let to_screen = |p: [f64; 2]| (PAD + (p[0] - lo[0]) * scale, SIZE - PAD - (p[1] - lo[1]) * scale);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(out, r##"<g id="points" fill="#1f77b4">"##);
    for &p in &points {
        let (x, y) = to_screen(p);
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g id="edges" stroke="#d62728" stroke-width="1.2">"##);
    if let Some(edges) = k.faces_by_dim().get(1) {
        for e in edges {
            let [a, b] = [e.vertices()[0], e.vertices()[1]];
            let (Some(pa), Some(pb)) = (vertices[a], vertices[b]) else { continue };
            let ((x1, y1), (x2, y2)) = (to_screen(pa), to_screen(pb));
            let _ = writeln!(out, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g id="vertices" fill="#d62728">"##);
    for &p in vertices.iter().flatten() {
        let (x, y) = to_screen(p);
        let _ = writeln!(out, r#"<rect x="{:.2}" y="{:.2}" width="4" height="4"/>"#, x - 2.0, y - 2.0);
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
