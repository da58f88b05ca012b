//! Generators for lines, cycles, lattice graphs, Freudenthal-triangulated
//! cube meshes, their boundaries and disjoint unions, along with canonical
//! vertex placements and affine placements into R^m.

use std::collections::HashMap;
use std::f64::consts::PI;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::complex::{boundary_faces, SimplexRef, SimplicialComplex};
use crate::error::{Error, Result};
use crate::nearest::LinearMap;

/// A complex together with vertex positions.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub complex: SimplicialComplex,
    pub map: LinearMap,
}

impl Mesh {
    pub fn new(complex: SimplicialComplex, map: LinearMap) -> Result<Self> {
        map.check_covers(&complex)?;
        Ok(Self { complex, map })
    }

    /// Boundary complex with unused vertices removed.
    pub fn boundary(&self) -> Result<Mesh> {
        let b = boundary_complex(&self.complex)?;
        let (complex, vertex_map) = b.compact();
        let rows: Vec<&[f64]> = vertex_map.iter().map(|&v| self.map.position(v)).collect();
        Mesh::new(complex, LinearMap::from_rows(&rows)?)
    }

    pub fn place(&self, placement: &Placement) -> Result<Mesh> {
        Mesh::new(self.complex.clone(), placement.apply(&self.map)?)
    }
}

/// Upper bound on the size of a generated mesh.
pub const MAX_MESH_FACETS: usize = 4_000_000;

fn check_facets(total: Option<usize>, what: &str) -> Result<()> {
    match total {
        Some(n) if n <= MAX_MESH_FACETS => Ok(()),
        _ => Err(Error::InvalidConfig(format!("{what} exceeds {MAX_MESH_FACETS} facets"))),
    }
}

pub fn line_complex(segments: usize) -> Result<Mesh> {
    if segments < 1 {
        return Err(Error::InvalidConfig("a line needs at least one segment".into()));
    }
    check_facets(Some(segments), "line")?;
    let complex = SimplicialComplex::build((0..segments).map(|i| vec![i, i + 1]).collect())?;
    let map = LinearMap::new(1, (0..=segments).map(|i| i as f64 / segments as f64).collect())?;
    Mesh::new(complex, map)
}

/// Edge skeleton of a `p x q` vertex lattice on the unit square. Vertex
/// `(i, j)` has index `i * q + j`.
pub fn grid1d_complex(p: usize, q: usize) -> Result<Mesh> {
    if p < 2 || q < 2 {
        return Err(Error::InvalidConfig("grid extents must be at least 2".into()));
    }
    check_facets(p.checked_mul(q).and_then(|n| n.checked_mul(2)), "grid")?;
    let idx = |i: usize, j: usize| i * q + j;
    let mut facets = Vec::with_capacity(p * (q - 1) + q * (p - 1));
    for i in 0..p {
        for j in 0..q {
            if j + 1 < q {
                facets.push(vec![idx(i, j), idx(i, j + 1)]);
            }
            if i + 1 < p {
                facets.push(vec![idx(i, j), idx(i + 1, j)]);
            }
        }
    }
    let mut pos = Vec::with_capacity(2 * p * q);
    for i in 0..p {
        for j in 0..q {
            pos.push(i as f64 / (p - 1) as f64);
            pos.push(j as f64 / (q - 1) as f64);
        }
    }
    Mesh::new(SimplicialComplex::build(facets)?, LinearMap::new(2, pos)?)
}

/// Outline of a regular polygon with `sides` corners on the unit circle and
/// each side cut into `subdivisions` edges. A square comes out axis aligned.
pub fn cycle_complex(sides: usize, subdivisions: usize) -> Result<Mesh> {
    if sides < 3 || subdivisions < 1 {
        return Err(Error::InvalidConfig("a cycle needs at least 3 sides and 1 subdivision".into()));
    }
    check_facets(sides.checked_mul(subdivisions), "cycle")?;
    let n = sides * subdivisions;
    let corner = |c: usize| {
        let a = PI / sides as f64 + 2.0 * PI * c as f64 / sides as f64;
        [a.cos(), a.sin()]
    };
    let mut pos = Vec::with_capacity(2 * n);
    for c in 0..sides {
        let (a, b) = (corner(c), corner((c + 1) % sides));
        for t in 0..subdivisions {
            let u = t as f64 / subdivisions as f64;
            pos.push(a[0] + u * (b[0] - a[0]));
            pos.push(a[1] + u * (b[1] - a[1]));
        }
    }
    let facets = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Mesh::new(SimplicialComplex::build(facets)?, LinearMap::new(2, pos)?)
}

/// Freudenthal (Kuhn) triangulation of a grid of `extents[0] x ... x
/// extents[d-1]` unit cells on `[0, 1]^d`. Each cell is cut into `d!`
/// simplices, one per order in which a monotone path from the cell's lower
/// corner crosses the axes. Vertex indices run with axis 0 fastest.
pub fn freudenthal_mesh(extents: &[usize]) -> Result<Mesh> {
    let d = extents.len();
    if d == 0 || extents.iter().any(|&e| e < 1) {
        return Err(Error::InvalidConfig("mesh extents must be nonempty and at least 1".into()));
    }
    let too_big = || Error::InvalidConfig(format!("mesh {extents:?} exceeds {MAX_MESH_FACETS} facets"));
    let facet_total = extents
        .iter()
        .try_fold(1usize, |acc, &e| acc.checked_mul(e))
        .and_then(|cells| (1..=d).try_fold(cells, |acc, i| acc.checked_mul(i)))
        .filter(|&n| n <= MAX_MESH_FACETS)
        .ok_or_else(too_big)?;
    let sizes: Vec<usize> = extents.iter().map(|e| e + 1).collect();
    let mut strides = vec![1usize; d];
    for a in 1..d {
        strides[a] = strides[a - 1] * sizes[a - 1];
    }
    let vertex_count: usize = sizes.iter().product();

    let mut pos = Vec::with_capacity(vertex_count * d);
    for v in 0..vertex_count {
        for a in 0..d {
            let c = v / strides[a] % sizes[a];
            pos.push(c as f64 / extents[a] as f64);
        }
    }

    let perms: Vec<Vec<usize>> = (0..d).permutations(d).collect();
    let cells: usize = extents.iter().product();
    let mut facets = Vec::with_capacity(facet_total);
    for cell in 0..cells {
        let mut base = 0;
        let mut rest = cell;
        for a in 0..d {
            base += (rest % extents[a]) * strides[a];
            rest /= extents[a];
        }
        for perm in &perms {
            let mut v = base;
            let mut simplex = Vec::with_capacity(d + 1);
            simplex.push(v);
            for &a in perm {
                v += strides[a];
                simplex.push(v);
            }
            facets.push(simplex);
        }
    }
    Mesh::new(
        SimplicialComplex::with_vertex_count(vertex_count, facets)?,
        LinearMap::new(d, pos)?,
    )
}

/// The codimension-one faces lying in exactly one facet. Keeps the vertex
/// numbering of `k`.
pub fn boundary_complex(k: &SimplicialComplex) -> Result<SimplicialComplex> {
    let d = k.dim();
    if let Some((index, f)) = k.facets().iter().enumerate().find(|(_, f)| f.dim() != d) {
        return Err(Error::NotPure {
            index,
            expected: d,
            found: f.dim(),
        });
    }
    if d == 0 {
        return Err(Error::InvalidConfig("a 0-dimensional complex has no boundary".into()));
    }
    let mut count: HashMap<SimplexRef, usize> = HashMap::new();
    let mut order = Vec::new();
    for f in k.facets() {
        for face in boundary_faces(f)? {
            let c = count.entry(face.clone()).or_insert(0);
            if *c == 0 {
                order.push(face);
            }
            *c += 1;
        }
    }
    let facets: Vec<Vec<usize>> = order
        .into_iter()
        .filter(|f| count[f] == 1)
        .map(|f| f.vertices().to_vec())
        .collect();
    if facets.is_empty() {
        return Err(Error::InvalidConfig("complex has an empty boundary".into()));
    }
    SimplicialComplex::with_vertex_count(k.vertex_count(), facets)
}

/// Places the meshes side by side in one vertex numbering.
pub fn disjoint_union(parts: &[Mesh]) -> Result<Mesh> {
    let first = parts
        .first()
        .ok_or_else(|| Error::InvalidConfig("disjoint union of nothing".into()))?;
    let dim = first.map.dim();
    let mut facets = Vec::new();
    let mut pos = Vec::new();
    let mut offset = 0;
    for part in parts {
        if part.map.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: part.map.dim(),
            });
        }
        let n = part.complex.vertex_count();
        for f in part.complex.facets() {
            facets.push(f.vertices().iter().map(|v| v + offset).collect());
        }
        pos.extend_from_slice(&part.map.as_slice()[..n * dim]);
        offset += n;
    }
    Mesh::new(
        SimplicialComplex::with_vertex_count(offset, facets)?,
        LinearMap::new(dim, pos)?,
    )
}

/// Affine map from canonical coordinates in R^d into R^m:
/// `out[axes[i]] = offset[axes[i]] + scale[i] * x[i]`, every other output
/// coordinate equal to its offset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Placement {
    pub ambient_dim: usize,
    /// One factor per canonical axis, or a single factor for all.
    pub scale: Vec<f64>,
    pub offset: Vec<f64>,
    /// Output axis for each canonical axis; defaults to `0..d`.
    #[serde(default)]
    pub axes: Option<Vec<usize>>,
}

impl Placement {
    pub fn apply(&self, canonical: &LinearMap) -> Result<LinearMap> {
        let d = canonical.dim();
        let m = self.ambient_dim;
        if d > m {
            return Err(Error::InvalidConfig(format!("cannot place a {d}-dimensional mesh into R^{m}")));
        }
        if self.offset.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: self.offset.len(),
            });
        }
        let scale: Vec<f64> = match self.scale.len() {
            1 => vec![self.scale[0]; d],
            n if n == d => self.scale.clone(),
            n => return Err(Error::DimensionMismatch { expected: d, found: n }),
        };
        if scale.iter().any(|s| *s == 0.0 || !s.is_finite()) {
            return Err(Error::InvalidConfig("placement scale must be finite and nonzero".into()));
        }
        let axes: Vec<usize> = self.axes.clone().unwrap_or_else(|| (0..d).collect());
        if axes.len() != d || axes.iter().any(|&a| a >= m) || axes.iter().duplicates().next().is_some() {
            return Err(Error::InvalidConfig(format!("placement axes {axes:?} are not {d} distinct axes below {m}")));
        }
        let mut out = Vec::with_capacity(canonical.len() * m);
        for row in canonical.rows() {
            let mut p = self.offset.clone();
            for ((&a, &s), &x) in axes.iter().zip(&scale).zip(row) {
                p[a] += s * x;
            }
            out.extend(p);
        }
        LinearMap::new(m, out)
    }

    /// Stretches the canonical unit cube over the cloud's bounding box on
    /// the chosen axes (grown by `margin` on each side, relative) and
    /// centers the remaining axes.
    pub fn fit_to_cloud(cloud: &PointCloud, canonical_dim: usize, axes: Option<Vec<usize>>, margin: f64) -> Result<Placement> {
        let bb = cloud.bounding_box();
        let m = cloud.dim();
        let axes = axes.unwrap_or_else(|| (0..canonical_dim.min(m)).collect());
        if axes.len() != canonical_dim {
            return Err(Error::DimensionMismatch {
                expected: canonical_dim,
                found: axes.len(),
            });
        }
        let mut offset: Vec<f64> = bb.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect();
        let mut scale = Vec::with_capacity(canonical_dim);
        for &a in &axes {
            let (lo, hi) = *bb.get(a).ok_or_else(|| Error::InvalidConfig(format!("axis {a} out of range")))?;
            let width = (hi - lo).max(f64::EPSILON) * (1.0 + 2.0 * margin);
            offset[a] -= 0.5 * width;
            scale.push(width);
        }
        Ok(Placement {
            ambient_dim: m,
            scale,
            offset,
            axes: Some(axes),
        })
    }
}

/// Serializable mesh recipe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MeshSpec {
    Line {
        segments: usize,
        #[serde(default)]
        placement: Option<Placement>,
    },
    Cycle {
        sides: usize,
        subdivisions: usize,
        #[serde(default)]
        placement: Option<Placement>,
    },
    Grid1d {
        shape: [usize; 2],
        #[serde(default)]
        placement: Option<Placement>,
    },
    TriMesh {
        extents: Vec<usize>,
        #[serde(default)]
        placement: Option<Placement>,
    },
    BoundaryOf {
        of: Box<MeshSpec>,
        #[serde(default)]
        placement: Option<Placement>,
    },
    DisjointUnion {
        parts: Vec<MeshSpec>,
    },
}

impl MeshSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Upper bound on the facets of the built mesh, before building it.
    /// `None` on overflow.
    pub fn facet_bound(&self) -> Option<usize> {
        match self {
            MeshSpec::Line { segments, .. } => Some(*segments),
            MeshSpec::Cycle { sides, subdivisions, .. } => sides.checked_mul(*subdivisions),
            MeshSpec::Grid1d { shape, .. } => shape[0].checked_mul(shape[1])?.checked_mul(2),
            MeshSpec::TriMesh { extents, .. } => extents
                .iter()
                .enumerate()
                .try_fold(1usize, |acc, (i, &e)| acc.checked_mul(e)?.checked_mul(i + 1)),
            MeshSpec::BoundaryOf { of, .. } => of.facet_bound()?.checked_mul(of.dim() + 1),
            MeshSpec::DisjointUnion { parts } => parts
                .iter()
                .try_fold(0usize, |acc, p| acc.checked_add(p.facet_bound()?)),
        }
    }

    /// Dimension of the built complex (of its largest part for unions).
    pub fn dim(&self) -> usize {
        match self {
            MeshSpec::Line { .. } | MeshSpec::Cycle { .. } | MeshSpec::Grid1d { .. } => 1,
            MeshSpec::TriMesh { extents, .. } => extents.len(),
            MeshSpec::BoundaryOf { of, .. } => of.dim().saturating_sub(1),
            MeshSpec::DisjointUnion { parts } => parts.iter().map(MeshSpec::dim).max().unwrap_or(0),
        }
    }

    pub fn build(&self) -> Result<Mesh> {
        check_facets(self.facet_bound(), "mesh spec")?;
        let (mesh, placement) = match self {
            MeshSpec::Line { segments, placement } => (line_complex(*segments)?, placement),
            MeshSpec::Cycle {
                sides,
                subdivisions,
                placement,
            } => (cycle_complex(*sides, *subdivisions)?, placement),
            MeshSpec::Grid1d { shape, placement } => (grid1d_complex(shape[0], shape[1])?, placement),
            MeshSpec::TriMesh { extents, placement } => (freudenthal_mesh(extents)?, placement),
            MeshSpec::BoundaryOf { of, placement } => (of.build()?.boundary()?, placement),
            MeshSpec::DisjointUnion { parts } => {
                let built = parts.iter().map(MeshSpec::build).collect::<Result<Vec<_>>>()?;
                return disjoint_union(&built);
            }
        };
        match placement {
            Some(p) => mesh.place(p),
            None => Ok(mesh),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines() {
        let one = line_complex(1).unwrap();
        assert_eq!((one.complex.vertex_count(), one.complex.facet_count()), (2, 1));
        let sixty = line_complex(60).unwrap();
        assert_eq!((sixty.complex.vertex_count(), sixty.complex.facet_count()), (61, 60));
        let three = line_complex(3).unwrap();
        let f: Vec<Vec<usize>> = three.complex.facets().iter().map(|f| f.vertices().to_vec()).collect();
        assert_eq!(f, vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        assert!(line_complex(0).is_err());
    }

    #[test]
    fn grids() {
        for (p, q, e) in [(2, 2, 4), (5, 5, 40), (2, 3, 7)] {
            let g = grid1d_complex(p, q).unwrap();
            assert_eq!(g.complex.vertex_count(), p * q);
            assert_eq!(g.complex.facet_count(), e);
            assert_eq!(e, p * (q - 1) + q * (p - 1));
        }
        assert!(grid1d_complex(1, 4).is_err());
    }

    #[test]
    fn cycles() {
        for (sides, sub, n) in [(4, 4, 16), (4, 1, 4), (3, 2, 6)] {
            let c = cycle_complex(sides, sub).unwrap();
            assert_eq!(c.complex.vertex_count(), n);
            assert_eq!(c.complex.facet_count(), n);
            assert_eq!(c.complex.euler_characteristic(), 0);
        }
        let sq = cycle_complex(4, 1).unwrap();
        let h = 0.5f64.sqrt();
        assert!((sq.map.position(0)[0] - h).abs() < 1e-15 && (sq.map.position(0)[1] - h).abs() < 1e-15);
    }

    #[test]
    fn freudenthal_counts() {
        for (ext, v, f) in [(vec![1], 2, 1), (vec![1, 1], 4, 2), (vec![2, 2], 9, 8), (vec![1, 1, 1], 8, 6)] {
            let m = freudenthal_mesh(&ext).unwrap();
            assert_eq!(m.complex.vertex_count(), v, "{ext:?}");
            assert_eq!(m.complex.facet_count(), f, "{ext:?}");
            assert!(m.complex.is_pure());
        }
    }

    #[test]
    fn boundaries() {
        let tri = SimplicialComplex::build(vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(boundary_complex(&tri).unwrap().facet_count(), 3);
        let cube = freudenthal_mesh(&[1, 1, 1]).unwrap();
        assert_eq!(boundary_complex(&cube.complex).unwrap().facet_count(), 12);
        let square = freudenthal_mesh(&[2, 2]).unwrap();
        assert_eq!(boundary_complex(&square.complex).unwrap().facet_count(), 8);
        let mixed = SimplicialComplex::build(vec![vec![0, 1, 2], vec![2, 3]]).unwrap();
        assert!(matches!(boundary_complex(&mixed), Err(Error::NotPure { .. })));
    }

    #[test]
    fn boundary_mesh_drops_interior_vertices() {
        let b = freudenthal_mesh(&[2, 2, 2]).unwrap().boundary().unwrap();
        assert_eq!(b.complex.vertex_count(), 26);
        assert_eq!(b.complex.euler_characteristic(), 2);
    }

    #[test]
    fn unions() {
        let e = line_complex(1).unwrap();
        let u = disjoint_union(&[e.clone(), e]).unwrap();
        assert_eq!((u.complex.vertex_count(), u.complex.facet_count()), (4, 2));
        let t = freudenthal_mesh(&[3, 3]).unwrap();
        let u = disjoint_union(&[t.clone(), t]).unwrap();
        assert_eq!((u.complex.vertex_count(), u.complex.facet_count()), (32, 36));
        assert!(disjoint_union(&[]).is_err());
    }

    #[test]
    fn placement_pads_and_scales() {
        let m = line_complex(2).unwrap();
        let p = Placement {
            ambient_dim: 3,
            scale: vec![2.0],
            offset: vec![1.0, 1.0, 1.0],
            axes: Some(vec![2]),
        };
        let placed = p.apply(&m.map).unwrap();
        assert_eq!(placed.position(2), &[1.0, 1.0, 3.0]);
        let bad = Placement { axes: Some(vec![3]), ..p.clone() };
        assert!(bad.apply(&m.map).is_err());
        let zero = Placement { scale: vec![0.0], ..p };
        assert!(zero.apply(&m.map).is_err());
    }

    #[test]
    fn spec_json() {
        let spec = MeshSpec::from_json(
            r#"{"kind": "boundary-of", "of": {"kind": "tri-mesh", "extents": [1, 1, 1]}}"#,
        )
        .unwrap();
        assert_eq!(spec.build().unwrap().complex.facet_count(), 12);
        assert!(MeshSpec::from_json(r#"{"kind": "torus"}"#).is_err());
    }

    #[test]
    fn facet_bound_covers_the_built_mesh() {
        let specs = [
            r#"{"kind": "line", "segments": 7}"#,
            r#"{"kind": "cycle", "sides": 4, "subdivisions": 3}"#,
            r#"{"kind": "grid1d", "shape": [3, 4]}"#,
            r#"{"kind": "tri-mesh", "extents": [2, 1, 3]}"#,
            r#"{"kind": "boundary-of", "of": {"kind": "tri-mesh", "extents": [1, 2, 1, 1]}}"#,
            r#"{"kind": "boundary-of", "of": {"kind": "line", "segments": 4}}"#,
            r#"{"kind": "disjoint-union", "parts": [{"kind": "line", "segments": 2}, {"kind": "line", "segments": 5}]}"#,
        ];
        for text in specs {
            let spec = MeshSpec::from_json(text).unwrap();
            let built = spec.build().unwrap();
            assert!(built.complex.facet_count() <= spec.facet_bound().unwrap(), "{text}");
            assert_eq!(built.complex.dim(), spec.dim(), "{text}");
        }
        for text in [
            r#"{"kind": "grid1d", "shape": [99999999999, 3]}"#,
            r#"{"kind": "line", "segments": 18446744073709551615}"#,
            r#"{"kind": "disjoint-union", "parts": [{"kind": "line", "segments": 3000000}, {"kind": "line", "segments": 3000000}]}"#,
        ] {
            assert!(MeshSpec::from_json(text).unwrap().build().is_err(), "{text}");
        }
    }
}
