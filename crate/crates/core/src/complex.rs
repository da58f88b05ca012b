//! Abstract simplicial complexes stored by their facets, plus barycentric
//! coordinates on their simplices.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default zero tolerance for barycentric coordinates.
pub const DEFAULT_EPS_LAMBDA: f64 = 1e-9;

/// Tolerance on `sum(lambda) == 1`.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Largest vertex count a complex may declare.
pub const MAX_VERTEX_COUNT: usize = 1 << 24;

/// Largest simplex, in vertices, the solvers accept.
pub const MAX_SIMPLEX_VERTICES: usize = 64;

/// A simplex named by its sorted, duplicate-free vertex indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SimplexRef(Vec<usize>);

impl SimplexRef {
    /// Sorts `vertices`. Fails on an empty set, a repeated vertex or more
    /// than [`MAX_SIMPLEX_VERTICES`] vertices.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyFacet { index: 0 });
        }
        if vertices.len() > MAX_SIMPLEX_VERTICES {
            return Err(Error::SimplexTooLarge(vertices.len()));
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex {
                index: 0,
                vertex: w[0],
            });
        }
        Ok(Self(vertices))
    }

    pub fn vertex(v: usize) -> Self {
        Self(vec![v])
    }

    pub(crate) fn from_sorted_unchecked(vertices: Vec<usize>) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Self(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for the `len`/`is_empty` pair.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_vertex(&self) -> bool {
        self.0.len() == 1
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Position of `v` in the sorted vertex list.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    pub fn is_face_of(&self, other: &SimplexRef) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    /// The face obtained by keeping the local vertex positions whose bit is
    /// set in `mask`.
    pub(crate) fn sub_face(&self, mask: u64) -> SimplexRef {
        let vs = self
            .0
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| *v)
            .collect();
        SimplexRef::from_sorted_unchecked(vs)
    }
}

impl fmt::Debug for SimplexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl TryFrom<Vec<usize>> for SimplexRef {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        SimplexRef::new(v)
    }
}

impl From<SimplexRef> for Vec<usize> {
    fn from(s: SimplexRef) -> Self {
        s.0
    }
}

/// Returns the faces of `s` with one vertex removed, ordered by the position
/// of the removed vertex.
pub fn boundary_faces(s: &SimplexRef) -> Result<Vec<SimplexRef>> {
    if s.is_vertex() {
        return Err(Error::VertexHasNoBoundary);
    }
    Ok((0..s.len())
        .map(|k| {
            let mut vs = s.0.clone();
            vs.remove(k);
            SimplexRef::from_sorted_unchecked(vs)
        })
        .collect())
}

/// A finite abstract simplicial complex given by its maximal simplices.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    facets: Vec<SimplexRef>,
    // vertex -> ascending facet indices
    incidence: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Validates the facet list, drops duplicates and any facet contained in
    /// another, and sets the vertex count to one past the largest index.
    pub fn build(facets: Vec<Vec<usize>>) -> Result<Self> {
        let max = facets
            .iter()
            .flat_map(|f| f.iter().copied())
            .max()
            .ok_or(Error::EmptyComplex)?;
        Self::with_vertex_count(max.saturating_add(1), facets)
    }

    /// Same as [`SimplicialComplex::build`] with an explicit vertex count, which
    /// may exceed the largest index used by a facet.
    pub fn with_vertex_count(vertex_count: usize, facets: Vec<Vec<usize>>) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::EmptyComplex);
        }
        if vertex_count > MAX_VERTEX_COUNT {
            return Err(Error::VertexOutOfRange {
                vertex: vertex_count - 1,
                count: MAX_VERTEX_COUNT,
            });
        }
        let mut refs = Vec::with_capacity(facets.len());
        for (index, f) in facets.into_iter().enumerate() {
            let s = SimplexRef::new(f).map_err(|e| match e {
                Error::EmptyFacet { .. } => Error::EmptyFacet { index },
                Error::DuplicateVertex { vertex, .. } => Error::DuplicateVertex { index, vertex },
                other => other,
            })?;
            if let Some(&v) = s.vertices().last() {
                if v >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        count: vertex_count,
                    });
                }
            }
            refs.push(s);
        }
        Ok(Self::from_refs(vertex_count, refs))
    }

    fn from_refs(vertex_count: usize, refs: Vec<SimplexRef>) -> Self {
        let mut incidence = vec![Vec::new(); vertex_count];
        for (i, f) in refs.iter().enumerate() {
            for &v in f.vertices() {
                incidence[v].push(i);
            }
        }
        // A facet survives unless an earlier duplicate exists or some other
        // facet strictly contains it. Any superset is incident to the
        // facet's first vertex, so only that incidence list is scanned.
        let keep: Vec<bool> = refs
            .iter()
            .enumerate()
            .map(|(i, f)| {
                incidence[f.vertices()[0]].iter().all(|&j| {
                    if j == i {
                        return true;
                    }
                    let g = &refs[j];
                    if !f.is_face_of(g) {
                        return true;
                    }
                    // equal sets: keep only the first occurrence
                    g.len() == f.len() && j > i
                })
            })
            .collect();
        let facets: Vec<SimplexRef> = refs
            .into_iter()
            .zip(keep)
            .filter_map(|(f, k)| k.then_some(f))
            .collect();
        let mut incidence = vec![Vec::new(); vertex_count];
        for (i, f) in facets.iter().enumerate() {
            for &v in f.vertices() {
                incidence[v].push(i);
            }
        }
        Self {
            vertex_count,
            facets,
            incidence,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facets(&self) -> &[SimplexRef] {
        &self.facets
    }

    pub fn facet(&self, i: usize) -> &SimplexRef {
        &self.facets[i]
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Largest facet dimension.
    pub fn dim(&self) -> usize {
        self.facets.iter().map(SimplexRef::dim).max().unwrap_or(0)
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.facets.iter().all(|f| f.dim() == d)
    }

    /// Facet indices containing vertex `v`, ascending.
    pub fn facets_of_vertex(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    /// Is `s` a face of some facet?
    pub fn contains_simplex(&self, s: &SimplexRef) -> bool {
        s.vertices()
            .first()
            .filter(|&&v| v < self.vertex_count)
            .is_some_and(|&v| self.incidence[v].iter().any(|&i| s.is_face_of(&self.facets[i])))
    }

    /// Index of the first facet that contains `s`.
    pub fn facet_containing(&self, s: &SimplexRef) -> Option<usize> {
        let v = *s.vertices().first()?;
        if v >= self.vertex_count {
            return None;
        }
        self.incidence[v]
            .iter()
            .copied()
            .find(|&i| s.is_face_of(&self.facets[i]))
    }

    /// Indices of all facets sharing at least one vertex with `s`, ascending.
    pub fn adjacent_facets(&self, s: &SimplexRef) -> Result<Vec<usize>> {
        if !self.contains_simplex(s) {
            return Err(Error::NotASimplex(s.vertices().to_vec()));
        }
        let set: BTreeSet<usize> = s
            .vertices()
            .iter()
            .flat_map(|&v| self.incidence[v].iter().copied())
            .collect();
        Ok(set.into_iter().collect())
    }

    /// Every distinct face of the complex, grouped by dimension.
    pub fn faces_by_dim(&self) -> Vec<BTreeSet<SimplexRef>> {
        let mut out = vec![BTreeSet::new(); self.dim() + 1];
        for f in &self.facets {
            let n = f.len();
            for mask in 1u64..(1u64 << n) {
                let face = f.sub_face(mask);
                out[face.dim()].insert(face);
            }
        }
        out
    }

    /// Alternating sum of face counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces_by_dim()
            .iter()
            .enumerate()
            .map(|(d, s)| if d % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum()
    }

    /// Renumbers the vertices used by some facet to `0..k`. Returns the new
    /// complex and, for each new index, the original vertex index.
    pub fn compact(&self) -> (SimplicialComplex, Vec<usize>) {
        let used: BTreeSet<usize> = self
            .facets
            .iter()
            .flat_map(|f| f.vertices().iter().copied())
            .collect();
        let vertex_map: Vec<usize> = used.into_iter().collect();
        let mut inverse = HashMap::with_capacity(vertex_map.len());
        for (new, &old) in vertex_map.iter().enumerate() {
            inverse.insert(old, new);
        }
        let refs = self
            .facets
            .iter()
            .map(|f| SimplexRef::from_sorted_unchecked(f.vertices().iter().map(|v| inverse[v]).collect()))
            .collect();
        (Self::from_refs(vertex_map.len(), refs), vertex_map)
    }

    pub fn to_file(&self) -> ComplexFile {
        ComplexFile {
            vertices: self.vertex_count,
            facets: self.facets.iter().map(|f| f.vertices().to_vec()).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(text)?;
        file.into_complex()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("complex serializes")
    }
}

/// Wire form of a complex: `{"vertices": n, "facets": [[0,1,2], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub vertices: usize,
    pub facets: Vec<Vec<usize>>,
}

impl ComplexFile {
    pub fn into_complex(self) -> Result<SimplicialComplex> {
        SimplicialComplex::with_vertex_count(self.vertices, self.facets)
    }
}

/// A point of a simplex in barycentric form. `lambda[i]` belongs to
/// `simplex.vertices()[i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarycentricPoint {
    pub simplex: SimplexRef,
    pub lambda: Vec<f64>,
}

impl BarycentricPoint {
    pub fn new(simplex: SimplexRef, lambda: Vec<f64>) -> Result<Self> {
        if simplex.len() != lambda.len() {
            return Err(Error::DimensionMismatch {
                expected: simplex.len(),
                found: lambda.len(),
            });
        }
        Ok(Self { simplex, lambda })
    }

    pub fn at_vertex(v: usize) -> Self {
        Self {
            simplex: SimplexRef::vertex(v),
            lambda: vec![1.0],
        }
    }

    /// Coordinate attached to vertex `v`, zero if `v` is not in the simplex.
    pub fn coordinate(&self, v: usize) -> f64 {
        self.simplex.position(v).map_or(0.0, |i| self.lambda[i])
    }

    pub fn min_coordinate(&self) -> f64 {
        self.lambda.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Coordinates re-expressed against `facet` (zeros for absent vertices).
    pub fn expand_to(&self, facet: &SimplexRef) -> Vec<f64> {
        facet.vertices().iter().map(|&v| self.coordinate(v)).collect()
    }

    /// Checks the sum and sign invariants.
    pub fn is_normalized(&self) -> bool {
        let sum: f64 = self.lambda.iter().sum();
        (sum - 1.0).abs() <= SUM_TOLERANCE && self.min_coordinate() >= -SUM_TOLERANCE
    }
}

/// Drops every coordinate `<= eps_lambda` and renormalizes the rest, which
/// moves the point onto the smallest face that contains it.
pub fn smallest_containing_simplex(p: &BarycentricPoint, eps_lambda: f64) -> Result<BarycentricPoint> {
    let (vs, ls): (Vec<usize>, Vec<f64>) = p
        .simplex
        .vertices()
        .iter()
        .zip(&p.lambda)
        .filter(|(_, &l)| l > eps_lambda)
        .map(|(&v, &l)| (v, l))
        .unzip();
    if vs.is_empty() {
        return Err(Error::NoContainingSimplex);
    }
    let sum: f64 = ls.iter().sum();
    let lambda = ls.into_iter().map(|l| l / sum).collect();
    Ok(BarycentricPoint {
        simplex: SimplexRef::from_sorted_unchecked(vs),
        lambda,
    })
}
