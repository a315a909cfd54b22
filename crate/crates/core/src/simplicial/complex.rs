use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

pub type Point = Vec<f64>;

/// Slack allowed by point-in-simplex tests.
const MEMBERSHIP_TOLERANCE: f64 = 1e-9;

/// A finite set of vertex identifiers. Dimension is `|vertices| - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new<I: IntoIterator<Item = usize>>(vertices: I) -> Result<Self> {
        let mut v: Vec<usize> = vertices.into_iter().collect();
        let n = v.len();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(Error::InvalidInput("a simplex needs at least one vertex".into()));
        }
        if v.len() != n {
            return Err(Error::InvalidInput("simplex vertices must be distinct".into()));
        }
        Ok(Simplex(v))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    /// All non-empty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1 << n))
            .map(|mask| Simplex((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect()))
            .collect()
    }

    /// Faces of codimension one. Empty for a vertex.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|skip| Simplex(self.0.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect()))
            .collect()
    }

    fn union(&self, other: &[usize]) -> Simplex {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }
}

/// A finite simplex system closed under taking faces.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AbstractComplex {
    simplices: BTreeSet<Simplex>,
}

impl AbstractComplex {
    /// The face closure of `generators`.
    pub fn from_simplices<I: IntoIterator<Item = Simplex>>(generators: I) -> Self {
        let mut simplices = BTreeSet::new();
        for s in generators {
            simplices.extend(s.faces());
        }
        Self { simplices }
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.simplices.iter().flat_map(|s| s.0.iter().copied()).collect()
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(Simplex::dim).max()
    }

    /// Number of simplices of each dimension, starting at vertices.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim().map_or(0, |d| d + 1)];
        for s in &self.simplices {
            f[s.dim()] += 1;
        }
        f
    }

    /// Simplices that are not a proper face of another simplex.
    pub fn maximal(&self) -> Vec<Simplex> {
        self.simplices
            .iter()
            .filter(|s| !self.simplices.iter().any(|t| t.0.len() > s.0.len() && s.is_face_of(t)))
            .cloned()
            .collect()
    }

    /// Whether every face of every simplex is present.
    pub fn is_closed(&self) -> bool {
        self.simplices.iter().all(|s| s.facets().iter().all(|f| self.simplices.contains(f)))
    }

    /// Builds a system without closing it. For testing [`Self::is_closed`].
    pub fn from_raw<I: IntoIterator<Item = Simplex>>(simplices: I) -> Self {
        Self {
            simplices: simplices.into_iter().collect(),
        }
    }
}

/// An abstract complex realized by vertex coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricComplex {
    coords: BTreeMap<usize, Point>,
    complex: AbstractComplex,
}

impl GeometricComplex {
    pub fn new(coords: BTreeMap<usize, Point>, complex: AbstractComplex) -> Result<Self> {
        let dims: BTreeSet<usize> = coords.values().map(Vec::len).collect();
        if dims.len() > 1 {
            return Err(Error::InvalidInput("coordinates of mixed dimension".into()));
        }
        for v in complex.vertices() {
            if !coords.contains_key(&v) {
                return Err(Error::InvalidInput(format!("vertex {v} has no coordinates")));
            }
        }
        let out = Self { coords, complex };
        for s in out.complex.maximal() {
            if !linalg::affinely_independent(&out.points_of(&s)) {
                return Err(Error::NotInGeneralPosition(format!("simplex {:?}", s.vertices())));
            }
        }
        Ok(out)
    }

    pub fn complex(&self) -> &AbstractComplex {
        &self.complex
    }

    pub fn coords(&self) -> &BTreeMap<usize, Point> {
        &self.coords
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.values().next().map_or(0, Vec::len)
    }

    fn points_of(&self, s: &Simplex) -> Vec<&[f64]> {
        s.0.iter().map(|v| self.coords[v].as_slice()).collect()
    }

    /// Whether `x` lies in the body `|K|`.
    pub fn contains_point(&self, x: &[f64]) -> bool {
        self.complex.maximal().iter().any(|s| {
            let (lam, residual) = linalg::barycentric(&self.points_of(s), x);
            residual <= MEMBERSHIP_TOLERANCE && lam.iter().all(|&l| l >= -MEMBERSHIP_TOLERANCE)
        })
    }
}

/// The simplex spanned by the vertices of `a` and `b`, with all its faces.
pub fn join(a: &Simplex, b: &Simplex, coords: &BTreeMap<usize, Point>) -> Result<GeometricComplex> {
    if a.0.iter().any(|v| b.contains(*v)) {
        return Err(Error::NotInGeneralPosition("simplices share a vertex".into()));
    }
    let joined = a.union(&b.0);
    let mut used = BTreeMap::new();
    for v in joined.vertices() {
        let p = coords
            .get(v)
            .ok_or_else(|| Error::InvalidInput(format!("vertex {v} has no coordinates")))?;
        used.insert(*v, p.clone());
    }
    let pts: Vec<&[f64]> = used.values().map(Vec::as_slice).collect();
    if !linalg::affinely_independent(&pts) {
        return Err(Error::NotInGeneralPosition(format!("{:?} ∗ {:?}", a.vertices(), b.vertices())));
    }
    GeometricComplex::new(used, AbstractComplex::from_simplices([joined]))
}

/// Replaces the star of `target` by the join of `apex` with the boundary of
/// `target` and the link of `target`. The new vertex gets the smallest unused
/// identifier above all existing ones.
pub fn stellar_subdivide(k: &GeometricComplex, target: &Simplex, apex: &[f64]) -> Result<GeometricComplex> {
    if !k.complex.contains(target) {
        return Err(Error::InvalidInput(format!("{:?} is not in the complex", target.vertices())));
    }
    if apex.len() != k.ambient_dim() {
        return Err(Error::InvalidInput("apex dimension mismatch".into()));
    }
    let (lam, residual) = linalg::barycentric(&k.points_of(target), apex);
    if residual > MEMBERSHIP_TOLERANCE || lam.iter().any(|&l| l <= MEMBERSHIP_TOLERANCE) {
        return Err(Error::InvalidApex);
    }
    let new_id = k.coords.keys().next_back().map_or(0, |m| m + 1);
    let mut generators = Vec::new();
    for s in k.complex.maximal() {
        if !target.is_face_of(&s) {
            generators.push(s);
            continue;
        }
        let rest: Vec<usize> = s.0.iter().copied().filter(|v| !target.contains(*v)).collect();
        let boundary = target.facets();
        if boundary.is_empty() {
            // subdividing a vertex just relabels it
            let mut v = rest.clone();
            v.push(new_id);
            generators.push(Simplex::new(v)?);
        }
        for face in boundary {
            let mut v = face.0.clone();
            v.extend_from_slice(&rest);
            v.push(new_id);
            generators.push(Simplex::new(v)?);
        }
    }
    let mut coords = k.coords.clone();
    coords.insert(new_id, apex.to_vec());
    let complex = AbstractComplex::from_simplices(generators);
    let used = complex.vertices();
    coords.retain(|v, _| used.contains(v));
    GeometricComplex::new(coords, complex)
}

/// Forgets the coordinates.
pub fn scheme(k: &GeometricComplex) -> AbstractComplex {
    k.complex.clone()
}

/// Whether the vertex map sends every simplex of `k` onto a simplex of `l`.
/// Images may collapse (repeated vertices are merged).
pub fn is_simplicial_map(map: &BTreeMap<usize, usize>, k: &AbstractComplex, l: &AbstractComplex) -> bool {
    k.simplices().all(|s| {
        let image: Option<Vec<usize>> = s.vertices().iter().map(|v| map.get(v).copied()).collect();
        image.is_some_and(|mut img| {
            img.sort_unstable();
            img.dedup();
            l.contains(&Simplex(img))
        })
    })
}
