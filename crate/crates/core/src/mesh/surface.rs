use std::collections::{BTreeSet, HashMap};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed, consistently oriented triangulated surface in E³.
///
/// Construction checks that every directed edge occurs exactly once and its
/// reverse also occurs (so every edge borders exactly two triangles with
/// opposite orientation) and that the link of every vertex is one cycle.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawSurface", into = "RawSurface")]
pub struct TriSurface {
    pub(crate) coords: Vec<[f64; 3]>,
    pub(crate) triangles: Vec<[usize; 3]>,
    /// Directed edge `(a, b)` → triangle containing it.
    pub(crate) half_edges: FxHashMap<(usize, usize), usize>,
}

#[derive(Serialize, Deserialize)]
struct RawSurface {
    vertices: Vec<[f64; 3]>,
    triangles: Vec<[usize; 3]>,
}

impl TryFrom<RawSurface> for TriSurface {
    type Error = Error;

    fn try_from(raw: RawSurface) -> Result<Self> {
        TriSurface::new(raw.vertices, raw.triangles)
    }
}

impl From<TriSurface> for RawSurface {
    fn from(m: TriSurface) -> Self {
        RawSurface {
            vertices: m.coords,
            triangles: m.triangles,
        }
    }
}

impl PartialEq for TriSurface {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.triangles == other.triangles
    }
}

/// Rotation of `t` that starts at its smallest vertex; keeps orientation.
pub fn canonical_triangle(t: [usize; 3]) -> [usize; 3] {
    let k = (0..3).min_by_key(|&i| t[i]).expect("three corners");
    [t[k], t[(k + 1) % 3], t[(k + 2) % 3]]
}

impl TriSurface {
    pub fn new(coords: Vec<[f64; 3]>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let n = coords.len();
        if triangles.is_empty() {
            return Err(Error::InvalidMesh("no triangles".into()));
        }
        if coords.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMesh("non-finite coordinate".into()));
        }
        let mut half_edges = FxHashMap::default();
        half_edges.reserve(3 * triangles.len());
        for (ti, t) in triangles.iter().enumerate() {
            if t.iter().any(|&v| v >= n) {
                return Err(Error::InvalidMesh(format!("triangle #{ti} {t:?} references a missing vertex")));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::InvalidMesh(format!("triangle #{ti} {t:?} repeats a vertex")));
            }
            for k in 0..3 {
                let e = (t[k], t[(k + 1) % 3]);
                if half_edges.insert(e, ti).is_some() {
                    return Err(Error::InvalidMesh(format!(
                        "directed edge {e:?} appears twice (non-manifold or inconsistent orientation)"
                    )));
                }
            }
        }
        if let Some(&(a, b)) = half_edges.keys().find(|&&(a, b)| !half_edges.contains_key(&(b, a))) {
            return Err(Error::InvalidMesh(format!("edge ({a}, {b}) borders only one triangle")));
        }
        let m = Self {
            coords,
            triangles,
            half_edges,
        };
        m.check_links()?;
        Ok(m)
    }

    /// Like [`TriSurface::new`], additionally requiring `V - E + F = 2`.
    pub fn new_sphere(coords: Vec<[f64; 3]>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let m = Self::new(coords, triangles)?;
        if m.euler_characteristic() != 2 {
            return Err(Error::InvalidMesh(format!(
                "Euler characteristic {} is not that of a sphere",
                m.euler_characteristic()
            )));
        }
        Ok(m)
    }

    fn check_links(&self) -> Result<()> {
        // link of v: the edges (a -> b) opposite v in its incident triangles
        let mut links: Vec<HashMap<usize, usize>> = vec![HashMap::new(); self.coords.len()];
        for t in &self.triangles {
            for k in 0..3 {
                links[t[k]].insert(t[(k + 1) % 3], t[(k + 2) % 3]);
            }
        }
        for (v, link) in links.iter().enumerate() {
            let Some(&start) = link.keys().min() else {
                return Err(Error::InvalidMesh(format!("vertex {v} is not used by any triangle")));
            };
            let mut cur = start;
            let mut steps = 0;
            loop {
                cur = *link
                    .get(&cur)
                    .ok_or_else(|| Error::InvalidMesh(format!("link of vertex {v} is not closed")))?;
                steps += 1;
                if cur == start || steps > link.len() {
                    break;
                }
            }
            if cur != start || steps != link.len() {
                return Err(Error::InvalidMesh(format!("link of vertex {v} is not a single cycle")));
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    pub fn edge_count(&self) -> usize {
        self.half_edges.len() / 2
    }

    pub fn face_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn coords(&self) -> &[[f64; 3]] {
        &self.coords
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.half_edges.contains_key(&(a, b))
    }

    /// Undirected edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
            .filter(|(a, b)| a < b)
            .collect();
        out.sort_unstable();
        out
    }

    /// Vertex adjacency lists, each sorted.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.coords.len()];
        for (a, b) in self.edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Triangles as unordered vertex sets.
    pub fn triangle_sets(&self) -> BTreeSet<[usize; 3]> {
        self.triangles
            .iter()
            .map(|t| {
                let mut s = *t;
                s.sort_unstable();
                s
            })
            .collect()
    }

    /// Oriented triangles in canonical rotation, as a set.
    pub fn oriented_triangles(&self) -> BTreeSet<[usize; 3]> {
        self.triangles.iter().map(|&t| canonical_triangle(t)).collect()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        self.coords.iter().map(|p| p.to_vec()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::shapes;

    #[test]
    fn platonic_counts() {
        let t = shapes::tetrahedron();
        assert_eq!((t.vertex_count(), t.edge_count(), t.face_count()), (4, 6, 4));
        let o = shapes::octahedron();
        assert_eq!((o.vertex_count(), o.edge_count(), o.face_count()), (6, 12, 8));
        assert_eq!(o.euler_characteristic(), 2);
    }

    #[test]
    fn open_and_misoriented_meshes_are_rejected() {
        let t = shapes::tetrahedron();
        let mut open = t.triangles().to_vec();
        open.pop();
        assert!(TriSurface::new(t.coords().to_vec(), open).is_err());
        let mut flipped = t.triangles().to_vec();
        flipped[0].swap(1, 2);
        assert!(TriSurface::new(t.coords().to_vec(), flipped).is_err());
        let mut extra = t.coords().to_vec();
        extra.push([5.0, 5.0, 5.0]);
        assert!(TriSurface::new(extra, t.triangles().to_vec()).is_err());
    }

    #[test]
    fn pinched_vertex_is_rejected() {
        // two tetrahedra sharing only vertex 0
        let t = shapes::tetrahedron();
        let mut coords = t.coords().to_vec();
        coords.extend([[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]);
        let mut tris = t.triangles().to_vec();
        let map = |v: usize| if v == 0 { 0 } else { v + 3 };
        tris.extend(t.triangles().iter().map(|tr| [map(tr[0]), map(tr[1]), map(tr[2])]));
        let err = TriSurface::new(coords, tris).unwrap_err();
        assert!(matches!(err, Error::InvalidMesh(ref m) if m.contains("single cycle")), "{err}");
    }

    #[test]
    fn serde_round_trip_validates() {
        let o = shapes::octahedron();
        let text = serde_json::to_string(&o).unwrap();
        let back: TriSurface = serde_json::from_str(&text).unwrap();
        assert_eq!(back, o);
        assert!(serde_json::from_str::<TriSurface>(r#"{"vertices":[[0,0,0]],"triangles":[[0,0,0]]}"#).is_err());
    }
}
