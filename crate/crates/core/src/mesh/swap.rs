//! 2-2 edge swaps (bistellar flips).

use serde::{Deserialize, Serialize};

use super::curvature::{area, DEGENERATE_AREA};
use super::surface::TriSurface;
use crate::error::{Error, Result};

/// Replaces edge `(a, b)` by the opposite diagonal `(c, d)`.
///
/// `triangles.0` contains the directed edge `a → b` with apex `c`;
/// `triangles.1` contains `b → a` with apex `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapMove {
    pub edge: (usize, usize),
    pub triangles: (usize, usize),
    pub opposite: (usize, usize),
}

impl SwapMove {
    /// Geometry of the quad around `edge`, without legality checks.
    fn around(m: &TriSurface, a: usize, b: usize) -> Option<SwapMove> {
        let t1 = *m.half_edges.get(&(a, b))?;
        let t2 = *m.half_edges.get(&(b, a))?;
        let apex = |t: usize, x: usize, y: usize| m.triangles[t].iter().copied().find(|&v| v != x && v != y);
        Some(SwapMove {
            edge: (a, b),
            triangles: (t1, t2),
            opposite: (apex(t1, a, b)?, apex(t2, a, b)?),
        })
    }

    /// The two triangles that replace the current pair, in the order they
    /// are written back to `triangles.0` and `triangles.1`.
    pub fn replacement(&self) -> ([usize; 3], [usize; 3]) {
        let (a, b) = self.edge;
        let (c, d) = self.opposite;
        ([c, a, d], [d, b, c])
    }
}

/// The move for edge `{a, b}`, if the swap is legal: the apexes differ and
/// are not already joined, and neither new triangle is degenerate.
pub fn swap_move(m: &TriSurface, a: usize, b: usize) -> Option<SwapMove> {
    let (a, b) = (a.min(b), a.max(b));
    let mv = SwapMove::around(m, a, b)?;
    let (c, d) = mv.opposite;
    if c == d || m.has_edge(c, d) {
        return None;
    }
    let (n1, n2) = mv.replacement();
    let p = |t: [usize; 3]| t.map(|v| m.coords[v]);
    let [x, y, z] = p(n1);
    let [u, v, w] = p(n2);
    if area(x, y, z) <= DEGENERATE_AREA || area(u, v, w) <= DEGENERATE_AREA {
        return None;
    }
    Some(mv)
}

/// Every legal swap, ordered by edge.
pub fn legal_swaps(m: &TriSurface) -> Vec<SwapMove> {
    m.edges().into_iter().filter_map(|(a, b)| swap_move(m, a, b)).collect()
}

pub(crate) fn apply_in_place(m: &mut TriSurface, mv: &SwapMove) {
    let (t1, t2) = mv.triangles;
    let (n1, n2) = mv.replacement();
    let (a, b) = mv.edge;
    m.half_edges.remove(&(a, b));
    m.half_edges.remove(&(b, a));
    m.triangles[t1] = n1;
    m.triangles[t2] = n2;
    for (t, tri) in [(t1, n1), (t2, n2)] {
        for k in 0..3 {
            m.half_edges.insert((tri[k], tri[(k + 1) % 3]), t);
        }
    }
}

/// Applies a legal swap and returns the new surface. V, E and F are
/// unchanged.
pub fn swap_edge(m: &TriSurface, mv: &SwapMove) -> Result<TriSurface> {
    let (a, b) = mv.edge;
    match swap_move(m, a, b) {
        Some(current) if current == *mv => {
            let mut out = m.clone();
            apply_in_place(&mut out, mv);
            Ok(out)
        }
        _ => Err(Error::IllegalSwap(a, b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::shapes;

    #[test]
    fn tetrahedron_has_no_legal_swaps() {
        assert!(legal_swaps(&shapes::tetrahedron()).is_empty());
    }

    #[test]
    fn every_octahedron_edge_is_swappable() {
        let o = shapes::octahedron();
        // each edge's apexes are antipodal, and antipodes are never joined
        let mut oracle = 0;
        for (a, b) in o.edges() {
            let mv = SwapMove::around(&o, a, b).unwrap();
            let (c, d) = mv.opposite;
            let antipodal = o.coords()[c].iter().zip(&o.coords()[d]).all(|(x, y)| (x + y).abs() < 1e-12);
            if antipodal && !o.has_edge(c, d) {
                oracle += 1;
            }
        }
        assert_eq!(oracle, 12);
        assert_eq!(legal_swaps(&o).len(), oracle);
    }

    #[test]
    fn degenerate_replacement_is_excluded() {
        // the apexes of edge (0, 1) are collinear with vertex 0
        let coords = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -1.0, 0.0], [0.3, 0.2, 1.0]];
        let tris = vec![[0, 1, 2], [1, 0, 3], [2, 1, 4], [1, 3, 4], [3, 0, 4], [0, 2, 4]];
        let m = TriSurface::new_sphere(coords, tris).unwrap();
        assert!(SwapMove::around(&m, 0, 1).is_some());
        assert!(swap_move(&m, 0, 1).is_none());
        assert!(legal_swaps(&m).iter().all(|mv| mv.edge != (0, 1)));
    }

    #[test]
    fn swap_is_an_involution() {
        let o = shapes::octahedron();
        for mv in legal_swaps(&o) {
            let once = swap_edge(&o, &mv).unwrap();
            assert_eq!(
                (once.vertex_count(), once.edge_count(), once.face_count()),
                (o.vertex_count(), o.edge_count(), o.face_count())
            );
            let back = swap_move(&once, mv.opposite.0, mv.opposite.1).unwrap();
            let twice = swap_edge(&once, &back).unwrap();
            assert_eq!(twice.oriented_triangles(), o.oriented_triangles());
            TriSurface::new_sphere(twice.coords().to_vec(), twice.triangles().to_vec()).unwrap();
        }
    }

    #[test]
    fn illegal_swaps_are_refused() {
        let t = shapes::tetrahedron();
        let fake = SwapMove {
            edge: (0, 1),
            triangles: (0, 1),
            opposite: (2, 3),
        };
        assert!(matches!(swap_edge(&t, &fake), Err(Error::IllegalSwap(0, 1))));
    }
}
