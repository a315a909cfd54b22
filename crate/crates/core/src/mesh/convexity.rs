use std::collections::BTreeSet;

use super::surface::TriSurface;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::RandomStream;
use crate::simplicial::{convex_hull_oracle, HullResult};

/// Tolerance used when assigning mesh triangles to hull planes, relative to
/// the point-set diameter.
const PLANE_TOLERANCE: f64 = 1e-9;

/// Minimum number of sampled directions for the tightness test.
pub const MIN_TIGHTNESS_DIRECTIONS: usize = 100;

/// Whether the mesh triangles coincide with the hull facets, as unordered
/// vertex triples.
pub fn matches_hull_facets(m: &TriSurface, hull: &HullResult) -> bool {
    let facets: BTreeSet<[usize; 3]> = hull
        .facet_sets()
        .into_iter()
        .map(|v| [v[0], v[1], v[2]])
        .collect();
    facets == m.triangle_sets()
}

/// True iff every vertex is a hull vertex and the mesh triangulates the hull
/// boundary. On a coplanar hull face any triangulation of that face is
/// accepted, provided it uses the same number of triangles as the oracle's
/// fan.
pub fn is_convex_position_mesh(m: &TriSurface) -> Result<bool> {
    let points = m.points();
    let hull = convex_hull_oracle(&points)?;
    if hull.hull_vertices.len() != m.vertex_count() {
        return Ok(false);
    }
    if matches_hull_facets(m, &hull) {
        return Ok(true);
    }
    let scale = points.iter().flatten().fold(1.0f64, |acc, x| acc.max(x.abs()));
    let tol = PLANE_TOLERANCE * scale;
    // group oracle facets by supporting plane
    let mut planes: Vec<(Vec<f64>, f64, usize)> = Vec::new();
    for f in &hull.facets {
        match planes
            .iter_mut()
            .find(|(n, o, _)| linalg::dist(n, &f.normal) < 1e-9 && (o - f.offset).abs() < tol)
        {
            Some(entry) => entry.2 += 1,
            None => planes.push((f.normal.clone(), f.offset, 1)),
        }
    }
    let mut counts = vec![0usize; planes.len()];
    for t in m.triangles() {
        let on = planes.iter().position(|(n, o, _)| {
            t.iter().all(|&v| (linalg::dot(n, &points[v]) - o).abs() <= tol)
        });
        match on {
            Some(i) => counts[i] += 1,
            None => return Ok(false),
        }
    }
    Ok(planes.iter().zip(&counts).all(|((_, _, want), got)| want == got))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Whether every sublevel set `{v : ⟨u, p_v⟩ <= t}` of the vertex heights
/// along `u` induces a connected subgraph of the edge graph.
fn sublevels_connected(heights: &[f64], adjacency: &[Vec<usize>]) -> bool {
    let n = heights.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| heights[a].total_cmp(&heights[b]).then(a.cmp(&b)));
    let mut parent: Vec<usize> = (0..n).collect();
    let mut added = vec![false; n];
    let mut components = 0usize;
    let mut i = 0;
    while i < n {
        // vertices at (numerically) the same height enter together
        let level = heights[order[i]];
        while i < n && heights[order[i]] <= level + 1e-12 {
            let v = order[i];
            added[v] = true;
            components += 1;
            for &w in &adjacency[v] {
                if added[w] {
                    let (rv, rw) = (find(&mut parent, v), find(&mut parent, w));
                    if rv != rw {
                        parent[rv] = rw;
                        components -= 1;
                    }
                }
            }
            i += 1;
        }
        if components != 1 {
            return false;
        }
    }
    true
}

/// Sampled two-sided tightness test: for `directions` random unit vectors
/// `u` and every offset through the vertex range, both the sublevel and the
/// superlevel vertex sets along `u` must induce connected subgraphs.
pub fn is_tight_2surface(m: &TriSurface, directions: usize, rng: &mut RandomStream) -> Result<bool> {
    if directions < MIN_TIGHTNESS_DIRECTIONS {
        return Err(Error::InvalidInput(format!(
            "tightness needs at least {MIN_TIGHTNESS_DIRECTIONS} directions, got {directions}"
        )));
    }
    let adjacency = m.neighbors();
    for _ in 0..directions {
        let u = rng.unit_vector(3);
        let up: Vec<f64> = m.coords().iter().map(|p| linalg::dot(&u, p)).collect();
        let down: Vec<f64> = up.iter().map(|h| -h).collect();
        if !sublevels_connected(&up, &adjacency) || !sublevels_connected(&down, &adjacency) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches `directions` random unit vectors for one whose sweep splits the
/// surface, returning it.
pub fn separating_direction(m: &TriSurface, directions: usize, rng: &mut RandomStream) -> Option<Vec<f64>> {
    let adjacency = m.neighbors();
    (0..directions).find_map(|_| {
        let u = rng.unit_vector(3);
        let h: Vec<f64> = m.coords().iter().map(|p| linalg::dot(&u, p)).collect();
        (!sublevels_connected(&h, &adjacency)).then_some(u)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{shapes, swap};

    #[test]
    fn convex_meshes_are_recognized() {
        assert!(is_convex_position_mesh(&shapes::tetrahedron()).unwrap());
        assert!(is_convex_position_mesh(&shapes::icosahedron()).unwrap());
        let o = shapes::octahedron();
        assert!(is_convex_position_mesh(&o).unwrap());
        let swapped = swap::swap_edge(&o, &swap::legal_swaps(&o)[0]).unwrap();
        assert!(!is_convex_position_mesh(&swapped).unwrap());
    }

    #[test]
    fn dented_tetrahedron_is_not_convex() {
        let t = shapes::tetrahedron();
        let mut coords = t.coords().to_vec();
        coords.push([0.0; 3]);
        // subdivide face 0 at a point pushed towards the centre
        let [a, b, c] = t.triangles()[0];
        let centre = [0, 1, 2].map(|k| (coords[a][k] + coords[b][k] + coords[c][k]) / 3.0 * 0.3);
        coords[4] = centre;
        let mut tris = t.triangles().to_vec();
        tris[0] = [a, b, 4];
        tris.push([b, c, 4]);
        tris.push([c, a, 4]);
        let dented = TriSurface::new_sphere(coords, tris).unwrap();
        assert!(!is_convex_position_mesh(&dented).unwrap());
    }

    #[test]
    fn cube_with_other_diagonals_is_still_the_hull() {
        let pts: Vec<Vec<f64>> = (0..8)
            .map(|i| vec![(i & 1) as f64, (i >> 1 & 1) as f64, (i >> 2 & 1) as f64])
            .collect();
        let cube = shapes::hull_mesh(&pts).unwrap();
        // flip a face diagonal: still a triangulation of the same boundary
        let flat = swap::legal_swaps(&cube)
            .into_iter()
            .find(|mv| {
                let (c, d) = mv.opposite;
                let (a, b) = mv.edge;
                let p = |v: usize| &pts[v];
                let n = linalg::cross(&linalg::sub(p(b), p(a)), &linalg::sub(p(c), p(a)));
                linalg::dot(&n, &linalg::sub(p(d), p(a))).abs() < 1e-12
            })
            .unwrap();
        let flipped = swap::swap_edge(&cube, &flat).unwrap();
        assert!(!matches_hull_facets(&flipped, &convex_hull_oracle(&pts).unwrap()));
        assert!(is_convex_position_mesh(&flipped).unwrap());
    }

    #[test]
    fn tightness() {
        let mut rng = RandomStream::new(3);
        assert!(is_tight_2surface(&shapes::icosahedron(), 500, &mut rng).unwrap());
        assert!(is_tight_2surface(&shapes::octahedron(), 500, &mut rng).unwrap());
        let dented = shapes::dented_icosahedron(-0.5);
        assert!(separating_direction(&dented, 500, &mut rng).is_some());
        assert!(!is_tight_2surface(&dented, 500, &mut rng).unwrap());
        assert!(matches!(
            is_tight_2surface(&shapes::octahedron(), 0, &mut rng),
            Err(Error::InvalidInput(_))
        ));
    }
}
