//! Stock closed surfaces.

use super::surface::TriSurface;
use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::simplicial::{convex_hull_oracle, HullResult, Point};

/// Regular tetrahedron inscribed in the unit sphere.
pub fn tetrahedron() -> TriSurface {
    let s = 1.0 / 3f64.sqrt();
    let coords = vec![[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]];
    let tris = vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]];
    TriSurface::new_sphere(coords, tris).expect("static mesh")
}

/// Regular octahedron with vertices `±e_i`, ordered `+x, -x, +y, -y, +z, -z`.
pub fn octahedron() -> TriSurface {
    let coords = vec![
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let tris = vec![
        [0, 2, 4],
        [2, 1, 4],
        [1, 3, 4],
        [3, 0, 4],
        [2, 0, 5],
        [1, 2, 5],
        [3, 1, 5],
        [0, 3, 5],
    ];
    TriSurface::new_sphere(coords, tris).expect("static mesh")
}

/// Regular icosahedron, built from its hull.
pub fn icosahedron() -> TriSurface {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts = Vec::new();
    for &a in &[-1.0, 1.0] {
        for &b in &[-phi, phi] {
            pts.push(vec![0.0, a, b]);
            pts.push(vec![a, b, 0.0]);
            pts.push(vec![b, 0.0, a]);
        }
    }
    hull_mesh(&pts).expect("icosahedron vertices are in convex position")
}

/// Boundary of the convex hull of `points` as a closed surface, oriented
/// outward. Every point must be a hull vertex.
pub fn hull_mesh(points: &[Point]) -> Result<TriSurface> {
    let hull = convex_hull_oracle(points)?;
    if hull.dim != 3 {
        return Err(Error::InvalidInput("hull meshes need points in E³".into()));
    }
    if let Some(inner) = (0..points.len()).find(|i| hull.hull_vertices.binary_search(i).is_err()) {
        return Err(Error::InvalidProblem(format!(
            "point {inner} {:?} is not in convex position",
            points[inner]
        )));
    }
    hull_mesh_from(points, &hull)
}

/// The mesh of an already computed hull of `points` in convex position.
pub(crate) fn hull_mesh_from(points: &[Point], hull: &HullResult) -> Result<TriSurface> {
    let coords = points.iter().map(|p| [p[0], p[1], p[2]]).collect();
    let tris = hull
        .facets
        .iter()
        .map(|f| [f.vertices[0], f.vertices[1], f.vertices[2]])
        .collect();
    TriSurface::new_sphere(coords, tris)
}

/// `n` points drawn uniformly on the sphere of the given radius.
pub fn sphere_points(n: usize, radius: f64, rng: &mut RandomStream) -> Vec<Point> {
    (0..n)
        .map(|_| rng.unit_vector(3).into_iter().map(|x| x * radius).collect())
        .collect()
}

/// Icosahedron with its first vertex pushed through the centre to
/// `depth` times its original position (`depth < 0` dents it inward).
pub fn dented_icosahedron(depth: f64) -> TriSurface {
    let ico = icosahedron();
    let mut coords = ico.coords().to_vec();
    coords[0] = coords[0].map(|x| x * depth);
    TriSurface::new_sphere(coords, ico.triangles().to_vec()).expect("same connectivity")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn icosahedron_counts() {
        let m = icosahedron();
        assert_eq!((m.vertex_count(), m.edge_count(), m.face_count()), (12, 30, 20));
    }

    #[test]
    fn interior_points_are_rejected() {
        let mut pts: Vec<Point> = tetrahedron().points();
        pts.push(vec![0.0, 0.0, 0.0]);
        assert!(matches!(hull_mesh(&pts), Err(Error::InvalidProblem(m)) if m.starts_with("point 4")));
    }
}
