//! Angle-deficit curvature.
//!
//! The discrete Gaussian curvature at a vertex is `2π` minus the sum of the
//! triangle angles incident to it. On a closed surface the deficits sum to
//! `2π χ` exactly (combinatorial Gauss–Bonnet).

use std::f64::consts::PI;

use nalgebra::Vector3;
use smallvec::SmallVec;

use super::surface::TriSurface;
use crate::error::{Error, Result};

/// Triangles with area at or below this are degenerate.
pub const DEGENERATE_AREA: f64 = 1e-12;

pub(crate) fn vec3(p: [f64; 3]) -> Vector3<f64> {
    Vector3::new(p[0], p[1], p[2])
}

pub(crate) fn area(p: [f64; 3], q: [f64; 3], r: [f64; 3]) -> f64 {
    0.5 * (vec3(q) - vec3(p)).cross(&(vec3(r) - vec3(p))).norm()
}

/// Angle at `p` in triangle `(p, q, r)`.
pub(crate) fn angle_at(p: [f64; 3], q: [f64; 3], r: [f64; 3]) -> f64 {
    let u = vec3(q) - vec3(p);
    let w = vec3(r) - vec3(p);
    u.cross(&w).norm().atan2(u.dot(&w))
}

/// Interior angles of triangle `index`, in corner order.
pub fn corner_angles(m: &TriSurface, index: usize) -> Result<[f64; 3]> {
    let t = m.triangles[index];
    let [p, q, r] = t.map(|v| m.coords[v]);
    if area(p, q, r) <= DEGENERATE_AREA {
        return Err(Error::DegenerateTriangle { index, vertices: t });
    }
    Ok([angle_at(p, q, r), angle_at(q, r, p), angle_at(r, p, q)])
}

/// Angle deficit of every vertex.
pub fn angle_deficits(m: &TriSurface) -> Result<Vec<f64>> {
    let mut sums = vec![0.0; m.vertex_count()];
    for (i, t) in m.triangles.iter().enumerate() {
        let angles = corner_angles(m, i)?;
        for k in 0..3 {
            sums[t[k]] += angles[k];
        }
    }
    Ok(sums.into_iter().map(|s| 2.0 * PI - s).collect())
}

/// `2π` minus the angle sum at `v`.
pub fn angle_deficit(m: &TriSurface, v: usize) -> Result<f64> {
    if v >= m.vertex_count() {
        return Err(Error::InvalidInput(format!("vertex {v} does not exist")));
    }
    let mut sum = 0.0;
    for (i, t) in m.triangles.iter().enumerate() {
        if let Some(k) = t.iter().position(|&x| x == v) {
            sum += corner_angles(m, i)?[k];
        }
    }
    Ok(2.0 * PI - sum)
}

/// `Σ_v |deficit(v)|`, the discrete L1 norm of Gaussian curvature.
pub fn l1_curvature(m: &TriSurface) -> Result<f64> {
    Ok(angle_deficits(m)?.iter().map(|d| d.abs()).sum())
}

/// `Σ_v deficit(v)`; `4π` on every sphere-topology mesh.
pub fn total_signed_curvature(m: &TriSurface) -> Result<f64> {
    Ok(angle_deficits(m)?.iter().sum())
}

/// Positive part `K⁺` of the curvature at a vertex whose edges point from
/// `apex` to `neighbors`: the deficit of the convex cone spanned by those
/// edge directions, or `0` when the cone is not pointed (the apex is not an
/// extreme point of its star).
///
/// Depends only on the neighbor positions, not on how the star is
/// triangulated.
pub fn cone_curvature(apex: [f64; 3], neighbors: &[[f64; 3]]) -> f64 {
    cone(apex, neighbors).value
}

/// `K⁺` of a vertex star, plus its extreme rays (indices into the neighbor
/// list, counter-clockwise around the cone axis) when the cone was
/// recognized as pointed by the fast path.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Cone {
    pub(crate) value: f64,
    pub(crate) extreme: Option<SmallVec<[usize; 8]>>,
}

pub(crate) fn cone(apex: [f64; 3], neighbors: &[[f64; 3]]) -> Cone {
    let dirs: SmallVec<[Vector3<f64>; 16]> = neighbors
        .iter()
        .map(|&q| (vec3(q) - vec3(apex)).normalize())
        .collect();
    pointed_cone(&dirs).unwrap_or_else(|| Cone {
        value: support_plane_curvature(&dirs),
        extreme: None,
    })
}

/// Whether `q` lies strictly inside the pointed cone at `apex` whose
/// extreme rays point at `rays`, in counter-clockwise order.
pub(crate) fn strictly_inside(apex: [f64; 3], rays: &[[f64; 3]], q: [f64; 3]) -> bool {
    if rays.len() < 3 {
        return false;
    }
    let o = vec3(apex);
    let y = (vec3(q) - o).normalize();
    (0..rays.len()).all(|k| {
        let u = (vec3(rays[k]) - o).normalize();
        let v = (vec3(rays[(k + 1) % rays.len()]) - o).normalize();
        u.cross(&v).dot(&y) > 1e-9
    })
}

/// Fast path: when every ray is strictly on the positive side of some axis
/// `w`, the cone is pointed and its extreme rays are the vertices
/// of the 2D hull of the rays' central projection onto the plane `⟨w, x⟩ = 1`.
fn pointed_cone(dirs: &[Vector3<f64>]) -> Option<Cone> {
    // perceptron search for an axis with every ray strictly on its positive
    // side, starting from the mean direction
    let mut w: Vector3<f64> = dirs.iter().sum::<Vector3<f64>>().try_normalize(1e-12)?;
    let mut separated = false;
    for _ in 0..16 {
        match dirs.iter().find(|d| d.dot(&w) <= 1e-6) {
            None => {
                separated = true;
                break;
            }
            Some(d) => w = (w + d).try_normalize(1e-12)?,
        }
    }
    if !separated {
        return None;
    }
    let e1 = w.cross(&dirs[0]).try_normalize(1e-12)?;
    // (e1, e2, w) is right-handed, so counter-clockwise in the plane is
    // counter-clockwise around w
    let e2 = w.cross(&e1);
    let mut pts: SmallVec<[(f64, f64, usize); 16]> = dirs
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let p = d / d.dot(&w);
            (p.dot(&e1), p.dot(&e2), i)
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let cross = |o: &(f64, f64, usize), a: &(f64, f64, usize), b: &(f64, f64, usize)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    // monotone chain, dropping collinear points
    let mut hull: SmallVec<[(f64, f64, usize); 16]> = SmallVec::new();
    for pass in 0..2 {
        let start = hull.len();
        let mut push = |p: &(f64, f64, usize)| {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 1e-15 {
                hull.pop();
            }
            hull.push(*p);
        };
        if pass == 0 {
            pts.iter().for_each(&mut push);
        } else {
            pts.iter().rev().for_each(&mut push);
        }
        hull.pop();
    }
    if hull.len() < 2 {
        return None;
    }
    let mut boundary = 0.0;
    for k in 0..hull.len() {
        let u = &dirs[hull[k].2];
        let v = &dirs[hull[(k + 1) % hull.len()].2];
        boundary += u.cross(v).norm().atan2(u.dot(v));
    }
    Some(Cone {
        value: (2.0 * PI - boundary).max(0.0),
        extreme: Some(hull.iter().map(|h| h.2).collect()),
    })
}

/// General case: finds every support plane through the apex spanned by two
/// rays. `O(d³)`.
fn support_plane_curvature(dirs: &[Vector3<f64>]) -> f64 {
    const ON_PLANE: f64 = 1e-9;
    let mut planes: SmallVec<[Vector3<f64>; 16]> = SmallVec::new();
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            let n = dirs[i].cross(&dirs[j]);
            if n.norm() < 1e-12 {
                continue;
            }
            let n = n.normalize();
            let (lo, hi) = dirs
                .iter()
                .map(|d| d.dot(&n))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
            for (supports, s) in [(hi <= ON_PLANE, n), (lo >= -ON_PLANE, -n)] {
                if supports && planes.iter().all(|p| (p - s).norm() > 1e-7) {
                    planes.push(s);
                }
            }
        }
    }
    if planes.is_empty() {
        return 0.0;
    }
    // the cone's boundary angle: on each support plane, the angular span of
    // the rays lying in it
    let mut boundary = 0.0;
    for s in &planes {
        let in_plane: SmallVec<[&Vector3<f64>; 8]> = dirs.iter().filter(|d| d.dot(s).abs() <= ON_PLANE).collect();
        let span = if in_plane.len() == 2 {
            let (u, w) = (in_plane[0], in_plane[1]);
            u.cross(w).norm().atan2(u.dot(w))
        } else {
            let e1 = in_plane[0];
            let e2 = s.cross(e1);
            let mut phi: SmallVec<[f64; 8]> = in_plane.iter().map(|d| d.dot(&e2).atan2(d.dot(e1))).collect();
            phi.sort_by(f64::total_cmp);
            let mut max_gap = phi[0] + 2.0 * PI - phi[phi.len() - 1];
            for w in phi.windows(2) {
                max_gap = max_gap.max(w[1] - w[0]);
            }
            2.0 * PI - max_gap
        };
        if span >= PI - ON_PLANE {
            // the face is a half-plane or more: the cone contains a line
            return 0.0;
        }
        boundary += span;
    }
    (2.0 * PI - boundary).max(0.0)
}

/// `K⁺` of every vertex; see [`cone_curvature`].
pub fn positive_curvatures(m: &TriSurface) -> Vec<f64> {
    m.neighbors()
        .iter()
        .enumerate()
        .map(|(v, ns)| {
            let q: Vec<[f64; 3]> = ns.iter().map(|&w| m.coords[w]).collect();
            cone_curvature(m.coords[v], &q)
        })
        .collect()
}

/// Total absolute curvature `Σ_v (K⁺(v) + K⁻(v))` with `K⁻ = K⁺ − deficit`.
///
/// Always at least `Σ|deficit|`. On a sphere-topology mesh it is at least
/// `4π`, with equality iff every vertex star is convex, that is, iff the
/// mesh bounds a convex body.
pub fn absolute_curvature(m: &TriSurface) -> Result<f64> {
    let k = angle_deficits(m)?;
    Ok(positive_curvatures(m).iter().zip(&k).map(|(p, k)| 2.0 * p - k).sum())
}
