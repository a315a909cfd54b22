//! Brute-force convex hull in E² and E³.
//!
//! A candidate facet (a point pair in E², a triple in E³) is accepted when
//! every input point lies weakly on one side of its affine span. This is
//! `O(m^{n+1})` and serves as ground truth, not as a fast path.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::complex::Point;
use crate::error::{Error, Result};
use crate::linalg;

/// Sidedness tolerance for facet planes.
pub const SIDE_TOLERANCE: f64 = 1e-9;

/// Oriented hull facet: `⟨normal, x⟩ <= offset` holds for every input
/// point. In E³ the vertex order is counter-clockwise seen from outside; in
/// E² facets run counter-clockwise around the hull.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub vertices: Vec<usize>,
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Facet {
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        linalg::dot(&self.normal, x) - self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullResult {
    pub dim: usize,
    /// Indices of the extreme points, ascending.
    pub hull_vertices: Vec<usize>,
    pub facets: Vec<Facet>,
}

impl HullResult {
    /// Facets as unordered vertex sets.
    pub fn facet_sets(&self) -> BTreeSet<Vec<usize>> {
        self.facets
            .iter()
            .map(|f| {
                let mut v = f.vertices.clone();
                v.sort_unstable();
                v
            })
            .collect()
    }

    /// Largest signed distance of any point outside any facet plane.
    pub fn max_violation(&self, points: &[Point]) -> f64 {
        self.facets
            .iter()
            .flat_map(|f| points.iter().map(move |p| f.signed_distance(p)))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.facets.iter().all(|f| f.signed_distance(x) <= SIDE_TOLERANCE)
    }
}

fn check_input(points: &[Point]) -> Result<usize> {
    let dim = points.first().map(Vec::len).unwrap_or(0);
    if !(dim == 2 || dim == 3) {
        return Err(Error::InvalidInput(format!("hull supports E² and E³, got dimension {dim}")));
    }
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidInput("points of mixed dimension".into()));
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite coordinate".into()));
    }
    let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
    if linalg::affine_rank(&refs) < dim {
        return Err(Error::DegenerateInput(format!(
            "points span less than {dim} dimensions"
        )));
    }
    Ok(dim)
}

/// Classifies all points against the plane `⟨n, x⟩ = ⟨n, anchor⟩`. Returns
/// the outward unit normal, its offset and the indices on the plane, or
/// `None` when points lie strictly on both sides.
fn supporting(points: &[Point], anchor: &[f64], normal: &[f64]) -> Option<(Vec<f64>, f64, Vec<usize>)> {
    let len = linalg::norm(normal);
    let n: Vec<f64> = normal.iter().map(|x| x / len).collect();
    let offset = linalg::dot(&n, anchor);
    let (mut above, mut below) = (false, false);
    let mut on = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let d = linalg::dot(&n, p) - offset;
        if d > SIDE_TOLERANCE {
            above = true;
        } else if d < -SIDE_TOLERANCE {
            below = true;
        } else {
            on.push(i);
        }
        if above && below {
            return None;
        }
    }
    if above {
        Some((n.iter().map(|x| -x).collect(), -offset, on))
    } else {
        Some((n, offset, on))
    }
}

/// Strict convex hull of 2D points, counter-clockwise, starting at the
/// lowest index. Collinear and coincident points are dropped.
fn polygon(ids: &[usize], uv: &[(f64, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by(|&a, &b| {
        uv[a].0
            .total_cmp(&uv[b].0)
            .then(uv[a].1.total_cmp(&uv[b].1))
            .then(ids[a].cmp(&ids[b]))
    });
    let cross = |o: usize, a: usize, b: usize| {
        (uv[a].0 - uv[o].0) * (uv[b].1 - uv[o].1) - (uv[a].1 - uv[o].1) * (uv[b].0 - uv[o].0)
    };
    let mut chain: Vec<usize> = Vec::new();
    for pass in 0..2 {
        let start = chain.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(order.iter())
        } else {
            Box::new(order.iter().rev())
        };
        for &p in iter {
            while chain.len() >= start + 2 && cross(chain[chain.len() - 2], chain[chain.len() - 1], p) <= SIDE_TOLERANCE {
                chain.pop();
            }
            chain.push(p);
        }
        chain.pop();
    }
    let mut out: Vec<usize> = chain.into_iter().map(|i| ids[i]).collect();
    if let Some(first) = out.iter().position_min() {
        out.rotate_left(first);
    }
    out
}

fn hull_2d(points: &[Point]) -> HullResult {
    let mut facets = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (i, j) in (0..points.len()).tuple_combinations() {
        let d = linalg::sub(&points[j], &points[i]);
        if linalg::norm(&d) <= SIDE_TOLERANCE {
            continue;
        }
        let Some((normal, offset, on)) = supporting(points, &points[i], &[d[1], -d[0]]) else {
            continue;
        };
        if !seen.insert(on.clone()) {
            continue;
        }
        // extreme points of the collinear set along the edge direction
        let tangent = [-normal[1], normal[0]];
        let along = |k: usize| linalg::dot(&tangent, &points[k]);
        let first = *on.iter().min_by(|&&a, &&b| along(a).total_cmp(&along(b)).then(a.cmp(&b))).expect("non-empty");
        let last = *on.iter().max_by(|&&a, &&b| along(a).total_cmp(&along(b)).then(b.cmp(&a))).expect("non-empty");
        if along(last) - along(first) <= SIDE_TOLERANCE {
            continue;
        }
        facets.push(Facet {
            vertices: vec![first, last],
            normal,
            offset,
        });
    }
    finish(2, facets)
}

fn hull_3d(points: &[Point]) -> HullResult {
    let mut facets = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (i, j, k) in (0..points.len()).tuple_combinations() {
        let n = linalg::cross(&linalg::sub(&points[j], &points[i]), &linalg::sub(&points[k], &points[i]));
        if linalg::norm(&n) <= 1e-12 {
            continue;
        }
        let Some((normal, offset, on)) = supporting(points, &points[i], &n) else {
            continue;
        };
        if !seen.insert(on.clone()) {
            continue;
        }
        // in-plane basis with u × v = outward normal
        let u = {
            let d = linalg::sub(&points[j], &points[i]);
            let l = linalg::norm(&d);
            d.iter().map(|x| x / l).collect::<Vec<_>>()
        };
        let v = linalg::cross(&normal, &u);
        let uv: Vec<(f64, f64)> = on
            .iter()
            .map(|&p| (linalg::dot(&u, &points[p]), linalg::dot(&v, &points[p])))
            .collect();
        let ring = polygon(&on, &uv);
        for w in 1..ring.len().saturating_sub(1) {
            facets.push(Facet {
                vertices: vec![ring[0], ring[w], ring[w + 1]],
                normal: normal.clone(),
                offset,
            });
        }
    }
    finish(3, facets)
}

fn finish(dim: usize, mut facets: Vec<Facet>) -> HullResult {
    facets.sort_by(|a, b| {
        let mut ka = a.vertices.clone();
        let mut kb = b.vertices.clone();
        ka.sort_unstable();
        kb.sort_unstable();
        ka.cmp(&kb)
    });
    let hull_vertices: BTreeSet<usize> = facets.iter().flat_map(|f| f.vertices.iter().copied()).collect();
    HullResult {
        dim,
        hull_vertices: hull_vertices.into_iter().collect(),
        facets,
    }
}

/// Brute-force convex hull of points in E² or E³.
///
/// Coplanar facets in E³ are split into a fan from their lowest-index
/// extreme point. Points that lie on the hull boundary without being
/// extreme are not hull vertices.
pub fn convex_hull_oracle(points: &[Point]) -> Result<HullResult> {
    match check_input(points)? {
        2 => Ok(hull_2d(points)),
        _ => Ok(hull_3d(points)),
    }
}
