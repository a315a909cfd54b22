use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::complex::Point;
use crate::error::{Error, Result};
use crate::linalg;

/// Slack on `⟨a, x⟩ <= b`.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-9;
/// Candidate vertices closer than this are merged.
pub const MERGE_RADIUS: f64 = 1e-7;

/// Closed half-space `⟨normal, x⟩ <= offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl HalfSpace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Self {
        Self { normal, offset }
    }

    pub fn violation(&self, x: &[f64]) -> f64 {
        (linalg::dot(&self.normal, x) - self.offset).max(0.0)
    }

    fn normalized(&self) -> Option<HalfSpace> {
        let n = linalg::norm(&self.normal);
        (n > 0.0).then(|| HalfSpace::new(self.normal.iter().map(|a| a / n).collect(), self.offset / n))
    }
}

/// Intersection of finitely many closed half-spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpacePolytope {
    dim: usize,
    inequalities: Vec<HalfSpace>,
}

impl HalfSpacePolytope {
    pub fn new(dim: usize, inequalities: Vec<HalfSpace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if let Some(h) = inequalities.iter().find(|h| h.normal.len() != dim) {
            return Err(Error::InvalidInput(format!(
                "normal {:?} does not have dimension {dim}",
                h.normal
            )));
        }
        if let Some(h) = inequalities.iter().find(|h| linalg::norm(&h.normal) == 0.0) {
            return Err(Error::InvalidInput(format!("zero normal with offset {}", h.offset)));
        }
        Ok(Self { dim, inequalities })
    }

    /// `[0, 1]^dim`.
    pub fn unit_box(dim: usize) -> Self {
        Self::boxed(&vec![(0.0, 1.0); dim])
    }

    /// Axis-aligned box with the given `[lo, hi]` per axis.
    pub fn boxed(bounds: &[(f64, f64)]) -> Self {
        let dim = bounds.len();
        let mut inequalities = Vec::with_capacity(2 * dim);
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            inequalities.push(HalfSpace::new(e.clone(), hi));
            e[i] = -1.0;
            inequalities.push(HalfSpace::new(e, -lo));
        }
        Self { dim, inequalities }
    }

    /// `x >= 0, Σ x <= 1`.
    pub fn standard_simplex(dim: usize) -> Self {
        let mut inequalities: Vec<HalfSpace> = (0..dim)
            .map(|i| {
                let mut e = vec![0.0; dim];
                e[i] = -1.0;
                HalfSpace::new(e, 0.0)
            })
            .collect();
        inequalities.push(HalfSpace::new(vec![1.0; dim], 1.0));
        Self { dim, inequalities }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[HalfSpace] {
        &self.inequalities
    }

    pub fn with(mut self, h: HalfSpace) -> Result<Self> {
        self.inequalities.push(h);
        Self::new(self.dim, self.inequalities)
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "point of dimension {} tested against a polytope in dimension {}",
                x.len(),
                self.dim
            )));
        }
        Ok(self
            .inequalities
            .iter()
            .all(|h| linalg::dot(&h.normal, x) <= h.offset + FEASIBILITY_TOLERANCE))
    }

    /// Total constraint violation `Σ max(0, ⟨a, x⟩ - b)`.
    pub fn violation(&self, x: &[f64]) -> f64 {
        self.inequalities.iter().map(|h| h.violation(x)).sum()
    }

    /// Whether the recession cone `{d : A d <= 0}` is non-trivial.
    fn has_recession_direction(&self, rows: &[HalfSpace]) -> bool {
        let n = self.dim;
        let normals: Vec<Vec<f64>> = rows.iter().map(|h| h.normal.clone()).collect();
        if linalg::rank(&normals) < n {
            return true;
        }
        // a pointed cone has an extreme ray on n - 1 independent tight rows
        let candidates: Vec<Vec<f64>> = match n {
            1 => vec![vec![1.0]],
            2 => normals.iter().map(|a| vec![-a[1], a[0]]).collect(),
            3 => normals
                .iter()
                .tuple_combinations()
                .map(|(a, b)| linalg::cross(a, b).to_vec())
                .filter(|d| linalg::norm(d) > 1e-12)
                .collect(),
            _ => unreachable!("dimension checked by caller"),
        };
        candidates.iter().any(|d| {
            let d_unit: Vec<f64> = d.iter().map(|x| x / linalg::norm(d)).collect();
            [1.0, -1.0].iter().any(|sign| {
                normals
                    .iter()
                    .all(|a| sign * linalg::dot(a, &d_unit) <= FEASIBILITY_TOLERANCE)
            })
        })
    }

    /// Extreme points by brute force over every `dim`-subset of constraints.
    /// Points are returned in discovery order.
    pub fn enumerate_vertices(&self) -> Result<Vec<Point>> {
        let n = self.dim;
        if n > 3 {
            return Err(Error::InvalidInput(format!("vertex enumeration supports n <= 3, got {n}")));
        }
        let rows: Vec<HalfSpace> = self.inequalities.iter().filter_map(HalfSpace::normalized).collect();
        if rows.len() < n + 1 || self.has_recession_direction(&rows) {
            return Err(Error::UnboundedFeasibleSet);
        }
        let mut vertices: Vec<Point> = Vec::new();
        for subset in (0..rows.len()).combinations(n) {
            let a: Vec<Vec<f64>> = subset.iter().map(|&i| rows[i].normal.clone()).collect();
            let b: Vec<f64> = subset.iter().map(|&i| rows[i].offset).collect();
            let Some(x) = linalg::solve(&a, &b, 1e-10) else {
                continue;
            };
            let feasible = rows
                .iter()
                .all(|h| linalg::dot(&h.normal, &x) <= h.offset + FEASIBILITY_TOLERANCE);
            if feasible && !vertices.iter().any(|v| linalg::dist(v, &x) < MERGE_RADIUS) {
                vertices.push(x);
            }
        }
        if vertices.is_empty() {
            return Err(Error::EmptyFeasibleSet);
        }
        Ok(vertices)
    }

    /// Per-axis `[min, max]` over the vertices.
    pub fn bounding_box(&self) -> Result<Vec<(f64, f64)>> {
        let vertices = self.enumerate_vertices()?;
        Ok((0..self.dim)
            .map(|i| {
                vertices.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v[i]), hi.max(v[i]))
                })
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_membership() {
        let sq = HalfSpacePolytope::unit_box(2);
        assert!(sq.contains(&[0.5, 0.5]).unwrap());
        assert!(!sq.contains(&[1.5, 0.0]).unwrap());
        assert!(sq.contains(&[1.0, 0.5]).unwrap());
        assert!(matches!(sq.contains(&[0.5]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn vertex_counts() {
        assert_eq!(HalfSpacePolytope::unit_box(2).enumerate_vertices().unwrap().len(), 4);
        assert_eq!(HalfSpacePolytope::unit_box(3).enumerate_vertices().unwrap().len(), 8);
        let simplex = HalfSpacePolytope::standard_simplex(3).enumerate_vertices().unwrap();
        assert_eq!(simplex.len(), 4);
        assert!(simplex.contains(&vec![0.0, 0.0, 0.0]));
        assert_eq!(HalfSpacePolytope::unit_box(1).enumerate_vertices().unwrap(), vec![vec![1.0], vec![0.0]]);
    }

    #[test]
    fn unbounded_and_empty_sets_are_rejected() {
        let quadrant = HalfSpacePolytope::new(
            2,
            vec![HalfSpace::new(vec![-1.0, 0.0], 0.0), HalfSpace::new(vec![0.0, -1.0], 0.0)],
        )
        .unwrap();
        assert!(matches!(quadrant.enumerate_vertices(), Err(Error::UnboundedFeasibleSet)));
        let wedge = quadrant.clone().with(HalfSpace::new(vec![1.0, -1.0], 1.0)).unwrap();
        assert!(matches!(wedge.enumerate_vertices(), Err(Error::UnboundedFeasibleSet)));
        let slab = HalfSpacePolytope::new(
            3,
            vec![HalfSpace::new(vec![0.0, 0.0, 1.0], 1.0), HalfSpace::new(vec![0.0, 0.0, -1.0], 0.0)],
        )
        .unwrap();
        assert!(matches!(slab.enumerate_vertices(), Err(Error::UnboundedFeasibleSet)));
        let empty = HalfSpacePolytope::unit_box(2)
            .with(HalfSpace::new(vec![-1.0, 0.0], -2.0))
            .unwrap();
        assert!(matches!(empty.enumerate_vertices(), Err(Error::EmptyFeasibleSet)));
    }

    #[test]
    fn duplicate_constraints_do_not_duplicate_vertices() {
        let sq = HalfSpacePolytope::unit_box(2)
            .with(HalfSpace::new(vec![2.0, 0.0], 2.0))
            .unwrap()
            .with(HalfSpace::new(vec![1.0, 1.0], 2.0))
            .unwrap();
        assert_eq!(sq.enumerate_vertices().unwrap().len(), 4);
    }
}
