//! Linear and convex quadratic programs over compact polytopes.

use nalgebra::{DMatrix, DVector};

use crate::ea::{Direction, FitnessPipeline};
use crate::encoding::Codec;
use crate::error::{Error, Result};
use crate::linalg;
use crate::simplicial::{HalfSpacePolytope, Point};

/// Smallest accepted `bits_per_dim`.
pub const MIN_BITS_PER_DIM: usize = 4;
/// Symmetry tolerance on the quadratic form.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Smallest accepted eigenvalue of the quadratic form.
pub const EIGENVALUE_FLOOR: f64 = -1e-9;
/// Resolution of the quadratic-program grid oracle.
pub const GRID_RESOLUTION: f64 = 1e-3;
const MAX_RECENTRES: usize = 1000;

/// `optimize ⟨cost, x⟩` over `feasible`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    cost: Vec<f64>,
    feasible: HalfSpacePolytope,
    direction: Direction,
}

impl LpProblem {
    /// Rejects mismatched dimensions and empty or unbounded feasible sets.
    pub fn new(cost: Vec<f64>, feasible: HalfSpacePolytope, direction: Direction) -> Result<Self> {
        if cost.len() != feasible.dim() {
            return Err(Error::InvalidProblem(format!(
                "cost has dimension {} but the polytope has dimension {}",
                cost.len(),
                feasible.dim()
            )));
        }
        check_compact(&feasible)?;
        Ok(Self {
            cost,
            feasible,
            direction,
        })
    }

    pub fn cost(&self) -> &[f64] {
        &self.cost
    }

    pub fn feasible(&self) -> &HalfSpacePolytope {
        &self.feasible
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        linalg::dot(&self.cost, x)
    }
}

/// `minimize ½ xᵀ Q x + ⟨linear, x⟩ + constant` over `feasible`, with `Q`
/// symmetric positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct QpProblem {
    quadratic: Vec<Vec<f64>>,
    linear: Vec<f64>,
    constant: f64,
    feasible: HalfSpacePolytope,
}

impl QpProblem {
    pub fn new(quadratic: Vec<Vec<f64>>, linear: Vec<f64>, constant: f64, feasible: HalfSpacePolytope) -> Result<Self> {
        let n = feasible.dim();
        if linear.len() != n || quadratic.len() != n || quadratic.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidProblem(format!("quadratic and linear terms must have dimension {n}")));
        }
        for i in 0..n {
            for j in 0..i {
                if (quadratic[i][j] - quadratic[j][i]).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::InvalidProblem(format!("quadratic form is not symmetric at ({i}, {j})")));
                }
            }
        }
        let q = DMatrix::from_fn(n, n, |i, j| quadratic[i][j]);
        let smallest = q.symmetric_eigenvalues().min();
        if smallest < EIGENVALUE_FLOOR {
            return Err(Error::InvalidProblem(format!(
                "quadratic form has eigenvalue {smallest}, the objective is not convex"
            )));
        }
        check_compact(&feasible)?;
        Ok(Self {
            quadratic,
            linear,
            constant,
            feasible,
        })
    }

    pub fn feasible(&self) -> &HalfSpacePolytope {
        &self.feasible
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let quad: f64 = self
            .quadratic
            .iter()
            .zip(x)
            .map(|(row, xi)| xi * linalg::dot(row, x))
            .sum();
        0.5 * quad + linalg::dot(&self.linear, x) + self.constant
    }

    fn coefficient_scale(&self) -> f64 {
        self.quadratic
            .iter()
            .flatten()
            .chain(&self.linear)
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Minimizer of the unconstrained objective, when `Q` is invertible.
    fn stationary_point(&self) -> Option<Vec<f64>> {
        let n = self.linear.len();
        let q = DMatrix::from_fn(n, n, |i, j| self.quadratic[i][j]);
        let rhs = -DVector::from_column_slice(&self.linear);
        q.cholesky().map(|c| c.solve(&rhs).iter().copied().collect())
    }
}

fn check_compact(feasible: &HalfSpacePolytope) -> Result<()> {
    match feasible.enumerate_vertices() {
        Ok(_) => Ok(()),
        Err(Error::EmptyFeasibleSet) => Err(Error::InvalidProblem("the feasible set is empty".into())),
        Err(Error::UnboundedFeasibleSet) => Err(Error::InvalidProblem("the feasible set is unbounded".into())),
        Err(e) => Err(e),
    }
}

/// Penalty weight `10³ (1 + scale)`.
fn penalty_weight(scale: f64) -> f64 {
    1e3 * (1.0 + scale)
}

fn box_codec(feasible: &HalfSpacePolytope, bits_per_dim: usize) -> Result<Codec> {
    if bits_per_dim < MIN_BITS_PER_DIM {
        return Err(Error::InvalidParams(format!(
            "bits per dimension must be at least {MIN_BITS_PER_DIM}, got {bits_per_dim}"
        )));
    }
    let bounds = feasible.bounding_box().map_err(|e| match e {
        Error::EmptyFeasibleSet => Error::InvalidProblem("the feasible set is empty".into()),
        other => other,
    })?;
    // a flat box side still needs a non-empty interval
    let bounds = bounds
        .into_iter()
        .map(|(lo, hi)| if hi > lo { (lo, hi) } else { (lo, lo + f64::EPSILON.max(lo.abs() * 1e-12)) })
        .collect();
    Codec::scaled_real(bits_per_dim, bounds, true)
}

/// Gray-coded box codec over the feasible bounding box; phenotypes outside
/// the polytope pay `ρ Σ max(0, ⟨aᵢ, x⟩ − bᵢ)` in the worsening direction.
/// The penalty is exactly zero on feasible phenotypes.
pub fn lp_pipeline(p: &LpProblem, bits_per_dim: usize) -> Result<FitnessPipeline<Codec>> {
    let codec = box_codec(&p.feasible, bits_per_dim)?;
    let rho = penalty_weight(p.cost.iter().fold(0.0f64, |m, c| m.max(c.abs())));
    let sign = match p.direction {
        Direction::Minimize => 1.0,
        Direction::Maximize => -1.0,
    };
    let problem = p.clone();
    Ok(FitnessPipeline::new(codec, move |x: &Vec<f64>| {
        problem.value(x) + sign * rho * problem.feasible.violation(x)
    })
    .with_direction(p.direction))
}

pub fn qp_pipeline(p: &QpProblem, bits_per_dim: usize) -> Result<FitnessPipeline<Codec>> {
    let codec = box_codec(&p.feasible, bits_per_dim)?;
    let rho = penalty_weight(p.coefficient_scale());
    let problem = p.clone();
    Ok(FitnessPipeline::new(codec, move |x: &Vec<f64>| {
        problem.value(x) + rho * problem.feasible.violation(x)
    }))
}

/// Best enumerated vertex; ties keep the lowest vertex index.
pub fn analytic_lp_optimum(p: &LpProblem) -> Result<(Point, f64)> {
    let vertices = p.feasible.enumerate_vertices()?;
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in vertices.iter().enumerate() {
        let f = p.value(v);
        if best.is_none_or(|(_, b)| p.direction.better(f, b)) {
            best = Some((i, f));
        }
    }
    let (i, f) = best.ok_or(Error::EmptyFeasibleSet)?;
    Ok((vertices[i].clone(), f))
}

/// Ground-truth QP optimum for `n <= 2`.
///
/// If the unconstrained minimizer is feasible it is returned directly.
/// Otherwise the feasible points of a [`GRID_RESOLUTION`] grid over the
/// bounding box are scanned, then the best cell is refined three times by
/// a factor of 20, recentring the window while it keeps improving.
pub fn qp_grid_optimum(p: &QpProblem) -> Result<(Point, f64)> {
    let n = p.feasible.dim();
    if n > 2 {
        return Err(Error::InvalidInput(format!("the grid oracle supports n <= 2, got {n}")));
    }
    if let Some(x) = p.stationary_point() {
        if p.feasible.contains(&x)? {
            let f = p.value(&x);
            return Ok((x, f));
        }
    }
    let bounds = p.feasible.bounding_box()?;
    let mut best = scan(p, &bounds, GRID_RESOLUTION)?;
    let mut step = GRID_RESOLUTION;
    for _ in 0..3 {
        let fine = step / 20.0;
        // recentre until the window stops improving; along a slanted
        // boundary the best cell can drift several windows away
        for _ in 0..MAX_RECENTRES {
            let local: Vec<(f64, f64)> = best
                .0
                .iter()
                .zip(&bounds)
                .map(|(&x, &(lo, hi))| ((x - step).max(lo), (x + step).min(hi)))
                .collect();
            let refined = scan(p, &local, fine)?;
            if refined.1 >= best.1 {
                break;
            }
            best = refined;
        }
        step = fine;
    }
    Ok(best)
}

fn scan(p: &QpProblem, bounds: &[(f64, f64)], step: f64) -> Result<(Point, f64)> {
    let axes: Vec<Vec<f64>> = bounds
        .iter()
        .map(|&(lo, hi)| {
            let k = ((hi - lo) / step).round().max(0.0) as usize;
            (0..=k).map(|i| (lo + i as f64 * step).min(hi)).collect()
        })
        .collect();
    let mut best: Option<(Point, f64)> = None;
    let mut visit = |x: Vec<f64>| -> Result<()> {
        if p.feasible.contains(&x)? {
            let f = p.value(&x);
            if best.as_ref().is_none_or(|(_, b)| f < *b) {
                best = Some((x, f));
            }
        }
        Ok(())
    };
    match axes.len() {
        1 => {
            for &x in &axes[0] {
                visit(vec![x])?;
            }
        }
        _ => {
            for &x in &axes[0] {
                for &y in &axes[1] {
                    visit(vec![x, y])?;
                }
            }
        }
    }
    best.ok_or(Error::EmptyFeasibleSet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ea::{run_ea, EaConfig, TerminationCriteria};
    use crate::encoding::{Decoder, Genotype};
    use crate::rng::RandomStream;
    use crate::simplicial::HalfSpace;

    fn square_lp(cost: Vec<f64>, direction: Direction) -> LpProblem {
        LpProblem::new(cost, HalfSpacePolytope::unit_box(2), direction).unwrap()
    }

    #[test]
    fn lp_oracle_on_simple_instances() {
        let (x, f) = analytic_lp_optimum(&square_lp(vec![1.0, 1.0], Direction::Minimize)).unwrap();
        assert_eq!((x, f), (vec![0.0, 0.0], 0.0));
        let (x, f) = analytic_lp_optimum(&square_lp(vec![-1.0, 0.0], Direction::Minimize)).unwrap();
        assert_eq!(f, -1.0);
        assert_eq!(x[0], 1.0);
        let simplex = LpProblem::new(vec![1.0; 3], HalfSpacePolytope::standard_simplex(3), Direction::Minimize).unwrap();
        let (x, f) = analytic_lp_optimum(&simplex).unwrap();
        assert_eq!(f, 0.0);
        assert!(x.iter().all(|v| v.abs() < 1e-12));
        let (_, f) = analytic_lp_optimum(&square_lp(vec![1.0, 1.0], Direction::Maximize)).unwrap();
        assert_eq!(f, 2.0);
    }

    #[test]
    fn lp_oracle_matches_a_grid_scan() {
        let mut rng = RandomStream::new(21);
        for _ in 0..20 {
            let c: Vec<f64> = (0..2).map(|_| rng.range(-1.0, 1.0)).collect();
            let mut poly = HalfSpacePolytope::unit_box(2);
            for _ in 0..3 {
                let u = rng.unit_vector(2);
                poly = poly.with(HalfSpace::new(u.clone(), linalg::dot(&u, &[0.5, 0.5]) + rng.range(0.05, 0.5))).unwrap();
            }
            let p = LpProblem::new(c.clone(), poly.clone(), Direction::Minimize).unwrap();
            let (_, f) = analytic_lp_optimum(&p).unwrap();
            let h = 1e-3;
            let mut grid = f64::INFINITY;
            for i in 0..=1000 {
                for j in 0..=1000 {
                    let x = [i as f64 * h, j as f64 * h];
                    if poly.contains(&x).unwrap() {
                        grid = grid.min(linalg::dot(&c, &x));
                    }
                }
            }
            // the grid misses the vertex by at most one cell diagonal
            assert!(f <= grid + 1e-12);
            assert!(grid - f <= (c[0].abs() + c[1].abs()) * h * 4.0);
        }
    }

    #[test]
    fn empty_and_unbounded_sets_are_rejected() {
        let empty = HalfSpacePolytope::unit_box(2)
            .with(HalfSpace::new(vec![1.0, 0.0], -1.0))
            .unwrap();
        assert!(matches!(
            LpProblem::new(vec![1.0, 0.0], empty, Direction::Minimize),
            Err(Error::InvalidProblem(_))
        ));
        let half_plane = HalfSpacePolytope::new(2, vec![HalfSpace::new(vec![1.0, 0.0], 1.0)]).unwrap();
        assert!(matches!(
            LpProblem::new(vec![1.0, 0.0], half_plane, Direction::Minimize),
            Err(Error::InvalidProblem(_))
        ));
    }

    #[test]
    fn penalty_vanishes_on_feasible_points() {
        let mut poly = HalfSpacePolytope::unit_box(2);
        poly = poly.with(HalfSpace::new(vec![1.0, 1.0], 1.0)).unwrap();
        let p = LpProblem::new(vec![2.0, -1.0], poly.clone(), Direction::Minimize).unwrap();
        let pipe = lp_pipeline(&p, 8).unwrap();
        let mut rng = RandomStream::new(2);
        for _ in 0..500 {
            let g = Genotype::new((0..16).map(|_| rng.index(2) as u32).collect());
            let x = pipe.codec.decode(&g).unwrap();
            let f = pipe.evaluate(&g).unwrap();
            if poly.contains(&x).unwrap() {
                assert_eq!(f, p.value(&x));
            } else {
                assert!(f > p.value(&x));
            }
        }
    }

    #[test]
    fn all_zero_genotype_hits_the_lower_corner() {
        let p = square_lp(vec![1.0, 1.0], Direction::Minimize);
        let pipe = lp_pipeline(&p, 10).unwrap();
        assert_eq!(pipe.evaluate(&Genotype::new(vec![0; 20])).unwrap(), 0.0);
        assert!(matches!(lp_pipeline(&p, 3), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn qp_validation() {
        let square = HalfSpacePolytope::unit_box(2);
        assert!(QpProblem::new(vec![vec![1.0, 0.5], vec![0.4, 1.0]], vec![0.0; 2], 0.0, square.clone()).is_err());
        assert!(QpProblem::new(vec![vec![1.0, 0.0], vec![0.0, -1.0]], vec![0.0; 2], 0.0, square.clone()).is_err());
        assert!(QpProblem::new(vec![vec![1.0, 0.0], vec![0.0, 0.0]], vec![0.0; 2], 0.0, square).is_ok());
    }

    fn shifted_bowl(cx: f64, cy: f64) -> QpProblem {
        // ‖x − c‖² = ½ xᵀ(2I)x − 2⟨c, x⟩ + ‖c‖²
        QpProblem::new(
            vec![vec![2.0, 0.0], vec![0.0, 2.0]],
            vec![-2.0 * cx, -2.0 * cy],
            cx * cx + cy * cy,
            HalfSpacePolytope::unit_box(2),
        )
        .unwrap()
    }

    #[test]
    fn qp_oracle_interior_and_boundary() {
        let (x, f) = qp_grid_optimum(&shifted_bowl(0.25, 0.25)).unwrap();
        assert!(f.abs() < 1e-15);
        assert!((x[0] - 0.25).abs() < 1e-12);
        // minimizer outside the square: the answer is the projection (1, 0.3)
        let (x, f) = qp_grid_optimum(&shifted_bowl(1.5, 0.3)).unwrap();
        assert!((f - 0.25).abs() < 1e-8);
        assert!((x[0] - 1.0).abs() < 1e-6 && (x[1] - 0.3).abs() < 1e-5);
    }

    #[test]
    fn qp_oracle_follows_a_slanted_boundary() {
        // ‖x − (1, 1)‖² under a shallow cut is the squared distance to the cut
        let (a, b) = ([0.05, 1.0], 0.5);
        let feasible = HalfSpacePolytope::unit_box(2)
            .with(crate::simplicial::HalfSpace::new(a.to_vec(), b))
            .unwrap();
        let p = QpProblem::new(vec![vec![2.0, 0.0], vec![0.0, 2.0]], vec![-2.0, -2.0], 2.0, feasible).unwrap();
        let (_, f) = qp_grid_optimum(&p).unwrap();
        let exact = (a[0] + a[1] - b).powi(2) / (a[0] * a[0] + a[1] * a[1]);
        assert!((f - exact).abs() < 1e-7, "{f} vs {exact}");
    }

    #[test]
    fn ea_solves_the_unit_square_lp() {
        let p = square_lp(vec![1.0, 1.0], Direction::Minimize);
        let pipe = lp_pipeline(&p, 16).unwrap();
        let mut cfg = EaConfig::standard(40, pipe.codec.length(), 200);
        cfg.termination = TerminationCriteria::max_generations(200);
        let record = run_ea(&pipe, &cfg, 3).unwrap();
        assert!(record.best_fitness <= 1e-3);
    }
}
