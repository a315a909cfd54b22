//! LP, QP and triangulation instances bound to the evolutionary core, each
//! with an independent oracle to verify against.

mod convex;
mod triangulation;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use convex::{
    analytic_lp_optimum, lp_pipeline, qp_grid_optimum, qp_pipeline, LpProblem, QpProblem, EIGENVALUE_FLOOR,
    GRID_RESOLUTION, MIN_BITS_PER_DIM, SYMMETRY_TOLERANCE,
};
pub use triangulation::{
    scramble, triangulation_pipeline, SwapCodecParams, SwapOrder, SwapSequenceCodec, SwapWalk, TriangulationProblem,
    DEFAULT_RANKED_ALPHABET,
};

use crate::ea::{run_ea, Direction, EaConfig, RunRecord, TerminationReason};
use crate::error::{Error, Result};
use crate::mesh::{is_convex_position_mesh, l1_curvature, TriSurface};
use crate::simplicial::{HalfSpace, HalfSpacePolytope, Point};

/// Gap tolerance for LP and QP runs.
pub const CONVEX_TOLERANCE: f64 = 1e-3;
/// Tolerance on `l1_curvature − 4π` for triangulation runs.
pub const CURVATURE_TOLERANCE: f64 = 1e-6;
/// Default bits per coordinate for the box codec.
pub const DEFAULT_BITS_PER_DIM: usize = 16;

fn default_bits() -> usize {
    DEFAULT_BITS_PER_DIM
}

/// Problem instance file, tagged by `kind`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProblemSpec {
    Lp {
        cost: Vec<f64>,
        inequalities: Vec<HalfSpace>,
        #[serde(default)]
        direction: Direction,
        #[serde(default = "default_bits")]
        bits_per_dim: usize,
    },
    Qp {
        quadratic: Vec<Vec<f64>>,
        linear: Vec<f64>,
        #[serde(default)]
        constant: f64,
        inequalities: Vec<HalfSpace>,
        #[serde(default = "default_bits")]
        bits_per_dim: usize,
    },
    /// Points inline, in a CSV file resolved against the instance file's
    /// directory, or sampled on a sphere.
    Triangulation {
        #[serde(default)]
        points: Option<Vec<Point>>,
        #[serde(default)]
        points_csv: Option<PathBuf>,
        #[serde(default)]
        sphere: Option<SphereSample>,
        #[serde(default)]
        codec: SwapCodecParams,
    },
}

/// `count` points drawn uniformly on a sphere from `RandomStream::new(seed)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereSample {
    pub count: usize,
    #[serde(default = "unit_radius")]
    pub radius: f64,
    pub seed: u64,
}

fn unit_radius() -> f64 {
    1.0
}

/// A validated instance with its solver parameters.
#[derive(Debug, Clone)]
pub enum Problem {
    Lp { problem: LpProblem, bits_per_dim: usize },
    Qp { problem: QpProblem, bits_per_dim: usize },
    Triangulation { problem: TriangulationProblem, codec: SwapCodecParams },
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("problem instance: {e}")))
    }

    pub fn resolve(&self, base_dir: &Path) -> Result<Problem> {
        match self {
            ProblemSpec::Lp {
                cost,
                inequalities,
                direction,
                bits_per_dim,
            } => {
                let feasible = HalfSpacePolytope::new(cost.len(), inequalities.clone())?;
                Ok(Problem::Lp {
                    problem: LpProblem::new(cost.clone(), feasible, *direction)?,
                    bits_per_dim: *bits_per_dim,
                })
            }
            ProblemSpec::Qp {
                quadratic,
                linear,
                constant,
                inequalities,
                bits_per_dim,
            } => {
                let feasible = HalfSpacePolytope::new(linear.len(), inequalities.clone())?;
                Ok(Problem::Qp {
                    problem: QpProblem::new(quadratic.clone(), linear.clone(), *constant, feasible)?,
                    bits_per_dim: *bits_per_dim,
                })
            }
            ProblemSpec::Triangulation {
                points,
                points_csv,
                sphere,
                codec,
            } => {
                let points = match (points, points_csv, sphere) {
                    (Some(p), None, None) => p.clone(),
                    (None, Some(csv), None) => crate::io::read_points_csv(&base_dir.join(csv))?,
                    (None, None, Some(s)) => {
                        if s.count < 4 || !(s.radius > 0.0) {
                            return Err(Error::InvalidProblem(
                                "a sphere sample needs at least 4 points and a positive radius".into(),
                            ));
                        }
                        crate::mesh::shapes::sphere_points(s.count, s.radius, &mut crate::rng::RandomStream::new(s.seed))
                    }
                    _ => {
                        return Err(Error::InvalidProblem(
                            "a triangulation instance needs exactly one of points, points_csv and sphere".into(),
                        ))
                    }
                };
                Ok(Problem::Triangulation {
                    problem: TriangulationProblem::from_points(points)?,
                    codec: *codec,
                })
            }
        }
    }
}

/// Outcome of one verified run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub kind: String,
    pub seed: u64,
    /// Best objective the EA found: the raw objective for LP/QP, the
    /// angle-deficit L1 norm of the best mesh for triangulations.
    pub achieved: f64,
    pub oracle: f64,
    /// `|achieved − oracle|`.
    pub gap: f64,
    pub tolerance: f64,
    /// Only set for triangulations.
    pub hull_match: Option<bool>,
    pub passed: bool,
    pub generations: usize,
    pub termination: TerminationReason,
    pub best_point: Option<Vec<f64>>,
    pub oracle_point: Option<Vec<f64>>,
}

fn report(kind: &str, seed: u64, achieved: f64, oracle: f64, tolerance: f64, generations: usize, termination: TerminationReason) -> VerificationReport {
    let gap = (achieved - oracle).abs();
    VerificationReport {
        kind: kind.into(),
        seed,
        achieved,
        oracle,
        gap,
        tolerance,
        hull_match: None,
        passed: gap <= tolerance,
        generations,
        termination,
        best_point: None,
        oracle_point: None,
    }
}

pub fn solve_lp(p: &LpProblem, bits_per_dim: usize, config: &EaConfig, seed: u64) -> Result<(VerificationReport, RunRecord<Vec<f64>>)> {
    let pipe = lp_pipeline(p, bits_per_dim)?;
    let record = run_ea(&pipe, config, seed)?;
    let (vertex, oracle) = analytic_lp_optimum(p)?;
    let x = &record.best_phenotype;
    // an infeasible best point is charged its penalized value
    let achieved = (pipe.objective)(x);
    let mut r = report("lp", seed, achieved, oracle, CONVEX_TOLERANCE, record.generations_used, record.termination);
    r.best_point = Some(x.clone());
    r.oracle_point = Some(vertex);
    Ok((r, record))
}

pub fn solve_qp(p: &QpProblem, bits_per_dim: usize, config: &EaConfig, seed: u64) -> Result<(VerificationReport, RunRecord<Vec<f64>>)> {
    let pipe = qp_pipeline(p, bits_per_dim)?;
    let record = run_ea(&pipe, config, seed)?;
    let (point, oracle) = qp_grid_optimum(p)?;
    let x = &record.best_phenotype;
    let achieved = (pipe.objective)(x);
    let mut r = report("qp", seed, achieved, oracle, CONVEX_TOLERANCE, record.generations_used, record.termination);
    r.best_point = Some(x.clone());
    r.oracle_point = Some(point);
    Ok((r, record))
}

pub fn solve_triangulation(
    p: &TriangulationProblem,
    codec: &SwapCodecParams,
    config: &EaConfig,
    seed: u64,
) -> Result<(VerificationReport, RunRecord<TriSurface>)> {
    let pipe = triangulation_pipeline(p, codec)?;
    let record = run_ea(&pipe, config, seed)?;
    let (r, _) = verify_mesh(&record.best_phenotype, seed, record.generations_used, record.termination)?;
    Ok((r, record))
}

/// Compares a terminal mesh against `4π` and the hull oracle.
pub fn verify_mesh(
    m: &TriSurface,
    seed: u64,
    generations: usize,
    termination: TerminationReason,
) -> Result<(VerificationReport, bool)> {
    let l1 = l1_curvature(m)?;
    let hull_match = is_convex_position_mesh(m)?;
    let mut r = report("triangulation", seed, l1, 4.0 * PI, CURVATURE_TOLERANCE, generations, termination);
    r.hull_match = Some(hull_match);
    r.passed = r.passed && hull_match;
    Ok((r, hull_match))
}

/// Runs the EA on `problem` and checks the result against its oracle.
pub fn solve_and_verify(problem: &Problem, config: &EaConfig, seed: u64) -> Result<VerificationReport> {
    Ok(match problem {
        Problem::Lp { problem, bits_per_dim } => solve_lp(problem, *bits_per_dim, config, seed)?.0,
        Problem::Qp { problem, bits_per_dim } => solve_qp(problem, *bits_per_dim, config, seed)?.0,
        Problem::Triangulation { problem, codec } => solve_triangulation(problem, codec, config, seed)?.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ea::TerminationCriteria;

    #[test]
    fn instance_json() {
        let lp = r#"{"kind": "lp", "cost": [1, 1],
            "inequalities": [{"normal": [-1, 0], "offset": 0}, {"normal": [0, -1], "offset": 0},
                             {"normal": [1, 0], "offset": 1}, {"normal": [0, 1], "offset": 1}]}"#;
        let p = ProblemSpec::from_json(lp).unwrap().resolve(Path::new(".")).unwrap();
        assert!(matches!(p, Problem::Lp { bits_per_dim: 16, .. }));
        let empty = lp.replace(r#""offset": 1}, {"normal": [0, 1]"#, r#""offset": -1}, {"normal": [0, 1]"#);
        assert!(matches!(
            ProblemSpec::from_json(&empty).unwrap().resolve(Path::new(".")),
            Err(Error::InvalidProblem(_))
        ));
        assert!(ProblemSpec::from_json(r#"{"kind": "nope"}"#).is_err());
        let tri = r#"{"kind": "triangulation", "points": [[1,0,0],[-1,0,0],[0,1,0],[0,-1,0],[0,0,1],[0,0,-1]]}"#;
        assert!(matches!(
            ProblemSpec::from_json(tri).unwrap().resolve(Path::new(".")).unwrap(),
            Problem::Triangulation { .. }
        ));
        let sampled = r#"{"kind": "triangulation", "sphere": {"count": 12, "seed": 4}}"#;
        match ProblemSpec::from_json(sampled).unwrap().resolve(Path::new(".")).unwrap() {
            Problem::Triangulation { problem, .. } => assert_eq!(problem.points().len(), 12),
            other => panic!("{other:?}"),
        }
        let both = r#"{"kind": "triangulation", "points": [], "sphere": {"count": 12, "seed": 4}}"#;
        assert!(ProblemSpec::from_json(both).unwrap().resolve(Path::new(".")).is_err());
    }

    #[test]
    fn unit_square_lp_and_qp_verify() {
        let square = HalfSpacePolytope::unit_box(2);
        let lp = Problem::Lp {
            problem: LpProblem::new(vec![1.0, 1.0], square.clone(), Direction::Minimize).unwrap(),
            bits_per_dim: 16,
        };
        let mut cfg = EaConfig::standard(40, 32, 200);
        cfg.termination = TerminationCriteria::max_generations(200);
        let r = solve_and_verify(&lp, &cfg, 3).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.oracle, 0.0);

        let qp = Problem::Qp {
            problem: QpProblem::new(
                vec![vec![2.0, 0.0], vec![0.0, 2.0]],
                vec![-0.5, -0.5],
                0.125,
                square,
            )
            .unwrap(),
            bits_per_dim: 16,
        };
        let r = solve_and_verify(&qp, &cfg, 3).unwrap();
        assert!(r.oracle.abs() < 1e-15);
        assert!(r.passed, "{r:?}");
    }
}
