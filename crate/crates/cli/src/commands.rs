//! The four subcommands. Each returns the list of failed checks; an empty
//! list means every check passed.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use log::{debug, info};
use serde::Serialize;

use evohull_core::ea::laws::{check_mutation_lineage, check_recombination_dependency, check_selection_membership, LawReport};
use evohull_core::ea::{select, Direction, Population, RunRecord, SelectionParams};
use evohull_core::encoding::Genotype;
use evohull_core::io::{atomic_write, mesh_to_off};
use evohull_core::mesh::{greedy_descent, is_convex_position_mesh, l1_curvature, DescentPolicy, TriSurface};
use evohull_core::problems::{scramble, solve_lp, solve_qp, solve_triangulation, Problem, VerificationReport};
use evohull_core::RandomStream;

use crate::config::ExperimentConfig;

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    atomic_write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write(path, text.as_bytes())
}

fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    write(path, &w.into_inner()?)
}

fn write_record<P: Serialize>(dir: &Path, stem: &str, record: &RunRecord<P>) -> Result<()> {
    write_json(&dir.join(format!("{stem}_record.json")), record)?;
    write(&dir.join(format!("{stem}_generations.csv")), record.to_csv().as_bytes())
}

#[derive(Debug, Serialize)]
struct HullRow {
    seed: u64,
    method: &'static str,
    l1_curvature: f64,
    hull_match: bool,
    /// Swap count for greedy descent, generations for the EA.
    steps: usize,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct GreedyReport {
    seed: u64,
    moves: usize,
    initial_objective: f64,
    terminal_objective: f64,
    l1_curvature: f64,
    hull_match: bool,
    /// Descent stopped at a local minimum that is not the hull.
    stalled: bool,
}

#[derive(Debug, Serialize)]
struct HullSeedReport {
    start_edges: usize,
    scramble_swaps: usize,
    greedy: GreedyReport,
    ea: VerificationReport,
}

pub fn hull_recover(cfg: &ExperimentConfig) -> Result<Vec<String>> {
    let Some(Problem::Triangulation { problem, codec }) = &cfg.problem else {
        unreachable!("validated by the config loader")
    };
    let ea = cfg.ea.as_ref().expect("validated by the config loader");
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &seed in &cfg.seeds {
        let dir = cfg.out.join(format!("seed-{seed}"));
        let hull = problem.initial();
        let k = cfg.scramble_swaps_per_edge * hull.edge_count();
        let start = scramble(hull, k, &mut RandomStream::new(seed).substream("scramble"));
        let instance = problem.with_initial(start.clone())?;
        write(&dir.join("start.off"), mesh_to_off(&start).as_bytes())?;

        let (terminal, trace) = greedy_descent(&start, DescentPolicy::BestImprovement, codec.measure)?;
        let greedy_hull = is_convex_position_mesh(&terminal)?;
        let greedy = GreedyReport {
            seed,
            moves: trace.moves(),
            initial_objective: trace.initial,
            terminal_objective: trace.terminal,
            l1_curvature: l1_curvature(&terminal)?,
            hull_match: greedy_hull,
            stalled: !greedy_hull,
        };
        write(&dir.join("greedy.off"), mesh_to_off(&terminal).as_bytes())?;
        write(&dir.join("greedy_trace.csv"), trace.to_csv().as_bytes())?;
        info!("seed {seed}: greedy {} moves, hull match {greedy_hull}", trace.moves());

        let (report, record) = solve_triangulation(&instance, codec, ea, seed)?;
        write(&dir.join("ea.off"), mesh_to_off(&record.best_phenotype).as_bytes())?;
        write_record::<TriSurface>(&dir, "ea", &record)?;
        info!(
            "seed {seed}: EA l1 {} after {} generations, hull match {:?}",
            report.achieved, report.generations, report.hull_match
        );
        if !report.passed {
            failures.push(format!(
                "seed {seed}: EA ended at l1 curvature {} (gap {}), hull match {}",
                report.achieved,
                report.gap,
                report.hull_match == Some(true)
            ));
        }

        rows.push(HullRow {
            seed,
            method: "greedy",
            l1_curvature: greedy.l1_curvature,
            hull_match: greedy.hull_match,
            steps: greedy.moves,
            passed: greedy.hull_match,
        });
        rows.push(HullRow {
            seed,
            method: "ea",
            l1_curvature: report.achieved,
            hull_match: report.hull_match == Some(true),
            steps: report.generations,
            passed: report.passed,
        });
        write_json(
            &dir.join("report.json"),
            &HullSeedReport {
                start_edges: hull.edge_count(),
                scramble_swaps: k,
                greedy,
                ea: report,
            },
        )?;
    }
    write_csv(&cfg.out.join("summary.csv"), &rows)?;
    Ok(failures)
}

#[derive(Debug, Serialize)]
struct OptimizeRow {
    seed: u64,
    kind: String,
    achieved: f64,
    oracle: f64,
    gap: f64,
    tolerance: f64,
    passed: bool,
    generations: usize,
}

pub fn optimize(cfg: &ExperimentConfig) -> Result<Vec<String>> {
    let problem = cfg.problem.as_ref().expect("validated by the config loader");
    let ea = cfg.ea.as_ref().expect("validated by the config loader");
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &seed in &cfg.seeds {
        let dir = cfg.out.join(format!("seed-{seed}"));
        let report = match problem {
            Problem::Lp { problem, bits_per_dim } => {
                let (report, record) = solve_lp(problem, *bits_per_dim, ea, seed)?;
                write_record(&dir, "ea", &record)?;
                report
            }
            Problem::Qp { problem, bits_per_dim } => {
                let (report, record) = solve_qp(problem, *bits_per_dim, ea, seed)?;
                write_record(&dir, "ea", &record)?;
                report
            }
            Problem::Triangulation { .. } => unreachable!("validated by the config loader"),
        };
        info!("seed {seed}: {} gap {}", report.kind, report.gap);
        write_json(&dir.join("report.json"), &report)?;
        if !report.passed {
            failures.push(format!(
                "seed {seed}: gap {} exceeds {} (achieved {}, oracle {})",
                report.gap, report.tolerance, report.achieved, report.oracle
            ));
        }
        rows.push(OptimizeRow {
            seed,
            kind: report.kind.clone(),
            achieved: report.achieved,
            oracle: report.oracle,
            gap: report.gap,
            tolerance: report.tolerance,
            passed: report.passed,
            generations: report.generations,
        });
    }
    write_csv(&cfg.out.join("summary.csv"), &rows)?;
    Ok(failures)
}

/// Negative control: ignores the pool and returns fresh random strings.
fn broken_select(
    pool: &Population,
    _fitness: &[f64],
    _direction: Direction,
    params: &SelectionParams,
    rng: &mut RandomStream,
) -> evohull_core::Result<Population> {
    let l = pool.members.first().map_or(1, Genotype::len);
    let members = (0..params.size)
        .map(|_| Genotype((0..l).map(|_| rng.index(2) as u32).collect()))
        .collect();
    Ok(Population::new(members, pool.generation + 1))
}

#[derive(Debug, Serialize)]
struct LawRow {
    seed: u64,
    #[serde(flatten)]
    report: LawReport,
}

pub fn operator_laws(cfg: &ExperimentConfig) -> Result<Vec<String>> {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &seed in &cfg.seeds {
        let selection = if cfg.negative_control {
            check_selection_membership(cfg.trials, seed, &broken_select)
        } else {
            check_selection_membership(cfg.trials, seed, &select)
        };
        let reports = [
            selection,
            check_mutation_lineage(cfg.trials, seed),
            check_recombination_dependency(cfg.trials, seed),
        ];
        for report in reports {
            debug!("seed {seed}: {} violations of {}", report.violations, report.law);
            if !report.passed() {
                failures.push(format!(
                    "seed {seed}: law `{}` violated in {} of {} trials; first: {}",
                    report.law,
                    report.violations,
                    report.trials,
                    report.first_violation.as_deref().unwrap_or("?")
                ));
            }
            rows.push(LawRow { seed, report });
        }
    }
    write_json(&cfg.out.join("laws.json"), &rows)?;
    Ok(failures)
}

#[derive(Debug, Serialize)]
struct EntropyRow {
    generation: usize,
    shannon: f64,
    renyi2: f64,
}

pub fn entropy_report(cfg: &ExperimentConfig) -> Result<Vec<String>> {
    let path = cfg.record.as_ref().expect("validated by the config loader");
    let text = fs::read_to_string(path).with_context(|| format!("record file not found: {}", path.display()))?;
    let record: RunRecord<serde_json::Value> =
        serde_json::from_str(&text).with_context(|| format!("invalid run record {}", path.display()))?;
    let rows: Vec<EntropyRow> = record
        .generations
        .iter()
        .map(|g| EntropyRow {
            generation: g.generation,
            shannon: g.entropy,
            renyi2: g.renyi2,
        })
        .collect();
    write_csv(&cfg.out.join("entropy.csv"), &rows)?;
    Ok(Vec::new())
}
