//! Randomized checks of the defining laws of the three operator classes:
//! selection only returns pool members, mutation depends on exactly one
//! parent, and crossover depends on at least two.

use serde::Serialize;

use super::fitness::Direction;
use super::operators::{
    mutate, recombine, select, CrossoverKind, MutationKind, MutationParams, RecombinationParams, SelectionKind,
    SelectionParams,
};
use super::population::Population;
use crate::encoding::{Alphabet, Genotype};
use crate::error::Result;
use crate::rng::RandomStream;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub trials: usize,
    pub violations: usize,
    /// Description of the first violating trial.
    pub first_violation: Option<String>,
}

impl LawReport {
    fn new(law: &str, trials: usize) -> Self {
        Self {
            law: law.to_string(),
            trials,
            violations: 0,
            first_violation: None,
        }
    }

    fn violate(&mut self, what: String) {
        self.violations += 1;
        self.first_violation.get_or_insert(what);
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Signature shared by [`select`] and substitutes used as negative controls.
pub type SelectFn = dyn Fn(&Population, &[f64], Direction, &SelectionParams, &mut RandomStream) -> Result<Population>;

struct Trial {
    alphabet: Alphabet,
    pop: Population,
}

fn random_trial(rng: &mut RandomStream, min_size: usize) -> Trial {
    let k = 2 + rng.index(4);
    let l = 1 + rng.index(16);
    let mu = min_size + rng.index(20);
    let members = (0..mu)
        .map(|_| Genotype((0..l).map(|_| rng.index(k) as u32).collect()))
        .collect();
    Trial {
        alphabet: Alphabet::integers(k).expect("k >= 2"),
        pop: Population::new(members, 0),
    }
}

pub fn check_selection_membership(trials: usize, seed: u64, selector: &SelectFn) -> LawReport {
    let mut report = LawReport::new("selection-membership", trials);
    let root = RandomStream::new(seed);
    for trial in 0..trials {
        let mut rng = root.substream(&format!("selection/{trial}"));
        let Trial { pop, .. } = random_trial(&mut rng, 1);
        let fitness: Vec<f64> = (0..pop.len()).map(|_| (rng.range(-5.0, 5.0) * 4.0).round() / 4.0).collect();
        let strategy = if rng.bernoulli(0.5) {
            SelectionKind::Truncation
        } else {
            SelectionKind::Tournament {
                size: 1 + rng.index(pop.len() + 2),
            }
        };
        let params = SelectionParams {
            strategy,
            size: 1 + rng.index(30),
            elitism: rng.bernoulli(0.5),
        };
        let direction = if rng.bernoulli(0.5) { Direction::Minimize } else { Direction::Maximize };
        match selector(&pop, &fitness, direction, &params, &mut rng) {
            Ok(out) => {
                if let Some(stray) = out.members.iter().find(|m| !pop.members.contains(m)) {
                    report.violate(format!("trial {trial}: selected {stray} is not in the pool"));
                } else if out.len() != params.size {
                    report.violate(format!("trial {trial}: selected {} of {}", out.len(), params.size));
                }
            }
            Err(e) => report.violate(format!("trial {trial}: {e}")),
        }
    }
    report
}

pub fn check_mutation_lineage(trials: usize, seed: u64) -> LawReport {
    let mut report = LawReport::new("mutation-lineage", trials);
    let root = RandomStream::new(seed);
    for trial in 0..trials {
        let mut rng = root.substream(&format!("mutation/{trial}"));
        let Trial { alphabet, pop } = random_trial(&mut rng, 1);
        let params = MutationParams {
            kind: if rng.bernoulli(0.5) { MutationKind::Flip } else { MutationKind::Resample },
            rate: rng.uniform(),
        };
        match mutate(&pop, &alphabet, &params, &mut rng) {
            Ok(out) => {
                let bad = (0..out.len()).find(|&i| out.parents_of(i).len() != 1 || out.parents_of(i)[0] >= pop.len());
                if let Some(i) = bad {
                    report.violate(format!("trial {trial}: offspring {i} has parents {:?}", out.parents_of(i)));
                }
            }
            Err(e) => report.violate(format!("trial {trial}: {e}")),
        }
    }
    report
}

pub fn check_recombination_dependency(trials: usize, seed: u64) -> LawReport {
    let mut report = LawReport::new("recombination-dependency", trials);
    let root = RandomStream::new(seed);
    for trial in 0..trials {
        let mut rng = root.substream(&format!("recombination/{trial}"));
        let Trial { pop, .. } = random_trial(&mut rng, 2);
        let params = RecombinationParams {
            kind: if rng.bernoulli(0.5) { CrossoverKind::OnePoint } else { CrossoverKind::Uniform },
            probability: 1.0,
            offspring: 1 + rng.index(30),
        };
        match recombine(&pop, &params, &mut rng) {
            Ok(out) => {
                let two_parents = (0..out.len()).any(|i| {
                    let p = out.parents_of(i);
                    p.len() >= 2 && p[0] != p[1]
                });
                let in_range = out.lineage.iter().flatten().all(|&p| p < pop.len());
                if !two_parents || !in_range {
                    report.violate(format!("trial {trial}: lineage {:?}", out.lineage));
                }
            }
            Err(e) => report.violate(format!("trial {trial}: {e}")),
        }
    }
    report
}

/// Runs all three suites with the stock operators.
pub fn check_all(trials: usize, seed: u64) -> Vec<LawReport> {
    vec![
        check_selection_membership(trials, seed, &select),
        check_mutation_lineage(trials, seed),
        check_recombination_dependency(trials, seed),
    ]
}
