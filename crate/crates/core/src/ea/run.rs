//! The generational loop and its record.

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::fitness::{Direction, FitnessPipeline};
use super::operators::{
    mutate, recombine, select, CrossoverKind, MutationKind, MutationParams, RecombinationParams, SelectionKind,
    SelectionParams,
};
use super::population::Population;
use crate::encoding::{mean_locus_entropy, Decoder, Genotype};
use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// Default absolute tolerance for the stagnation criterion.
pub const STAGNATION_TOLERANCE: f64 = 1e-12;

/// Draws `mu` strings uniformly and independently from `A^l`.
pub fn initialize<D: Decoder>(pipe: &FitnessPipeline<D>, mu: usize, rng: &mut RandomStream) -> Result<Population> {
    if mu < 1 {
        return Err(Error::InvalidParams("population size must be at least 1".into()));
    }
    let k = pipe.codec.alphabet().len();
    let l = pipe.codec.length();
    let members = (0..mu)
        .map(|_| Genotype((0..l).map(|_| rng.index(k) as u32).collect()))
        .collect();
    Ok(Population::new(members, 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TerminationCriteria {
    #[serde(default)]
    pub max_generations: Option<usize>,
    /// Stop once the best fitness reaches this value (`<=` when minimizing,
    /// `>=` when maximizing).
    #[serde(default)]
    pub target: Option<f64>,
    /// Stop once the best-so-far fitness has not moved by more than
    /// `stagnation_tolerance` over this many generations.
    #[serde(default)]
    pub stagnation_window: Option<usize>,
    #[serde(default = "default_stagnation_tolerance")]
    pub stagnation_tolerance: f64,
}

fn default_stagnation_tolerance() -> f64 {
    STAGNATION_TOLERANCE
}

impl TerminationCriteria {
    pub fn max_generations(n: usize) -> Self {
        Self {
            max_generations: Some(n),
            target: None,
            stagnation_window: None,
            stagnation_tolerance: STAGNATION_TOLERANCE,
        }
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target = Some(target);
        self
    }

    pub fn with_stagnation(mut self, window: usize) -> Self {
        self.stagnation_window = Some(window);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_generations.is_none() && self.target.is_none() && self.stagnation_window.is_none() {
            return Err(Error::InvalidConfig("no termination criterion enabled".into()));
        }
        if self.stagnation_window == Some(0) {
            return Err(Error::InvalidConfig("stagnation window must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminationReason {
    MaxGenerations,
    Target,
    Stagnation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OperatorEvents {
    /// Offspring produced by a crossover event (two recorded parents).
    pub crossovers: usize,
    /// Symbols changed by mutation.
    pub mutated_symbols: usize,
    /// Fitness evaluations performed. Genotypes already seen in the run are
    /// not re-evaluated (fitness is a pure function of the genotype).
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
    pub worst: f64,
    pub best_so_far: f64,
    /// Mean per-locus Shannon entropy of the population, in bits.
    pub entropy: f64,
    /// Mean per-locus second-order Rényi entropy, in bits.
    pub renyi2: f64,
    pub events: OperatorEvents,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord<P> {
    pub seed: u64,
    pub direction: Direction,
    pub generations: Vec<GenerationStats>,
    pub best_genotype: Genotype,
    pub best_phenotype: P,
    pub best_fitness: f64,
    pub generations_used: usize,
    pub termination: TerminationReason,
}

impl<P> RunRecord<P> {
    /// Per-generation `generation,best,mean,worst,entropy` table.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("generation,best,mean,worst,entropy\n");
        for g in &self.generations {
            out.push_str(&format!("{},{},{},{},{}\n", g.generation, g.best, g.mean, g.worst, g.entropy));
        }
        out
    }
}

/// Checks every enabled criterion against the latest generation of `record`.
pub fn should_terminate(
    generations: &[GenerationStats],
    direction: Direction,
    criteria: &TerminationCriteria,
) -> Result<Option<TerminationReason>> {
    criteria.validate()?;
    let last = generations
        .last()
        .ok_or_else(|| Error::InvalidInput("record has no generations".into()))?;
    if criteria.max_generations.is_some_and(|max| last.generation >= max) {
        return Ok(Some(TerminationReason::MaxGenerations));
    }
    if let Some(target) = criteria.target {
        if direction.key(last.best_so_far) <= direction.key(target) {
            return Ok(Some(TerminationReason::Target));
        }
    }
    if let Some(window) = criteria.stagnation_window {
        if generations.len() > window {
            let before = &generations[generations.len() - 1 - window];
            if (last.best_so_far - before.best_so_far).abs() <= criteria.stagnation_tolerance {
                return Ok(Some(TerminationReason::Stagnation));
            }
        }
    }
    Ok(None)
}

/// Everything `run_ea` needs besides the fitness pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EaConfig {
    /// Parent population size μ.
    pub population: usize,
    pub recombination: RecombinationParams,
    pub mutation: MutationParams,
    pub selection: SelectionParams,
    pub termination: TerminationCriteria,
    /// Evaluate offspring on the rayon pool. Results are identical to a
    /// serial run.
    #[serde(default)]
    pub parallel: bool,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl EaConfig {
    /// (μ+λ) defaults: uniform crossover, flip mutation at rate `1/l`,
    /// binary tournaments on parents ∥ offspring.
    pub fn standard(population: usize, length: usize, max_generations: usize) -> Self {
        Self {
            population,
            recombination: RecombinationParams {
                kind: CrossoverKind::Uniform,
                probability: 0.9,
                offspring: population,
            },
            mutation: MutationParams {
                kind: MutationKind::Flip,
                rate: 1.0 / length.max(1) as f64,
            },
            selection: SelectionParams {
                strategy: SelectionKind::Tournament { size: 2 },
                size: population,
                elitism: true,
            },
            termination: TerminationCriteria::max_generations(max_generations),
            parallel: false,
            seed: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population < 1 {
            return Err(Error::InvalidConfig("population size must be at least 1".into()));
        }
        if self.selection.size != self.population {
            return Err(Error::InvalidConfig(format!(
                "selection size {} must equal the population size {}",
                self.selection.size, self.population
            )));
        }
        self.recombination.validate()?;
        self.mutation.validate()?;
        self.selection.validate()?;
        self.termination.validate()?;
        if self.recombination.probability > 0.0 && self.population < 2 {
            return Err(Error::InvalidConfig("crossover needs a population of at least 2".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: EaConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn stats(
    generation: usize,
    fitnesses: &[f64],
    members: &[Genotype],
    alphabet_size: usize,
    direction: Direction,
    best_so_far: f64,
    events: OperatorEvents,
) -> GenerationStats {
    let key = |f: f64| direction.key(f);
    let best = fitnesses.iter().copied().min_by(|a, b| key(*a).total_cmp(&key(*b))).unwrap_or(f64::NAN);
    let worst = fitnesses.iter().copied().max_by(|a, b| key(*a).total_cmp(&key(*b))).unwrap_or(f64::NAN);
    let mean = fitnesses.iter().sum::<f64>() / fitnesses.len() as f64;
    let (entropy, renyi2) = mean_locus_entropy(members, alphabet_size);
    GenerationStats {
        generation,
        best,
        mean,
        worst,
        best_so_far,
        entropy,
        renyi2,
        events,
    }
}

/// Bound on remembered genotypes; the memo is cleared when it fills.
const MEMO_CAPACITY: usize = 1 << 16;

/// `pipe.evaluate_all` through a per-run memo. Returns the fitnesses and the
/// number of fresh evaluations.
fn evaluate_memo<D: Decoder>(
    pipe: &FitnessPipeline<D>,
    members: &[Genotype],
    parallel: bool,
    memo: &mut FxHashMap<Genotype, f64>,
) -> Result<(Vec<f64>, usize)> {
    // clear before the lookup so every cached hit survives this call
    if memo.len() + members.len() > MEMO_CAPACITY {
        memo.clear();
    }
    let mut seen = FxHashSet::default();
    let fresh: Vec<Genotype> = members
        .iter()
        .filter(|g| !memo.contains_key(*g) && seen.insert(*g))
        .cloned()
        .collect();
    let values = pipe.evaluate_all(&fresh, parallel)?;
    let count = fresh.len();
    let local: FxHashMap<Genotype, f64> = fresh.into_iter().zip(values).collect();
    let fitness = members.iter().map(|g| local.get(g).or_else(|| memo.get(g)).copied().expect("evaluated")).collect();
    memo.extend(local);
    Ok((fitness, count))
}

/// Runs initialize → (recombine → mutate → evaluate → select) until a
/// termination criterion fires.
///
/// Every operator invocation draws from its own substream named after the
/// operator and generation, so the record is a pure function of
/// `(pipe, config, seed)`.
pub fn run_ea<D: Decoder>(pipe: &FitnessPipeline<D>, config: &EaConfig, seed: u64) -> Result<RunRecord<D::Phenotype>> {
    config.validate()?;
    let root = RandomStream::new(seed);
    let direction = pipe.direction;
    let alphabet = pipe.codec.alphabet().clone();

    let mut parents = initialize(pipe, config.population, &mut root.substream("initialize"))?;
    let mut memo = FxHashMap::default();
    let (mut parent_fitness, initial_evaluations) = evaluate_memo(pipe, &parents.members, config.parallel, &mut memo)?;

    let first_best = (0..parents.len())
        .reduce(|a, b| if direction.better(parent_fitness[b], parent_fitness[a]) { b } else { a })
        .expect("population is non-empty");
    let mut best_genotype = parents.members[first_best].clone();
    let mut best_fitness = parent_fitness[first_best];

    let mut history = vec![stats(
        0,
        &parent_fitness,
        &parents.members,
        alphabet.len(),
        direction,
        best_fitness,
        OperatorEvents {
            evaluations: initial_evaluations,
            ..OperatorEvents::default()
        },
    )];

    let reason = loop {
        if let Some(reason) = should_terminate(&history, direction, &config.termination)? {
            break reason;
        }
        let t = parents.generation + 1;
        let crossed = recombine(&parents, &config.recombination, &mut root.substream(&format!("recombine/{t}")))?;
        let mutated = mutate(&crossed, &alphabet, &config.mutation, &mut root.substream(&format!("mutate/{t}")))?;
        let (offspring_fitness, evaluations) = evaluate_memo(pipe, &mutated.members, config.parallel, &mut memo)?;

        let events = OperatorEvents {
            crossovers: crossed.lineage.iter().filter(|l| l.len() > 1).count(),
            mutated_symbols: crossed
                .members
                .iter()
                .zip(&mutated.members)
                .map(|(a, b)| a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count())
                .sum(),
            evaluations,
        };

        for (g, &f) in mutated.members.iter().zip(&offspring_fitness) {
            if direction.better(f, best_fitness) {
                best_fitness = f;
                best_genotype = g.clone();
            }
        }

        // offspring lineage points into `parents` directly
        let offspring = Population::with_lineage(mutated.members, t, crossed.lineage);
        let (pool, pool_fitness, pool_lineage): (Population, Vec<f64>, Vec<Vec<usize>>) = if config.selection.elitism {
            let mut fitness = parent_fitness.clone();
            fitness.extend_from_slice(&offspring_fitness);
            let mut lineage: Vec<Vec<usize>> = (0..parents.len()).map(|i| vec![i]).collect();
            lineage.extend(offspring.lineage.iter().cloned());
            (parents.concat(&offspring), fitness, lineage)
        } else {
            (offspring.clone(), offspring_fitness, offspring.lineage.clone())
        };

        let survivors = select(&pool, &pool_fitness, direction, &config.selection, &mut root.substream(&format!("select/{t}")))?;
        let fitness: Vec<f64> = survivors.lineage.iter().map(|l| pool_fitness[l[0]]).collect();
        let lineage = survivors.lineage.iter().map(|l| pool_lineage[l[0]].clone()).collect();
        parents = Population::with_lineage(survivors.members, t, lineage);
        parent_fitness = fitness;

        history.push(stats(
            t,
            &parent_fitness,
            &parents.members,
            alphabet.len(),
            direction,
            best_fitness,
            events,
        ));
    };

    let best_phenotype = pipe.codec.decode(&best_genotype)?;
    let generations_used = history.last().map_or(0, |g| g.generation);
    Ok(RunRecord {
        seed,
        direction,
        generations: history,
        best_genotype,
        best_phenotype,
        best_fitness,
        generations_used,
        termination: reason,
    })
}
