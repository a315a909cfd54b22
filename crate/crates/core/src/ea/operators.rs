//! Recombination, mutation and selection as random population
//! transformations.

use serde::{Deserialize, Serialize};

use super::fitness::Direction;
use super::population::Population;
use crate::encoding::{Alphabet, Genotype};
use crate::error::{Error, Result};
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossoverKind {
    OnePoint,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecombinationParams {
    pub kind: CrossoverKind,
    /// Probability that a drawn parent pair is crossed rather than copied.
    pub probability: f64,
    /// Number of offspring produced.
    pub offspring: usize,
}

impl RecombinationParams {
    pub fn validate(&self) -> Result<()> {
        if self.offspring < 1 {
            return Err(Error::InvalidParams("offspring size must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.probability) {
            return Err(Error::InvalidParams(format!(
                "crossover probability {} outside [0, 1]",
                self.probability
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutationKind {
    /// Redraw the symbol uniformly from the whole alphabet.
    Resample,
    /// Replace the symbol by a uniformly drawn *different* symbol; on a
    /// binary alphabet this is a bit flip.
    Flip,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MutationParams {
    pub kind: MutationKind,
    /// Per-symbol mutation probability.
    pub rate: f64,
}

impl MutationParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.rate) {
            return Err(Error::InvalidParams(format!("mutation rate {} outside [0, 1]", self.rate)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SelectionKind {
    /// Each slot is filled by the best of `size` distinct pool members.
    Tournament { size: usize },
    /// The pool is ranked and the top members are taken in order.
    Truncation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionParams {
    pub strategy: SelectionKind,
    /// Number of survivors.
    pub size: usize,
    /// Elitist flag: the pool is parents ∥ offspring and its best member
    /// always survives. Otherwise the pool is the offspring alone.
    pub elitism: bool,
}

impl SelectionParams {
    pub fn validate(&self) -> Result<()> {
        if self.size < 1 {
            return Err(Error::InvalidParams("selection size must be at least 1".into()));
        }
        if let SelectionKind::Tournament { size } = self.strategy {
            if size < 1 {
                return Err(Error::InvalidParams("tournament size must be at least 1".into()));
            }
        }
        Ok(())
    }
}

/// Exchanges tails after `cut`: `(a[..cut] ++ b[cut..], b[..cut] ++ a[cut..])`.
pub fn one_point_crossover(a: &Genotype, b: &Genotype, cut: usize) -> (Genotype, Genotype) {
    let cut = cut.min(a.len());
    let mut c1 = a.0[..cut].to_vec();
    c1.extend_from_slice(&b.0[cut..]);
    let mut c2 = b.0[..cut].to_vec();
    c2.extend_from_slice(&a.0[cut..]);
    (Genotype(c1), Genotype(c2))
}

fn crossover(kind: CrossoverKind, a: &Genotype, b: &Genotype, rng: &mut RandomStream) -> (Genotype, Genotype) {
    match kind {
        CrossoverKind::OnePoint => {
            let cut = if a.len() >= 2 { 1 + rng.index(a.len() - 1) } else { 0 };
            one_point_crossover(a, b, cut)
        }
        CrossoverKind::Uniform => {
            let (mut c1, mut c2) = (a.0.clone(), b.0.clone());
            for i in 0..a.len() {
                if rng.bernoulli(0.5) {
                    std::mem::swap(&mut c1[i], &mut c2[i]);
                }
            }
            (Genotype(c1), Genotype(c2))
        }
    }
}

/// Produces `params.offspring` children. Each step draws two distinct
/// parents; with probability `params.probability` they are crossed (both
/// children record both parents), otherwise they are copied (each child
/// records its single parent).
pub fn recombine(pop: &Population, params: &RecombinationParams, rng: &mut RandomStream) -> Result<Population> {
    params.validate()?;
    let mu = pop.len();
    if mu == 0 {
        return Err(Error::InvalidInput("cannot recombine an empty population".into()));
    }
    if params.probability > 0.0 && mu < 2 {
        return Err(Error::InvalidParams(
            "crossover needs at least two parents".into(),
        ));
    }
    let target = params.offspring;
    let mut members = Vec::with_capacity(target);
    let mut lineage = Vec::with_capacity(target);
    while members.len() < target {
        let (i, j) = if mu >= 2 {
            let pick = rng.sample_distinct(mu, 2);
            (pick[0], pick[1])
        } else {
            (0, 0)
        };
        let cross = rng.bernoulli(params.probability);
        let (a, b) = (&pop.members[i], &pop.members[j]);
        if cross {
            let (c1, c2) = crossover(params.kind, a, b, rng);
            members.push(c1);
            lineage.push(vec![i, j]);
            if members.len() < target {
                members.push(c2);
                lineage.push(vec![j, i]);
            }
        } else {
            members.push(a.clone());
            lineage.push(vec![i]);
            if members.len() < target {
                members.push(b.clone());
                lineage.push(vec![j]);
            }
        }
    }
    Ok(Population::with_lineage(members, pop.generation + 1, lineage))
}

/// Independently mutates every symbol with probability `params.rate`.
pub fn mutate(
    pop: &Population,
    alphabet: &Alphabet,
    params: &MutationParams,
    rng: &mut RandomStream,
) -> Result<Population> {
    params.validate()?;
    let k = alphabet.len();
    let members = pop
        .members
        .iter()
        .map(|g| {
            let symbols = g
                .0
                .iter()
                .map(|&s| {
                    if !rng.bernoulli(params.rate) {
                        return s;
                    }
                    match params.kind {
                        MutationKind::Resample => rng.index(k) as u32,
                        MutationKind::Flip if k < 2 => s,
                        MutationKind::Flip => ((s as usize + 1 + rng.index(k - 1)) % k) as u32,
                    }
                })
                .collect();
            Genotype(symbols)
        })
        .collect();
    let lineage = (0..pop.len()).map(|i| vec![i]).collect();
    Ok(Population::with_lineage(members, pop.generation, lineage))
}

/// Ranks pool indices best-first; ties go to the lowest index.
fn ranking(fitnesses: &[f64], direction: Direction) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitnesses.len()).collect();
    order.sort_by(|&a, &b| {
        direction
            .key(fitnesses[a])
            .total_cmp(&direction.key(fitnesses[b]))
            .then(a.cmp(&b))
    });
    order
}

fn better_index(fitnesses: &[f64], direction: Direction, a: usize, b: usize) -> usize {
    match direction.key(fitnesses[a]).total_cmp(&direction.key(fitnesses[b])) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => a.min(b),
    }
}

/// Chooses `params.size` members of `pool`. Every output is a copy of a pool
/// member, and `lineage[i] == [pool index]`.
pub fn select(
    pool: &Population,
    fitnesses: &[f64],
    direction: Direction,
    params: &SelectionParams,
    rng: &mut RandomStream,
) -> Result<Population> {
    params.validate()?;
    let n = pool.len();
    if fitnesses.len() != n {
        return Err(Error::InvalidInput(format!(
            "{} fitness values for a pool of {n}",
            fitnesses.len()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput("cannot select from an empty pool".into()));
    }
    let mut chosen: Vec<usize> = match params.strategy {
        SelectionKind::Truncation => {
            let order = ranking(fitnesses, direction);
            (0..params.size).map(|i| order[i % n]).collect()
        }
        SelectionKind::Tournament { size } => (0..params.size)
            .map(|_| {
                rng.sample_distinct(n, size.min(n))
                    .into_iter()
                    .reduce(|a, b| better_index(fitnesses, direction, a, b))
                    .expect("tournament is non-empty")
            })
            .collect(),
    };
    if params.elitism {
        let best = ranking(fitnesses, direction)[0];
        if !chosen.contains(&best) {
            // the last-ranked survivor gives way to the pool's best
            let worst_slot = (0..chosen.len())
                .max_by(|&a, &b| {
                    direction
                        .key(fitnesses[chosen[a]])
                        .total_cmp(&direction.key(fitnesses[chosen[b]]))
                        .then(a.cmp(&b))
                })
                .expect("selection size is positive");
            chosen[worst_slot] = best;
        }
    }
    let members = chosen.iter().map(|&i| pool.members[i].clone()).collect();
    let lineage = chosen.iter().map(|&i| vec![i]).collect();
    Ok(Population::with_lineage(members, pool.generation, lineage))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(text: &str) -> Genotype {
        Genotype::parse(&Alphabet::binary(), text).unwrap()
    }

    fn pop(texts: &[&str]) -> Population {
        Population::new(texts.iter().map(|t| g(t)).collect(), 0)
    }

    #[test]
    fn one_point_crossover_exchanges_tails() {
        let (a, b) = one_point_crossover(&g("0000"), &g("1111"), 2);
        assert_eq!((a, b), (g("0011"), g("1100")));
    }

    #[test]
    fn zero_probability_copies() {
        let p = pop(&["0000", "1111", "0101"]);
        let params = RecombinationParams {
            kind: CrossoverKind::OnePoint,
            probability: 0.0,
            offspring: 7,
        };
        let kids = recombine(&p, &params, &mut RandomStream::new(3)).unwrap();
        assert_eq!(kids.len(), 7);
        for (i, child) in kids.members.iter().enumerate() {
            let parents = kids.parents_of(i);
            assert_eq!(parents.len(), 1);
            assert_eq!(child, &p.members[parents[0]]);
        }
    }

    #[test]
    fn recombination_rejects_bad_params() {
        let p = pop(&["00", "11"]);
        let mut rng = RandomStream::new(0);
        let zero = RecombinationParams {
            kind: CrossoverKind::Uniform,
            probability: 0.5,
            offspring: 0,
        };
        assert!(matches!(recombine(&p, &zero, &mut rng), Err(Error::InvalidParams(_))));
        let lonely = RecombinationParams {
            offspring: 2,
            ..zero
        };
        assert!(matches!(recombine(&pop(&["00"]), &lonely, &mut rng), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn mutation_identity_and_complement() {
        let p = pop(&["0110", "1111"]);
        let a = Alphabet::binary();
        let none = MutationParams {
            kind: MutationKind::Flip,
            rate: 0.0,
        };
        assert_eq!(mutate(&p, &a, &none, &mut RandomStream::new(1)).unwrap().members, p.members);
        let all = MutationParams { rate: 1.0, ..none };
        let out = mutate(&p, &a, &all, &mut RandomStream::new(1)).unwrap();
        assert_eq!(out.members, vec![g("1001"), g("0000")]);
        assert!(out.lineage.iter().enumerate().all(|(i, l)| l == &vec![i]));
        let bad = MutationParams { rate: 1.5, ..none };
        assert!(matches!(mutate(&p, &a, &bad, &mut RandomStream::new(1)), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn truncation_picks_the_best_and_breaks_ties_low() {
        let p = pop(&["00", "01", "10"]);
        let params = SelectionParams {
            strategy: SelectionKind::Truncation,
            size: 1,
            elitism: false,
        };
        let mut rng = RandomStream::new(0);
        let out = select(&p, &[3.0, 1.0, 2.0], Direction::Minimize, &params, &mut rng).unwrap();
        assert_eq!(out.members, vec![g("01")]);
        let out = select(&p, &[3.0, 1.0, 2.0], Direction::Maximize, &params, &mut rng).unwrap();
        assert_eq!(out.members, vec![g("00")]);
        let tie = pop(&["00", "11"]);
        let out = select(&tie, &[1.0, 1.0], Direction::Minimize, &params, &mut rng).unwrap();
        assert_eq!(out.lineage, vec![vec![0]]);
    }

    #[test]
    fn full_tournament_returns_the_best() {
        let p = pop(&["00", "01", "10", "11"]);
        let params = SelectionParams {
            strategy: SelectionKind::Tournament { size: 4 },
            size: 10,
            elitism: false,
        };
        let out = select(&p, &[4.0, 2.0, 3.0, 2.0], Direction::Minimize, &params, &mut RandomStream::new(8)).unwrap();
        assert!(out.members.iter().all(|m| m == &g("01")));
    }

    #[test]
    fn misaligned_fitnesses_are_rejected() {
        let p = pop(&["00", "01"]);
        let params = SelectionParams {
            strategy: SelectionKind::Truncation,
            size: 1,
            elitism: false,
        };
        let err = select(&p, &[1.0], Direction::Minimize, &params, &mut RandomStream::new(0));
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn elitism_keeps_the_pool_best() {
        let p = pop(&["00", "01", "10", "11"]);
        let params = SelectionParams {
            strategy: SelectionKind::Tournament { size: 1 },
            size: 2,
            elitism: true,
        };
        for seed in 0..50 {
            let out = select(&p, &[4.0, 3.0, 0.5, 2.0], Direction::Minimize, &params, &mut RandomStream::new(seed)).unwrap();
            assert!(out.members.contains(&g("10")), "seed {seed}");
        }
    }
}
