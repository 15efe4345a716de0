use std::io::{BufRead, Write};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::evaluate::{Evaluation, Evaluator};
use super::genome::Genome;
use super::targets::CandidateStats;
use super::{GaError, Result};
use crate::sim::rng::derive_seed;

fn default_population() -> usize {
    100
}
fn default_elite() -> f64 {
    0.2
}
fn default_mutation() -> f64 {
    0.15
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaSettings {
    #[serde(default = "default_population")]
    pub population: usize,
    /// Share of each generation copied unchanged, best first.
    #[serde(default = "default_elite")]
    pub elite_fraction: f64,
    /// Share of the recombined individuals that also get one mutation.
    #[serde(default = "default_mutation")]
    pub mutation_fraction: f64,
    /// Stop after this many generations without a better best fitness.
    #[serde(default)]
    pub patience: Option<u32>,
}

impl Default for GaSettings {
    fn default() -> Self {
        Self {
            population: default_population(),
            elite_fraction: default_elite(),
            mutation_fraction: default_mutation(),
            patience: None,
        }
    }
}

impl GaSettings {
    pub fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(GaError::Settings("population must be at least 1".into()));
        }
        for (name, f) in [("elite_fraction", self.elite_fraction), ("mutation_fraction", self.mutation_fraction)] {
            if !(0.0..=1.0).contains(&f) {
                return Err(GaError::Settings(format!("{name} must lie in [0, 1], got {f}")));
            }
        }
        Ok(())
    }

    pub fn elite_count(&self, population: usize) -> usize {
        ((population as f64 * self.elite_fraction).round() as usize).clamp(1, population)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub genome: Genome,
    pub fitness: u32,
    pub stats: Option<CandidateStats>,
    pub diagnostic: Option<String>,
}

impl Individual {
    fn new(genome: Genome, eval: Evaluation) -> Self {
        Self { genome, fitness: eval.fitness, stats: eval.stats, diagnostic: eval.diagnostic }
    }
}

/// One line of the convergence log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationLog {
    pub generation: u32,
    pub best_fitness: u32,
    pub mean_fitness: f64,
    pub best_genome: Genome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaOutcome {
    /// Final population, best first.
    pub population: Vec<Individual>,
    pub log: Vec<GenerationLog>,
}

impl GaOutcome {
    pub fn best(&self) -> &Individual {
        &self.population[0]
    }
}

/// Stable sort, best first; equal fitness keeps the previous order.
fn rank(population: &mut [Individual]) {
    population.sort_by(|a, b| b.fitness.cmp(&a.fitness));
}

fn summarize(generation: u32, ranked: &[Individual]) -> GenerationLog {
    let mean = ranked.iter().map(|i| f64::from(i.fitness)).sum::<f64>() / ranked.len() as f64;
    GenerationLog {
        generation,
        best_fitness: ranked[0].fitness,
        mean_fitness: mean,
        best_genome: ranked[0].genome,
    }
}

/// Each individual draws from its own stream, so results do not depend on
/// how evaluations are scheduled.
fn individual_rng(seed: u64, generation: u32, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(derive_seed(seed, u64::from(generation)), index as u64))
}

/// Random population within bounds, scored.
pub fn initial_population<E: Evaluator + ?Sized>(evaluator: &E, size: usize, seed: u64) -> Vec<Individual> {
    let mut population: Vec<Individual> = (0..size)
        .into_par_iter()
        .map(|i| {
            let mut rng = individual_rng(seed, 0, i);
            let genome = Genome::random(&mut rng);
            let eval = evaluator.evaluate(&genome, rng.random());
            Individual::new(genome, eval)
        })
        .collect();
    rank(&mut population);
    population
}

/// One generation: elites survive unchanged (keeping their fitness), the
/// rest are recombined from two elites drawn uniformly and a fixed share of
/// them mutated in one parameter.
pub fn evolve<E: Evaluator + ?Sized>(
    population: &[Individual],
    evaluator: &E,
    settings: &GaSettings,
    seed: u64,
    generation: u32,
) -> Result<Vec<Individual>> {
    if population.is_empty() {
        return Err(GaError::EmptyPopulation);
    }
    let mut ranked = population.to_vec();
    rank(&mut ranked);
    let n = ranked.len();
    let elites = settings.elite_count(n);
    let n_children = n - elites;
    let n_mutants = ((n_children as f64 * settings.mutation_fraction).round() as usize).min(n_children);

    let mut picker = ChaCha8Rng::seed_from_u64(derive_seed(derive_seed(seed, u64::from(generation)), u64::MAX));
    let mut mutate = vec![false; n_children];
    for i in sample(&mut picker, n_children, n_mutants) {
        mutate[i] = true;
    }

    let parents = &ranked[..elites];
    let children: Vec<Individual> = (0..n_children)
        .into_par_iter()
        .map(|i| {
            let mut rng = individual_rng(seed, generation, i);
            let a = &parents[rng.random_range(0..elites)].genome;
            let b = &parents[rng.random_range(0..elites)].genome;
            let mut genome = Genome::crossover(a, b, &mut rng);
            if mutate[i] {
                genome.mutate(&mut rng);
            }
            genome.enforce_bounds(&mut rng);
            let eval = evaluator.evaluate(&genome, rng.random());
            Individual::new(genome, eval)
        })
        .collect();

    ranked.truncate(elites);
    ranked.extend(children);
    rank(&mut ranked);
    Ok(ranked)
}

/// Runs the search for up to `generations` generations after the initial
/// one. Stops early once the maximum fitness is reached or after
/// `patience` generations without improvement.
pub fn run_ga<E: Evaluator + ?Sized>(evaluator: &E, settings: &GaSettings, generations: u32, seed: u64) -> Result<GaOutcome> {
    settings.validate()?;
    let mut population = initial_population(evaluator, settings.population, seed);
    let mut log = vec![summarize(0, &population)];
    let mut stale = 0;
    for generation in 1..=generations {
        if population[0].fitness >= evaluator.max_fitness() || settings.patience.is_some_and(|p| stale >= p) {
            break;
        }
        let previous_best = population[0].fitness;
        population = evolve(&population, evaluator, settings, seed, generation)?;
        log.push(summarize(generation, &population));
        stale = if population[0].fitness > previous_best { 0 } else { stale + 1 };
    }
    Ok(GaOutcome { population, log })
}

/// Writes the log as JSON lines, one generation per line.
pub fn write_log_jsonl<W: Write>(log: &[GenerationLog], mut out: W) -> Result<()> {
    for entry in log {
        serde_json::to_writer(&mut out, entry)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_log_jsonl<R: BufRead>(input: R) -> Result<Vec<GenerationLog>> {
    let mut log = Vec::new();
    for line in input.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            log.push(serde_json::from_str(&line)?);
        }
    }
    Ok(log)
}
