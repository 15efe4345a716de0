use serde::{Deserialize, Serialize};

use super::genome::Genome;
use super::targets::{score_stats, CandidateStats, DecayStats, TargetStats};
use super::{GaError, Result};
use crate::sim::rng::derive_seed;
use crate::sim::{self, Model, SimConfig, Trajectory};
use crate::stats::{fit_heaps, fit_turnover_decay, fit_zipf_mle, turnover_series, ZipfOptions};

fn default_replicates() -> u32 {
    3
}
fn default_steps() -> u32 {
    301
}
fn default_growth() -> f64 {
    0.02
}
fn default_zipf_step() -> u32 {
    100
}

/// How a genome is turned into simulated statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalSettings {
    /// `pnm` searches all three parameters; `fnm` uses `s0` as the initial
    /// population and ignores the canon size.
    #[serde(default = "default_model")]
    pub model: Model,
    /// Runs averaged per evaluation.
    #[serde(default = "default_replicates")]
    pub replicates: u32,
    #[serde(default = "default_steps")]
    pub steps: u32,
    #[serde(default = "default_growth")]
    pub growth_exponent: f64,
    /// Step whose full rank-frequency table is fitted for the Zipf exponent.
    #[serde(default = "default_zipf_step")]
    pub zipf_step: u32,
    /// Canon burn-in override; `None` means `ceil(5 / mu)`.
    #[serde(default)]
    pub burn_in: Option<u64>,
}

fn default_model() -> Model {
    Model::Pnm
}

impl Default for EvalSettings {
    fn default() -> Self {
        Self {
            model: default_model(),
            replicates: default_replicates(),
            steps: default_steps(),
            growth_exponent: default_growth(),
            zipf_step: default_zipf_step(),
            burn_in: None,
        }
    }
}

impl EvalSettings {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(GaError::Settings("replicates must be at least 1".into()));
        }
        if self.zipf_step >= self.steps {
            return Err(GaError::Settings(format!(
                "zipf_step {} is outside the {} simulated steps",
                self.zipf_step, self.steps
            )));
        }
        Ok(())
    }

    /// Simulation parameters for one replicate.
    pub fn sim_config(&self, genome: &Genome, list_depth: usize, seed: u64) -> SimConfig {
        SimConfig {
            model: self.model,
            n0: genome.s0,
            mu: genome.mu,
            growth_exponent: self.growth_exponent,
            steps: self.steps,
            canon_year_size: (self.model == Model::Pnm).then_some(genome.canon_year_size),
            burn_in: self.burn_in,
            seed,
            top_k: list_depth,
            retain_all: false,
            retain_years: vec![self.zipf_step],
        }
    }
}

/// Outcome of scoring one genome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub fitness: u32,
    pub stats: Option<CandidateStats>,
    /// Why the evaluation produced no statistics.
    pub diagnostic: Option<String>,
}

/// Fitness function used by the search. Must be deterministic in
/// `(genome, seed)`.
pub trait Evaluator: Sync {
    fn max_fitness(&self) -> u32;
    fn evaluate(&self, genome: &Genome, seed: u64) -> Evaluation;
}

/// Heaps, Zipf and turnover-decay statistics of one trajectory.
pub fn measure_trajectory(traj: &Trajectory, list_sizes: &[usize], zipf_step: u32) -> CandidateStats {
    let heaps = fit_heaps(&traj.heaps_points()).ok();
    let zipf_gamma = traj.retained_year(zipf_step).and_then(|year| {
        let counts: Vec<u64> = year.entries().iter().map(|&(_, c)| c).collect();
        fit_zipf_mle(&counts, ZipfOptions::default()).ok().map(|f| f.gamma_zipf)
    });
    let lists = traj.top_lists();
    let decay = list_sizes
        .iter()
        .map(|&y| {
            let fit = turnover_series(&lists, y).and_then(|s| fit_turnover_decay(&s)).ok();
            DecayStats { y, beta: fit.map(|f| f.decay_rate), z0: fit.map(|f| f.z0) }
        })
        .collect();
    CandidateStats {
        heaps_a: heaps.map(|h| h.coeff_a),
        heaps_b: heaps.map(|h| h.exponent_b),
        zipf_gamma,
        decay,
    }
}

/// Replicate-averaged statistics of `genome`.
pub fn measure_genome(genome: &Genome, list_sizes: &[usize], settings: &EvalSettings, seed: u64) -> Result<CandidateStats> {
    let depth = list_sizes.iter().copied().max().unwrap_or(1);
    let runs = (0..settings.replicates)
        .map(|r| {
            let config = settings.sim_config(genome, depth, derive_seed(seed, u64::from(r)));
            sim::run(&config).map(|traj| measure_trajectory(&traj, list_sizes, settings.zipf_step))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(CandidateStats::average(&runs))
}

/// Scores a genome against `targets`. Out-of-bounds genomes are rejected
/// without simulating; a failed simulation scores zero with a diagnostic.
pub fn score_individual(genome: &Genome, targets: &TargetStats, settings: &EvalSettings, seed: u64) -> Result<Evaluation> {
    genome.check()?;
    Ok(match measure_genome(genome, &targets.list_sizes(), settings, seed) {
        Ok(stats) => Evaluation { fitness: score_stats(&stats, targets), stats: Some(stats), diagnostic: None },
        Err(e) => Evaluation { fitness: 0, stats: None, diagnostic: Some(e.to_string()) },
    })
}

/// The simulation-backed fitness.
#[derive(Debug, Clone)]
pub struct SimEvaluator {
    pub targets: TargetStats,
    pub settings: EvalSettings,
}

impl SimEvaluator {
    pub fn new(targets: TargetStats, settings: EvalSettings) -> Result<Self> {
        targets.validate()?;
        settings.validate()?;
        Ok(Self { targets, settings })
    }
}

impl Evaluator for SimEvaluator {
    fn max_fitness(&self) -> u32 {
        self.targets.max_fitness()
    }

    fn evaluate(&self, genome: &Genome, seed: u64) -> Evaluation {
        score_individual(genome, &self.targets, &self.settings, seed).unwrap_or_else(|e| Evaluation {
            fitness: 0,
            stats: None,
            diagnostic: Some(e.to_string()),
        })
    }
}
