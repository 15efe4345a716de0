//! Genetic-algorithm calibration of the partial-sampling model.
//!
//! A genome is `(canon_year_size, mu, s0)`. Each candidate is simulated for
//! a fixed number of years at a fixed growth rate, and earns one point per
//! target statistic (Heaps `A` and `b`, Zipf `gamma`, turnover decay rates
//! and intercepts) that it reproduces within a relative tolerance.
//!
//! Every generation keeps its fittest fifth unchanged and refills the rest by
//! uniform crossover of two of those elites; 15% of the new individuals get
//! one parameter redrawn. `mu` is drawn on a log scale within the band
//! `5 <= canon_year_size * mu <= 90`.

mod evaluate;
mod genome;
mod search;
mod targets;

use thiserror::Error;

pub use evaluate::{
    measure_genome, measure_trajectory, score_individual, EvalSettings, Evaluation, Evaluator, SimEvaluator,
};
pub use genome::{Genome, CANON_MAX, CANON_MIN, S0_MAX, S0_MIN, THETA_MAX, THETA_MIN};
pub use search::{
    evolve, initial_population, read_log_jsonl, run_ga, write_log_jsonl, GaOutcome, GaSettings, GenerationLog,
    Individual,
};
pub use targets::{score_stats, CandidateStats, DecayStats, DecayTarget, TargetStats, MAX_STATISTICS};

#[derive(Debug, Error)]
pub enum GaError {
    #[error("genome out of bounds: {0:?}")]
    OutOfBounds(Genome),
    #[error("invalid targets: {0}")]
    Targets(String),
    #[error("invalid settings: {0}")]
    Settings(String),
    #[error("empty population")]
    EmptyPopulation,
    #[error(transparent)]
    Sim(#[from] crate::sim::SimError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GaError>;
