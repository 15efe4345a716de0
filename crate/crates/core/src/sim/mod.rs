//! Count-based simulation of the full-sampling (FNM) and partial-sampling
//! (PNM) neutral models.
//!
//! A year of text is a [`YearCounts`]: word identifiers with their token
//! counts. Years are generated from one another by neutral copying plus
//! innovation, one multinomial draw per year, so the cost of a year is
//! proportional to the vocabulary it copies from rather than to its size.

mod fnm;
mod pnm;
pub mod rng;
mod sampling;
mod trajectory;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fnm::{growth_schedule, run_fnm, step_fnm, FnmProcess};
pub use pnm::{run_pnm, step_pnm, CanonStore};
pub use sampling::multinomial;
pub use trajectory::{Trajectory, YearRecord};

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, SimError>;

/// Identifier of a word (a variant). Minted monotonically within a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WordId(pub u64);

impl fmt::Display for WordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Mints fresh [`WordId`]s. Never hands out the same id twice.
#[derive(Debug, Clone)]
pub struct IdAllocator {
    next: u64,
}

impl IdAllocator {
    pub fn new() -> Self {
        Self { next: 0 }
    }

    /// Allocator whose first id is `next`.
    pub fn starting_at(next: u64) -> Self {
        Self { next }
    }

    pub fn mint(&mut self) -> WordId {
        let id = WordId(self.next);
        self.next += 1;
        id
    }

    pub fn peek(&self) -> u64 {
        self.next
    }
}

impl Default for IdAllocator {
    fn default() -> Self {
        Self::new()
    }
}

/// The multiset of words making up one model year.
///
/// Entries keep the order in which words were carried over from the
/// previous year, followed by that year's innovations. The simulation only
/// ever looks at positions and counts, never at the ids themselves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearCounts {
    year: u32,
    entries: Vec<(WordId, u64)>,
    total: u64,
}

impl YearCounts {
    /// Builds a year from explicit entries. Counts must be positive and ids
    /// distinct.
    pub fn from_entries(year: u32, entries: Vec<(WordId, u64)>) -> Result<Self> {
        if entries.iter().any(|&(_, c)| c == 0) {
            return Err(SimError::InvalidState("word with zero count".into()));
        }
        let mut ids: Vec<WordId> = entries.iter().map(|&(id, _)| id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(SimError::InvalidState("duplicate word id".into()));
        }
        let total = entries.iter().map(|&(_, c)| c).sum();
        Ok(Self { year, entries, total })
    }

    /// `size` tokens of a single word.
    pub fn monomorphic(year: u32, word: WordId, size: u64) -> Result<Self> {
        Self::from_entries(year, vec![(word, size)])
    }

    pub(crate) fn from_parts_unchecked(year: u32, entries: Vec<(WordId, u64)>, total: u64) -> Self {
        debug_assert_eq!(entries.iter().map(|&(_, c)| c).sum::<u64>(), total);
        Self { year, entries, total }
    }

    pub fn year(&self) -> u32 {
        self.year
    }

    pub fn entries(&self) -> &[(WordId, u64)] {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct words (`v_t`).
    pub fn vocabulary(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Linear scan; intended for tests and small inspections.
    pub fn count_of(&self, word: WordId) -> u64 {
        self.entries
            .iter()
            .find(|&&(id, _)| id == word)
            .map_or(0, |&(_, c)| c)
    }

    /// Number of words holding exactly `k` tokens, for `k = 0..=max_k`.
    pub fn count_spectrum(&self, max_k: usize) -> Vec<u64> {
        let mut spectrum = vec![0u64; max_k + 1];
        for &(_, c) in &self.entries {
            if let Some(slot) = usize::try_from(c).ok().and_then(|c| spectrum.get_mut(c)) {
                *slot += 1;
            }
        }
        spectrum
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Fnm,
    Pnm,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Fnm => f.write_str("fnm"),
            Model::Pnm => f.write_str("pnm"),
        }
    }
}

fn default_growth() -> f64 {
    0.021
}

fn default_top_k() -> usize {
    1000
}

/// Complete, seedable parameterization of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub model: Model,
    /// Initial population (FNM) or initial sample size (PNM), in tokens.
    pub n0: u64,
    /// Per-token innovation probability.
    pub mu: f64,
    /// Growth rate per step of the population (FNM) or sample (PNM).
    #[serde(default = "default_growth")]
    pub growth_exponent: f64,
    pub steps: u32,
    /// Tokens added to the canon each year. PNM only.
    #[serde(default)]
    pub canon_year_size: Option<u64>,
    /// Constant-size warm-up steps; `None` means `ceil(5 / mu)`.
    #[serde(default)]
    pub burn_in: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    /// Length of the ranked list kept for each year.
    #[serde(default = "default_top_k")]
    pub top_k: usize,
    /// Keep the full counts of every year.
    #[serde(default)]
    pub retain_all: bool,
    /// Keep the full counts of these steps only.
    #[serde(default)]
    pub retain_years: Vec<u32>,
}

impl SimConfig {
    /// FNM with the calibrated defaults (N0 = 3000, mu = 0.003, 301 steps).
    pub fn calibrated_fnm(seed: u64) -> Self {
        Self {
            model: Model::Fnm,
            n0: 3000,
            mu: 0.003,
            growth_exponent: default_growth(),
            steps: 301,
            canon_year_size: None,
            burn_in: None,
            seed,
            top_k: default_top_k(),
            retain_all: false,
            retain_years: Vec::new(),
        }
    }

    /// PNM with the calibrated defaults (S0 = 3000, canon 10000 tokens/year).
    pub fn calibrated_pnm(seed: u64) -> Self {
        Self {
            model: Model::Pnm,
            canon_year_size: Some(10_000),
            ..Self::calibrated_fnm(seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return Err(SimError::Config(format!("mu must lie in (0, 1), got {}", self.mu)));
        }
        if self.n0 == 0 {
            return Err(SimError::Config("n0 must be at least 1".into()));
        }
        if self.steps == 0 {
            return Err(SimError::Config("steps must be at least 1".into()));
        }
        if !(self.growth_exponent >= 0.0 && self.growth_exponent.is_finite()) {
            return Err(SimError::Config(format!(
                "growth_exponent must be finite and non-negative, got {}",
                self.growth_exponent
            )));
        }
        if self.model == Model::Pnm && self.canon_year_size.unwrap_or(0) == 0 {
            return Err(SimError::Config("PNM requires canon_year_size >= 1".into()));
        }
        Ok(())
    }

    pub fn effective_burn_in(&self) -> u64 {
        self.burn_in.unwrap_or_else(|| default_burn_in(self.mu))
    }

    pub(crate) fn retains(&self, t: u32) -> bool {
        self.retain_all || self.retain_years.contains(&t)
    }
}

/// `ceil(5 / mu)`: a few relaxation times of the neutral process.
pub fn default_burn_in(mu: f64) -> u64 {
    (5.0 / mu).ceil() as u64
}

/// Runs whichever model the config names.
pub fn run(config: &SimConfig) -> Result<Trajectory> {
    match config.model {
        Model::Fnm => run_fnm(config),
        Model::Pnm => run_pnm(config),
    }
}
