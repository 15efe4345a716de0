use serde::{Deserialize, Serialize};

use super::{SimConfig, WordId, YearCounts};
use crate::stats::RankedList;

/// Summary of one simulated year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearRecord {
    /// Model time step; calendar year is `ORIGIN_YEAR + t`.
    pub t: u32,
    /// `N_t` for the FNM, `S_t` for the PNM sample.
    pub corpus_size: u64,
    /// Distinct words that year.
    pub vocabulary: u64,
    /// Words minted that year in the recorded population.
    pub innovations: u64,
    /// Cumulative canon tokens after this year (PNM only).
    #[serde(default)]
    pub canon_total: Option<u64>,
    pub top: RankedList<WordId>,
}

/// Output of one run: a record per growth-phase year plus any retained full
/// year counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    config: SimConfig,
    records: Vec<YearRecord>,
    retained: Vec<YearCounts>,
}

impl Trajectory {
    pub fn new(config: SimConfig) -> Self {
        Self { config, records: Vec::new(), retained: Vec::new() }
    }

    pub fn from_parts(config: SimConfig, records: Vec<YearRecord>, retained: Vec<YearCounts>) -> Self {
        Self { config, records, retained }
    }

    pub(crate) fn push(&mut self, record: YearRecord, retained: Option<YearCounts>) {
        self.records.push(record);
        self.retained.extend(retained);
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn seed(&self) -> u64 {
        self.config.seed
    }

    pub fn records(&self) -> &[YearRecord] {
        &self.records
    }

    pub fn retained(&self) -> &[YearCounts] {
        &self.retained
    }

    pub fn retained_year(&self, t: u32) -> Option<&YearCounts> {
        self.retained.iter().find(|y| y.year() == t)
    }

    /// `(N_t, v_t)` pairs, the input of a Heaps fit.
    pub fn heaps_points(&self) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .map(|r| (r.corpus_size as f64, r.vocabulary as f64))
            .collect()
    }

    /// Ranked top lists, one per year, in time order.
    pub fn top_lists(&self) -> Vec<RankedList<WordId>> {
        self.records.iter().map(|r| r.top.clone()).collect()
    }
}
