//! Neutral models of word-frequency evolution.
//!
//! The crate simulates two copying processes over word tokens and measures
//! the statistics used to compare them against historical book corpora:
//!
//! - [`sim`]: the full-sampling model (every token copies the previous year)
//!   and the partial-sampling model (an exponentially growing sample drawn
//!   from a cumulative, constant-rate "canon").
//! - [`stats`]: rank-frequency tables, discrete power-law MLE, Heaps fits,
//!   top-list turnover, turnover decay and profiles, plus the closed-form
//!   turnover and stationary-spectrum predictions.
//! - [`ingest`]: Google 1-gram parsing, filtering and the per-year store.
//! - [`ga`]: the genetic algorithm that calibrates model parameters against
//!   target statistics.
//! - [`cli`]: the command implementations behind the `neutral-lexicon` binary,
//!   and the tab-separated/JSON file formats they read and write.
//!
//! Each capability has a runnable program under `examples/`.

pub mod cli;
pub mod ga;
pub mod ingest;
pub mod sim;
pub mod stats;

/// Calendar year of model time step `t = 0`.
pub const ORIGIN_YEAR: i64 = 1700;
