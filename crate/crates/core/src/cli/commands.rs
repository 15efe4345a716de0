use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use super::manifest::RunManifest;
use super::tables::{cell, Table};
use crate::ga::{run_ga, write_log_jsonl, EvalSettings, GaOutcome, GaSettings, Genome, SimEvaluator, TargetStats};
use crate::ingest::{build_corpus_store, write_store, IngestSettings, RetentionStats, StoreManifest};
use crate::stats::{predict_neutral_turnover, TurnoverPrediction, Validity};

/// Builds a corpus store from 1-gram files and writes it to `out`.
pub fn ingest_to_dir(files: &[PathBuf], settings: &IngestSettings, out: &Path) -> Result<StoreManifest> {
    let store = build_corpus_store(files, settings)?;
    Ok(write_store(&store, out)?)
}

pub fn retention_report(stats: &RetentionStats) -> String {
    format!(
        "lines read:            {}\n\
         malformed:             {}\n\
         outside year range:    {}\n\
         rejected (empty):      {}\n\
         rejected (symbol/num): {}\n\
         rejected (triple):     {}\n\
         kept:                  {}\n",
        stats.lines,
        stats.malformed,
        stats.out_of_range,
        stats.rejected_empty,
        stats.rejected_symbol_or_number,
        stats.rejected_triple_consonant,
        stats.kept
    )
}

fn default_generations() -> u32 {
    50
}

/// Contents of a GA config file: targets plus optional search settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaFile {
    pub targets: TargetStats,
    #[serde(default)]
    pub ga: GaSettings,
    #[serde(default)]
    pub eval: EvalSettings,
    #[serde(default = "default_generations")]
    pub generations: u32,
    #[serde(default)]
    pub seed: u64,
}

pub const POPULATION_HEADER: [&str; 6] = ["rank", "canon_year_size", "mu", "s0", "fitness", "diagnostic"];

pub fn population_table(outcome: &GaOutcome) -> Table {
    let mut table = Table::new(&POPULATION_HEADER);
    for (i, ind) in outcome.population.iter().enumerate() {
        table.push(vec![
            (i + 1).to_string(),
            ind.genome.canon_year_size.to_string(),
            ind.genome.mu.to_string(),
            ind.genome.s0.to_string(),
            ind.fitness.to_string(),
            ind.diagnostic.as_deref().unwrap_or("").replace(['\t', '\n'], " "),
        ]);
    }
    table
}

/// `(genome, fitness)` rows of `population.tsv`, best first.
pub fn read_population(path: &Path) -> Result<Vec<(Genome, u32)>> {
    let table = Table::read_expecting(path, &POPULATION_HEADER)?;
    table
        .rows
        .iter()
        .map(|r| Ok((Genome { canon_year_size: cell(r, 1)?, mu: cell(r, 2)?, s0: cell(r, 3)? }, cell(r, 4)?)))
        .collect()
}

/// Runs the GA described by `file` and writes `ga_log.jsonl`,
/// `population.tsv`, `best.json` and a manifest into `out`.
pub fn ga_to_dir(file: &GaFile, out: &Path, inputs: &[PathBuf]) -> Result<GaOutcome> {
    let started = Instant::now();
    let evaluator = SimEvaluator::new(file.targets.clone(), file.eval.clone())?;
    let outcome = run_ga(&evaluator, &file.ga, file.generations, file.seed)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    write_log_jsonl(&outcome.log, BufWriter::new(File::create(out.join("ga_log.jsonl"))?))?;
    population_table(&outcome).write(&out.join("population.tsv"))?;
    let mut best = serde_json::to_string_pretty(outcome.best())?;
    best.push('\n');
    fs::write(out.join("best.json"), best)?;

    let mut manifest = RunManifest::new("ga", file)?;
    manifest.seeds = vec![file.seed];
    for input in inputs {
        manifest.add_input(input)?;
    }
    manifest.outputs = vec!["ga_log.jsonl".into(), "population.tsv".into(), "best.json".into()];
    manifest.wall_clock_secs = started.elapsed().as_secs_f64();
    manifest.write(out)?;
    Ok(outcome)
}

pub fn predict(mu: f64, y: u64, n: u64, strict: bool) -> Result<TurnoverPrediction> {
    let mode = if strict { Validity::Strict } else { Validity::Warn };
    Ok(predict_neutral_turnover(mu, y, n, mode)?)
}

pub fn format_prediction(p: &TurnoverPrediction) -> String {
    format!("{:.6}\t{}", p.value, if p.valid { "valid" } else { "invalid" })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prediction_examples() {
        let p = predict(0.003, 50, 10_000, false).unwrap();
        assert_eq!(format_prediction(&p), "5.491095\tvalid");
        let p = predict(0.003, 10_000, 10_000, false).unwrap();
        assert!(!p.valid);
        assert!(format_prediction(&p).ends_with("\tinvalid"));
        assert!(predict(0.003, 10_000, 10_000, true).is_err());
        assert_eq!(predict(0.2, 0, 500, false).unwrap().value, 0.0);
    }

    #[test]
    fn ga_file_parses_with_defaults() {
        let file: GaFile = toml::from_str(
            r#"
            seed = 4
            [targets]
            heaps_a = 1.4
            heaps_b = 0.54
            zipf_gamma = 1.33
            [ga]
            population = 20
            "#,
        )
        .unwrap();
        assert_eq!(file.ga.population, 20);
        assert_eq!(file.ga.elite_fraction, 0.2);
        assert_eq!(file.eval.replicates, 3);
        assert_eq!(file.generations, 50);
    }
}
