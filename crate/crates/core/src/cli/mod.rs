//! Command implementations behind the `neutral-lexicon` binary.
//!
//! Every command that writes files writes them into one output directory
//! together with a single `manifest.json`. Tables are tab-separated UTF-8
//! with one header row; `NA` marks a missing value. Configuration files are
//! TOML, and flags override the values they contain.

mod analyze;
mod commands;
mod manifest;
mod simulate;
pub mod tables;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

pub use analyze::{analyze_to_dir, AnalyzeOptions, AnalyzeOutput, Figure};
pub use commands::{
    format_prediction, ga_to_dir, ingest_to_dir, predict, read_population, retention_report, GaFile,
};
pub use manifest::{sha256_file, InputChecksum, RunManifest, RUN_MANIFEST};
pub use simulate::{aggregate, simulate_to_dir, SimulateOutput, TURNOVER_LIST_SIZES};

use crate::ingest::IngestSettings;
use crate::sim::SimConfig;

/// Neutral models of word-frequency evolution.
#[derive(Debug, Parser)]
#[command(name = "neutral-lexicon", version)]
pub struct Cli {
    /// Worker threads for replicate runs, GA evaluations and file parsing.
    /// Defaults to the number of available processors.
    #[arg(long, global = true, env = "NEUTRAL_LEXICON_WORKERS")]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run FNM/PNM replicates and tabulate their series.
    Simulate(SimulateArgs),
    /// Build a per-year word-count store from 1-gram files.
    Ingest(IngestArgs),
    /// Emit one figure's table and fit from a store or a simulation.
    Analyze(AnalyzeArgs),
    /// Calibrate model parameters with the genetic algorithm.
    Ga(GaArgs),
    /// Closed-form neutral turnover for a list size.
    Predict(PredictArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// TOML simulation config.
    pub config: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    /// Overrides `seed` in the config.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Decompressed 1-gram files.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// TOML ingest settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub min_year: Option<i32>,
    #[arg(long)]
    pub max_year: Option<i32>,
    /// Keep case variants apart.
    #[arg(long)]
    pub no_case_fold: bool,
    #[arg(long)]
    pub allow_apostrophe: bool,
    #[arg(long)]
    pub reference_word: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Corpus store, simulate output directory, or one run directory.
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub figure: Figure,
    #[arg(long)]
    pub out: PathBuf,
    /// First year used. Corpus defaults: 1700, or 1800 for turnover decay.
    #[arg(long)]
    pub min_year: Option<i64>,
    #[arg(long)]
    pub max_year: Option<i64>,
    /// Snapshot year for the Zipf table.
    #[arg(long)]
    pub year: Option<i64>,
    /// Top-list size for turnover decay.
    #[arg(long, default_value_t = 100)]
    pub y: usize,
    /// Centre of the turnover-profile window (corpus default 2000).
    #[arg(long)]
    pub center_year: Option<i64>,
    #[arg(long, default_value_t = 10)]
    pub half_window: i64,
    /// Ascending list sizes for the turnover profile.
    #[arg(long, value_delimiter = ',', default_value = "10,25,50,100,250,500,1000")]
    pub y_values: Vec<usize>,
    /// Run to analyse in a multi-run simulate directory.
    #[arg(long, default_value_t = 0)]
    pub run: usize,
}

#[derive(Debug, Args)]
pub struct GaArgs {
    /// TOML file with `[targets]` and optional `[ga]`/`[eval]` tables.
    pub targets: PathBuf,
    #[arg(long)]
    pub generations: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub population: Option<usize>,
    #[arg(long)]
    pub replicates: Option<u32>,
    #[arg(long)]
    pub patience: Option<u32>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub mu: f64,
    #[arg(long)]
    pub y: u64,
    /// Tokens per step.
    #[arg(long)]
    pub n: u64,
    /// Fail instead of flagging when `0.15 y < n mu` does not hold.
    #[arg(long)]
    pub strict: bool,
}

pub fn load_toml<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run_command(command: Command) -> Result<()> {
    match command {
        Command::Simulate(args) => {
            let mut config: SimConfig = load_toml(&args.config)?;
            if let Some(seed) = args.seed {
                config.seed = seed;
            }
            let out = simulate_to_dir(&config, args.runs, &args.out, &[args.config.clone()])?;
            for fit in &out.fits {
                if let (Some(a), Some(b)) = (fit.heaps_a, fit.heaps_b) {
                    println!("run {:3}  seed {:20}  heaps A {a:.4}  b {b:.4}", fit.run, fit.seed);
                }
            }
        }
        Command::Ingest(args) => {
            let mut settings: IngestSettings = match &args.config {
                Some(path) => load_toml(path)?,
                None => IngestSettings::default(),
            };
            if let Some(y) = args.min_year {
                settings.min_year = y;
            }
            if let Some(y) = args.max_year {
                settings.max_year = y;
            }
            if args.no_case_fold {
                settings.filter.case_fold = false;
            }
            if args.allow_apostrophe {
                settings.filter.allow_apostrophe = true;
            }
            if let Some(w) = args.reference_word {
                settings.reference_word = w;
            }
            let manifest = ingest_to_dir(&args.files, &settings, &args.out)?;
            print!("{}", retention_report(&manifest.retention));
            println!("years kept:            {}", manifest.years.len());
            if !manifest.dropped_years.is_empty() {
                println!("years dropped (no {:?}): {:?}", settings.reference_word, manifest.dropped_years);
            }
        }
        Command::Analyze(args) => {
            let opts = AnalyzeOptions {
                figure: args.figure,
                min_year: args.min_year,
                max_year: args.max_year,
                year: args.year,
                y: args.y,
                center_year: args.center_year,
                half_window: args.half_window,
                y_values: args.y_values,
                run: args.run,
            };
            let out = analyze_to_dir(&args.input, &opts, &args.out)?;
            match out.fit_error {
                Some(e) => println!("no fit: {e}"),
                None => println!("{}", out.fit),
            }
        }
        Command::Ga(args) => {
            let mut file: GaFile = load_toml(&args.targets)?;
            if let Some(g) = args.generations {
                file.generations = g;
            }
            if let Some(s) = args.seed {
                file.seed = s;
            }
            if let Some(p) = args.population {
                file.ga.population = p;
            }
            if let Some(r) = args.replicates {
                file.eval.replicates = r;
            }
            if args.patience.is_some() {
                file.ga.patience = args.patience;
            }
            let outcome = ga_to_dir(&file, &args.out, &[args.targets.clone()])?;
            for entry in &outcome.log {
                println!(
                    "generation {:3}  best {}  mean {:.2}  {:?}",
                    entry.generation, entry.best_fitness, entry.mean_fitness, entry.best_genome
                );
            }
        }
        Command::Predict(args) => {
            let p = predict(args.mu, args.y, args.n, args.strict)?;
            if !p.valid {
                eprintln!("warning: 0.15 y < n mu does not hold; the approximation is outside its range");
            }
            println!("{}", format_prediction(&p));
        }
    }
    Ok(())
}

/// Runs a parsed command line on a pool of `cli.workers` threads.
pub fn run(cli: Cli) -> Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        if n == 0 {
            bail!("--workers must be at least 1");
        }
        pool = pool.num_threads(n);
    }
    pool.build()?.install(|| run_command(cli.command))
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
