//! Calibrates the partial-sampling model against target statistics with
//! the genetic algorithm.
//!
//! ```text
//! cargo run --release --example ga_calibrate -- [CONFIG] [GENERATIONS]
//! ```
//!
//! `CONFIG` defaults to `examples/configs/ga_targets.toml`; the generation
//! count defaults to 3 so the example finishes in a few minutes.

use std::path::PathBuf;

use neutral_lexicon::cli::{load_toml, GaFile};
use neutral_lexicon::ga::{run_ga, SimEvaluator};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs/ga_targets.toml"));
    let generations = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);
    let file: GaFile = load_toml(&path)?;
    let evaluator = SimEvaluator::new(file.targets.clone(), file.eval.clone())?;
    let outcome = run_ga(&evaluator, &file.ga, generations, file.seed)?;
    for entry in &outcome.log {
        println!("generation {:2}: best {} mean {:.2}", entry.generation, entry.best_fitness, entry.mean_fitness);
    }
    let best = outcome.best();
    println!(
        "best: N = {}, mu = {:.5}, S0 = {}, theta = {:.1}, fitness {}/{}",
        best.genome.canon_year_size,
        best.genome.mu,
        best.genome.s0,
        best.genome.theta(),
        best.fitness,
        file.targets.max_fitness()
    );
    if let Some(stats) = &best.stats {
        println!("{}", serde_json::to_string_pretty(stats)?);
    }
    Ok(())
}
