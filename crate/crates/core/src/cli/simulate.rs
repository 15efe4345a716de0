use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use super::manifest::RunManifest;
use super::tables::{
    aggregate_table, counts_table, fits_table, series_table, top_table, AggregateRow, Band, FitRow, SeriesRow,
};
use crate::sim::rng::derive_seed;
use crate::sim::{self, SimConfig, Trajectory};
use crate::stats::{fit_heaps, fit_turnover_decay, mean, percentile, rank_frequency, turnover, turnover_series};
use crate::ORIGIN_YEAR;

/// Top-list sizes whose turnover is tabulated.
pub const TURNOVER_LIST_SIZES: [usize; 3] = [50, 100, 200];

pub fn run_dir_name(run: usize) -> String {
    format!("run_{run:03}")
}

pub fn counts_file_name(t: u32) -> String {
    format!("counts_t{t}.tsv")
}

#[derive(Debug, Serialize)]
struct SimulateConfig<'a> {
    sim: &'a SimConfig,
    runs: usize,
}

/// What one simulate invocation produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulateOutput {
    pub seeds: Vec<u64>,
    pub list_sizes: Vec<usize>,
    pub series: Vec<Vec<SeriesRow>>,
    pub fits: Vec<FitRow>,
    pub aggregate: Vec<AggregateRow>,
}

fn list_sizes(config: &SimConfig) -> Vec<usize> {
    TURNOVER_LIST_SIZES.iter().copied().filter(|&y| y <= config.top_k).collect()
}

fn series_rows(traj: &Trajectory, sizes: &[usize]) -> Vec<SeriesRow> {
    let records = traj.records();
    records
        .iter()
        .enumerate()
        .map(|(i, r)| SeriesRow {
            t: r.t,
            year: ORIGIN_YEAR + i64::from(r.t),
            corpus_size: r.corpus_size,
            vocabulary: r.vocabulary,
            innovations: r.innovations,
            canon_total: r.canon_total,
            turnover: sizes
                .iter()
                .map(|&y| {
                    let prev = &records[i.checked_sub(1)?].top;
                    turnover(prev, &r.top, y).ok()
                })
                .collect(),
        })
        .collect()
}

fn fit_row(run: usize, traj: &Trajectory, sizes: &[usize]) -> FitRow {
    let heaps = fit_heaps(&traj.heaps_points()).ok();
    let lists = traj.top_lists();
    FitRow {
        run,
        seed: traj.seed(),
        heaps_a: heaps.map(|h| h.coeff_a),
        heaps_b: heaps.map(|h| h.exponent_b),
        heaps_r2: heaps.map(|h| h.r_squared),
        decay: sizes
            .iter()
            .map(|&y| {
                let fit = turnover_series(&lists, y).and_then(|s| fit_turnover_decay(&s)).ok();
                (fit.map(|f| f.decay_rate), fit.map(|f| f.z0), fit.map(|f| f.r_squared))
            })
            .collect(),
    }
}

fn band(values: &[f64]) -> Option<Band> {
    (!values.is_empty()).then(|| Band { mean: mean(values), lo: percentile(values, 2.5), hi: percentile(values, 97.5) })
}

/// Mean and 2.5/97.5 percentiles across runs, step by step.
pub fn aggregate(series: &[Vec<SeriesRow>], sizes: &[usize]) -> Vec<AggregateRow> {
    let Some(first) = series.first() else {
        return Vec::new();
    };
    (0..first.len())
        .map(|i| {
            let rows: Vec<&SeriesRow> = series.iter().map(|s| &s[i]).collect();
            let v: Vec<f64> = rows.iter().map(|r| r.vocabulary as f64).collect();
            AggregateRow {
                t: first[i].t,
                year: first[i].year,
                runs: rows.len(),
                vocabulary: band(&v).expect("at least one run"),
                turnover: (0..sizes.len())
                    .map(|k| band(&rows.iter().filter_map(|r| r.turnover[k].map(f64::from)).collect::<Vec<_>>()))
                    .collect(),
            }
        })
        .collect()
}

fn write_run(dir: &Path, traj: &Trajectory, rows: &[SeriesRow], sizes: &[usize]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = vec![PathBuf::from("series.tsv"), PathBuf::from("top.tsv")];
    series_table(rows, sizes).write(&dir.join("series.tsv"))?;
    top_table(&traj.top_lists()).write(&dir.join("top.tsv"))?;
    for year in traj.retained() {
        let name = counts_file_name(year.year());
        counts_table(&rank_frequency(year)?).write(&dir.join(&name))?;
        written.push(PathBuf::from(name));
    }
    Ok(written)
}

/// Runs `runs` replicates of `config` with seeds derived from `config.seed`
/// and writes per-run tables, the across-run aggregate, per-run fits and a
/// manifest into `out`.
pub fn simulate_to_dir(config: &SimConfig, runs: usize, out: &Path, inputs: &[PathBuf]) -> Result<SimulateOutput> {
    let started = Instant::now();
    if runs == 0 {
        bail!("--runs must be at least 1");
    }
    config.validate()?;
    let sizes = list_sizes(config);
    let seeds: Vec<u64> = (0..runs).map(|r| derive_seed(config.seed, r as u64)).collect();
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;

    let per_run = seeds
        .par_iter()
        .enumerate()
        .map(|(r, &seed)| -> Result<_> {
            let traj = sim::run(&SimConfig { seed, ..config.clone() })?;
            let rows = series_rows(&traj, &sizes);
            let name = run_dir_name(r);
            let files = write_run(&out.join(&name), &traj, &rows, &sizes)?;
            let files: Vec<String> = files.iter().map(|f| format!("{name}/{}", f.display())).collect();
            Ok((rows, fit_row(r, &traj, &sizes), files))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut outputs = Vec::new();
    let mut series = Vec::with_capacity(runs);
    let mut fits = Vec::with_capacity(runs);
    for (rows, fit, files) in per_run {
        series.push(rows);
        fits.push(fit);
        outputs.extend(files);
    }
    let agg = aggregate(&series, &sizes);
    aggregate_table(&agg, &sizes).write(&out.join("aggregate.tsv"))?;
    fits_table(&fits, &sizes).write(&out.join("fits.tsv"))?;
    outputs.extend(["aggregate.tsv".to_owned(), "fits.tsv".to_owned()]);

    let mut manifest = RunManifest::new("simulate", &SimulateConfig { sim: config, runs })?;
    manifest.seeds = seeds.clone();
    for input in inputs {
        manifest.add_input(input)?;
    }
    manifest.outputs = outputs;
    manifest.wall_clock_secs = started.elapsed().as_secs_f64();
    manifest.write(out)?;
    Ok(SimulateOutput { seeds, list_sizes: sizes, series, fits, aggregate: agg })
}
