use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;

use super::manifest::RunManifest;
use super::simulate::{counts_file_name, run_dir_name};
use super::tables::{read_counts, read_series, read_top, Table};
use crate::ingest::{read_manifest, read_year_top, StoreManifest, STORE_FORMAT};
use crate::stats::{
    fit_heaps, fit_turnover_decay, fit_zipf_mle, turnover_profile, turnover_series, RankedList, ZipfOptions,
};
use crate::ORIGIN_YEAR;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    Zipf,
    Heaps,
    TurnoverDecay,
    TurnoverProfile,
}

impl Figure {
    pub fn table_name(self) -> &'static str {
        match self {
            Figure::Zipf => "zipf.tsv",
            Figure::Heaps => "heaps.tsv",
            Figure::TurnoverDecay => "turnover_decay.tsv",
            Figure::TurnoverProfile => "turnover_profile.tsv",
        }
    }
}

/// Options shared by all figures; unused ones are ignored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeOptions {
    pub figure: Figure,
    pub min_year: Option<i64>,
    pub max_year: Option<i64>,
    /// Snapshot year for `zipf`.
    pub year: Option<i64>,
    /// List size for `turnover-decay`.
    pub y: usize,
    pub center_year: Option<i64>,
    pub half_window: i64,
    pub y_values: Vec<usize>,
    /// Which run of a multi-run simulate directory.
    pub run: usize,
}

impl AnalyzeOptions {
    pub fn new(figure: Figure) -> Self {
        Self {
            figure,
            min_year: None,
            max_year: None,
            year: None,
            y: 100,
            center_year: None,
            half_window: 10,
            y_values: vec![10, 25, 50, 100, 250, 500, 1000],
            run: 0,
        }
    }
}

/// Pre-1800 corpus records are sparse and noisy, so corpus turnover starts
/// here unless `--min-year` says otherwise.
pub const CORPUS_TURNOVER_MIN_YEAR: i64 = 1800;
pub const CORPUS_MIN_YEAR: i64 = 1700;
pub const CORPUS_PROFILE_CENTER: i64 = 2000;

enum Source {
    Corpus { dir: PathBuf, manifest: StoreManifest },
    Run { dir: PathBuf },
}

impl Source {
    fn open(input: &Path, run: usize) -> Result<Self> {
        if let Ok(manifest) = read_manifest(input) {
            if manifest.format == STORE_FORMAT {
                return Ok(Source::Corpus { dir: input.to_path_buf(), manifest });
            }
        }
        if input.join("series.tsv").exists() {
            return Ok(Source::Run { dir: input.to_path_buf() });
        }
        let dir = input.join(run_dir_name(run));
        if dir.join("series.tsv").exists() {
            return Ok(Source::Run { dir });
        }
        bail!("{} is neither a corpus store nor a simulation output directory", input.display())
    }

    fn kind(&self) -> &'static str {
        match self {
            Source::Corpus { .. } => "corpus",
            Source::Run { .. } => "trajectory",
        }
    }

    fn years(&self) -> Result<Vec<i64>> {
        Ok(match self {
            Source::Corpus { manifest, .. } => manifest.years.iter().map(|y| i64::from(y.year)).collect(),
            Source::Run { dir } => read_series(&dir.join("series.tsv"))?.1.iter().map(|r| r.year).collect(),
        })
    }

    /// Year range after defaults; corpus turnover starts later.
    fn range(&self, opts: &AnalyzeOptions, turnover: bool) -> Result<(i64, i64)> {
        let years = self.years()?;
        let (first, last) = (*years.first().ok_or_else(|| anyhow!("input has no years"))?, *years.last().unwrap());
        let default_min = match self {
            Source::Corpus { .. } if turnover => CORPUS_TURNOVER_MIN_YEAR,
            Source::Corpus { .. } => CORPUS_MIN_YEAR,
            Source::Run { .. } => first,
        };
        let lo = opts.min_year.unwrap_or(default_min);
        let hi = opts.max_year.unwrap_or(last);
        if lo > hi {
            bail!("empty year range {lo}..={hi}");
        }
        Ok((lo, hi))
    }

    fn top_lists(&self, lo: i64, hi: i64, depth: usize) -> Result<Vec<RankedList<String>>> {
        match self {
            Source::Corpus { dir, manifest } => manifest
                .years
                .iter()
                .filter(|y| (lo..=hi).contains(&i64::from(y.year)))
                .map(|y| Ok(read_year_top(dir, y.year, depth)?))
                .collect(),
            Source::Run { dir } => {
                let mut lists = read_top(&dir.join("top.tsv"))?;
                lists.retain(|l| (lo..=hi).contains(&l.year));
                Ok(lists)
            }
        }
    }
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    figure: Figure,
    source: &'static str,
    input: String,
    options: &'a AnalyzeOptions,
    parameters: serde_json::Value,
    /// Fitted parameters, or `null` with `fit_error` set.
    fit: serde_json::Value,
    fit_error: Option<String>,
}

pub struct AnalyzeOutput {
    pub table: Table,
    pub fit: serde_json::Value,
    pub fit_error: Option<String>,
}

fn fit_value<T: Serialize, E: std::fmt::Display>(r: &std::result::Result<T, E>) -> (serde_json::Value, Option<String>) {
    match r {
        Ok(v) => (serde_json::to_value(v).unwrap_or(serde_json::Value::Null), None),
        Err(e) => (serde_json::Value::Null, Some(e.to_string())),
    }
}

fn zipf(source: &Source, opts: &AnalyzeOptions) -> Result<(AnalyzeOutput, serde_json::Value)> {
    let (list, denom, normalized_by) = match source {
        Source::Corpus { dir, manifest } => {
            let year = opts.year.unwrap_or_else(|| manifest.years.last().map_or(0, |y| i64::from(y.year)));
            let summary = manifest
                .years
                .iter()
                .find(|y| i64::from(y.year) == year)
                .ok_or_else(|| anyhow!("year {year} is not in the store"))?;
            let list = read_year_top(dir, summary.year, usize::MAX)?;
            (list, summary.reference_count as f64, manifest.settings.reference_word.clone())
        }
        Source::Run { dir } => {
            let (_, series) = read_series(&dir.join("series.tsv"))?;
            let year = match opts.year {
                Some(y) => y,
                None => retained_years(dir)?
                    .first()
                    .copied()
                    .ok_or_else(|| anyhow!("{} has no retained year counts; simulate with retain_years", dir.display()))?,
            };
            let row = series.iter().find(|r| r.year == year).ok_or_else(|| anyhow!("year {year} is not in the trajectory"))?;
            let path = dir.join(counts_file_name(row.t));
            if !path.exists() {
                bail!("year {year} (t = {}) was not retained; simulate with retain_years = [{}]", row.t, row.t);
            }
            (read_counts(&path, year)?, row.corpus_size as f64, "total".to_owned())
        }
    };
    let mut table = Table::new(&["year", "rank", "count", "normalized"]);
    for (i, c) in list.counts().enumerate() {
        table.push(vec![list.year.to_string(), (i + 1).to_string(), c.to_string(), (c as f64 / denom).to_string()]);
    }
    let counts: Vec<u64> = list.counts().collect();
    let (fit, fit_error) = fit_value(&fit_zipf_mle(&counts, ZipfOptions::default()));
    Ok((AnalyzeOutput { table, fit, fit_error }, json!({ "year": list.year, "normalized_by": normalized_by })))
}

fn retained_years(dir: &Path) -> Result<Vec<i64>> {
    let mut ts: Vec<i64> = fs::read_dir(dir)?
        .filter_map(|e| {
            let name = e.ok()?.file_name().into_string().ok()?;
            name.strip_prefix("counts_t")?.strip_suffix(".tsv")?.parse::<i64>().ok()
        })
        .collect();
    ts.sort_unstable();
    Ok(ts.into_iter().map(|t| ORIGIN_YEAR + t).collect())
}

fn heaps(source: &Source, opts: &AnalyzeOptions) -> Result<(AnalyzeOutput, serde_json::Value)> {
    let (lo, hi) = source.range(opts, false)?;
    let points: Vec<(i64, u64, u64)> = match source {
        Source::Corpus { manifest, .. } => {
            manifest.years.iter().map(|y| (i64::from(y.year), y.total, y.vocabulary)).collect()
        }
        Source::Run { dir } => {
            read_series(&dir.join("series.tsv"))?.1.iter().map(|r| (r.year, r.corpus_size, r.vocabulary)).collect()
        }
    };
    let points: Vec<_> = points.into_iter().filter(|p| (lo..=hi).contains(&p.0)).collect();
    if points.is_empty() {
        bail!("no years in {lo}..={hi}");
    }
    let fit = fit_heaps(&points.iter().map(|&(_, n, v)| (n as f64, v as f64)).collect::<Vec<_>>());
    let mut table = Table::new(&["year", "N", "v", "v_fit"]);
    for &(year, n, v) in &points {
        let pred = fit.as_ref().map_or("NA".to_owned(), |f| f.predict(n as f64).to_string());
        table.push(vec![year.to_string(), n.to_string(), v.to_string(), pred]);
    }
    let (fit, fit_error) = fit_value(&fit);
    Ok((AnalyzeOutput { table, fit, fit_error }, json!({ "min_year": lo, "max_year": hi })))
}

fn decay(source: &Source, opts: &AnalyzeOptions) -> Result<(AnalyzeOutput, serde_json::Value)> {
    let (lo, hi) = source.range(opts, true)?;
    let lists = source.top_lists(lo, hi, opts.y)?;
    let series = turnover_series(&lists, opts.y).with_context(|| format!("turnover of the top {} in {lo}..={hi}", opts.y))?;
    let fit = fit_turnover_decay(&series);
    let mut table = Table::new(&["year", "z", "z_fit"]);
    for &(year, z) in &series.points {
        let pred = fit.as_ref().map_or("NA".to_owned(), |f| f.predict((year - series.origin) as f64).to_string());
        table.push(vec![year.to_string(), z.to_string(), pred]);
    }
    let (fit, fit_error) = fit_value(&fit);
    Ok((
        AnalyzeOutput { table, fit, fit_error },
        json!({ "min_year": lo, "max_year": hi, "y": opts.y, "origin": series.origin, "gaps": series.gaps }),
    ))
}

fn profile(source: &Source, opts: &AnalyzeOptions) -> Result<(AnalyzeOutput, serde_json::Value)> {
    let years = source.years()?;
    let center = match (opts.center_year, source) {
        (Some(c), _) => c,
        (None, Source::Corpus { .. }) => CORPUS_PROFILE_CENTER,
        (None, Source::Run { .. }) => years.last().copied().unwrap_or(0) + 1 - opts.half_window,
    };
    let depth = opts.y_values.iter().copied().max().unwrap_or(0);
    let lists = source.top_lists(center - opts.half_window - 1, center + opts.half_window - 1, depth)?;
    let prof = turnover_profile(&lists, center, opts.half_window, &opts.y_values)
        .with_context(|| format!("turnover profile around {center}"))?;
    let mut table = Table::new(&["y", "mean_z", "z_fit"]);
    for &(y, z) in &prof.points {
        let pred = prof.coefficient * (y as f64).powf(prof.exponent);
        table.push(vec![y.to_string(), z.to_string(), pred.to_string()]);
    }
    let fit = json!({ "exponent": prof.exponent, "coefficient": prof.coefficient, "r_squared": prof.r_squared });
    let fit_error = None;
    Ok((
        AnalyzeOutput { table, fit, fit_error },
        json!({ "center_year": center, "half_window": opts.half_window }),
    ))
}

/// Emits one figure's table, `summary.json` and a manifest into `out`.
/// A fit that cannot be computed is reported in the summary; missing years
/// or list depth are errors.
pub fn analyze_to_dir(input: &Path, opts: &AnalyzeOptions, out: &Path) -> Result<AnalyzeOutput> {
    let started = Instant::now();
    let source = Source::open(input, opts.run)?;
    let (output, parameters) = match opts.figure {
        Figure::Zipf => zipf(&source, opts)?,
        Figure::Heaps => heaps(&source, opts)?,
        Figure::TurnoverDecay => decay(&source, opts)?,
        Figure::TurnoverProfile => profile(&source, opts)?,
    };
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    output.table.write(&out.join(opts.figure.table_name()))?;
    let summary = Summary {
        figure: opts.figure,
        source: source.kind(),
        input: input.display().to_string(),
        options: opts,
        parameters,
        fit: output.fit.clone(),
        fit_error: output.fit_error.clone(),
    };
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    fs::write(out.join("summary.json"), json)?;

    let mut manifest = RunManifest::new("analyze", opts)?;
    let data_manifest = match &source {
        Source::Corpus { dir, .. } => dir.join(crate::ingest::MANIFEST_FILE),
        Source::Run { dir } => dir.join("series.tsv"),
    };
    manifest.add_input(&data_manifest)?;
    manifest.outputs = vec![opts.figure.table_name().to_owned(), "summary.json".to_owned()];
    manifest.wall_clock_secs = started.elapsed().as_secs_f64();
    manifest.write(out)?;
    Ok(output)
}
