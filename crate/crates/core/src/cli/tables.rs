//! Tab-separated tables with a single header row, and typed readers for the
//! tables the commands emit.

use std::fmt::Display;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

use crate::stats::RankedList;

/// Marker for a missing value.
pub const NA: &str = "NA";

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self { header: header.iter().map(|h| h.as_ref().to_owned()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join("\t");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render()).with_context(|| format!("writing {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header: Vec<String> = lines.next().ok_or_else(|| anyhow!("missing header row"))?.split('\t').map(str::to_owned).collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row: Vec<String> = line.split('\t').map(str::to_owned).collect();
            if row.len() != header.len() {
                bail!("row {} has {} fields, header has {}", i + 2, row.len(), header.len());
            }
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Reads a table and checks its header.
    pub fn read_expecting<S: AsRef<str>>(path: &Path, header: &[S]) -> Result<Self> {
        let table = Self::read(path)?;
        if !table.header.iter().map(String::as_str).eq(header.iter().map(AsRef::as_ref)) {
            bail!("{}: unexpected header {:?}", path.display(), table.header);
        }
        Ok(table)
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.header.iter().position(|h| h == name).ok_or_else(|| anyhow!("no column {name:?}"))
    }
}

pub fn cell<T: FromStr>(row: &[String], i: usize) -> Result<T>
where
    T::Err: Display,
{
    row[i].parse().map_err(|e| anyhow!("field {:?}: {e}", row[i]))
}

pub fn opt_cell<T: FromStr>(row: &[String], i: usize) -> Result<Option<T>>
where
    T::Err: Display,
{
    if row[i] == NA {
        Ok(None)
    } else {
        cell(row, i).map(Some)
    }
}

pub fn fmt_opt<T: Display>(v: Option<T>) -> String {
    v.map_or_else(|| NA.to_owned(), |v| v.to_string())
}

/// Per-year summary of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub t: u32,
    pub year: i64,
    pub corpus_size: u64,
    pub vocabulary: u64,
    pub innovations: u64,
    pub canon_total: Option<u64>,
    /// `z_y` against the previous year, one per list size.
    pub turnover: Vec<Option<u32>>,
}

pub fn series_header(list_sizes: &[usize]) -> Vec<String> {
    let mut h: Vec<String> =
        ["t", "year", "corpus_size", "vocabulary", "innovations", "canon_total"].iter().map(|s| s.to_string()).collect();
    h.extend(list_sizes.iter().map(|y| format!("z{y}")));
    h
}

pub fn series_table(rows: &[SeriesRow], list_sizes: &[usize]) -> Table {
    let mut table = Table::new(&series_header(list_sizes));
    for r in rows {
        let mut row = vec![
            r.t.to_string(),
            r.year.to_string(),
            r.corpus_size.to_string(),
            r.vocabulary.to_string(),
            r.innovations.to_string(),
            fmt_opt(r.canon_total),
        ];
        row.extend(r.turnover.iter().map(|z| fmt_opt(*z)));
        table.push(row);
    }
    table
}

/// Reads `series.tsv`, returning the list sizes of its turnover columns.
pub fn read_series(path: &Path) -> Result<(Vec<usize>, Vec<SeriesRow>)> {
    let table = Table::read(path)?;
    let sizes = table.header[6..]
        .iter()
        .map(|h| h.strip_prefix('z').and_then(|y| y.parse().ok()).ok_or_else(|| anyhow!("bad column {h:?}")))
        .collect::<Result<Vec<usize>>>()?;
    if table.header != series_header(&sizes) {
        bail!("{}: unexpected header {:?}", path.display(), table.header);
    }
    let rows = table
        .rows
        .iter()
        .map(|r| {
            Ok(SeriesRow {
                t: cell(r, 0)?,
                year: cell(r, 1)?,
                corpus_size: cell(r, 2)?,
                vocabulary: cell(r, 3)?,
                innovations: cell(r, 4)?,
                canon_total: opt_cell(r, 5)?,
                turnover: (6..r.len()).map(|i| opt_cell(r, i)).collect::<Result<_>>()?,
            })
        })
        .collect::<Result<_>>()?;
    Ok((sizes, rows))
}

pub const TOP_HEADER: [&str; 4] = ["year", "rank", "word", "count"];

pub fn top_table<K: Display>(lists: &[RankedList<K>]) -> Table {
    let mut table = Table::new(&TOP_HEADER);
    for list in lists {
        for (rank, (word, count)) in list.entries().iter().enumerate() {
            table.push(vec![list.year.to_string(), (rank + 1).to_string(), word.to_string(), count.to_string()]);
        }
    }
    table
}

/// Reads `top.tsv` back into per-year ranked lists.
pub fn read_top(path: &Path) -> Result<Vec<RankedList<String>>> {
    let table = Table::read_expecting(path, &TOP_HEADER)?;
    let mut lists = Vec::new();
    let mut current: Option<(i64, Vec<(String, u64)>)> = None;
    for r in &table.rows {
        let year: i64 = cell(r, 0)?;
        let rank: usize = cell(r, 1)?;
        let entry = (r[2].clone(), cell(r, 3)?);
        match &mut current {
            Some((y, entries)) if *y == year => {
                if rank != entries.len() + 1 {
                    bail!("{}: year {year} rank {rank} out of sequence", path.display());
                }
                entries.push(entry);
            }
            _ => {
                if rank != 1 {
                    bail!("{}: year {year} does not start at rank 1", path.display());
                }
                if let Some((y, entries)) = current.take() {
                    lists.push(RankedList::from_sorted(y, entries)?);
                }
                current = Some((year, vec![entry]));
            }
        }
    }
    if let Some((y, entries)) = current {
        lists.push(RankedList::from_sorted(y, entries)?);
    }
    Ok(lists)
}

pub const COUNTS_HEADER: [&str; 2] = ["word", "count"];

pub fn counts_table<K: Display>(list: &RankedList<K>) -> Table {
    let mut table = Table::new(&COUNTS_HEADER);
    for (word, count) in list.entries() {
        table.push(vec![word.to_string(), count.to_string()]);
    }
    table
}

pub fn read_counts(path: &Path, year: i64) -> Result<RankedList<String>> {
    let table = Table::read_expecting(path, &COUNTS_HEADER)?;
    let entries = table.rows.iter().map(|r| Ok((r[0].clone(), cell(r, 1)?))).collect::<Result<Vec<_>>>()?;
    Ok(RankedList::from_sorted(year, entries)?)
}

/// Mean and 95% band of one quantity at one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub t: u32,
    pub year: i64,
    pub runs: usize,
    pub vocabulary: Band,
    pub turnover: Vec<Option<Band>>,
}

pub fn aggregate_header(list_sizes: &[usize]) -> Vec<String> {
    let mut h: Vec<String> = ["t", "year", "runs", "v_mean", "v_p2_5", "v_p97_5"].iter().map(|s| s.to_string()).collect();
    for y in list_sizes {
        h.extend([format!("z{y}_mean"), format!("z{y}_p2_5"), format!("z{y}_p97_5")]);
    }
    h
}

pub fn aggregate_table(rows: &[AggregateRow], list_sizes: &[usize]) -> Table {
    let mut table = Table::new(&aggregate_header(list_sizes));
    for r in rows {
        let b = r.vocabulary;
        let mut row = vec![
            r.t.to_string(),
            r.year.to_string(),
            r.runs.to_string(),
            b.mean.to_string(),
            b.lo.to_string(),
            b.hi.to_string(),
        ];
        for z in &r.turnover {
            row.extend([fmt_opt(z.map(|b| b.mean)), fmt_opt(z.map(|b| b.lo)), fmt_opt(z.map(|b| b.hi))]);
        }
        table.push(row);
    }
    table
}

pub fn read_aggregate(path: &Path, list_sizes: &[usize]) -> Result<Vec<AggregateRow>> {
    let table = Table::read_expecting(path, &aggregate_header(list_sizes))?;
    table
        .rows
        .iter()
        .map(|r| {
            let band = |i: usize| -> Result<Option<Band>> {
                Ok(match (opt_cell(r, i)?, opt_cell(r, i + 1)?, opt_cell(r, i + 2)?) {
                    (Some(mean), Some(lo), Some(hi)) => Some(Band { mean, lo, hi }),
                    _ => None,
                })
            };
            Ok(AggregateRow {
                t: cell(r, 0)?,
                year: cell(r, 1)?,
                runs: cell(r, 2)?,
                vocabulary: band(3)?.ok_or_else(|| anyhow!("missing vocabulary band"))?,
                turnover: (0..list_sizes.len()).map(|k| band(6 + 3 * k)).collect::<Result<_>>()?,
            })
        })
        .collect()
}

/// Per-run fitted statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct FitRow {
    pub run: usize,
    pub seed: u64,
    pub heaps_a: Option<f64>,
    pub heaps_b: Option<f64>,
    pub heaps_r2: Option<f64>,
    /// `(decay_rate, z0, r2)` per list size.
    pub decay: Vec<(Option<f64>, Option<f64>, Option<f64>)>,
}

pub fn fits_header(list_sizes: &[usize]) -> Vec<String> {
    let mut h: Vec<String> = ["run", "seed", "heaps_a", "heaps_b", "heaps_r2"].iter().map(|s| s.to_string()).collect();
    for y in list_sizes {
        h.extend([format!("decay_rate_{y}"), format!("z0_{y}"), format!("decay_r2_{y}")]);
    }
    h
}

pub fn fits_table(rows: &[FitRow], list_sizes: &[usize]) -> Table {
    let mut table = Table::new(&fits_header(list_sizes));
    for r in rows {
        let mut row = vec![r.run.to_string(), r.seed.to_string(), fmt_opt(r.heaps_a), fmt_opt(r.heaps_b), fmt_opt(r.heaps_r2)];
        for &(rate, z0, r2) in &r.decay {
            row.extend([fmt_opt(rate), fmt_opt(z0), fmt_opt(r2)]);
        }
        table.push(row);
    }
    table
}

pub fn read_fits(path: &Path, list_sizes: &[usize]) -> Result<Vec<FitRow>> {
    let table = Table::read_expecting(path, &fits_header(list_sizes))?;
    table
        .rows
        .iter()
        .map(|r| {
            Ok(FitRow {
                run: cell(r, 0)?,
                seed: cell(r, 1)?,
                heaps_a: opt_cell(r, 2)?,
                heaps_b: opt_cell(r, 3)?,
                heaps_r2: opt_cell(r, 4)?,
                decay: (0..list_sizes.len())
                    .map(|k| Ok((opt_cell(r, 5 + 3 * k)?, opt_cell(r, 6 + 3 * k)?, opt_cell(r, 7 + 3 * k)?)))
                    .collect::<Result<_>>()?,
            })
        })
        .collect()
}
