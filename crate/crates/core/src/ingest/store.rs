use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::filter::{filter_word, FilterSettings, RejectReason, Verdict};
use super::parse::parse_ngram_stream;
use super::{IngestError, Result};
use crate::stats::RankedList;

pub const STORE_FORMAT: &str = "neutral-lexicon-store/1";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestSettings {
    pub filter: FilterSettings,
    pub min_year: i32,
    pub max_year: i32,
    /// Word whose yearly count normalises the others. Years where it is
    /// absent are dropped.
    pub reference_word: String,
}

impl Default for IngestSettings {
    fn default() -> Self {
        Self {
            filter: FilterSettings::default(),
            min_year: 1700,
            max_year: 2008,
            reference_word: "the".into(),
        }
    }
}

impl IngestSettings {
    pub fn validate(&self) -> Result<()> {
        if self.min_year > self.max_year {
            return Err(IngestError::EmptyRange { min_year: self.min_year, max_year: self.max_year });
        }
        if filter_word(&self.reference_word, &self.filter) != Verdict::Accept {
            return Err(IngestError::Settings(format!(
                "reference word {:?} would itself be filtered out",
                self.reference_word
            )));
        }
        Ok(())
    }

    fn fold(&self, surface: &str) -> String {
        if self.filter.case_fold {
            surface.to_lowercase()
        } else {
            surface.to_owned()
        }
    }
}

/// What happened to the lines of one or more input files.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetentionStats {
    pub lines: u64,
    pub malformed: u64,
    pub out_of_range: u64,
    pub rejected_empty: u64,
    pub rejected_symbol_or_number: u64,
    pub rejected_triple_consonant: u64,
    pub kept: u64,
}

impl RetentionStats {
    fn reject(&mut self, reason: RejectReason) {
        match reason {
            RejectReason::Empty => self.rejected_empty += 1,
            RejectReason::SymbolOrNumber => self.rejected_symbol_or_number += 1,
            RejectReason::TripleConsonant => self.rejected_triple_consonant += 1,
        }
    }

    pub fn merge(&mut self, other: &RetentionStats) {
        self.lines += other.lines;
        self.malformed += other.malformed;
        self.out_of_range += other.out_of_range;
        self.rejected_empty += other.rejected_empty;
        self.rejected_symbol_or_number += other.rejected_symbol_or_number;
        self.rejected_triple_consonant += other.rejected_triple_consonant;
        self.kept += other.kept;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceInfo {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
    pub retention: RetentionStats,
}

/// Word counts of one year.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct YearTable {
    counts: HashMap<String, u64>,
    total: u64,
}

impl YearTable {
    pub fn from_counts(counts: HashMap<String, u64>) -> Self {
        let total = counts.values().sum();
        Self { counts, total }
    }

    fn add(&mut self, word: String, n: u64) {
        *self.counts.entry(word).or_insert(0) += n;
        self.total += n;
    }

    fn merge(&mut self, other: YearTable) {
        for (word, n) in other.counts {
            self.add(word, n);
        }
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &HashMap<String, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn vocabulary(&self) -> usize {
        self.counts.len()
    }

    pub fn ranked(&self, year: i32) -> RankedList<String> {
        RankedList::from_counts(i64::from(year), self.counts.iter().map(|(w, &n)| (w.clone(), n)))
    }

    pub fn top(&self, year: i32, k: usize) -> RankedList<String> {
        RankedList::top_of(i64::from(year), self.counts.iter().map(|(w, &n)| (w.clone(), n)), k)
    }
}

/// Filtered, aggregated per-year 1-gram counts with their provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusStore {
    settings: IngestSettings,
    sources: Vec<SourceInfo>,
    years: BTreeMap<i32, YearTable>,
    dropped_years: Vec<i32>,
}

impl CorpusStore {
    /// Builds a store from tables already in memory. Years where the
    /// reference word is missing are dropped.
    pub fn from_tables(settings: IngestSettings, sources: Vec<SourceInfo>, tables: BTreeMap<i32, YearTable>) -> Result<Self> {
        settings.validate()?;
        let mut years = BTreeMap::new();
        let mut dropped_years = Vec::new();
        for (year, table) in tables {
            if !(settings.min_year..=settings.max_year).contains(&year) || table.total == 0 {
                continue;
            }
            if table.count(&settings.reference_word) == 0 {
                dropped_years.push(year);
            } else {
                years.insert(year, table);
            }
        }
        if years.is_empty() {
            return Err(IngestError::NoRecords);
        }
        let mut sources = sources;
        sources.sort_by(|a, b| a.path.cmp(&b.path));
        Ok(Self { settings, sources, years, dropped_years })
    }

    pub fn settings(&self) -> &IngestSettings {
        &self.settings
    }

    pub fn sources(&self) -> &[SourceInfo] {
        &self.sources
    }

    /// Totals over all sources.
    pub fn retention(&self) -> RetentionStats {
        let mut total = RetentionStats::default();
        for s in &self.sources {
            total.merge(&s.retention);
        }
        total
    }

    pub fn years(&self) -> impl Iterator<Item = (i32, &YearTable)> + '_ {
        self.years.iter().map(|(&y, t)| (y, t))
    }

    pub fn year(&self, year: i32) -> Option<&YearTable> {
        self.years.get(&year)
    }

    /// Years with records but without the reference word.
    pub fn dropped_years(&self) -> &[i32] {
        &self.dropped_years
    }

    pub fn reference_count(&self, year: i32) -> Option<u64> {
        self.years.get(&year).map(|t| t.count(&self.settings.reference_word))
    }

    /// `(N_t, v_t)` for every retained year in `[from, to]`.
    pub fn heaps_points(&self, from: i32, to: i32) -> Vec<(i32, u64, u64)> {
        self.years
            .range(from..=to)
            .map(|(&y, t)| (y, t.total(), t.vocabulary() as u64))
            .collect()
    }

    /// Top-`k` lists of every retained year in `[from, to]`.
    pub fn top_lists(&self, from: i32, to: i32, k: usize) -> Vec<RankedList<String>> {
        self.years.range(from..=to).map(|(&y, t)| t.top(y, k)).collect()
    }
}

/// Count of `word` in `year` divided by the reference word's count that year.
pub fn normalize_by_reference(store: &CorpusStore, word: &str, year: i32) -> Result<f64> {
    let table = store.year(year).ok_or(IngestError::MissingYear(year))?;
    let reference = table.count(&store.settings.reference_word);
    if reference == 0 {
        return Err(IngestError::MissingReference { word: store.settings.reference_word.clone(), year });
    }
    Ok(table.count(&store.settings.fold(word)) as f64 / reference as f64)
}

/// Forwards reads while hashing every byte.
struct HashingReader<R> {
    inner: R,
    hasher: Sha256,
    bytes: u64,
}

impl<R: Read> Read for HashingReader<R> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        let n = self.inner.read(buf)?;
        self.hasher.update(&buf[..n]);
        self.bytes += n as u64;
        Ok(n)
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> IngestError + '_ {
    move |source| IngestError::Io { path: path.to_path_buf(), source }
}

/// Parses and filters one file into per-year tables.
pub fn ingest_file(path: &Path, settings: &IngestSettings) -> Result<(SourceInfo, BTreeMap<i32, YearTable>)> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut hashing = HashingReader { inner: file, hasher: Sha256::new(), bytes: 0 };
    let mut stats = RetentionStats::default();
    let mut tables: BTreeMap<i32, YearTable> = BTreeMap::new();
    {
        let mut records = parse_ngram_stream(BufReader::new(&mut hashing));
        for record in records.by_ref() {
            let record = record.map_err(io_err(path))?;
            if !(settings.min_year..=settings.max_year).contains(&record.year) {
                stats.out_of_range += 1;
                continue;
            }
            match filter_word(&record.surface, &settings.filter) {
                Verdict::Reject(reason) => stats.reject(reason),
                Verdict::Accept => {
                    stats.kept += 1;
                    tables.entry(record.year).or_default().add(settings.fold(&record.surface), record.match_count);
                }
            }
        }
        stats.lines = records.lines();
        stats.malformed = records.malformed();
    }
    let source = SourceInfo {
        path: path.display().to_string(),
        sha256: hex::encode(hashing.hasher.finalize()),
        bytes: hashing.bytes,
        retention: stats,
    };
    Ok((source, tables))
}

/// Ingests `files` in parallel and merges them. The result does not depend
/// on the order of `files`.
pub fn build_corpus_store<P: AsRef<Path> + Sync>(files: &[P], settings: &IngestSettings) -> Result<CorpusStore> {
    if files.is_empty() {
        return Err(IngestError::NoInput);
    }
    settings.validate()?;
    let parts = files
        .par_iter()
        .map(|p| ingest_file(p.as_ref(), settings))
        .collect::<Result<Vec<_>>>()?;
    let mut sources = Vec::with_capacity(parts.len());
    let mut merged: BTreeMap<i32, YearTable> = BTreeMap::new();
    for (source, tables) in parts {
        sources.push(source);
        for (year, table) in tables {
            merged.entry(year).or_default().merge(table);
        }
    }
    CorpusStore::from_tables(settings.clone(), sources, merged)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearSummary {
    pub year: i32,
    pub file: String,
    pub total: u64,
    pub vocabulary: u64,
    pub reference_count: u64,
    pub sha256: String,
}

/// Contents of `manifest.json` in a store directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoreManifest {
    pub format: String,
    pub settings: IngestSettings,
    pub sources: Vec<SourceInfo>,
    pub retention: RetentionStats,
    pub years: Vec<YearSummary>,
    pub dropped_years: Vec<i32>,
}

pub fn year_file_name(year: i32) -> String {
    format!("year_{year:04}.tsv")
}

fn render_year(table: &YearTable, year: i32) -> String {
    let mut out = String::new();
    for (word, n) in table.ranked(year).entries() {
        out.push_str(word);
        out.push('\t');
        out.push_str(&n.to_string());
        out.push('\n');
    }
    out
}

/// Writes one `year_YYYY.tsv` per retained year plus `manifest.json`.
/// Identical stores produce byte-identical directories.
pub fn write_store(store: &CorpusStore, dir: &Path) -> Result<StoreManifest> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut years = Vec::with_capacity(store.years.len());
    for (&year, table) in &store.years {
        let file = year_file_name(year);
        let body = render_year(table, year);
        let path = dir.join(&file);
        fs::write(&path, body.as_bytes()).map_err(io_err(&path))?;
        years.push(YearSummary {
            year,
            file,
            total: table.total(),
            vocabulary: table.vocabulary() as u64,
            reference_count: table.count(&store.settings.reference_word),
            sha256: hex::encode(Sha256::digest(body.as_bytes())),
        });
    }
    let manifest = StoreManifest {
        format: STORE_FORMAT.into(),
        settings: store.settings.clone(),
        sources: store.sources.clone(),
        retention: store.retention(),
        years,
        dropped_years: store.dropped_years.clone(),
    };
    let path = dir.join(MANIFEST_FILE);
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    fs::write(&path, json).map_err(io_err(&path))?;
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<StoreManifest> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    let manifest: StoreManifest = serde_json::from_str(&text)?;
    if manifest.format != STORE_FORMAT {
        return Err(IngestError::Corrupt { path, reason: format!("unknown format {:?}", manifest.format) });
    }
    Ok(manifest)
}

fn parse_row(line: &str, path: &Path, lineno: usize) -> Result<(String, u64)> {
    let corrupt = |reason: &str| IngestError::Corrupt { path: path.to_path_buf(), reason: format!("line {lineno}: {reason}") };
    let (word, n) = line.split_once('\t').ok_or_else(|| corrupt("expected surface<TAB>count"))?;
    let n = n.parse().map_err(|_| corrupt("count is not an integer"))?;
    Ok((word.to_owned(), n))
}

/// Loads a store, checking every year file against the manifest.
pub fn read_store(dir: &Path) -> Result<CorpusStore> {
    let manifest = read_manifest(dir)?;
    let mut years = BTreeMap::new();
    for summary in &manifest.years {
        let path = dir.join(&summary.file);
        let body = fs::read(&path).map_err(io_err(&path))?;
        if hex::encode(Sha256::digest(&body)) != summary.sha256 {
            return Err(IngestError::Corrupt { path, reason: "checksum mismatch".into() });
        }
        let text = String::from_utf8(body).map_err(|_| IngestError::Corrupt { path: path.clone(), reason: "not UTF-8".into() })?;
        let mut counts = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let (word, n) = parse_row(line, &path, i + 1)?;
            counts.insert(word, n);
        }
        let table = YearTable::from_counts(counts);
        if table.total() != summary.total || table.vocabulary() as u64 != summary.vocabulary {
            return Err(IngestError::Corrupt { path, reason: "totals disagree with the manifest".into() });
        }
        years.insert(summary.year, table);
    }
    Ok(CorpusStore {
        settings: manifest.settings,
        sources: manifest.sources,
        years,
        dropped_years: manifest.dropped_years,
    })
}

/// Reads only the first `k` rows of one year file. Year files are stored in
/// rank order, so this is the year's top-`k` list.
pub fn read_year_top(dir: &Path, year: i32, k: usize) -> Result<RankedList<String>> {
    let path: PathBuf = dir.join(year_file_name(year));
    let file = File::open(&path).map_err(io_err(&path))?;
    let mut entries = Vec::with_capacity(k.min(1 << 16));
    for (i, line) in BufReader::new(file).lines().take(k).enumerate() {
        let line = line.map_err(io_err(&path))?;
        entries.push(parse_row(&line, &path, i + 1)?);
    }
    RankedList::from_sorted(i64::from(year), entries)
        .map_err(|e| IngestError::Corrupt { path, reason: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(pairs: &[(&str, u64)]) -> YearTable {
        YearTable::from_counts(pairs.iter().map(|&(w, n)| (w.to_owned(), n)).collect())
    }

    fn store(pairs: &[(i32, &[(&str, u64)])]) -> CorpusStore {
        let tables = pairs.iter().map(|&(y, p)| (y, table(p))).collect();
        CorpusStore::from_tables(IngestSettings::default(), vec![], tables).unwrap()
    }

    #[test]
    fn normalization_examples() {
        let s = store(&[(1800, &[("the", 1000), ("cat", 10)])]);
        assert_eq!(normalize_by_reference(&s, "cat", 1800).unwrap(), 0.01);
        assert_eq!(normalize_by_reference(&s, "Cat", 1800).unwrap(), 0.01);
        assert_eq!(normalize_by_reference(&s, "dog", 1800).unwrap(), 0.0);
        assert_eq!(normalize_by_reference(&s, "the", 1800).unwrap(), 1.0);
        assert!(matches!(normalize_by_reference(&s, "cat", 1801), Err(IngestError::MissingYear(1801))));
    }

    #[test]
    fn years_without_reference_are_dropped() {
        let s = store(&[(1800, &[("the", 5)]), (1801, &[("cat", 3)])]);
        assert_eq!(s.dropped_years(), &[1801]);
        assert!(s.year(1801).is_none());
    }

    #[test]
    fn nothing_retained_is_an_error() {
        let tables = [(1800, table(&[("cat", 3)]))].into_iter().collect();
        assert!(matches!(
            CorpusStore::from_tables(IngestSettings::default(), vec![], tables),
            Err(IngestError::NoRecords)
        ));
    }

    #[test]
    fn inverted_range_is_rejected() {
        let settings = IngestSettings { min_year: 1900, max_year: 1800, ..Default::default() };
        assert!(matches!(settings.validate(), Err(IngestError::EmptyRange { .. })));
    }

    #[test]
    fn year_file_is_rank_ordered() {
        let t = table(&[("b", 2), ("the", 9), ("a", 2)]);
        assert_eq!(render_year(&t, 1800), "the\t9\na\t2\nb\t2\n");
    }
}
