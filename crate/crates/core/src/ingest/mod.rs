//! Google 1-gram ingestion.
//!
//! Export files (`ngram<TAB>year<TAB>match_count<TAB>volume_count`, already
//! decompressed) are parsed, cleaned and summed into per-year tables. A store
//! on disk is a directory with one `year_YYYY.tsv` per year, rows
//! `surface<TAB>count` in rank order, and a `manifest.json` recording the
//! settings, source checksums and retention counts.
//!
//! Cleaning keeps only words made of the letters a-z (after lowercasing) and
//! drops words with the same consonant three or more times in a row; `y` is
//! treated as a consonant.

mod filter;
mod parse;
mod store;

use std::path::PathBuf;

use thiserror::Error;

pub use filter::{filter_word, FilterSettings, RejectReason, Verdict};
pub use parse::{parse_line, parse_ngram_stream, NgramRecords, RawRecord};
pub use store::{
    build_corpus_store, ingest_file, normalize_by_reference, read_manifest, read_store, read_year_top,
    write_store, year_file_name, CorpusStore, IngestSettings, RetentionStats, SourceInfo, StoreManifest,
    YearSummary, YearTable, MANIFEST_FILE, STORE_FORMAT,
};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no input files")]
    NoInput,
    #[error("empty year range: min year {min_year} is after max year {max_year}")]
    EmptyRange { min_year: i32, max_year: i32 },
    #[error("no records survived filtering in the year range")]
    NoRecords,
    #[error("invalid settings: {0}")]
    Settings(String),
    #[error("year {0} is not in the store")]
    MissingYear(i32),
    #[error("reference word {word:?} is missing in year {year}")]
    MissingReference { word: String, year: i32 },
    #[error("{path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },
    #[error("manifest: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, IngestError>;
