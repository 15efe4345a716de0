//! Builds a per-year word-count store from decompressed 1-gram files and
//! reports what the filters kept.
//!
//! ```text
//! cargo run --release --example ingest_corpus -- OUT_DIR [FILE...]
//! ```
//!
//! Without files, the bundled test fixtures are used.

use std::path::PathBuf;

use neutral_lexicon::ingest::{build_corpus_store, normalize_by_reference, write_store, IngestSettings};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "ingest_store".into()));
    let mut files: Vec<PathBuf> = args.map(PathBuf::from).collect();
    if files.is_empty() {
        let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
        files = vec![fixtures.join("corpus_a.tsv"), fixtures.join("corpus_b.tsv")];
    }
    let settings = IngestSettings::default();
    let store = build_corpus_store(&files, &settings)?;
    let r = store.retention();
    println!(
        "{} lines: {} kept, {} malformed, {} outside years, {} symbol/number, {} triple consonant",
        r.lines, r.kept, r.malformed, r.out_of_range, r.rejected_symbol_or_number, r.rejected_triple_consonant
    );
    for (year, table) in store.years() {
        let top = table.top(year, 3);
        let words: Vec<String> = top
            .entries()
            .iter()
            .map(|(w, _)| Ok(format!("{w} {:.3}", normalize_by_reference(&store, w, year)?)))
            .collect::<anyhow::Result<_>>()?;
        println!("{year}: total {:6}  vocabulary {:4}  top {}", table.total(), table.vocabulary(), words.join(", "));
    }
    let manifest = write_store(&store, &out)?;
    println!("wrote {} year files to {}", manifest.years.len(), out.display());
    Ok(())
}
