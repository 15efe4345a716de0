use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use neutral_lexicon::cli::tables::{read_aggregate, read_fits, read_series, read_top, Table};
use neutral_lexicon::cli::{read_population, RunManifest};
use neutral_lexicon::ga::read_log_jsonl;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_neutral-lexicon"));
    cmd.env("NEUTRAL_LEXICON_WORKERS", "2");
    cmd
}

fn crate_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn run(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("binary runs");
    assert!(
        out.status.success(),
        "{cmd:?} failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn simulate_quick(out: &Path, runs: usize) {
    run(bin()
        .arg("simulate")
        .arg(crate_path("examples/configs/fnm_quick.toml"))
        .args(["--runs", &runs.to_string(), "--seed", "11", "--out"])
        .arg(out));
}

#[test]
fn predict_prints_value_and_flag() {
    let out = run(bin().args(["predict", "--mu", "0.003", "--y", "50", "--n", "10000"]));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "5.491095\tvalid\n");

    let out = run(bin().args(["predict", "--mu", "0.003", "--y", "10000", "--n", "10000"]));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end().split('\t').nth(1), Some("invalid"));

    let out = run(bin().args(["predict", "--mu", "0.3", "--y", "0", "--n", "77"]));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("0.000000\t"));

    let strict = bin().args(["predict", "--mu", "0.003", "--y", "10000", "--n", "10000", "--strict"]).output().unwrap();
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn simulate_writes_round_trippable_tables() {
    let dir = tempfile::tempdir().unwrap();
    simulate_quick(dir.path(), 3);
    let (sizes, series) = read_series(&dir.path().join("run_000/series.tsv")).unwrap();
    assert_eq!(sizes, vec![50, 100]);
    assert_eq!(series.len(), 80);
    let agg = read_aggregate(&dir.path().join("aggregate.tsv"), &sizes).unwrap();
    assert_eq!(agg.len(), 80);
    assert_eq!(agg[5].runs, 3);
    assert_eq!(read_fits(&dir.path().join("fits.tsv"), &sizes).unwrap().len(), 3);
    assert_eq!(read_top(&dir.path().join("run_002/top.tsv")).unwrap().len(), 80);

    let manifest = RunManifest::read(dir.path()).unwrap();
    assert_eq!(manifest.command, "simulate");
    assert_eq!(manifest.seeds.len(), 3);
    assert_eq!(manifest.config["sim"]["seed"], 11);
    assert_eq!(manifest.inputs.len(), 1);
    for output in &manifest.outputs {
        assert!(dir.path().join(output).exists(), "{output}");
    }
    let manifests = walk(dir.path()).into_iter().filter(|p| p.ends_with("manifest.json")).count();
    assert_eq!(manifests, 1);
}

fn walk(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out.sort();
    out
}

#[test]
fn invalid_config_fails_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "model = \"fnm\"\nn0 = 100\nmu = 1.5\nsteps = 3\n").unwrap();
    let out = bin().arg("simulate").arg(&cfg).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mu"));

    fs::write(&cfg, "model = \"fnm\"\nn0 = 100\nmu = 0.1\nsteps = 3\ncolour = 1\n").unwrap();
    let out = bin().arg("simulate").arg(&cfg).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn ingest_reports_retention_and_writes_store() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(bin()
        .arg("ingest")
        .arg(crate_path("tests/fixtures/corpus_a.tsv"))
        .arg(crate_path("tests/fixtures/corpus_b.tsv"))
        .arg("--config")
        .arg(crate_path("examples/configs/ingest.toml"))
        .arg("--out")
        .arg(dir.path()));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("kept:                  12"), "{text}");
    assert!(text.contains("rejected (triple):     1"), "{text}");
    assert!(text.contains("[1803]"), "{text}");
    assert_eq!(
        fs::read(dir.path().join("year_1801.tsv")).unwrap(),
        fs::read(crate_path("tests/fixtures/expected_store/year_1801.tsv")).unwrap()
    );
}

#[test]
fn ingest_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let none = bin().args(["ingest", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(none.status.code(), Some(2));

    let inverted = bin()
        .arg("ingest")
        .arg(crate_path("tests/fixtures/corpus_a.tsv"))
        .args(["--min-year", "1900", "--max-year", "1800", "--out"])
        .arg(dir.path().join("s"))
        .output()
        .unwrap();
    assert_eq!(inverted.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&inverted.stderr).contains("empty year range"));
}

fn analyze(input: &Path, figure: &str, out: &Path, extra: &[&str]) -> Output {
    run(bin().arg("analyze").arg(input).args(["--figure", figure, "--out"]).arg(out).args(extra))
}

#[test]
fn analyze_emits_every_figure_for_a_simulation() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim");
    simulate_quick(&sim, 1);

    let out = dir.path().join("heaps");
    analyze(&sim, "heaps", &out, &[]);
    let t = Table::read_expecting(&out.join("heaps.tsv"), &["year", "N", "v", "v_fit"]).unwrap();
    assert_eq!(t.rows.len(), 80);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let b = summary["fit"]["exponent_b"].as_f64().unwrap();
    assert!(b > 0.5 && b < 1.2, "{b}");
    assert!(out.join("manifest.json").exists());

    let out = dir.path().join("zipf");
    analyze(&sim, "zipf", &out, &[]);
    let t = Table::read_expecting(&out.join("zipf.tsv"), &["year", "rank", "count", "normalized"]).unwrap();
    assert_eq!(t.rows[0][0], "1740");

    let out = dir.path().join("decay");
    analyze(&sim, "turnover-decay", &out, &["--y", "50"]);
    Table::read_expecting(&out.join("turnover_decay.tsv"), &["year", "z", "z_fit"]).unwrap();

    let out = dir.path().join("profile");
    analyze(&sim, "turnover-profile", &out, &["--y-values", "10,20,50,100", "--half-window", "5"]);
    let t = Table::read_expecting(&out.join("turnover_profile.tsv"), &["y", "mean_z", "z_fit"]).unwrap();
    assert_eq!(t.rows.len(), 4);
}

#[test]
fn analyze_reports_missing_depth() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim");
    simulate_quick(&sim, 1);
    let out = bin()
        .arg("analyze")
        .arg(&sim)
        .args(["--figure", "turnover-profile", "--y-values", "10,500", "--out"])
        .arg(dir.path().join("p"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("500 ranked words"));
}

#[test]
fn analyze_reads_a_corpus_store() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store");
    run(bin().arg("ingest").arg(crate_path("tests/fixtures/corpus_a.tsv")).arg(crate_path("tests/fixtures/corpus_b.tsv")).arg("--out").arg(&store));

    let out = dir.path().join("heaps");
    analyze(&store, "heaps", &out, &[]);
    let t = Table::read(&out.join("heaps.tsv")).unwrap();
    assert_eq!(t.rows.iter().map(|r| r[1].as_str()).collect::<Vec<_>>(), ["140", "170", "242"]);

    let out = dir.path().join("zipf");
    analyze(&store, "zipf", &out, &["--year", "1802"]);
    let t = Table::read(&out.join("zipf.tsv")).unwrap();
    assert_eq!(t.rows[1], ["1802", "2", "30", "0.15"]);
}

#[test]
fn zipf_on_a_single_word_corpus_is_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("one.tsv");
    fs::write(&input, "the\t1900\t42\t3\n").unwrap();
    let store = dir.path().join("store");
    run(bin().arg("ingest").arg(&input).arg("--out").arg(&store));
    let out = dir.path().join("zipf");
    analyze(&store, "zipf", &out, &[]);
    let t = Table::read(&out.join("zipf.tsv")).unwrap();
    assert_eq!(t.rows, vec![vec!["1900", "1", "42", "1"]]);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert!(summary["fit"].is_null());
    assert!(summary["fit_error"].is_string());
}

#[test]
fn ga_with_zero_generations_scores_the_initial_population() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ga.toml");
    fs::write(
        &cfg,
        "seed = 3\n[targets]\nheaps_a = 1.4\nheaps_b = 0.54\nzipf_gamma = 1.33\n\
         [ga]\npopulation = 4\n[eval]\nreplicates = 1\nsteps = 40\nzipf_step = 20\nburn_in = 200\n",
    )
    .unwrap();
    let out = dir.path().join("ga");
    run(bin().arg("ga").arg(&cfg).args(["--generations", "0", "--out"]).arg(&out));
    let log = read_log_jsonl(fs::read(out.join("ga_log.jsonl")).unwrap().as_slice()).unwrap();
    assert_eq!(log.len(), 1);
    let pop = read_population(&out.join("population.tsv")).unwrap();
    assert_eq!(pop.len(), 4);
    assert!(pop.windows(2).all(|w| w[0].1 >= w[1].1));
    assert!(pop.iter().all(|(g, _)| g.in_bounds()));
}

fn without_wall_clock(bytes: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(bytes).unwrap();
    v.as_object_mut().unwrap().remove("wall_clock_secs");
    v
}

#[test]
fn simulate_is_reproducible_from_its_seed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    simulate_quick(a.path(), 2);
    simulate_quick(b.path(), 2);
    let files_a = walk(a.path());
    let files_b = walk(b.path());
    assert_eq!(files_a.len(), files_b.len());
    for (fa, fb) in files_a.iter().zip(&files_b) {
        assert_eq!(fa.strip_prefix(a.path()).unwrap(), fb.strip_prefix(b.path()).unwrap());
        let (x, y) = (fs::read(fa).unwrap(), fs::read(fb).unwrap());
        if fa.ends_with("manifest.json") {
            assert_eq!(without_wall_clock(&x), without_wall_clock(&y));
        } else {
            assert_eq!(x, y, "{}", fa.display());
        }
    }
}
