//! Discrete power-law fits: a synthetic sample with known exponent, then
//! the word frequencies of a simulated year.
//!
//! ```text
//! cargo run --release --example zipf_fit
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zeta};

use neutral_lexicon::sim::{self, SimConfig};
use neutral_lexicon::stats::{fit_zipf_mle, ZipfOptions};

fn main() -> anyhow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let zeta = Zeta::new(1.75)?;
    let sample: Vec<u64> = (0..100_000).map(|_| zeta.sample(&mut rng) as u64).collect();
    let fit = fit_zipf_mle(&sample, ZipfOptions { xmin: Some(1), ..Default::default() })?;
    println!("synthetic (alpha 1.75): alpha = {:.4}", fit.alpha_pdf);

    let config = SimConfig { retain_years: vec![150], ..SimConfig::calibrated_fnm(1) };
    let traj = sim::run(&config)?;
    let year = traj.retained_year(150).expect("retained");
    let counts: Vec<u64> = year.entries().iter().map(|e| e.1).collect();
    let fit = fit_zipf_mle(&counts, ZipfOptions::default())?;
    println!(
        "FNM step 150: alpha = {:.3}, gamma = {:.3}, xmin = {}, tail {} words, KS {:.4}",
        fit.alpha_pdf, fit.gamma_zipf, fit.xmin, fit.n_tail, fit.ks_stat
    );
    Ok(())
}
