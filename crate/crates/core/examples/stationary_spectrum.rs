//! Time-averaged number of words held by exactly k tokens in a
//! constant-size population, next to the closed-form spectrum of the
//! one-token-at-a-time copying process.
//!
//! ```text
//! cargo run --release --example stationary_spectrum
//! ```

use neutral_lexicon::sim::rng::Phase;
use neutral_lexicon::sim::FnmProcess;
use neutral_lexicon::stats::stationary_expected_count;

fn main() -> anyhow::Result<()> {
    let (n, mu, burn_in, sampled) = (1000, 0.01, 500, 2000);
    let mut process = FnmProcess::monomorphic(n, mu, 3)?;
    process.burn_in(n, burn_in, Phase::BurnIn)?;
    let mut sum = [0.0; 11];
    for step in 0..sampled {
        for (k, c) in process.advance(n, Phase::Growth, step)?.count_spectrum(10).into_iter().enumerate() {
            sum[k] += c as f64;
        }
    }
    println!(" k  simulated  closed-form");
    for k in 1..=10 {
        let expected = stationary_expected_count(n, mu, k as u64)?;
        println!("{k:2}  {:9.3}  {expected:11.3}", sum[k] / sampled as f64);
    }
    Ok(())
}
