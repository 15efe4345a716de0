//! Closed-form neutral turnover across list sizes, flagged where the
//! approximation leaves its range.
//!
//! ```text
//! cargo run --example predict_turnover -- [MU] [N]
//! ```

use neutral_lexicon::stats::{predict_neutral_turnover, Validity};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let mu: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.003);
    let n: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(10_000);
    println!("    y   turnover  valid");
    for y in [10, 25, 50, 100, 200, 500, 1000] {
        let p = predict_neutral_turnover(mu, y, n, Validity::Warn)?;
        println!("{y:5}  {:9.3}  {}", p.value, p.valid);
    }
    Ok(())
}
