//! Yearly turnover of the top-y list in the partial-sampling model, with an
//! exponential decay fitted to it.
//!
//! ```text
//! cargo run --release --example turnover_decay -- [y] [seed]
//! ```

use neutral_lexicon::sim::{self, SimConfig};
use neutral_lexicon::stats::{fit_turnover_decay, turnover_series};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let y: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(100);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let traj = sim::run(&SimConfig::calibrated_pnm(seed))?;
    let series = turnover_series(&traj.top_lists(), y)?;
    for &(t, z) in series.points.iter().step_by(25) {
        println!("year {t}  z {z}");
    }
    let fit = fit_turnover_decay(&series)?;
    println!(
        "z ~ {:.2} exp(-{:.4} t)  (r2 {:.3}, {} zero years left out)",
        fit.z0, fit.decay_rate, fit.r_squared, fit.zeros_excluded
    );
    Ok(())
}
