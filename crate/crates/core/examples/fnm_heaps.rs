//! Full-sampling model at the calibrated scale: vocabulary against corpus
//! size, and the fitted Heaps law `v = A N^b`.
//!
//! ```text
//! cargo run --release --example fnm_heaps -- [seed]
//! ```

use neutral_lexicon::sim::{self, SimConfig};
use neutral_lexicon::stats::fit_heaps;

fn main() -> anyhow::Result<()> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let traj = sim::run(&SimConfig::calibrated_fnm(seed))?;
    for r in traj.records().iter().step_by(50) {
        println!("t {:3}  N {:9}  v {:7}", r.t, r.corpus_size, r.vocabulary);
    }
    let fit = fit_heaps(&traj.heaps_points())?;
    println!("Heaps: A = {:.4}, b = {:.4} (r2 {:.4})", fit.coeff_a, fit.exponent_b, fit.r_squared);
    Ok(())
}
