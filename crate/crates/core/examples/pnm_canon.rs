//! Partial-sampling model: each year's sample is drawn from the whole canon
//! written so far, so vocabulary grows much more slowly than the corpus.
//!
//! ```text
//! cargo run --release --example pnm_canon -- [seed]
//! ```

use neutral_lexicon::sim::{self, SimConfig};
use neutral_lexicon::stats::fit_heaps;

fn main() -> anyhow::Result<()> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let traj = sim::run(&SimConfig::calibrated_pnm(seed))?;
    for r in traj.records().iter().step_by(50) {
        println!(
            "t {:3}  sample {:8}  canon {:9}  v {:6}",
            r.t,
            r.corpus_size,
            r.canon_total.unwrap_or(0),
            r.vocabulary
        );
    }
    let fit = fit_heaps(&traj.heaps_points())?;
    println!("Heaps: A = {:.4}, b = {:.4}", fit.coeff_a, fit.exponent_b);
    Ok(())
}
