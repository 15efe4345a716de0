use rand::Rng;
use rand_distr::{Binomial, Distribution};

/// Splits `draws` among categories in proportion to `weights`.
///
/// Exact multinomial sampling by sequential conditional binomials: category
/// `i` receives `Binomial(remaining draws, w_i / remaining weight)`. Cost is
/// linear in the number of categories visited, independent of `draws`.
/// Categories after the draws are exhausted receive zero without consuming
/// randomness.
pub fn multinomial<R: Rng + ?Sized>(weights: &[u64], draws: u64, rng: &mut R) -> Vec<u64> {
    let mut out = vec![0u64; weights.len()];
    let mut remaining_weight: u64 = weights.iter().sum();
    let mut remaining = draws;
    for (slot, &w) in out.iter_mut().zip(weights) {
        if remaining == 0 {
            break;
        }
        if w == 0 {
            continue;
        }
        let x = if w >= remaining_weight {
            remaining
        } else {
            let p = w as f64 / remaining_weight as f64;
            // p is in (0, 1) here, so construction cannot fail.
            Binomial::new(remaining, p).expect("probability in (0, 1)").sample(rng)
        };
        *slot = x;
        remaining -= x;
        remaining_weight -= w;
    }
    debug_assert!(weights.is_empty() || remaining == 0 || draws == 0);
    out
}

/// `Binomial(n, p)` with the degenerate ends handled.
pub(crate) fn binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    if n == 0 || p <= 0.0 {
        0
    } else if p >= 1.0 {
        n
    } else {
        Binomial::new(n, p).expect("probability in (0, 1)").sample(rng)
    }
}
