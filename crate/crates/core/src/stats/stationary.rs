//! Stationary frequency spectrum of the neutral copying process with
//! overlapping, one-token-at-a-time replacement.
//!
//! `f_k` is the expected number of words held by exactly `k` tokens in a
//! population of `n` tokens with innovation probability `mu`. Its ratio
//! `f_{k+1} / f_k` tends to `k / (k + 1)` for large `n` and small `mu`.

use super::{Result, StatsError};

fn check(n: u64, mu: f64, k: u64, mu_may_be_zero: bool) -> Result<()> {
    let mu_ok = if mu_may_be_zero { (0.0..1.0).contains(&mu) } else { mu > 0.0 && mu < 1.0 };
    if !mu_ok {
        return Err(StatsError::InvalidInput(format!("mu = {mu} outside its domain")));
    }
    if k == 0 || k >= n {
        return Err(StatsError::InvalidInput(format!("rank {k} must satisfy 1 <= k < N = {n}")));
    }
    Ok(())
}

/// `f_k = mu N (1-mu)^(k-1) / k * prod_{i=1}^{k-1} (N-i) / (N-i-1+i mu)`,
/// evaluated in log space.
pub fn stationary_expected_count(n: u64, mu: f64, k: u64) -> Result<f64> {
    stationary_log_expected_count(n, mu, k).map(f64::exp)
}

/// `ln f_k`; stays finite where `f_k` itself underflows.
pub fn stationary_log_expected_count(n: u64, mu: f64, k: u64) -> Result<f64> {
    check(n, mu, k, false)?;
    let nf = n as f64;
    let mut log_f = (mu * nf).ln() + (k - 1) as f64 * (-mu).ln_1p() - (k as f64).ln();
    for i in 1..k {
        let i = i as f64;
        log_f += (nf - i).ln() - (nf - i - 1.0 + i * mu).ln();
    }
    Ok(log_f)
}

/// Closed form of `f_{k+1} / f_k = k (1-mu) (N-k) / ((k+1) (N-k-1+k mu))`.
pub fn stationary_rank_ratio(n: u64, mu: f64, k: u64) -> Result<f64> {
    check(n, mu, k.saturating_add(1), true)?;
    let (nf, kf) = (n as f64, k as f64);
    Ok(kf * (1.0 - mu) * (nf - kf) / ((kf + 1.0) * (nf - kf - 1.0 + kf * mu)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Eq.-8 product evaluated term by term in linear space.
    fn direct(n: u64, mu: f64, k: u64) -> f64 {
        let nf = n as f64;
        let mut f = mu * nf * (1.0 - mu).powi(k as i32 - 1) / k as f64;
        for i in 1..k {
            let i = i as f64;
            f *= (nf - i) / (nf - i - 1.0 + i * mu);
        }
        f
    }

    #[test]
    fn first_rank_is_mu_n() {
        assert!((stationary_expected_count(1000, 0.01, 1).unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn second_over_first() {
        let f1 = stationary_expected_count(1000, 0.01, 1).unwrap();
        let f2 = stationary_expected_count(1000, 0.01, 2).unwrap();
        let expected = 0.99 * 999.0 / (2.0 * (998.0 + 0.01));
        assert!((f2 / f1 - expected).abs() < 1e-12);
        assert!((f2 / f1 - 0.4955).abs() < 1e-4);
    }

    #[test]
    fn log_space_matches_direct_product() {
        for &(n, mu, k) in &[(500u64, 0.02, 3u64), (1000, 0.01, 10), (10_000, 0.003, 250)] {
            let a = stationary_expected_count(n, mu, k).unwrap();
            let b = direct(n, mu, k);
            assert!(((a - b) / b).abs() < 1e-10);
        }
        // Large N: still finite and positive.
        let f = stationary_expected_count(2_000_000, 0.003, 5000).unwrap();
        assert!(f.is_finite() && f > 0.0);
    }

    #[test]
    fn ratio_equals_quotient_of_counts() {
        for &n in &[50u64, 500, 1000, 100_000] {
            for &mu in &[0.001, 0.02, 0.1, 0.4] {
                for k in [1u64, 2, 3, 7, 20] {
                    if k + 1 >= n {
                        continue;
                    }
                    let q = stationary_expected_count(n, mu, k + 1).unwrap() / stationary_expected_count(n, mu, k).unwrap();
                    let r = stationary_rank_ratio(n, mu, k).unwrap();
                    assert!(((q - r) / r).abs() < 1e-9, "n={n} mu={mu} k={k}");
                }
            }
        }
    }

    #[test]
    fn ratio_limits_and_bounds() {
        assert!((stationary_rank_ratio(1_000_000_000_000, 0.0, 1).unwrap() - 0.5).abs() < 1e-9);
        let r = stationary_rank_ratio(1000, 0.01, 10).unwrap();
        assert!(r > 10.0 / 11.0 * 0.9 && r < 10.0 / 11.0);
        // Zipf limit k / (k + 1).
        let r = stationary_rank_ratio(1_000_000_000, 1e-9, 4).unwrap();
        assert!((r - 0.8).abs() < 1e-6);
    }

    #[test]
    fn domain_errors() {
        assert!(stationary_expected_count(10, 0.1, 10).is_err());
        assert!(stationary_expected_count(10, 0.1, 0).is_err());
        assert!(stationary_expected_count(10, 0.0, 1).is_err());
        assert!(stationary_rank_ratio(10, 0.1, 9).is_err());
    }

    #[test]
    fn positive_and_decreasing() {
        for &(n, mu) in &[(1000u64, 0.01), (200, 0.3), (5000, 0.05), (5000, 0.45)] {
            let logs: Vec<f64> = (1..n / 2).map(|k| stationary_log_expected_count(n, mu, k).unwrap()).collect();
            assert!(logs.iter().all(|l| l.is_finite()));
            assert!(logs.windows(2).all(|w| w[1] < w[0]));
        }
        for k in 1..500 {
            assert!(stationary_expected_count(1000, 0.01, k).unwrap() > 0.0);
        }
    }
}
