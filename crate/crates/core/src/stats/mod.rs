//! Summary statistics and closed-form predictions for word-frequency data.
//!
//! Everything here is a pure function of its inputs. Fits are done on
//! logarithmic axes by ordinary least squares, except the power-law tail,
//! which uses the discrete maximum-likelihood estimator with
//! Kolmogorov–Smirnov selection of the lower cutoff.

mod heaps;
mod powerlaw;
mod ranking;
mod stationary;
mod turnover;

use thiserror::Error;

pub use heaps::{fit_heaps, HeapsFit};
pub use powerlaw::{fit_zipf_mle, hurwitz_zeta, power_law_ccdf, PowerLawFit, ZipfOptions};
pub use ranking::{rank_frequency, Normalization, RankedList};
pub use stationary::{stationary_expected_count, stationary_log_expected_count, stationary_rank_ratio};
pub use turnover::{
    fit_turnover_decay, predict_neutral_turnover, turnover, turnover_profile, turnover_series, ExpDecayFit,
    TurnoverPrediction, TurnoverProfile, TurnoverSeries, Validity,
};

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("degenerate distribution: {0}")]
    Degenerate(String),
    #[error("validity condition violated: {0}")]
    Validity(String),
}

pub type Result<T> = std::result::Result<T, StatsError>;

/// Ordinary least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
    pub n: usize,
}

pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() {
        return Err(StatsError::InvalidInput("x and y lengths differ".into()));
    }
    let n = xs.len();
    if n < 2 {
        return Err(StatsError::InsufficientData(format!("{n} points, need at least 2")));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(StatsError::Degenerate("all x values are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(LineFit { intercept, slope, r_squared, n })
}

/// Mean of a non-empty slice.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Empirical percentile with linear interpolation between order statistics
/// (`q` in `[0, 100]`).
pub fn percentile(xs: &[f64], q: f64) -> f64 {
    assert!(!xs.is_empty(), "percentile of an empty slice");
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = (q / 100.0).clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}
