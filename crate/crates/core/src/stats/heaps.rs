use serde::{Deserialize, Serialize};

use super::{least_squares, Result, StatsError};

/// `v = A * N^b` fitted on log-log axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeapsFit {
    pub coeff_a: f64,
    pub exponent_b: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

impl HeapsFit {
    pub fn predict(&self, corpus_size: f64) -> f64 {
        self.coeff_a * corpus_size.powf(self.exponent_b)
    }
}

/// Heaps-law fit to `(corpus size, vocabulary size)` pairs.
pub fn fit_heaps(points: &[(f64, f64)]) -> Result<HeapsFit> {
    if points.len() < 3 {
        return Err(StatsError::InsufficientData(format!("{} points, need at least 3", points.len())));
    }
    if let Some(&(n, v)) = points.iter().find(|&&(n, v)| !(n > 0.0 && v > 0.0)) {
        return Err(StatsError::InvalidInput(format!("non-positive point ({n}, {v})")));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let line = least_squares(&xs, &ys)?;
    Ok(HeapsFit {
        coeff_a: line.intercept.exp(),
        exponent_b: line.slope,
        r_squared: line.r_squared,
        n_points: points.len(),
    })
}
