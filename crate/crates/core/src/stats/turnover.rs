use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::{least_squares, RankedList, Result, StatsError};

/// Number of words in the top `y` of `curr` that were not in the top `y` of
/// `prev`.
pub fn turnover<K: Hash + Eq>(prev: &RankedList<K>, curr: &RankedList<K>, y: usize) -> Result<u32> {
    let (Some(p), Some(c)) = (prev.top(y), curr.top(y)) else {
        return Err(StatsError::InsufficientData(format!(
            "top-{y} turnover needs {y} ranked words; lists hold {} (year {}) and {} (year {})",
            prev.len(),
            prev.year,
            curr.len(),
            curr.year
        )));
    };
    let before: HashSet<&K> = p.iter().map(|(k, _)| k).collect();
    Ok(c.iter().filter(|(k, _)| !before.contains(k)).count() as u32)
}

/// Year-over-year turnover of the top `y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnoverSeries {
    pub list_size_y: usize,
    /// Year from which decay-fit time is measured.
    pub origin: i64,
    /// `(year, z_y(year))`, turnover between `year - 1` and `year`.
    pub points: Vec<(i64, u32)>,
    /// Years skipped for lack of a predecessor or of list depth.
    pub gaps: Vec<i64>,
}

impl TurnoverSeries {
    pub fn with_origin(mut self, origin: i64) -> Self {
        self.origin = origin;
        self
    }

    pub fn values(&self) -> impl Iterator<Item = u32> + '_ {
        self.points.iter().map(|&(_, z)| z)
    }

    pub fn mean(&self) -> f64 {
        self.values().map(f64::from).sum::<f64>() / self.points.len().max(1) as f64
    }
}

/// Turnover for every consecutive pair of years in `lists` (time-ordered).
/// The origin defaults to the first list's year.
pub fn turnover_series<K: Hash + Eq>(lists: &[RankedList<K>], y: usize) -> Result<TurnoverSeries> {
    let origin = lists.first().map_or(0, |l| l.year);
    let mut points = Vec::new();
    let mut gaps = Vec::new();
    for pair in lists.windows(2) {
        let (prev, curr) = (&pair[0], &pair[1]);
        if curr.year == prev.year + 1 && prev.len() >= y && curr.len() >= y {
            points.push((curr.year, turnover(prev, curr, y)?));
        } else {
            gaps.push(curr.year);
        }
    }
    if points.is_empty() {
        return Err(StatsError::InsufficientData(format!(
            "no pair of consecutive years with {y} ranked words"
        )));
    }
    Ok(TurnoverSeries { list_size_y: y, origin, points, gaps })
}

/// `z(t) = z0 * exp(-decay_rate * t)`, `t` in years since the series origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpDecayFit {
    pub z0: f64,
    pub decay_rate: f64,
    pub r_squared: f64,
    pub n_points: usize,
    /// Zero-turnover years left out of the log-linear fit.
    pub zeros_excluded: usize,
}

impl ExpDecayFit {
    pub fn predict(&self, t: f64) -> f64 {
        self.z0 * (-self.decay_rate * t).exp()
    }
}

pub fn fit_turnover_decay(series: &TurnoverSeries) -> Result<ExpDecayFit> {
    let (ts, logs): (Vec<f64>, Vec<f64>) = series
        .points
        .iter()
        .filter(|&&(_, z)| z > 0)
        .map(|&(year, z)| ((year - series.origin) as f64, f64::from(z).ln()))
        .unzip();
    if ts.len() < 10 {
        return Err(StatsError::InsufficientData(format!(
            "{} years with positive turnover, need 10",
            ts.len()
        )));
    }
    let line = least_squares(&ts, &logs)?;
    Ok(ExpDecayFit {
        z0: line.intercept.exp(),
        decay_rate: -line.slope,
        r_squared: line.r_squared,
        n_points: ts.len(),
        zeros_excluded: series.points.len() - ts.len(),
    })
}

/// Window-averaged turnover as a function of list size, with the fitted
/// power `mean_z ~ coefficient * y^exponent`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnoverProfile {
    pub center_year: i64,
    pub half_window: i64,
    /// `(y, mean z_y)` over the window.
    pub points: Vec<(usize, f64)>,
    pub exponent: f64,
    pub coefficient: f64,
    pub r_squared: f64,
}

/// Averages `z_y` over the years `[center - half_window, center + half_window)`.
pub fn turnover_profile<K: Hash + Eq>(
    lists: &[RankedList<K>],
    center_year: i64,
    half_window: i64,
    y_values: &[usize],
) -> Result<TurnoverProfile> {
    if y_values.is_empty() || y_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(StatsError::InvalidInput("list sizes must be non-empty and strictly ascending".into()));
    }
    if half_window < 1 {
        return Err(StatsError::InvalidInput("half window must be at least 1".into()));
    }
    let by_year: HashMap<i64, &RankedList<K>> = lists.iter().map(|l| (l.year, l)).collect();
    let max_y = *y_values.last().expect("non-empty");
    let years: Vec<i64> = (center_year - half_window..center_year + half_window).collect();
    let mut pairs = Vec::with_capacity(years.len());
    for &year in &years {
        let (Some(prev), Some(curr)) = (by_year.get(&(year - 1)), by_year.get(&year)) else {
            return Err(StatsError::InsufficientData(format!(
                "window {}..{} not covered: year {} or {} missing",
                center_year - half_window,
                center_year + half_window,
                year - 1,
                year
            )));
        };
        if prev.len() < max_y || curr.len() < max_y {
            return Err(StatsError::InsufficientData(format!(
                "year {year} lacks the {max_y} ranked words needed"
            )));
        }
        pairs.push((*prev, *curr));
    }
    let mut points = Vec::with_capacity(y_values.len());
    for &y in y_values {
        let mut sum = 0.0;
        for (prev, curr) in &pairs {
            sum += f64::from(turnover(prev, curr, y)?);
        }
        points.push((y, sum / pairs.len() as f64));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|&&(y, z)| y > 0 && z > 0.0)
        .map(|&(y, z)| ((y as f64).ln(), z.ln()))
        .unzip();
    if xs.len() < 2 {
        return Err(StatsError::InsufficientData(
            "fewer than two list sizes with positive mean turnover".into(),
        ));
    }
    let line = least_squares(&xs, &ys)?;
    Ok(TurnoverProfile {
        center_year,
        half_window,
        points,
        exponent: line.slope,
        coefficient: line.intercept.exp(),
        r_squared: line.r_squared,
    })
}

/// How a violated validity condition is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Validity {
    /// Return the value flagged as invalid.
    #[default]
    Warn,
    /// Return an error.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnoverPrediction {
    pub value: f64,
    /// Whether `0.15 y < n mu` holds.
    pub valid: bool,
}

/// Neutral turnover per step, `z_y = 1.4 mu^0.55 y^0.86 n^0.13`, for list size
/// `y` and `n` tokens per step. Valid while `0.15 y < n mu`.
pub fn predict_neutral_turnover(mu: f64, y: u64, n: u64, mode: Validity) -> Result<TurnoverPrediction> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(StatsError::InvalidInput(format!("mu = {mu} outside (0, 1)")));
    }
    let (yf, nf) = (y as f64, n as f64);
    let valid = 0.15 * yf < nf * mu;
    if !valid && mode == Validity::Strict {
        return Err(StatsError::Validity(format!(
            "0.15 y = {} is not below n mu = {}",
            0.15 * yf,
            nf * mu
        )));
    }
    let value = 1.4 * mu.powf(0.55) * yf.powf(0.86) * nf.powf(0.13);
    Ok(TurnoverPrediction { value, valid })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(year: i64, words: &[&'static str]) -> RankedList<&'static str> {
        let n = words.len() as u64;
        RankedList::from_counts(year, words.iter().enumerate().map(|(i, &w)| (w, 100 * (n - i as u64))))
    }

    #[test]
    fn turnover_examples() {
        let a = list(1, &["a", "b", "c"]);
        let b = list(2, &["a", "c", "d"]);
        assert_eq!(turnover(&a, &a, 3).unwrap(), 0);
        assert_eq!(turnover(&a, &b, 3).unwrap(), 1);
        let d = list(2, &["x", "y", "z"]);
        assert_eq!(turnover(&a, &d, 3).unwrap(), 3);
        assert!(turnover(&a, &b, 4).is_err());
    }

    #[test]
    fn constant_corpus_has_no_turnover() {
        let lists: Vec<_> = (0..20).map(|y| list(y, &["a", "b", "c", "d"])).collect();
        let s = turnover_series(&lists, 3).unwrap();
        assert_eq!(s.points.len(), 19);
        assert!(s.values().all(|z| z == 0));
        assert!(fit_turnover_decay(&s).is_err());
    }

    #[test]
    fn series_records_gaps() {
        let lists = vec![list(1, &["a", "b"]), list(2, &["b", "c"]), list(4, &["c", "d"]), list(5, &["e"])];
        let s = turnover_series(&lists, 2).unwrap();
        assert_eq!(s.points, vec![(2, 1)]);
        assert_eq!(s.gaps, vec![4, 5]);
        assert!(turnover_series(&lists[2..], 2).is_err());
    }

    #[test]
    fn decay_recovers_integer_powers_of_two() {
        // z = 2^(10 - t/30) is an integer at t = 0, 30, ..., 300.
        let points: Vec<(i64, u32)> = (0..=10).map(|j| (1700 + 30 * j, 1u32 << (10 - j))).collect();
        let s = TurnoverSeries { list_size_y: 10, origin: 1700, points, gaps: vec![] };
        let fit = fit_turnover_decay(&s).unwrap();
        assert!((fit.z0 - 1024.0).abs() < 1e-9);
        assert!((fit.decay_rate - std::f64::consts::LN_2 / 30.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.zeros_excluded, 0);
    }

    #[test]
    fn zeros_are_excluded_and_counted() {
        let mut points: Vec<(i64, u32)> = (0..=10).map(|j| (30 * j, 1u32 << (10 - j))).collect();
        points.push((400, 0));
        points.push((401, 0));
        let s = TurnoverSeries { list_size_y: 10, origin: 0, points, gaps: vec![] };
        let fit = fit_turnover_decay(&s).unwrap();
        assert_eq!(fit.zeros_excluded, 2);
        assert_eq!(fit.n_points, 11);
    }

    #[test]
    fn profile_window_and_errors() {
        let words: Vec<&'static str> = vec!["a", "b", "c", "d", "e", "f", "g", "h"];
        let lists: Vec<_> = (1990..2010)
            .map(|y| {
                let shift = (y % 2) as usize;
                let mut w = words.clone();
                w.rotate_left(shift * 4);
                list(y, &w)
            })
            .collect();
        let p = turnover_profile(&lists, 2000, 5, &[2, 4, 8]).unwrap();
        assert_eq!(p.points.len(), 3);
        assert_eq!(p.points[2], (8, 0.0));
        assert!(turnover_profile(&lists, 1992, 5, &[2]).is_err());
        assert!(turnover_profile(&lists, 2000, 5, &[4, 2]).is_err());
        assert!(turnover_profile(&lists, 2000, 5, &[9]).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let p = predict_neutral_turnover(0.003, 50, 10_000, Validity::Strict).unwrap();
        assert!((p.value - 5.491_094_647).abs() < 1e-6);
        assert!(p.valid);
        assert_eq!(predict_neutral_turnover(0.003, 0, 10_000, Validity::Warn).unwrap().value, 0.0);
        let bad = predict_neutral_turnover(0.003, 10_000, 10_000, Validity::Warn).unwrap();
        assert!(!bad.valid);
        assert!(matches!(
            predict_neutral_turnover(0.003, 10_000, 10_000, Validity::Strict),
            Err(StatsError::Validity(_))
        ));
    }
}
