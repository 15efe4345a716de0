use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{GaError, Result};

/// Most statistics a target set may hold, and so the best possible fitness.
pub const MAX_STATISTICS: usize = 8;

fn default_tolerance() -> f64 {
    0.10
}

/// Target decay of the top-`y` turnover.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayTarget {
    pub y: usize,
    pub beta: f64,
    /// Fitted turnover at the first year. Optional: the default layout
    /// leaves it out for the shortest list, whose intercept is the noisiest.
    #[serde(default)]
    pub z0: Option<f64>,
}

/// Statistics a candidate should reproduce, with relative tolerances.
///
/// Keys for `tolerances` overrides: `heaps_a`, `heaps_b`, `zipf_gamma`,
/// `beta_<y>`, `z0_<y>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetStats {
    pub heaps_a: f64,
    pub heaps_b: f64,
    pub zipf_gamma: f64,
    #[serde(default)]
    pub decay: Vec<DecayTarget>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

/// Statistics measured on a candidate (averaged over replicates). `None`
/// where a fit was impossible.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CandidateStats {
    pub heaps_a: Option<f64>,
    pub heaps_b: Option<f64>,
    pub zipf_gamma: Option<f64>,
    pub decay: Vec<DecayStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayStats {
    pub y: usize,
    pub beta: Option<f64>,
    pub z0: Option<f64>,
}

impl CandidateStats {
    fn decay_for(&self, y: usize) -> Option<&DecayStats> {
        self.decay.iter().find(|d| d.y == y)
    }

    /// Field-wise mean over replicates, ignoring failed fits.
    pub fn average(runs: &[CandidateStats]) -> CandidateStats {
        fn avg(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
            let (sum, n) = values.flatten().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
            (n > 0).then(|| sum / n as f64)
        }
        let Some(first) = runs.first() else {
            return CandidateStats::default();
        };
        CandidateStats {
            heaps_a: avg(runs.iter().map(|r| r.heaps_a)),
            heaps_b: avg(runs.iter().map(|r| r.heaps_b)),
            zipf_gamma: avg(runs.iter().map(|r| r.zipf_gamma)),
            decay: first
                .decay
                .iter()
                .map(|d| DecayStats {
                    y: d.y,
                    beta: avg(runs.iter().map(|r| r.decay_for(d.y).and_then(|x| x.beta))),
                    z0: avg(runs.iter().map(|r| r.decay_for(d.y).and_then(|x| x.z0))),
                })
                .collect(),
        }
    }
}

impl TargetStats {
    /// `(key, target)` for every statistic, in scoring order.
    pub fn statistics(&self) -> Vec<(String, f64)> {
        let mut out = vec![
            ("heaps_a".to_owned(), self.heaps_a),
            ("heaps_b".to_owned(), self.heaps_b),
            ("zipf_gamma".to_owned(), self.zipf_gamma),
        ];
        for d in &self.decay {
            out.push((format!("beta_{}", d.y), d.beta));
            if let Some(z0) = d.z0 {
                out.push((format!("z0_{}", d.y), z0));
            }
        }
        out
    }

    pub fn max_fitness(&self) -> u32 {
        self.statistics().len() as u32
    }

    pub fn list_sizes(&self) -> Vec<usize> {
        self.decay.iter().map(|d| d.y).collect()
    }

    pub fn tolerance_for(&self, key: &str) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(self.tolerance)
    }

    pub fn validate(&self) -> Result<()> {
        let stats = self.statistics();
        if stats.len() > MAX_STATISTICS {
            return Err(GaError::Targets(format!("{} statistics, at most {MAX_STATISTICS}", stats.len())));
        }
        for (key, value) in &stats {
            if !value.is_finite() {
                return Err(GaError::Targets(format!("{key} must be finite")));
            }
        }
        let mut ys = self.list_sizes();
        ys.sort_unstable();
        if ys.windows(2).any(|w| w[0] == w[1]) || ys.contains(&0) {
            return Err(GaError::Targets("turnover list sizes must be distinct and positive".into()));
        }
        let check = |key: &str, tol: f64| {
            if tol > 0.0 && tol < 1.0 {
                Ok(())
            } else {
                Err(GaError::Targets(format!("tolerance for {key} must lie in (0, 1), got {tol}")))
            }
        };
        check("all statistics", self.tolerance)?;
        for (key, &tol) in &self.tolerances {
            if !stats.iter().any(|(k, _)| k == key) {
                return Err(GaError::Targets(format!("tolerance override for unknown statistic {key:?}")));
            }
            check(key, tol)?;
        }
        Ok(())
    }

    /// Targets equal to measured statistics: every fitted statistic, except
    /// `z0` of the shortest list when there are several lists.
    pub fn from_measured(stats: &CandidateStats, tolerance: f64) -> Result<TargetStats> {
        let need = |name: &str, v: Option<f64>| v.ok_or_else(|| GaError::Targets(format!("{name} could not be measured")));
        let shortest = stats.decay.iter().map(|d| d.y).min();
        let decay = stats
            .decay
            .iter()
            .map(|d| {
                let beta = need(&format!("beta_{}", d.y), d.beta)?;
                let z0 = if stats.decay.len() > 1 && Some(d.y) == shortest {
                    None
                } else {
                    Some(need(&format!("z0_{}", d.y), d.z0)?)
                };
                Ok(DecayTarget { y: d.y, beta, z0 })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TargetStats {
            heaps_a: need("heaps_a", stats.heaps_a)?,
            heaps_b: need("heaps_b", stats.heaps_b)?,
            zipf_gamma: need("zipf_gamma", stats.zipf_gamma)?,
            decay,
            tolerance,
            tolerances: BTreeMap::new(),
        })
    }
}

fn close(value: Option<f64>, target: f64, tolerance: f64) -> bool {
    value.is_some_and(|v| (v - target).abs() <= tolerance * target.abs())
}

/// One point for each target statistic matched within its relative
/// tolerance. Statistics that could not be measured score nothing.
pub fn score_stats(stats: &CandidateStats, targets: &TargetStats) -> u32 {
    let mut points = 0;
    let mut award = |key: &str, value: Option<f64>, target: f64| {
        if close(value, target, targets.tolerance_for(key)) {
            points += 1;
        }
    };
    award("heaps_a", stats.heaps_a, targets.heaps_a);
    award("heaps_b", stats.heaps_b, targets.heaps_b);
    award("zipf_gamma", stats.zipf_gamma, targets.zipf_gamma);
    for d in &targets.decay {
        let measured = stats.decay_for(d.y);
        award(&format!("beta_{}", d.y), measured.and_then(|m| m.beta), d.beta);
        if let Some(z0) = d.z0 {
            award(&format!("z0_{}", d.y), measured.and_then(|m| m.z0), z0);
        }
    }
    points
}
