use std::collections::HashMap;

use rand::Rng;

use super::fnm::{growth_schedule, FnmProcess};
use super::rng::{substream, Phase};
use super::sampling::{binomial, multinomial};
use super::{IdAllocator, Model, Result, SimConfig, SimError, Trajectory, WordId, YearCounts, YearRecord};
use crate::stats::RankedList;
use crate::ORIGIN_YEAR;

/// The cumulative canon: every canon year so far, pooled.
#[derive(Debug, Clone, Default)]
pub struct CanonStore {
    year_size: u64,
    years: Vec<YearCounts>,
    pooled: Vec<(WordId, u64)>,
    index: HashMap<WordId, usize>,
    cumulative_total: u64,
}

impl CanonStore {
    pub fn new(year_size: u64) -> Self {
        Self { year_size, ..Self::default() }
    }

    /// Appends one canon year; its total must equal the canon year size.
    pub fn push_year(&mut self, year: YearCounts) -> Result<()> {
        if year.total() != self.year_size {
            return Err(SimError::InvalidState(format!(
                "canon year holds {} tokens, expected {}",
                year.total(),
                self.year_size
            )));
        }
        for &(id, c) in year.entries() {
            match self.index.get(&id) {
                Some(&slot) => self.pooled[slot].1 += c,
                None => {
                    self.index.insert(id, self.pooled.len());
                    self.pooled.push((id, c));
                }
            }
        }
        self.cumulative_total += year.total();
        self.years.push(year);
        Ok(())
    }

    pub fn year_size(&self) -> u64 {
        self.year_size
    }

    pub fn years(&self) -> &[YearCounts] {
        &self.years
    }

    /// Pooled counts over all canon years, in order of first appearance.
    pub fn pooled(&self) -> &[(WordId, u64)] {
        &self.pooled
    }

    pub fn cumulative_total(&self) -> u64 {
        self.cumulative_total
    }

    pub fn pooled_count(&self, word: WordId) -> u64 {
        self.index.get(&word).map_or(0, |&slot| self.pooled[slot].1)
    }
}

/// Draws one year's sample from the pooled canon.
///
/// Each of `sample_size` tokens is, with probability `mu`, a fresh word;
/// otherwise a uniform draw over all cumulative canon tokens. Sample
/// innovations stay out of the canon.
pub fn step_pnm<R: Rng + ?Sized>(
    canon: &CanonStore,
    sample_size: u64,
    mu: f64,
    ids: &mut IdAllocator,
    rng: &mut R,
) -> Result<YearCounts> {
    if canon.cumulative_total() == 0 {
        return Err(SimError::InvalidState("cannot sample from an empty canon".into()));
    }
    if !(0.0..=1.0).contains(&mu) {
        return Err(SimError::Config(format!("mu must lie in [0, 1], got {mu}")));
    }
    let innovations = binomial(sample_size, mu, rng);
    let weights: Vec<u64> = canon.pooled().iter().map(|&(_, c)| c).collect();
    let copies = multinomial(&weights, sample_size - innovations, rng);

    let mut entries: Vec<(WordId, u64)> = canon
        .pooled()
        .iter()
        .zip(&copies)
        .filter(|&(_, &n)| n > 0)
        .map(|(&(id, _), &n)| (id, n))
        .collect();
    entries.extend((0..innovations).map(|_| (ids.mint(), 1)));
    let year = canon.years().last().map_or(0, YearCounts::year);
    Ok(YearCounts::from_parts_unchecked(year, entries, sample_size))
}

/// A constant-size FNM canon (with its own burn-in) sampled each year by a
/// growing sample. The trajectory records the samples.
pub fn run_pnm(config: &SimConfig) -> Result<Trajectory> {
    config.validate()?;
    if config.model != Model::Pnm {
        return Err(SimError::Config("run_pnm requires model = pnm".into()));
    }
    let canon_size = config.canon_year_size.unwrap_or_default();
    let sizes = growth_schedule(config.n0, config.growth_exponent, config.steps)?;
    let mut canon_process = FnmProcess::monomorphic(canon_size, config.mu, config.seed)?;
    canon_process.burn_in(canon_size, config.effective_burn_in(), Phase::CanonBurnIn)?;

    let mut canon = CanonStore::new(canon_size);
    let mut trajectory = Trajectory::new(config.clone());
    for (t, &size) in sizes.iter().enumerate() {
        let t = t as u32;
        canon_process.advance(canon_size, Phase::Canon, u64::from(t))?;
        canon_process.relabel(t);
        canon.push_year(canon_process.state().clone())?;

        let mut rng = substream(config.seed, Phase::Sample, u64::from(t));
        let before = canon_process.ids().peek();
        let sample = step_pnm(&canon, size, config.mu, canon_process.ids_mut(), &mut rng)?;
        let innovations = canon_process.ids().peek() - before;
        trajectory.push(
            YearRecord {
                t,
                corpus_size: sample.total(),
                vocabulary: sample.vocabulary() as u64,
                innovations,
                canon_total: Some(canon.cumulative_total()),
                top: RankedList::top_of(
                    ORIGIN_YEAR + i64::from(t),
                    sample.entries().iter().copied(),
                    config.top_k,
                ),
            },
            config.retains(t).then_some(sample),
        );
    }
    Ok(trajectory)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canon_of(entries: Vec<(WordId, u64)>) -> CanonStore {
        let year = YearCounts::from_entries(0, entries).unwrap();
        let mut canon = CanonStore::new(year.total());
        canon.push_year(year).unwrap();
        canon
    }

    #[test]
    fn single_word_canon_without_innovation() {
        let canon = canon_of(vec![(WordId(1), 100)]);
        let mut ids = IdAllocator::starting_at(2);
        let mut rng = substream(1, Phase::Sample, 0);
        let s = step_pnm(&canon, 4321, 0.0, &mut ids, &mut rng).unwrap();
        assert_eq!(s.entries(), &[(WordId(1), 4321)]);
    }

    #[test]
    fn certain_innovation_gives_all_new_words() {
        let canon = canon_of(vec![(WordId(1), 100)]);
        let mut ids = IdAllocator::starting_at(2);
        let mut rng = substream(1, Phase::Sample, 0);
        let s = step_pnm(&canon, 50, 1.0, &mut ids, &mut rng).unwrap();
        assert_eq!(s.vocabulary(), 50);
        assert_eq!(canon.pooled().len(), 1);
    }

    #[test]
    fn half_share_word_is_binomial() {
        // Binomial(10^6, 0.5): sd = 500, so 3 sd = 1500.
        let canon = canon_of(vec![(WordId(0), 5000), (WordId(1), 3000), (WordId(2), 2000)]);
        let mut ids = IdAllocator::starting_at(3);
        let mut rng = substream(8, Phase::Sample, 0);
        let s = step_pnm(&canon, 1_000_000, 0.0, &mut ids, &mut rng).unwrap();
        let x = s.count_of(WordId(0)) as i64;
        assert!((x - 500_000).abs() <= 1500, "{x}");
    }

    #[test]
    fn empty_canon_is_invalid() {
        let canon = CanonStore::new(10);
        let mut ids = IdAllocator::new();
        let mut rng = substream(1, Phase::Sample, 0);
        assert!(matches!(step_pnm(&canon, 5, 0.1, &mut ids, &mut rng), Err(SimError::InvalidState(_))));
    }

    #[test]
    fn canon_rejects_wrong_year_size() {
        let mut canon = CanonStore::new(10);
        let year = YearCounts::monomorphic(0, WordId(0), 9).unwrap();
        assert!(canon.push_year(year).is_err());
    }

    #[test]
    fn pooling_merges_repeated_words() {
        let mut canon = CanonStore::new(10);
        canon.push_year(YearCounts::from_entries(0, vec![(WordId(0), 6), (WordId(1), 4)]).unwrap()).unwrap();
        canon.push_year(YearCounts::from_entries(1, vec![(WordId(1), 7), (WordId(2), 3)]).unwrap()).unwrap();
        assert_eq!(canon.cumulative_total(), 20);
        assert_eq!(canon.pooled(), &[(WordId(0), 6), (WordId(1), 11), (WordId(2), 3)]);
        assert_eq!(canon.pooled_count(WordId(1)), 11);
    }

    #[test]
    fn small_run_is_deterministic_and_conserves_tokens() {
        let config = SimConfig {
            n0: 300,
            canon_year_size: Some(1000),
            mu: 0.01,
            steps: 40,
            burn_in: Some(100),
            top_k: 25,
            ..SimConfig::calibrated_pnm(9)
        };
        let a = run_pnm(&config).unwrap();
        assert_eq!(a, run_pnm(&config).unwrap());
        let sizes = growth_schedule(300, 0.021, 40).unwrap();
        for (rec, &s) in a.records().iter().zip(&sizes) {
            assert_eq!(rec.corpus_size, s);
            assert!(rec.vocabulary >= rec.innovations);
        }
    }
}
