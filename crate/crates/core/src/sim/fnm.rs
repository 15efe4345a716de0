use rand::Rng;

use super::rng::{substream, Phase};
use super::sampling::{binomial, multinomial};
use super::{IdAllocator, Model, Result, SimConfig, SimError, Trajectory, WordId, YearCounts, YearRecord};
use crate::stats::RankedList;
use crate::ORIGIN_YEAR;

/// Population sizes `round(n0 * e^(alpha * t))` for `t = 0..steps`,
/// rounding halves up.
pub fn growth_schedule(n0: u64, alpha: f64, steps: u32) -> Result<Vec<u64>> {
    if n0 == 0 {
        return Err(SimError::Config("n0 must be at least 1".into()));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(SimError::Config(format!("growth rate must be finite and >= 0, got {alpha}")));
    }
    // Above 2^63 f64 -> u64 conversion saturates silently; refuse instead.
    const LIMIT: f64 = 9.223_372_036_854_775_808e18;
    (0..steps)
        .map(|t| {
            let size = (n0 as f64 * (alpha * f64::from(t)).exp() + 0.5).floor();
            if size.is_finite() && size < LIMIT {
                Ok(size as u64)
            } else {
                Err(SimError::Config(format!(
                    "population size at step {t} overflows the integer range (n0 = {n0}, alpha = {alpha})"
                )))
            }
        })
        .collect()
}

/// One FNM generation: `next_size` tokens, each an innovation with
/// probability `mu`, otherwise a copy of a uniformly chosen token of `prev`.
///
/// The number of innovations is drawn as `Binomial(next_size, mu)`; the
/// remaining tokens are split over `prev`'s words by a multinomial weighted
/// by count. Every innovation mints a distinct word of count one.
pub fn step_fnm<R: Rng + ?Sized>(
    prev: &YearCounts,
    next_size: u64,
    mu: f64,
    ids: &mut IdAllocator,
    rng: &mut R,
) -> Result<YearCounts> {
    if prev.total() == 0 {
        return Err(SimError::InvalidState("cannot copy from an empty year".into()));
    }
    if !(0.0..=1.0).contains(&mu) {
        return Err(SimError::Config(format!("mu must lie in [0, 1], got {mu}")));
    }
    let innovations = binomial(next_size, mu, rng);
    let weights: Vec<u64> = prev.entries().iter().map(|&(_, c)| c).collect();
    let copies = multinomial(&weights, next_size - innovations, rng);

    let mut entries: Vec<(WordId, u64)> = prev
        .entries()
        .iter()
        .zip(&copies)
        .filter(|&(_, &n)| n > 0)
        .map(|(&(id, _), &n)| (id, n))
        .collect();
    entries.reserve(innovations as usize);
    entries.extend((0..innovations).map(|_| (ids.mint(), 1)));
    Ok(YearCounts::from_parts_unchecked(prev.year().saturating_add(1), entries, next_size))
}

/// A running FNM population with its id allocator.
#[derive(Debug, Clone)]
pub struct FnmProcess {
    state: YearCounts,
    ids: IdAllocator,
    mu: f64,
    seed: u64,
    last_innovations: u64,
}

impl FnmProcess {
    /// Starts from `n0` copies of a single word (id 0).
    pub fn monomorphic(n0: u64, mu: f64, seed: u64) -> Result<Self> {
        let state = YearCounts::monomorphic(0, WordId(0), n0)?;
        Ok(Self::from_state(state, IdAllocator::starting_at(1), mu, seed))
    }

    /// Starts from an arbitrary population. `ids` must not re-issue any id
    /// present in `state`.
    pub fn from_state(state: YearCounts, ids: IdAllocator, mu: f64, seed: u64) -> Self {
        Self { state, ids, mu, seed, last_innovations: 0 }
    }

    /// Advances one generation drawing from the `(phase, step)` substream.
    pub fn advance(&mut self, size: u64, phase: Phase, step: u64) -> Result<&YearCounts> {
        let mut rng = substream(self.seed, phase, step);
        let before = self.ids.peek();
        self.state = step_fnm(&self.state, size, self.mu, &mut self.ids, &mut rng)?;
        self.last_innovations = self.ids.peek() - before;
        Ok(&self.state)
    }

    /// Runs `steps` constant-size generations.
    pub fn burn_in(&mut self, size: u64, steps: u64, phase: Phase) -> Result<()> {
        for step in 0..steps {
            self.advance(size, phase, step)?;
        }
        Ok(())
    }

    pub fn state(&self) -> &YearCounts {
        &self.state
    }

    pub(crate) fn relabel(&mut self, year: u32) {
        self.state.year = year;
    }

    pub fn ids(&self) -> &IdAllocator {
        &self.ids
    }

    pub fn ids_mut(&mut self) -> &mut IdAllocator {
        &mut self.ids
    }

    /// Innovations minted by the most recent [`advance`](Self::advance).
    pub fn last_innovations(&self) -> u64 {
        self.last_innovations
    }
}

/// Burn-in at constant size `n0`, then `steps` generations on the growth
/// schedule. The trajectory covers the growth phase only.
pub fn run_fnm(config: &SimConfig) -> Result<Trajectory> {
    config.validate()?;
    if config.model != Model::Fnm {
        return Err(SimError::Config("run_fnm requires model = fnm".into()));
    }
    let sizes = growth_schedule(config.n0, config.growth_exponent, config.steps)?;
    let mut process = FnmProcess::monomorphic(config.n0, config.mu, config.seed)?;
    process.burn_in(config.n0, config.effective_burn_in(), Phase::BurnIn)?;

    let mut trajectory = Trajectory::new(config.clone());
    for (t, &size) in sizes.iter().enumerate() {
        let t = t as u32;
        process.advance(size, Phase::Growth, u64::from(t))?;
        process.relabel(t);
        let year = process.state();
        trajectory.push(
            YearRecord {
                t,
                corpus_size: year.total(),
                vocabulary: year.vocabulary() as u64,
                innovations: process.last_innovations(),
                canon_total: None,
                top: RankedList::top_of(
                    ORIGIN_YEAR + i64::from(t),
                    year.entries().iter().copied(),
                    config.top_k,
                ),
            },
            config.retains(t).then(|| year.clone()),
        );
    }
    Ok(trajectory)
}
