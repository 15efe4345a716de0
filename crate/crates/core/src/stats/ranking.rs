use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{Result, StatsError};
use crate::sim::{WordId, YearCounts};
use crate::ORIGIN_YEAR;

/// Words of one year in descending count order.
///
/// Equal counts are ordered by ascending key: numeric id for simulated
/// words, lexicographic surface form for corpus words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedList<K> {
    pub year: i64,
    entries: Vec<(K, u64)>,
}

fn rank_order<K: Ord>(a: &(K, u64), b: &(K, u64)) -> Ordering {
    b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0))
}

impl<K: Ord> RankedList<K> {
    /// Complete ranking of `counts`.
    pub fn from_counts<I: IntoIterator<Item = (K, u64)>>(year: i64, counts: I) -> Self {
        let mut entries: Vec<(K, u64)> = counts.into_iter().collect();
        entries.sort_unstable_by(rank_order);
        Self { year, entries }
    }

    /// The first `k` entries of the complete ranking, without sorting the
    /// rest.
    pub fn top_of<I: IntoIterator<Item = (K, u64)>>(year: i64, counts: I, k: usize) -> Self {
        let mut entries: Vec<(K, u64)> = counts.into_iter().collect();
        if k == 0 {
            entries.clear();
        } else if entries.len() > k {
            entries.select_nth_unstable_by(k - 1, rank_order);
            entries.truncate(k);
        }
        entries.sort_unstable_by(rank_order);
        Self { year, entries }
    }

    /// Entries already in rank order (e.g. read back from a sorted file).
    /// Only the counts are checked: ties keep the order they arrive in,
    /// since a writer may have ranked them by a key type with a different
    /// ordering (numeric ids written out as text).
    pub fn from_sorted(year: i64, entries: Vec<(K, u64)>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0].1 < w[1].1) {
            return Err(StatsError::InvalidInput(format!("ranked list for year {year} is not in rank order")));
        }
        Ok(Self { year, entries })
    }
}

impl<K> RankedList<K> {
    pub fn entries(&self) -> &[(K, u64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The top `y` entries, or `None` when the list is shorter than `y`.
    pub fn top(&self, y: usize) -> Option<&[(K, u64)]> {
        self.entries.get(..y)
    }

    pub fn counts(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|&(_, c)| c)
    }

    /// Counts rescaled for plotting.
    pub fn normalized(&self, mode: Normalization) -> Vec<f64> {
        let denom = match mode {
            Normalization::Raw => 1.0,
            Normalization::Total => self.counts().sum::<u64>() as f64,
            Normalization::Reference(r) => r as f64,
        };
        self.counts().map(|c| c as f64 / denom).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Raw,
    /// Divide by the year's total tokens.
    Total,
    /// Divide by a reference word's count.
    Reference(u64),
}

/// Complete rank-frequency table of one simulated year.
pub fn rank_frequency(counts: &YearCounts) -> Result<RankedList<WordId>> {
    if counts.is_empty() {
        return Err(StatsError::InvalidInput("cannot rank an empty year".into()));
    }
    Ok(RankedList::from_counts(
        ORIGIN_YEAR + i64::from(counts.year()),
        counts.entries().iter().copied(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_break_by_key() {
        let list = RankedList::from_counts(0, vec![("c", 2), ("a", 5), ("b", 2)]);
        assert_eq!(list.entries(), &[("a", 5), ("b", 2), ("c", 2)]);
    }

    #[test]
    fn single_word_ranks_first() {
        let y = YearCounts::monomorphic(3, WordId(9), 40).unwrap();
        let list = rank_frequency(&y).unwrap();
        assert_eq!(list.entries(), &[(WordId(9), 40)]);
        assert_eq!(list.year, ORIGIN_YEAR + 3);
    }

    #[test]
    fn empty_year_is_an_error() {
        let y = YearCounts::from_entries(0, vec![]).unwrap();
        assert!(rank_frequency(&y).is_err());
    }

    #[test]
    fn top_of_matches_full_sort_prefix() {
        let counts: Vec<(u64, u64)> = (0..500u64).map(|i| (i, (i * 7919) % 37 + 1)).collect();
        let full = RankedList::from_counts(0, counts.clone());
        for k in [0usize, 1, 10, 37, 499, 500, 800] {
            let top = RankedList::top_of(0, counts.clone(), k);
            assert_eq!(top.entries(), &full.entries()[..k.min(500)]);
        }
    }

    #[test]
    fn from_sorted_rejects_disorder() {
        assert!(RankedList::from_sorted(0, vec![("a", 1), ("b", 2)]).is_err());
        assert!(RankedList::from_sorted(0, vec![("b", 2), ("a", 2)]).is_ok());
        assert!(RankedList::from_sorted(0, vec![("a", 2), ("b", 2)]).is_ok());
    }

    #[test]
    fn normalization_modes() {
        let list = RankedList::from_counts(0, vec![("the", 1000), ("cat", 10)]);
        assert_eq!(list.normalized(Normalization::Reference(1000)), vec![1.0, 0.01]);
        let total = list.normalized(Normalization::Total);
        assert!((total.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
