//! Counting and streaming generation of confusion pairs.
//!
//! [`enumerate_all`] walks every 8-tuple of non-negative integers summing to
//! `n` (there are `C(n + 7, 7)` of them). [`enumerate_stratum`] generates
//! only the pairs of one stratum, directly from its decomposition: once the
//! number of protected positives `P_p` is fixed, the four cell sizes are
//! fixed and a pair is chosen by `tp_p`, `fp_p`, `tp_up` and `fp_up`
//! independently.

use std::ops::RangeInclusive;

use itertools::iproduct;

use crate::error::{Error, Result};
use crate::types::{ConfusionPair, Count, GroupCounts, Stratum};

const PARTS: usize = 8;

/// `C(n + 7, 7)`, the number of confusion pairs with entries summing to `n`.
pub fn total_count(n: u64) -> Result<Count> {
    binomial(n as u128 + 7, 7).ok_or_else(|| {
        Error::Overflow(format!(
            "C({n} + 7, 7) exceeds 128 bits; n must be at most {}",
            max_total_count_n()
        ))
    })
}

/// Largest `n` for which [`total_count`] fits in 128 bits.
pub fn max_total_count_n() -> u64 {
    let (mut lo, mut hi) = (0u64, 1u64 << 40);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if binomial(mid as u128 + 7, 7).is_some() {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    // Each prefix product is itself a binomial coefficient, so the division is exact.
    (1..=k).try_fold(1u128, |acc, i| Some(acc.checked_mul(n - k + i)? / i))
}

/// Sizes of the four class-by-group cells for one protected-positive count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellSizes {
    /// `P_p`
    pub protected_positives: u64,
    /// `N_p`
    pub protected_negatives: u64,
    /// `P_up`
    pub unprotected_positives: u64,
    /// `N_up`
    pub unprotected_negatives: u64,
}

impl CellSizes {
    /// Number of pairs with these cell sizes.
    pub fn pair_count(&self) -> Option<Count> {
        [
            self.protected_positives,
            self.protected_negatives,
            self.unprotected_positives,
            self.unprotected_negatives,
        ]
        .into_iter()
        .try_fold(1u128, |acc, c| acc.checked_mul(c as u128 + 1))
    }
}

/// A stratum split by the number of protected positives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StratumDecomposition {
    pub stratum: Stratum,
}

impl StratumDecomposition {
    pub fn new(stratum: Stratum) -> Self {
        StratumDecomposition { stratum }
    }

    /// Admissible `P_p` in `[max(0, P + n_p - n), min(P, n_p)]`.
    pub fn protected_positive_range(&self) -> RangeInclusive<u64> {
        let Stratum { n, p, n_p } = self.stratum;
        (p + n_p).saturating_sub(n)..=p.min(n_p)
    }

    pub fn cells(&self, protected_positives: u64) -> CellSizes {
        let Stratum { n, p, n_p } = self.stratum;
        debug_assert!(self
            .protected_positive_range()
            .contains(&protected_positives));
        CellSizes {
            protected_positives,
            protected_negatives: n_p - protected_positives,
            unprotected_positives: p - protected_positives,
            unprotected_negatives: n + protected_positives - p - n_p,
        }
    }

    pub fn all_cells(self) -> impl Iterator<Item = CellSizes> + Clone {
        self.protected_positive_range()
            .map(move |pp| self.cells(pp))
    }
}

/// Exact number of confusion pairs in `stratum`.
pub fn stratum_count(stratum: &Stratum) -> Result<Count> {
    let d = StratumDecomposition::new(*stratum);
    d.all_cells().try_fold(0u128, |acc, cells| {
        cells
            .pair_count()
            .and_then(|c| acc.checked_add(c))
            .ok_or_else(|| Error::Overflow(format!("pair count of {stratum}")))
    })
}

/// Every confusion pair summing to `n`, in lexicographic order of
/// `(tp_p, fn_p, fp_p, tn_p, tp_up, fn_up, fp_up, tn_up)`.
pub fn enumerate_all(n: u64) -> Compositions {
    Compositions::with_prefix(n, &[])
}

/// Lexicographic stream of 8-part compositions of `n` with a fixed prefix.
///
/// Holds only the current tuple, so memory is constant in the stream length.
#[derive(Debug, Clone)]
pub struct Compositions {
    parts: [u64; PARTS],
    fixed: usize,
    done: bool,
}

impl Compositions {
    /// Compositions of `n` whose leading entries equal `prefix`; empty when
    /// the prefix already exceeds `n`.
    pub fn with_prefix(n: u64, prefix: &[u64]) -> Self {
        assert!(
            prefix.len() < PARTS,
            "prefix must leave at least one free part"
        );
        let mut parts = [0u64; PARTS];
        parts[..prefix.len()].copy_from_slice(prefix);
        let used: u64 = prefix.iter().sum();
        let done = used > n;
        if !done {
            parts[PARTS - 1] = n - used;
        }
        Compositions {
            parts,
            fixed: prefix.len(),
            done,
        }
    }

    fn advance(&mut self) {
        // The successor raises the rightmost free part that still has mass to
        // its right and pushes all remaining mass to the last part.
        let Some(last) = (self.fixed..PARTS).rev().find(|&i| self.parts[i] > 0) else {
            self.done = true;
            return;
        };
        if last == self.fixed {
            self.done = true;
            return;
        }
        let rest = self.parts[last] - 1;
        self.parts[last] = 0;
        self.parts[last - 1] += 1;
        self.parts[PARTS - 1] = rest;
    }
}

impl Iterator for Compositions {
    type Item = ConfusionPair;

    fn next(&mut self) -> Option<ConfusionPair> {
        if self.done {
            return None;
        }
        let out = ConfusionPair::from_array(self.parts);
        self.advance();
        Some(out)
    }
}

/// Splits the full enumeration of `n` into independent chunks keyed by
/// `(tp_p, fn_p)`. Concatenating the chunks in order reproduces
/// [`enumerate_all`].
pub fn all_chunks(n: u64) -> Vec<Compositions> {
    (0..=n)
        .flat_map(|a| (0..=n - a).map(move |b| Compositions::with_prefix(n, &[a, b])))
        .collect()
}

/// Every pair of `stratum`, ordered by `P_p`, then `tp_p`, `fp_p`, `tp_up`, `fp_up`.
pub fn enumerate_stratum(stratum: &Stratum) -> impl Iterator<Item = ConfusionPair> + Clone {
    let d = StratumDecomposition::new(*stratum);
    enumerate_stratum_range(stratum, d.protected_positive_range())
}

/// The pairs of `stratum` whose `P_p` lies in `range`, so separate ranges can
/// be consumed independently.
pub fn enumerate_stratum_range(
    stratum: &Stratum,
    range: RangeInclusive<u64>,
) -> impl Iterator<Item = ConfusionPair> + Clone {
    let d = StratumDecomposition::new(*stratum);
    let admissible = d.protected_positive_range();
    let lo = *range.start().max(admissible.start());
    let hi = *range.end().min(admissible.end());
    (lo..=hi).flat_map(move |pp| cell_pairs(d.cells(pp)))
}

fn cell_pairs(c: CellSizes) -> impl Iterator<Item = ConfusionPair> + Clone {
    iproduct!(
        0..=c.protected_positives,
        0..=c.protected_negatives,
        0..=c.unprotected_positives,
        0..=c.unprotected_negatives
    )
    .map(move |(tp_p, fp_p, tp_up, fp_up)| {
        ConfusionPair::new(
            GroupCounts::new(
                tp_p,
                c.protected_positives - tp_p,
                fp_p,
                c.protected_negatives - fp_p,
            ),
            GroupCounts::new(
                tp_up,
                c.unprotected_positives - tp_up,
                fp_up,
                c.unprotected_negatives - fp_up,
            ),
        )
    })
}
