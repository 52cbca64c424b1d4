use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::types::Count;

use super::pmf::Pmf;

/// Default number of bins for fairness values. Odd, so zero sits inside the
/// central bin.
pub const DEFAULT_BINS: usize = 41;

/// Equal-width histogram of a pmf over `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinnedHistogram {
    pub bin_count: usize,
    pub bin_counts: Vec<Count>,
    pub undefined_count: Count,
}

impl BinnedHistogram {
    /// Bin edges as exact rationals, `bin_count + 1` of them from -1 to 1.
    pub fn edges(&self) -> Vec<Rational> {
        let k = self.bin_count as i64;
        (0..=k)
            .map(|i| Rational::new(2 * i - k, k).expect("positive bin count"))
            .collect()
    }

    pub fn defined_total(&self) -> Count {
        self.bin_counts.iter().sum()
    }
}

pub(crate) fn check_odd_bins(bin_count: usize) -> Result<()> {
    if bin_count == 0 || bin_count.is_multiple_of(2) {
        return Err(Error::BadBinCount(bin_count));
    }
    Ok(())
}

/// Bin of a fairness value `num/den` in `[-1, 1]`: `floor((v + 1) / width)`
/// with width `2 / bins`, and `v = 1` clamped into the last bin. The fraction
/// need not be reduced.
#[inline]
pub(crate) fn fairness_bin_of_fraction(num: i64, den: i64, bins: usize) -> usize {
    debug_assert!(den > 0);
    let scaled = (num as i128 + den as i128) * bins as i128;
    let idx = scaled.div_euclid(2 * den as i128);
    (idx.clamp(0, bins as i128 - 1)) as usize
}

pub fn fairness_bin(value: Rational, bins: usize) -> usize {
    fairness_bin_of_fraction(value.numer(), value.denom(), bins)
}

/// Assigns every defined value of `pmf` to its bin; the undefined count is
/// carried over unchanged.
pub fn bin_histogram(pmf: &Pmf, bin_count: usize) -> Result<BinnedHistogram> {
    check_odd_bins(bin_count)?;
    let mut bin_counts = vec![0 as Count; bin_count];
    for (&v, &c) in pmf.entries() {
        bin_counts[fairness_bin(v, bin_count)] += c;
    }
    Ok(BinnedHistogram {
        bin_count,
        bin_counts,
        undefined_count: pmf.undefined_count(),
    })
}
