//! Joint fairness-vs-performance histograms over confusion pairs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumeration::{all_chunks, enumerate_stratum_range, total_count, StratumDecomposition};
use crate::error::{Error, Result};
use crate::measures::{measure_fraction, PerformanceId};
use crate::rational::Rational;
use crate::types::{ConfusionPair, Count, MeasureId, Stratum};

use super::histogram::{check_odd_bins, fairness_bin_of_fraction};

/// Default dataset size for pooled heatmaps (15,380,937 pairs).
pub const DEFAULT_HEATMAP_N: u64 = 32;
/// Largest dataset size accepted for pooled heatmaps.
pub const MAX_HEATMAP_N: u64 = 64;
pub const DEFAULT_PERF_BINS: usize = 20;

/// Counts of pairs by fairness bin (columns) and performance bin (rows).
///
/// Pairs with an undefined coordinate are kept in marginals: by performance
/// bin when only fairness is undefined, by fairness bin when only
/// performance is undefined, and in `both_undefined` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Heatmap2D {
    pub measure: MeasureId,
    pub perf: PerformanceId,
    pub fairness_bins: usize,
    pub perf_bins: usize,
    /// Row-major `[fairness_bin * perf_bins + perf_bin]`.
    pub cells: Vec<Count>,
    pub fairness_undefined: Vec<Count>,
    pub perf_undefined: Vec<Count>,
    pub both_undefined: Count,
}

impl Heatmap2D {
    fn empty(
        measure: MeasureId,
        perf: PerformanceId,
        fairness_bins: usize,
        perf_bins: usize,
    ) -> Self {
        Heatmap2D {
            measure,
            perf,
            fairness_bins,
            perf_bins,
            cells: vec![0; fairness_bins * perf_bins],
            fairness_undefined: vec![0; perf_bins],
            perf_undefined: vec![0; fairness_bins],
            both_undefined: 0,
        }
    }

    pub fn cell(&self, fairness_bin: usize, perf_bin: usize) -> Count {
        self.cells[fairness_bin * self.perf_bins + perf_bin]
    }

    /// Pairs whose fairness value is undefined.
    pub fn fairness_undefined_total(&self) -> Count {
        self.fairness_undefined.iter().sum::<Count>() + self.both_undefined
    }

    /// Pairs whose performance value is undefined.
    pub fn perf_undefined_total(&self) -> Count {
        self.perf_undefined.iter().sum::<Count>() + self.both_undefined
    }

    pub fn total(&self) -> Count {
        self.cells.iter().sum::<Count>()
            + self.fairness_undefined.iter().sum::<Count>()
            + self.perf_undefined.iter().sum::<Count>()
            + self.both_undefined
    }

    fn record(&mut self, fairness: Option<usize>, perf: Option<usize>) {
        match (fairness, perf) {
            (Some(f), Some(p)) => self.cells[f * self.perf_bins + p] += 1,
            (None, Some(p)) => self.fairness_undefined[p] += 1,
            (Some(f), None) => self.perf_undefined[f] += 1,
            (None, None) => self.both_undefined += 1,
        }
    }

    fn merge(mut self, other: Heatmap2D) -> Heatmap2D {
        let add = |a: &mut Vec<Count>, b: &[Count]| a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        add(&mut self.cells, &other.cells);
        add(&mut self.fairness_undefined, &other.fairness_undefined);
        add(&mut self.perf_undefined, &other.perf_undefined);
        self.both_undefined += other.both_undefined;
        self
    }
}

/// Performance bin over `[0, 1]` for a pair, or `None` when undefined.
///
/// Accuracy is binned exactly with `floor(v * bins)` and `v = 1` clamped into
/// the last bin. G-mean takes the square root in double precision; a value
/// falling exactly on an interior bin edge goes to the lower bin.
pub fn perf_bin(perf: PerformanceId, pair: &ConfusionPair, bins: usize) -> Option<usize> {
    let c = pair.combined();
    let last = bins - 1;
    match perf {
        PerformanceId::Accuracy => {
            let n = pair.n();
            (n > 0).then(|| (((c.tp + c.tn) as u128 * bins as u128 / n as u128) as usize).min(last))
        }
        PerformanceId::GMean => {
            let (p, n) = (c.positives(), c.negatives());
            if p == 0 || n == 0 {
                return None;
            }
            let x = ((c.tp as f64 / p as f64) * (c.tn as f64 / n as f64)).sqrt() * bins as f64;
            let nearest = x.round();
            if (x - nearest).abs() < 1e-9 && nearest > 0.0 {
                // possible edge tie; settle it exactly
                let radicand =
                    Rational::from_i128(c.tp as i128 * c.tn as i128, p as i128 * n as i128).ok()?;
                if let Some(root) = radicand.exact_sqrt() {
                    let scaled = root * Rational::from_integer(bins as i64);
                    if let Some(k) = scaled.to_integer_exact() {
                        return Some(((k - 1).max(0) as usize).min(last));
                    }
                }
            }
            Some((x.floor() as usize).min(last))
        }
    }
}

fn validate_bins(fairness_bins: usize, perf_bins: usize) -> Result<()> {
    check_odd_bins(fairness_bins)?;
    if perf_bins == 0 {
        return Err(Error::BadBinCount(perf_bins));
    }
    Ok(())
}

fn accumulate(
    heat: &mut Heatmap2D,
    measure: MeasureId,
    perf: PerformanceId,
    pairs: impl Iterator<Item = ConfusionPair>,
) {
    let (fb, pb) = (heat.fairness_bins, heat.perf_bins);
    for pair in pairs {
        let f = measure_fraction(measure, &pair)
            .map(|(num, den)| fairness_bin_of_fraction(num, den, fb));
        heat.record(f, perf_bin(perf, &pair, pb));
    }
}

/// Heatmap pooled over every confusion pair of size `n`.
pub fn joint_heatmap(
    measure: MeasureId,
    perf: PerformanceId,
    n: u64,
    fairness_bins: usize,
    perf_bins: usize,
) -> Result<Heatmap2D> {
    validate_bins(fairness_bins, perf_bins)?;
    if n > MAX_HEATMAP_N {
        return Err(Error::Limit(format!(
            "pooled heatmap at n = {n} is infeasible (max {MAX_HEATMAP_N}); the default is n = {DEFAULT_HEATMAP_N}"
        )));
    }
    let expected = total_count(n)?;
    let heat = all_chunks(n)
        .into_par_iter()
        .map(|chunk| {
            let mut local = Heatmap2D::empty(measure, perf, fairness_bins, perf_bins);
            accumulate(&mut local, measure, perf, chunk);
            local
        })
        .reduce(
            || Heatmap2D::empty(measure, perf, fairness_bins, perf_bins),
            Heatmap2D::merge,
        );
    if heat.total() != expected {
        return Err(Error::Invariant(format!(
            "heatmap accounted {} pairs, expected {expected}",
            heat.total()
        )));
    }
    Ok(heat)
}

/// Heatmap over the pairs of a single stratum.
pub fn joint_heatmap_stratum(
    measure: MeasureId,
    perf: PerformanceId,
    stratum: &Stratum,
    fairness_bins: usize,
    perf_bins: usize,
) -> Result<Heatmap2D> {
    validate_bins(fairness_bins, perf_bins)?;
    let s = *stratum;
    let d = StratumDecomposition::new(s);
    Ok(d.protected_positive_range()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|pp| {
            let mut local = Heatmap2D::empty(measure, perf, fairness_bins, perf_bins);
            accumulate(
                &mut local,
                measure,
                perf,
                enumerate_stratum_range(&s, pp..=pp),
            );
            local
        })
        .reduce(
            || Heatmap2D::empty(measure, perf, fairness_bins, perf_bins),
            Heatmap2D::merge,
        ))
}
