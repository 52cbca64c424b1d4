//! Exact pmfs of a measure over one stratum.
//!
//! The fast path never enumerates pairs. Once `P_p` is fixed, the protected
//! and unprotected confusion matrices are chosen independently, so the
//! measure's distribution in that cell is the difference-convolution of two
//! per-group pmfs. Cells are then summed over `P_p`.

use rayon::prelude::*;

use crate::enumeration::{enumerate_stratum_range, CellSizes, StratumDecomposition};
use crate::error::{Error, Result};
use crate::measures::{group_statistic, measure_value};
use crate::types::{ConfusionPair, Count, GroupCounts, MeasureId, Stratum};

use super::pmf::Pmf;

/// Distribution of a per-group statistic over the `(P_g + 1)(N_g + 1)`
/// confusion matrices of a group with fixed class sizes.
pub fn group_statistic_pmf(measure: MeasureId, positives: u64, negatives: u64) -> Pmf {
    let mut pmf = Pmf::new();
    for tp in 0..=positives {
        for fp in 0..=negatives {
            let g = GroupCounts::new(tp, positives - tp, fp, negatives - fp);
            pmf.add(group_statistic(measure, &g), 1)
                .expect("group pmf counts are small");
        }
    }
    pmf
}

fn cell_pmf(measure: MeasureId, cells: CellSizes) -> Result<Pmf> {
    let protected = group_statistic_pmf(
        measure,
        cells.protected_positives,
        cells.protected_negatives,
    );
    let unprotected = group_statistic_pmf(
        measure,
        cells.unprotected_positives,
        cells.unprotected_negatives,
    );
    let overflow = || Error::Overflow("cell pair count".into());
    let mut out = Pmf::new();
    for (&vp, &cp) in protected.entries() {
        for (&vu, &cu) in unprotected.entries() {
            out.add_defined(vp - vu, cp.checked_mul(cu).ok_or_else(overflow)?)?;
        }
    }
    let all = protected
        .total()
        .checked_mul(unprotected.total())
        .ok_or_else(overflow)?;
    let defined: Count = protected
        .defined_count()
        .checked_mul(unprotected.defined_count())
        .ok_or_else(overflow)?;
    out.add_undefined(all - defined)?;
    Ok(out)
}

/// Exact pmf of `measure` over every pair of `stratum`, by per-cell
/// difference-convolution.
pub fn stratum_pmf_fast(measure: MeasureId, stratum: &Stratum) -> Result<Pmf> {
    let d = StratumDecomposition::new(*stratum);
    let cells: Vec<CellSizes> = d.all_cells().collect();
    let parts = cells
        .into_par_iter()
        .map(|c| cell_pmf(measure, c))
        .collect::<Result<Vec<_>>>()?;
    merge_all(parts)
}

/// Exact pmf of `measure` over `stratum` by evaluating every pair. Used as
/// the reference for [`stratum_pmf_fast`].
pub fn stratum_pmf_bruteforce(measure: MeasureId, stratum: &Stratum) -> Result<Pmf> {
    let d = StratumDecomposition::new(*stratum);
    let s = *stratum;
    let parts = d
        .protected_positive_range()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|pp| {
            let mut local = Pmf::new();
            for pair in enumerate_stratum_range(&s, pp..=pp) {
                local.add(measure_value(measure, &pair), 1)?;
            }
            Ok(local)
        })
        .collect::<Result<Vec<_>>>()?;
    merge_all(parts)
}

fn merge_all(parts: Vec<Pmf>) -> Result<Pmf> {
    let mut out = Pmf::new();
    for p in &parts {
        out.merge(p)?;
    }
    Ok(out)
}

/// Pmf of `measure` over an arbitrary stream of pairs.
pub fn pmf_of_pairs(
    measure: MeasureId,
    pairs: impl IntoIterator<Item = ConfusionPair>,
) -> Result<Pmf> {
    let mut pmf = Pmf::new();
    for pair in pairs {
        pmf.add(measure_value(measure, &pair), 1)?;
    }
    Ok(pmf)
}
