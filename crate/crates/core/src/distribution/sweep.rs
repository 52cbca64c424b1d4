use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rational::Rational;
use crate::types::{MeasureId, Stratum};

use super::pmf::{perfect_fairness_prob_with, undefined_prob, Denominator, Pmf};
use super::stratum::stratum_pmf_fast;

/// The ratio a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Ir,
    Gr,
}

impl Axis {
    pub fn token(&self) -> &'static str {
        match self {
            Axis::Ir => "ir",
            Axis::Gr => "gr",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ir" => Ok(Axis::Ir),
            "gr" => Ok(Axis::Gr),
            _ => Err(format!("unknown axis {s:?} (expected ir or gr)")),
        }
    }
}

/// Per-point summary of a stratum pmf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepStatistic {
    PerfectFairness,
    Undefined,
    UniqueValues,
}

impl FromStr for SweepStatistic {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "perfect-fairness" => Ok(SweepStatistic::PerfectFairness),
            "undefined" => Ok(SweepStatistic::Undefined),
            "unique-values" => Ok(SweepStatistic::UniqueValues),
            _ => Err(format!(
                "unknown statistic {s:?} (expected perfect-fairness, undefined or unique-values)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SweepValue {
    Probability(Rational),
    Count(u64),
}

impl SweepValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            SweepValue::Probability(p) => p.to_f64(),
            SweepValue::Count(c) => *c as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub ratio: Rational,
    pub stratum: Stratum,
    pub value: SweepValue,
}

/// A statistic traced along one ratio axis with the other ratio held fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCurve {
    pub measure: MeasureId,
    pub n: u64,
    pub varied: Axis,
    pub fixed: Rational,
    pub statistic: SweepStatistic,
    pub denominator: Denominator,
    pub points: Vec<SweepPoint>,
}

/// Evaluates `statistic` at each grid point along `varied`. Every ratio must
/// map to an integer count at size `n`.
pub fn sweep_curve(
    measure: MeasureId,
    n: u64,
    varied: Axis,
    grid: &[Rational],
    fixed_other: Rational,
    statistic: SweepStatistic,
    denominator: Denominator,
) -> Result<SweepCurve> {
    let strata = grid
        .iter()
        .map(|&r| match varied {
            Axis::Ir => Stratum::from_ratios(n, r, fixed_other),
            Axis::Gr => Stratum::from_ratios(n, fixed_other, r),
        })
        .collect::<Result<Vec<_>>>()?;
    let points = grid
        .par_iter()
        .zip(strata.par_iter())
        .map(|(&ratio, stratum)| {
            let pmf = stratum_pmf_fast(measure, stratum)?;
            Ok(SweepPoint {
                ratio,
                stratum: *stratum,
                value: summarize(&pmf, statistic, denominator)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepCurve {
        measure,
        n,
        varied,
        fixed: fixed_other,
        statistic,
        denominator,
        points,
    })
}

pub fn summarize(
    pmf: &Pmf,
    statistic: SweepStatistic,
    denominator: Denominator,
) -> Result<SweepValue> {
    Ok(match statistic {
        SweepStatistic::PerfectFairness => {
            SweepValue::Probability(perfect_fairness_prob_with(pmf, denominator)?)
        }
        SweepStatistic::Undefined => SweepValue::Probability(undefined_prob(pmf)?),
        SweepStatistic::UniqueValues => SweepValue::Count(pmf.unique_values() as u64),
    })
}
