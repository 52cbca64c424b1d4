//! The six group fairness measures and the two predictive-performance
//! measures used for fairness-vs-performance heatmaps.
//!
//! Every fairness measure is `stat(protected) - stat(unprotected)` for a
//! per-group statistic that is a ratio of confusion-matrix entries:
//!
//! | measure                      | numerator   | denominator        |
//! |------------------------------|-------------|--------------------|
//! | accuracy-equality            | `tp + tn`   | `tp + fn + fp + tn`|
//! | statistical-parity           | `tp + fp`   | `tp + fn + fp + tn`|
//! | equal-opportunity            | `tp`        | `tp + fn`          |
//! | predictive-equality          | `fp`        | `fp + tn`          |
//! | positive-predictive-parity   | `tp`        | `tp + fp`          |
//! | negative-predictive-parity   | `tn`        | `tn + fn`          |
//!
//! A zero denominator in either group makes the measure undefined.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::types::{ConfusionPair, GroupCounts, MeasureId, MeasureValue};

/// Unreduced `(numerator, denominator)` of a measure's per-group statistic.
#[inline]
pub(crate) fn group_fraction(measure: MeasureId, g: &GroupCounts) -> (u64, u64) {
    match measure {
        MeasureId::AccuracyEquality => (g.tp + g.tn, g.total()),
        MeasureId::StatisticalParity => (g.tp + g.fp, g.total()),
        MeasureId::EqualOpportunity => (g.tp, g.tp + g.fn_),
        MeasureId::PredictiveEquality => (g.fp, g.fp + g.tn),
        MeasureId::PositivePredictiveParity => (g.tp, g.tp + g.fp),
        MeasureId::NegativePredictiveParity => (g.tn, g.tn + g.fn_),
    }
}

/// The per-group statistic underlying `measure`, in `[0, 1]`.
pub fn group_statistic(measure: MeasureId, g: &GroupCounts) -> MeasureValue {
    match group_fraction(measure, g) {
        (_, 0) => MeasureValue::Undefined,
        (num, den) => MeasureValue::Defined(fraction(num as i64, den as i64)),
    }
}

/// Unreduced measure value `(num, den)` with `den > 0`, or `None` when undefined.
#[inline]
pub(crate) fn measure_fraction(measure: MeasureId, pair: &ConfusionPair) -> Option<(i64, i64)> {
    let (a, b) = group_fraction(measure, &pair.protected);
    let (c, d) = group_fraction(measure, &pair.unprotected);
    if b == 0 || d == 0 {
        return None;
    }
    let (a, b, c, d) = (a as i64, b as i64, c as i64, d as i64);
    Some((a * d - c * b, b * d))
}

/// `stat(protected) - stat(unprotected)`, undefined when either side is.
pub fn measure_value(measure: MeasureId, pair: &ConfusionPair) -> MeasureValue {
    match measure_fraction(measure, pair) {
        Some((num, den)) => MeasureValue::Defined(fraction(num, den)),
        None => MeasureValue::Undefined,
    }
}

/// Overall accuracy `(TP + TN) / n`; undefined for an empty dataset.
pub fn accuracy(pair: &ConfusionPair) -> MeasureValue {
    let c = pair.combined();
    match pair.n() {
        0 => MeasureValue::Undefined,
        n => MeasureValue::Defined(fraction((c.tp + c.tn) as i64, n as i64)),
    }
}

/// Geometric mean of positive and negative recall on the combined matrix.
///
/// The square root is generally irrational, so the value is carried as its
/// exact radicand and only rooted when a real number is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GMean {
    /// `sqrt(radicand)`.
    Defined {
        radicand: Rational,
    },
    Undefined,
}

impl GMean {
    pub fn radicand(&self) -> Option<Rational> {
        match self {
            GMean::Defined { radicand } => Some(*radicand),
            GMean::Undefined => None,
        }
    }

    /// The exact value when the radicand is a rational square.
    pub fn exact(&self) -> Option<Rational> {
        self.radicand().and_then(|r| r.exact_sqrt())
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.radicand().map(|r| r.to_f64().sqrt())
    }
}

/// `sqrt(TP/(TP+FN) * TN/(FP+TN))` over the combined matrix; undefined when
/// there are no actual positives or no actual negatives.
pub fn gmean(pair: &ConfusionPair) -> GMean {
    let c = pair.combined();
    let (p, n) = (c.positives(), c.negatives());
    if p == 0 || n == 0 {
        return GMean::Undefined;
    }
    let num = c.tp as i128 * c.tn as i128;
    let den = p as i128 * n as i128;
    GMean::Defined {
        radicand: Rational::from_i128(num, den).expect("recall product fits 64 bits"),
    }
}

/// Predictive-performance measure on the heatmap's vertical axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerformanceId {
    Accuracy,
    GMean,
}

impl PerformanceId {
    pub fn token(&self) -> &'static str {
        match self {
            PerformanceId::Accuracy => "accuracy",
            PerformanceId::GMean => "g-mean",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            PerformanceId::Accuracy => "Accuracy",
            PerformanceId::GMean => "G-mean",
        }
    }
}

impl fmt::Display for PerformanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for PerformanceId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "accuracy" => Ok(PerformanceId::Accuracy),
            "g-mean" => Ok(PerformanceId::GMean),
            _ => Err(format!("unknown performance measure {s:?}")),
        }
    }
}

fn fraction(num: i64, den: i64) -> Rational {
    Rational::new(num, den).expect("non-zero denominator")
}
