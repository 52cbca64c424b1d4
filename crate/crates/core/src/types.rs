//! Confusion pairs, strata, and measure identifiers.

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Pmf weights and enumeration sizes.
pub type Count = u128;

/// One group's confusion matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GroupCounts {
    pub tp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub fp: u64,
    pub tn: u64,
}

impl GroupCounts {
    pub const fn new(tp: u64, fn_: u64, fp: u64, tn: u64) -> Self {
        GroupCounts { tp, fn_, fp, tn }
    }

    /// Actual positives, `tp + fn`.
    pub fn positives(&self) -> u64 {
        self.tp + self.fn_
    }

    /// Actual negatives, `fp + tn`.
    pub fn negatives(&self) -> u64 {
        self.fp + self.tn
    }

    pub fn total(&self) -> u64 {
        self.positives() + self.negatives()
    }

    /// Swaps the roles of the two classes: `(tp, fn, fp, tn) -> (fp, tn, tp, fn)`.
    pub fn swap_classes(&self) -> Self {
        GroupCounts::new(self.fp, self.tn, self.tp, self.fn_)
    }

    /// Swaps both the actual and the predicted labels:
    /// `(tp, fn, fp, tn) -> (tn, fp, fn, tp)`.
    pub fn invert_labels(&self) -> Self {
        GroupCounts::new(self.tn, self.fp, self.fn_, self.tp)
    }
}

/// The eight-entry confusion tuple split by protected and unprotected group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ConfusionPair {
    pub protected: GroupCounts,
    pub unprotected: GroupCounts,
}

impl ConfusionPair {
    pub const fn new(protected: GroupCounts, unprotected: GroupCounts) -> Self {
        ConfusionPair {
            protected,
            unprotected,
        }
    }

    /// Entries in the order `tp_p, fn_p, fp_p, tn_p, tp_up, fn_up, fp_up, tn_up`.
    pub fn from_array(a: [u64; 8]) -> Self {
        ConfusionPair::new(
            GroupCounts::new(a[0], a[1], a[2], a[3]),
            GroupCounts::new(a[4], a[5], a[6], a[7]),
        )
    }

    pub fn to_array(&self) -> [u64; 8] {
        let (p, u) = (&self.protected, &self.unprotected);
        [p.tp, p.fn_, p.fp, p.tn, u.tp, u.fn_, u.fp, u.tn]
    }

    pub fn n(&self) -> u64 {
        self.protected.total() + self.unprotected.total()
    }

    pub fn n_protected(&self) -> u64 {
        self.protected.total()
    }

    pub fn n_unprotected(&self) -> u64 {
        self.unprotected.total()
    }

    /// Actual positives across both groups.
    pub fn positives(&self) -> u64 {
        self.protected.positives() + self.unprotected.positives()
    }

    pub fn negatives(&self) -> u64 {
        self.protected.negatives() + self.unprotected.negatives()
    }

    /// The combined (group-blind) confusion matrix.
    pub fn combined(&self) -> GroupCounts {
        let (p, u) = (&self.protected, &self.unprotected);
        GroupCounts::new(p.tp + u.tp, p.fn_ + u.fn_, p.fp + u.fp, p.tn + u.tn)
    }

    pub fn swap_groups(&self) -> Self {
        ConfusionPair::new(self.unprotected, self.protected)
    }

    pub fn swap_classes(&self) -> Self {
        ConfusionPair::new(
            self.protected.swap_classes(),
            self.unprotected.swap_classes(),
        )
    }

    pub fn invert_labels(&self) -> Self {
        ConfusionPair::new(
            self.protected.invert_labels(),
            self.unprotected.invert_labels(),
        )
    }

    pub fn stratum(&self) -> Result<Stratum> {
        Stratum::new(self.n(), self.positives(), self.n_protected())
    }
}

/// All confusion pairs sharing a dataset size `n`, `p` actual positives and
/// `n_p` protected examples. One (IR, GR) grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Stratum {
    pub n: u64,
    pub p: u64,
    pub n_p: u64,
}

impl Stratum {
    pub fn new(n: u64, p: u64, n_p: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidStratum("n must be positive".into()));
        }
        if p > n {
            return Err(Error::InvalidStratum(format!("p = {p} exceeds n = {n}")));
        }
        if n_p > n {
            return Err(Error::InvalidStratum(format!(
                "n_p = {n_p} exceeds n = {n}"
            )));
        }
        Ok(Stratum { n, p, n_p })
    }

    /// Converts imbalance and group ratios into the stratum they describe.
    /// Both `ir * n` and `gr * n` must be integers.
    pub fn from_ratios(n: u64, ir: Rational, gr: Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidStratum("n must be positive".into()));
        }
        let p = ratio_count("IR", n, ir)?;
        let n_p = ratio_count("GR", n, gr)?;
        Stratum::new(n, p, n_p)
    }

    pub fn negatives(&self) -> u64 {
        self.n - self.p
    }

    pub fn n_unprotected(&self) -> u64 {
        self.n - self.n_p
    }

    pub fn imbalance_ratio(&self) -> Rational {
        ratio(self.p, self.n)
    }

    pub fn group_ratio(&self) -> Rational {
        ratio(self.n_p, self.n)
    }

    pub fn contains(&self, pair: &ConfusionPair) -> bool {
        pair.n() == self.n && pair.positives() == self.p && pair.n_protected() == self.n_p
    }

    /// The stratum at `(n, n - p, n_p)`.
    pub fn swap_classes(&self) -> Self {
        Stratum {
            n: self.n,
            p: self.n - self.p,
            n_p: self.n_p,
        }
    }

    /// The stratum at `(n, p, n - n_p)`.
    pub fn swap_groups(&self) -> Self {
        Stratum {
            n: self.n,
            p: self.p,
            n_p: self.n - self.n_p,
        }
    }

    /// Every valid stratum for dataset size `n`, ordered by `(p, n_p)`.
    pub fn all(n: u64) -> impl Iterator<Item = Stratum> {
        (0..=n).flat_map(move |p| (0..=n).map(move |n_p| Stratum { n, p, n_p }))
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} p={} n_p={} (IR={}, GR={})",
            self.n,
            self.p,
            self.n_p,
            self.imbalance_ratio(),
            self.group_ratio()
        )
    }
}

fn ratio(count: u64, n: u64) -> Rational {
    Rational::from_counts(count as u128, n as u128).expect("count/n fits for valid strata")
}

fn ratio_count(axis: &'static str, n: u64, r: Rational) -> Result<u64> {
    if r < Rational::ZERO || r > Rational::ONE {
        return Err(Error::RatioOutOfRange {
            axis,
            ratio: r.to_string(),
        });
    }
    r.scale_exact(n).ok_or(Error::InexactRatio {
        axis,
        ratio: r.to_string(),
        n,
    })
}

/// The six group fairness measures, each a difference of one per-group
/// statistic between the protected and unprotected group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureId {
    AccuracyEquality,
    StatisticalParity,
    EqualOpportunity,
    PredictiveEquality,
    PositivePredictiveParity,
    NegativePredictiveParity,
}

impl MeasureId {
    pub const ALL: [MeasureId; 6] = [
        MeasureId::AccuracyEquality,
        MeasureId::StatisticalParity,
        MeasureId::EqualOpportunity,
        MeasureId::PredictiveEquality,
        MeasureId::PositivePredictiveParity,
        MeasureId::NegativePredictiveParity,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            MeasureId::AccuracyEquality => "accuracy-equality",
            MeasureId::StatisticalParity => "statistical-parity",
            MeasureId::EqualOpportunity => "equal-opportunity",
            MeasureId::PredictiveEquality => "predictive-equality",
            MeasureId::PositivePredictiveParity => "positive-predictive-parity",
            MeasureId::NegativePredictiveParity => "negative-predictive-parity",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            MeasureId::AccuracyEquality => "Accuracy Equality",
            MeasureId::StatisticalParity => "Statistical Parity",
            MeasureId::EqualOpportunity => "Equal Opportunity",
            MeasureId::PredictiveEquality => "Predictive Equality",
            MeasureId::PositivePredictiveParity => "Positive Predictive Parity",
            MeasureId::NegativePredictiveParity => "Negative Predictive Parity",
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for MeasureId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        MeasureId::ALL
            .into_iter()
            .find(|m| m.token() == s)
            .ok_or_else(|| format!("unknown measure {s:?}"))
    }
}

/// A measure evaluation: an exact value, or undefined when a per-group
/// denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureValue {
    Defined(Rational),
    Undefined,
}

impl MeasureValue {
    pub fn defined(&self) -> Option<Rational> {
        match self {
            MeasureValue::Defined(v) => Some(*v),
            MeasureValue::Undefined => None,
        }
    }

    pub fn is_undefined(&self) -> bool {
        matches!(self, MeasureValue::Undefined)
    }
}

impl Neg for MeasureValue {
    type Output = MeasureValue;
    fn neg(self) -> MeasureValue {
        match self {
            MeasureValue::Defined(v) => MeasureValue::Defined(-v),
            MeasureValue::Undefined => MeasureValue::Undefined,
        }
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureValue::Defined(v) => write!(f, "{v}"),
            MeasureValue::Undefined => f.write_str("undefined"),
        }
    }
}
