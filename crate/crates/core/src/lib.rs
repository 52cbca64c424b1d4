//! Exact distributions of group fairness measures over confusion matrices.
//!
//! Every confusion matrix of a dataset of size `n`, split into a protected
//! and an unprotected group, is treated as equally likely. Under that model
//! the crate computes exact probability mass functions of six group fairness
//! measures for any class imbalance ratio (IR = P/n) and group ratio
//! (GR = n_p/n), along with perfect-fairness and undefined-value
//! probabilities, fairness-vs-performance heatmaps, and verdicts for eight
//! dataset-independent measure properties.
//!
//! ```
//! use fairdist::{stratum_pmf_fast, perfect_fairness_prob, MeasureId, Rational, Stratum};
//!
//! let s = Stratum::from_ratios(4, "1/2".parse()?, "1/2".parse()?)?;
//! let pmf = stratum_pmf_fast(MeasureId::EqualOpportunity, &s)?;
//! assert_eq!(pmf.total(), 34);
//! assert_eq!(pmf.undefined_count(), 18);
//! assert_eq!(perfect_fairness_prob(&pmf)?, Rational::new(4, 17)?);
//! # Ok::<(), fairdist::Error>(())
//! ```

pub mod cli;
pub mod distribution;
pub mod enumeration;
mod error;
pub mod export;
pub mod measures;
pub mod properties;
mod rational;
pub mod svg;
mod types;

pub use distribution::{
    bin_histogram, joint_heatmap, perfect_fairness_prob, stratum_pmf_bruteforce, stratum_pmf_fast,
    sweep_curve, tv_distance, undefined_prob, Pmf,
};
pub use enumeration::{enumerate_all, enumerate_stratum, stratum_count, total_count};
pub use error::{Error, Result};
pub use measures::{accuracy, gmean, group_statistic, measure_value, GMean, PerformanceId};
pub use rational::Rational;
pub use types::{ConfusionPair, Count, GroupCounts, MeasureId, MeasureValue, Stratum};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/confusion-pairs.md")]
    mod confusion_pairs {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    mod enumeration {}
    #[doc = include_str!("../../../book/src/pmfs.md")]
    mod pmfs {}
    #[doc = include_str!("../../../book/src/summaries.md")]
    mod summaries {}
    #[doc = include_str!("../../../book/src/properties.md")]
    mod properties {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
