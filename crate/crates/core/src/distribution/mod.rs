//! Exact pmfs of fairness measures per stratum, and the summaries built on
//! them: perfect-fairness and undefined probabilities, binned histograms,
//! ratio sweeps and fairness-vs-performance heatmaps.

mod heatmap;
mod histogram;
mod pmf;
mod stratum;
mod sweep;

pub use heatmap::{
    joint_heatmap, joint_heatmap_stratum, perf_bin, Heatmap2D, DEFAULT_HEATMAP_N,
    DEFAULT_PERF_BINS, MAX_HEATMAP_N,
};
pub use histogram::{bin_histogram, fairness_bin, BinnedHistogram, DEFAULT_BINS};
pub use pmf::{
    perfect_fairness_prob, perfect_fairness_prob_with, tv_distance, tv_distance_with,
    undefined_prob, Denominator, Pmf,
};
pub use stratum::{group_statistic_pmf, pmf_of_pairs, stratum_pmf_bruteforce, stratum_pmf_fast};
pub use sweep::{summarize, sweep_curve, Axis, SweepCurve, SweepPoint, SweepStatistic, SweepValue};
