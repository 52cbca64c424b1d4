//! Dataset-independent properties of the fairness measures, evaluated over a
//! grid of (IR, GR) strata at a fixed dataset size.
//!
//! | Property | Statistic | Verdict |
//! |---|---|---|
//! | Immunity to IR | max pairwise total variation across IR points, per GR | holds iff `<= epsilon` |
//! | Immunity to GR | same across GR points, plus a defined-only variant | holds, or holds with caveat when only the defined-only variant passes |
//! | Resolution stability | min/max of unique defined values over the grid | holds iff `>= theta` |
//! | Fairness symmetry | exact `P(v) = P(-v)` at every point | exact |
//! | IR symmetry | exact pmf equality of `(r, g)` and `(1 - r, g)` | exact |
//! | GR symmetry | exact pmf equality of `(r, g)` and `(r, 1 - g)` | exact |
//! | Perfect fairness stability | max/min of `P(value = 0)` over the grid | holds iff `<= theta` |
//! | Undefined values | undefined probability per point and a condition class | reported |

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::{
    perfect_fairness_prob, stratum_pmf_fast, tv_distance_with, undefined_prob, Axis, Denominator,
    Pmf,
};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::types::{MeasureId, Stratum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropertyId {
    ImmunityIr,
    ImmunityGr,
    ResolutionStability,
    FairnessSymmetry,
    IrSymmetry,
    GrSymmetry,
    PerfectFairnessStability,
    UndefinedValues,
}

impl PropertyId {
    pub const ALL: [PropertyId; 8] = [
        PropertyId::ImmunityIr,
        PropertyId::ImmunityGr,
        PropertyId::ResolutionStability,
        PropertyId::FairnessSymmetry,
        PropertyId::IrSymmetry,
        PropertyId::GrSymmetry,
        PropertyId::PerfectFairnessStability,
        PropertyId::UndefinedValues,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            PropertyId::ImmunityIr => "immunity-ir",
            PropertyId::ImmunityGr => "immunity-gr",
            PropertyId::ResolutionStability => "resolution-stability",
            PropertyId::FairnessSymmetry => "fairness-symmetry",
            PropertyId::IrSymmetry => "ir-symmetry",
            PropertyId::GrSymmetry => "gr-symmetry",
            PropertyId::PerfectFairnessStability => "perfect-fairness-stability",
            PropertyId::UndefinedValues => "undefined-values",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            PropertyId::ImmunityIr => "Immunity to IR",
            PropertyId::ImmunityGr => "Immunity to GR",
            PropertyId::ResolutionStability => "Resolution stability",
            PropertyId::FairnessSymmetry => "Fairness symmetry",
            PropertyId::IrSymmetry => "IR symmetry",
            PropertyId::GrSymmetry => "GR symmetry",
            PropertyId::PerfectFairnessStability => "Perfect fairness stability",
            PropertyId::UndefinedValues => "Undefined values",
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for PropertyId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        PropertyId::ALL
            .into_iter()
            .find(|p| p.token() == s)
            .ok_or_else(|| format!("unknown property {s:?}"))
    }
}

/// A set of (IR, GR) points at dataset size `n`. Both axes are kept sorted
/// and free of duplicates, so reports do not depend on input order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioGrid {
    pub n: u64,
    pub ir: Vec<Rational>,
    pub gr: Vec<Rational>,
}

impl RatioGrid {
    /// Every combination of the two axes must map to an exact stratum.
    pub fn new(n: u64, ir: &[Rational], gr: &[Rational]) -> Result<Self> {
        let tidy = |axis: &str, values: &[Rational]| -> Result<Vec<Rational>> {
            if values.is_empty() {
                return Err(Error::InvalidGrid(format!("the {axis} axis is empty")));
            }
            let mut v = values.to_vec();
            v.sort();
            v.dedup();
            Ok(v)
        };
        let grid = RatioGrid {
            n,
            ir: tidy("IR", ir)?,
            gr: tidy("GR", gr)?,
        };
        for &i in &grid.ir {
            for &g in &grid.gr {
                Stratum::from_ratios(n, i, g)?;
            }
        }
        Ok(grid)
    }

    /// The same ratios on both axes.
    pub fn square(n: u64, ratios: &[Rational]) -> Result<Self> {
        RatioGrid::new(n, ratios, ratios)
    }

    pub fn stratum(&self, ir: Rational, gr: Rational) -> Stratum {
        Stratum::from_ratios(self.n, ir, gr).expect("grid points were validated")
    }

    pub fn points(&self) -> impl Iterator<Item = (Rational, Rational)> + '_ {
        self.ir
            .iter()
            .flat_map(move |&i| self.gr.iter().map(move |&g| (i, g)))
    }

    pub fn strata(&self) -> Vec<Stratum> {
        self.points().map(|(i, g)| self.stratum(i, g)).collect()
    }

    fn axis(&self, axis: Axis) -> &[Rational] {
        match axis {
            Axis::Ir => &self.ir,
            Axis::Gr => &self.gr,
        }
    }

    /// Fails unless `r` in the grid implies `1 - r` in the grid on `axis`.
    pub fn require_closed(&self, axis: Axis) -> Result<()> {
        let values = self.axis(axis);
        for &r in values {
            let c = r.complement();
            if values.binary_search(&c).is_err() {
                return Err(Error::GridNotClosed {
                    axis: match axis {
                        Axis::Ir => "IR",
                        Axis::Gr => "GR",
                    },
                    missing: c.to_string(),
                });
            }
        }
        Ok(())
    }

    /// The grid value closest to one half, the lower one on ties.
    fn center(&self, axis: Axis) -> Rational {
        let half = Rational::new(1, 2).expect("nonzero");
        *self
            .axis(axis)
            .iter()
            .min_by_key(|&&r| ((r - half).abs(), r))
            .expect("axes are non-empty")
    }
}

/// Thresholds for the properties that are not exact checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyConfig {
    /// Largest total variation distance still counted as immune.
    pub immunity_epsilon: Rational,
    /// Smallest min/max ratio of unique value counts counted as stable.
    pub resolution_theta: Rational,
    /// Largest max/min ratio of perfect fairness probabilities counted as
    /// stable.
    pub perfect_fairness_theta: Rational,
    /// Rise in undefined probability, from the axis center to an axis end,
    /// that marks that end as a condition for undefined values.
    pub undefined_effect: Rational,
}

impl Default for PropertyConfig {
    fn default() -> Self {
        let r = |n, d| Rational::new(n, d).expect("nonzero");
        PropertyConfig {
            immunity_epsilon: r(1, 100),
            resolution_theta: r(1, 2),
            perfect_fairness_theta: r(4, 1),
            undefined_effect: r(1, 10),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    HoldsWithCaveat,
    /// Descriptive result without a pass/fail threshold.
    Reported,
}

impl Verdict {
    pub fn symbol(&self) -> &'static str {
        match self {
            Verdict::Holds => "✓",
            Verdict::Fails => "×",
            Verdict::HoldsWithCaveat => "✓†",
            Verdict::Reported => "·",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPoint {
    pub ir: Rational,
    pub gr: Rational,
    pub stratum: Stratum,
}

/// Grid points that make a property fail, with a short explanation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<GridPoint>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndefinedPoint {
    pub ir: Rational,
    pub gr: Rational,
    pub probability: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Statistic {
    /// Largest pairwise total variation distance. `defined_only` drops the
    /// undefined atom and renormalizes.
    Distance {
        all: Rational,
        defined_only: Option<Rational>,
    },
    /// A ratio of extremes over the grid; `None` when it is unbounded.
    Ratio { value: Option<Rational> },
    /// Number of exact comparisons made and how many of them failed.
    ExactEquality { checked: usize, mismatches: usize },
    UndefinedProfile {
        condition: String,
        points: Vec<UndefinedPoint>,
    },
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistic::Distance {
                all,
                defined_only: Some(d),
            } => write!(f, "tv={all}; defined-only tv={d}"),
            Statistic::Distance { all, .. } => write!(f, "tv={all}"),
            Statistic::Ratio { value: Some(v) } => write!(f, "{v}"),
            Statistic::Ratio { value: None } => f.write_str("unbounded"),
            Statistic::ExactEquality {
                checked,
                mismatches,
            } => write!(f, "{mismatches} of {checked} mismatched"),
            Statistic::UndefinedProfile { condition, .. } => f.write_str(condition),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub measure: MeasureId,
    pub property: PropertyId,
    pub statistic: Statistic,
    pub threshold: Option<Rational>,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
}

impl PropertyVerdict {
    /// Table cell text: the verdict symbol, or the condition class for
    /// undefined values.
    pub fn cell_text(&self) -> String {
        match &self.statistic {
            Statistic::UndefinedProfile { condition, .. } => condition.clone(),
            _ => self.verdict.symbol().to_string(),
        }
    }
}

/// Exact pmfs for every (measure, grid point), computed once and shared.
pub struct PmfCache {
    pmfs: BTreeMap<(MeasureId, Stratum), Pmf>,
}

impl PmfCache {
    pub fn build(grid: &RatioGrid, measures: &[MeasureId]) -> Result<Self> {
        let keys: Vec<(MeasureId, Stratum)> = measures
            .iter()
            .flat_map(|&m| grid.strata().into_iter().map(move |s| (m, s)))
            .collect();
        let pmfs = keys
            .into_par_iter()
            .map(|(m, s)| Ok(((m, s), stratum_pmf_fast(m, &s)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(PmfCache { pmfs })
    }

    fn get(&self, measure: MeasureId, stratum: &Stratum) -> &Pmf {
        &self.pmfs[&(measure, *stratum)]
    }
}

struct Ctx<'a> {
    grid: &'a RatioGrid,
    cache: &'a PmfCache,
    measure: MeasureId,
}

impl Ctx<'_> {
    fn point(&self, ir: Rational, gr: Rational) -> GridPoint {
        GridPoint {
            ir,
            gr,
            stratum: self.grid.stratum(ir, gr),
        }
    }

    fn pmf(&self, ir: Rational, gr: Rational) -> &Pmf {
        self.cache.get(self.measure, &self.grid.stratum(ir, gr))
    }

    fn points(&self) -> Vec<GridPoint> {
        self.grid.points().map(|(i, g)| self.point(i, g)).collect()
    }
}

/// Evaluates one property for one measure, computing the pmfs it needs.
pub fn evaluate_property(
    property: PropertyId,
    measure: MeasureId,
    grid: &RatioGrid,
    config: &PropertyConfig,
) -> Result<PropertyVerdict> {
    let cache = PmfCache::build(grid, &[measure])?;
    evaluate_cached(property, measure, grid, config, &cache)
}

/// Like [`evaluate_property`], reading pmfs from `cache`.
pub fn evaluate_cached(
    property: PropertyId,
    measure: MeasureId,
    grid: &RatioGrid,
    config: &PropertyConfig,
    cache: &PmfCache,
) -> Result<PropertyVerdict> {
    let ctx = Ctx {
        grid,
        cache,
        measure,
    };
    let (statistic, threshold, verdict, witnesses) = match property {
        PropertyId::ImmunityIr => immunity(&ctx, Axis::Ir, config)?,
        PropertyId::ImmunityGr => immunity(&ctx, Axis::Gr, config)?,
        PropertyId::ResolutionStability => resolution(&ctx, config),
        PropertyId::FairnessSymmetry => fairness_symmetry(&ctx),
        PropertyId::IrSymmetry => ir_symmetry(&ctx)?,
        PropertyId::GrSymmetry => gr_symmetry(&ctx)?,
        PropertyId::PerfectFairnessStability => perfect_fairness_stability(&ctx, config)?,
        PropertyId::UndefinedValues => undefined_values(&ctx, config)?,
    };
    if witnesses.is_empty() == (verdict == Verdict::Fails) {
        return Err(Error::Invariant(format!(
            "{property} for {measure}: witnesses must be present exactly when the verdict fails"
        )));
    }
    Ok(PropertyVerdict {
        measure,
        property,
        statistic,
        threshold,
        verdict,
        witnesses,
    })
}

type Outcome = (Statistic, Option<Rational>, Verdict, Vec<Witness>);

/// Total variation under `denominator`. Two pmfs without defined values are
/// identical in shape; one without against one with is maximally distant.
fn distance(a: &Pmf, b: &Pmf, denominator: Denominator) -> Result<Rational> {
    match tv_distance_with(a, b, denominator) {
        Err(Error::EmptyPmf) if denominator == Denominator::Defined => {
            Ok(if a.defined_count() == b.defined_count() {
                Rational::ZERO
            } else {
                Rational::ONE
            })
        }
        other => other,
    }
}

fn immunity(ctx: &Ctx, axis: Axis, config: &PropertyConfig) -> Result<Outcome> {
    let (varied, fixed) = match axis {
        Axis::Ir => (&ctx.grid.ir, &ctx.grid.gr),
        Axis::Gr => (&ctx.grid.gr, &ctx.grid.ir),
    };
    let at = |v: Rational, f: Rational| match axis {
        Axis::Ir => (v, f),
        Axis::Gr => (f, v),
    };
    let with_caveat = axis == Axis::Gr;
    let mut worst: Option<(Rational, GridPoint, GridPoint)> = None;
    let mut worst_defined = Rational::ZERO;
    for &f in fixed {
        for (i, &a) in varied.iter().enumerate() {
            for &b in &varied[i + 1..] {
                let (pa, pb) = (at(a, f), at(b, f));
                let (ma, mb) = (ctx.pmf(pa.0, pa.1), ctx.pmf(pb.0, pb.1));
                let d = distance(ma, mb, Denominator::All)?;
                if worst.as_ref().is_none_or(|w| d > w.0) {
                    worst = Some((d, ctx.point(pa.0, pa.1), ctx.point(pb.0, pb.1)));
                }
                if with_caveat {
                    worst_defined = worst_defined.max(distance(ma, mb, Denominator::Defined)?);
                }
            }
        }
    }
    let eps = config.immunity_epsilon;
    let all = worst.as_ref().map_or(Rational::ZERO, |w| w.0);
    let defined_only = with_caveat.then_some(worst_defined);
    let verdict = if all <= eps {
        Verdict::Holds
    } else if defined_only.is_some_and(|d| d <= eps) {
        Verdict::HoldsWithCaveat
    } else {
        Verdict::Fails
    };
    let witnesses = match (verdict, worst) {
        (Verdict::Fails, Some((d, a, b))) => vec![Witness {
            points: vec![a, b],
            detail: format!("total variation distance {d} exceeds {eps}"),
        }],
        _ => Vec::new(),
    };
    Ok((
        Statistic::Distance { all, defined_only },
        Some(eps),
        verdict,
        witnesses,
    ))
}

fn resolution(ctx: &Ctx, config: &PropertyConfig) -> Outcome {
    let counts: Vec<(GridPoint, usize)> = ctx
        .points()
        .into_iter()
        .map(|p| (p, ctx.cache.get(ctx.measure, &p.stratum).unique_values()))
        .collect();
    let (min_point, min) = *counts.iter().min_by_key(|c| c.1).expect("non-empty grid");
    let (max_point, max) = *counts.iter().max_by_key(|c| c.1).expect("non-empty grid");
    let value = if max == 0 {
        Rational::ZERO
    } else {
        Rational::new(min as i64, max as i64).expect("nonzero")
    };
    let theta = config.resolution_theta;
    let verdict = if value >= theta {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    let witnesses = if verdict == Verdict::Fails {
        vec![Witness {
            points: vec![min_point, max_point],
            detail: format!("{min} unique values against {max}"),
        }]
    } else {
        Vec::new()
    };
    (
        Statistic::Ratio { value: Some(value) },
        Some(theta),
        verdict,
        witnesses,
    )
}

fn exact_outcome(checked: usize, witnesses: Vec<Witness>) -> Outcome {
    let verdict = if witnesses.is_empty() {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    (
        Statistic::ExactEquality {
            checked,
            mismatches: witnesses.len(),
        },
        None,
        verdict,
        witnesses,
    )
}

fn fairness_symmetry(ctx: &Ctx) -> Outcome {
    let points = ctx.points();
    let witnesses = points
        .iter()
        .filter_map(|p| {
            let pmf = ctx.cache.get(ctx.measure, &p.stratum);
            pmf.asymmetry_witness().map(|v| Witness {
                points: vec![*p],
                detail: format!(
                    "P({v}) has count {} but P({}) has count {}",
                    pmf.count_at(v),
                    -v,
                    pmf.count_at(-v)
                ),
            })
        })
        .collect();
    exact_outcome(points.len(), witnesses)
}

/// Compares every point with its counterpart under `flip`, once per
/// unordered pair. Points that are their own counterpart are skipped.
fn counterpart_mismatches(
    ctx: &Ctx,
    flip: impl Fn(Rational, Rational) -> (Rational, Rational),
) -> (usize, Vec<Witness>) {
    let mut checked = 0;
    let mut witnesses = Vec::new();
    for (i, g) in ctx.grid.points() {
        let (ci, cg) = flip(i, g);
        if (ci, cg) <= (i, g) {
            continue;
        }
        checked += 1;
        if ctx.pmf(i, g) != ctx.pmf(ci, cg) {
            witnesses.push(Witness {
                points: vec![ctx.point(i, g), ctx.point(ci, cg)],
                detail: "pmfs differ".into(),
            });
        }
    }
    (checked, witnesses)
}

fn ir_symmetry(ctx: &Ctx) -> Result<Outcome> {
    ctx.grid.require_closed(Axis::Ir)?;
    let (checked, witnesses) = counterpart_mismatches(ctx, |i, g| (i.complement(), g));
    Ok(exact_outcome(checked, witnesses))
}

fn gr_symmetry(ctx: &Ctx) -> Result<Outcome> {
    ctx.grid.require_closed(Axis::Gr)?;
    // Swapping the groups negates every value, so the pmf at 1 - g is the
    // mirror of the pmf at g, and equality across GR counterparts is the
    // same question as fairness symmetry at either point.
    for (i, g) in ctx.grid.points() {
        let here = ctx.pmf(i, g);
        let there = ctx.pmf(i, g.complement());
        if *there != here.mirrored() {
            return Err(Error::Invariant(format!(
                "{}: pmf at GR={} is not the mirror of the pmf at GR={g} (IR={i})",
                ctx.measure,
                g.complement()
            )));
        }
        if (here == there) != here.is_symmetric() {
            return Err(Error::Invariant(format!(
                "{}: GR symmetry and fairness symmetry disagree at IR={i}, GR={g}",
                ctx.measure
            )));
        }
    }
    let (checked, witnesses) = counterpart_mismatches(ctx, |i, g| (i, g.complement()));
    Ok(exact_outcome(checked, witnesses))
}

fn perfect_fairness_stability(ctx: &Ctx, config: &PropertyConfig) -> Result<Outcome> {
    let probs = ctx
        .points()
        .into_iter()
        .map(|p| {
            Ok((
                p,
                perfect_fairness_prob(ctx.cache.get(ctx.measure, &p.stratum))?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let (min_point, min) = *probs.iter().min_by_key(|c| c.1).expect("non-empty grid");
    let (max_point, max) = *probs.iter().max_by_key(|c| c.1).expect("non-empty grid");
    let theta = config.perfect_fairness_theta;
    let value = if max.is_zero() {
        Some(Rational::ONE)
    } else if min.is_zero() {
        None
    } else {
        Some(ratio_of(max, min)?)
    };
    let verdict = match value {
        Some(v) if v <= theta => Verdict::Holds,
        _ => Verdict::Fails,
    };
    let witnesses = if verdict == Verdict::Fails {
        vec![Witness {
            points: vec![max_point, min_point],
            detail: format!("P(value = 0) ranges from {min} to {max}"),
        }]
    } else {
        Vec::new()
    };
    Ok((Statistic::Ratio { value }, Some(theta), verdict, witnesses))
}

fn ratio_of(a: Rational, b: Rational) -> Result<Rational> {
    let num = a.numer() as i128 * b.denom() as i128;
    let den = a.denom() as i128 * b.numer() as i128;
    Rational::from_i128(num, den)
}

fn undefined_values(ctx: &Ctx, config: &PropertyConfig) -> Result<Outcome> {
    let mut probs = BTreeMap::new();
    let mut points = Vec::new();
    for (i, g) in ctx.grid.points() {
        let p = undefined_prob(ctx.pmf(i, g))?;
        probs.insert((i, g), p);
        points.push(UndefinedPoint {
            ir: i,
            gr: g,
            probability: p,
        });
    }
    let condition = if probs.values().all(|p| p.is_zero()) {
        "n_p=0 or n_up=0".to_string()
    } else {
        let effect = config.undefined_effect;
        let ends = |axis: Axis| -> Vec<&'static str> {
            let values = ctx.grid.axis(axis);
            let (lo, hi) = (values[0], values[values.len() - 1]);
            let mid = ctx.grid.center(axis);
            let other = ctx.grid.center(match axis {
                Axis::Ir => Axis::Gr,
                Axis::Gr => Axis::Ir,
            });
            let prob = |r: Rational| match axis {
                Axis::Ir => probs[&(r, other)],
                Axis::Gr => probs[&(other, r)],
            };
            let center = prob(mid);
            let mut out = Vec::new();
            if lo != mid && prob(lo) - center >= effect {
                out.push("low");
            }
            if hi != mid && prob(hi) - center >= effect {
                out.push("high");
            }
            out
        };
        let parts: Vec<String> = [(Axis::Gr, "GR"), (Axis::Ir, "IR")]
            .into_iter()
            .filter_map(|(axis, name)| {
                let e = ends(axis);
                (!e.is_empty()).then(|| format!("{} {name}", e.join("/")))
            })
            .collect();
        if parts.is_empty() {
            "no dominant ratio".to_string()
        } else {
            parts.join(", ")
        }
    };
    Ok((
        Statistic::UndefinedProfile { condition, points },
        Some(config.undefined_effect),
        Verdict::Reported,
        Vec::new(),
    ))
}

/// Every property for every measure on one grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub n: u64,
    pub ir_grid: Vec<Rational>,
    pub gr_grid: Vec<Rational>,
    pub config: PropertyConfig,
    pub cells: Vec<PropertyVerdict>,
}

impl PropertyReport {
    pub fn cell(&self, property: PropertyId, measure: MeasureId) -> Option<&PropertyVerdict> {
        self.cells
            .iter()
            .find(|c| c.property == property && c.measure == measure)
    }

    /// Plain-text table with one row per property and one column per
    /// measure.
    pub fn to_table(&self) -> String {
        let header: Vec<String> = std::iter::once(String::from("Property"))
            .chain(MeasureId::ALL.iter().map(|m| short_label(*m).to_string()))
            .collect();
        let mut rows = vec![header];
        for p in PropertyId::ALL {
            let mut row = vec![p.label().to_string()];
            for m in MeasureId::ALL {
                row.push(self.cell(p, m).map_or_else(String::new, |c| c.cell_text()));
            }
            rows.push(row);
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = format!(
            "n = {}, IR in {{{}}}, GR in {{{}}}\n",
            self.n,
            join(&self.ir_grid),
            join(&self.gr_grid)
        );
        for row in &rows {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, &w)| format!("{cell}{}", " ".repeat(w - cell.chars().count())))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out.push_str(&format!(
            "thresholds: immunity <= {}, resolution >= {}, perfect fairness <= {}, undefined effect >= {}\n",
            self.config.immunity_epsilon,
            self.config.resolution_theta,
            self.config.perfect_fairness_theta,
            self.config.undefined_effect
        ));
        out
    }
}

fn join(values: &[Rational]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn short_label(m: MeasureId) -> &'static str {
    match m {
        MeasureId::AccuracyEquality => "AE",
        MeasureId::StatisticalParity => "SP",
        MeasureId::EqualOpportunity => "EO",
        MeasureId::PredictiveEquality => "PE",
        MeasureId::PositivePredictiveParity => "PPP",
        MeasureId::NegativePredictiveParity => "NPP",
    }
}

/// Evaluates all properties for all measures. The grid must be closed under
/// `r -> 1 - r` on both axes.
pub fn property_report(grid: &RatioGrid, config: &PropertyConfig) -> Result<PropertyReport> {
    grid.require_closed(Axis::Ir)?;
    grid.require_closed(Axis::Gr)?;
    let cache = PmfCache::build(grid, &MeasureId::ALL)?;
    let jobs: Vec<(PropertyId, MeasureId)> = PropertyId::ALL
        .into_iter()
        .flat_map(|p| MeasureId::ALL.into_iter().map(move |m| (p, m)))
        .collect();
    let cells = jobs
        .into_par_iter()
        .map(|(p, m)| evaluate_cached(p, m, grid, config, &cache))
        .collect::<Result<Vec<_>>>()?;
    Ok(PropertyReport {
        n: grid.n,
        ir_grid: grid.ir.clone(),
        gr_grid: grid.gr.clone(),
        config: *config,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn small_grid() -> RatioGrid {
        RatioGrid::square(8, &[r(1, 4), r(1, 2), r(3, 4)]).unwrap()
    }

    #[test]
    fn grid_is_sorted_and_deduplicated() {
        let g = RatioGrid::new(8, &[r(3, 4), r(1, 4), r(3, 4)], &[r(1, 2)]).unwrap();
        assert_eq!(g.ir, vec![r(1, 4), r(3, 4)]);
        assert_eq!(g.points().count(), 2);
    }

    #[test]
    fn grid_rejects_inexact_and_empty_axes() {
        assert!(matches!(
            RatioGrid::new(10, &[r(1, 3)], &[r(1, 2)]),
            Err(Error::InexactRatio { axis: "IR", .. })
        ));
        assert!(matches!(
            RatioGrid::new(10, &[], &[r(1, 2)]),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn symmetry_needs_closed_grid() {
        let g = RatioGrid::new(8, &[r(1, 4), r(1, 2)], &[r(1, 2)]).unwrap();
        let err = evaluate_property(
            PropertyId::IrSymmetry,
            MeasureId::AccuracyEquality,
            &g,
            &PropertyConfig::default(),
        )
        .unwrap_err();
        match err {
            Error::GridNotClosed { axis, missing } => {
                assert_eq!(axis, "IR");
                assert_eq!(missing, "3/4");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fairness_symmetry_examples() {
        let c = PropertyConfig::default();
        let eo = evaluate_property(
            PropertyId::FairnessSymmetry,
            MeasureId::EqualOpportunity,
            &small_grid(),
            &c,
        )
        .unwrap();
        assert_eq!(eo.verdict, Verdict::Holds);
        assert!(eo.witnesses.is_empty());

        let ppp = evaluate_property(
            PropertyId::FairnessSymmetry,
            MeasureId::PositivePredictiveParity,
            &small_grid(),
            &c,
        )
        .unwrap();
        assert_eq!(ppp.verdict, Verdict::Fails);
        assert!(ppp.witnesses.iter().any(|w| w.points[0].gr == r(1, 4)));
    }

    #[test]
    fn ir_symmetry_holds_for_accuracy_equality() {
        let v = evaluate_property(
            PropertyId::IrSymmetry,
            MeasureId::AccuracyEquality,
            &small_grid(),
            &PropertyConfig::default(),
        )
        .unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        assert_eq!(
            v.statistic,
            Statistic::ExactEquality {
                checked: 3,
                mismatches: 0
            }
        );
    }

    #[test]
    fn immunity_to_ir_fails_for_every_measure() {
        for m in MeasureId::ALL {
            let v = evaluate_property(
                PropertyId::ImmunityIr,
                m,
                &small_grid(),
                &PropertyConfig::default(),
            )
            .unwrap();
            assert_eq!(v.verdict, Verdict::Fails, "{m}");
            assert_eq!(v.witnesses[0].points.len(), 2);
        }
    }

    #[test]
    fn loose_threshold_makes_immunity_hold() {
        let c = PropertyConfig {
            immunity_epsilon: Rational::ONE,
            ..PropertyConfig::default()
        };
        let v = evaluate_property(
            PropertyId::ImmunityGr,
            MeasureId::EqualOpportunity,
            &small_grid(),
            &c,
        )
        .unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        assert!(v.witnesses.is_empty());
    }

    #[test]
    fn undefined_condition_classes() {
        let c = PropertyConfig::default();
        let g = small_grid();
        let condition = |m| match evaluate_property(PropertyId::UndefinedValues, m, &g, &c)
            .unwrap()
            .statistic
        {
            Statistic::UndefinedProfile { condition, .. } => condition,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(condition(MeasureId::AccuracyEquality), "n_p=0 or n_up=0");
        assert_eq!(condition(MeasureId::StatisticalParity), "n_p=0 or n_up=0");
        let eo = condition(MeasureId::EqualOpportunity);
        assert!(eo.contains("low IR") && !eo.contains("high IR"), "{eo}");
    }

    #[test]
    fn perfect_fairness_ratio_is_exact() {
        let c = PropertyConfig::default();
        let g = RatioGrid::new(4, &[r(1, 2)], &[r(1, 2)]).unwrap();
        let v = evaluate_property(
            PropertyId::PerfectFairnessStability,
            MeasureId::EqualOpportunity,
            &g,
            &c,
        )
        .unwrap();
        assert_eq!(
            v.statistic,
            Statistic::Ratio {
                value: Some(Rational::ONE)
            }
        );
        assert_eq!(v.verdict, Verdict::Holds);
    }

    #[test]
    fn report_ignores_grid_order() {
        let c = PropertyConfig::default();
        let a = property_report(
            &RatioGrid::square(8, &[r(1, 4), r(1, 2), r(3, 4)]).unwrap(),
            &c,
        )
        .unwrap();
        let b = property_report(
            &RatioGrid::square(8, &[r(3, 4), r(1, 4), r(1, 2)]).unwrap(),
            &c,
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cells.len(), 48);
        let table = a.to_table();
        assert!(table.contains("Immunity to IR"));
        assert_eq!(table.lines().count(), 11);
    }
}
