//! Standalone SVG charts on a fixed 800×600 canvas with linear scales.
//!
//! Output depends only on the input data, so identical inputs give
//! byte-identical documents.

use std::fmt::Write;

use crate::distribution::BinnedHistogram;
use crate::error::{Error, Result};
use crate::export::{CurveData, HeatmapGrid};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;

const LEFT: f64 = 80.0;
const RIGHT: f64 = 770.0;
const TOP: f64 = 60.0;
const BOTTOM: f64 = 530.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn open(title: &str) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    s.push_str("<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n");
    if !title.is_empty() {
        s.push_str(&format!(
            "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
            escape(title)
        ));
    }
    s
}

fn axes(s: &mut String, x_label: &str, y_label: &str) {
    let _ = writeln!(
        s,
        "<line class=\"axis\" x1=\"{LEFT}\" y1=\"{BOTTOM}\" x2=\"{RIGHT}\" y2=\"{BOTTOM}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        s,
        "<line class=\"axis\" x1=\"{LEFT}\" y1=\"{TOP}\" x2=\"{LEFT}\" y2=\"{BOTTOM}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"575\" text-anchor=\"middle\">{}</text>",
        (LEFT + RIGHT) / 2.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        "<text x=\"20\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.1})\">{}</text>",
        (TOP + BOTTOM) / 2.0,
        (TOP + BOTTOM) / 2.0,
        escape(y_label)
    );
}

fn y_ticks(s: &mut String, max: f64) {
    for k in 0..=4 {
        let v = max * k as f64 / 4.0;
        let y = BOTTOM - (BOTTOM - TOP) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>",
            LEFT - 6.0,
            y + 4.0,
            tick(v)
        );
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && v.abs() < 0.01 {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}")
    }
}

/// Bars of probability per bin over `[-1, 1]`, followed after a gap of one
/// bar width by the undefined bucket. Only non-empty value bins get a bar.
pub fn histogram_svg(hist: &BinnedHistogram, title: &str) -> Result<String> {
    let total = hist.defined_total() + hist.undefined_count;
    if total == 0 {
        return Err(Error::EmptyPmf);
    }
    let probs: Vec<f64> = hist
        .bin_counts
        .iter()
        .map(|&c| c as f64 / total as f64)
        .collect();
    let undefined = hist.undefined_count as f64 / total as f64;
    let max = probs
        .iter()
        .copied()
        .fold(undefined, f64::max)
        .max(f64::MIN_POSITIVE);
    let slots = hist.bin_count as f64 + 2.0;
    let bw = (RIGHT - LEFT) / slots;
    let height = |p: f64| (BOTTOM - TOP) * p / max;

    let mut s = open(title);
    axes(&mut s, "measure value", "probability");
    y_ticks(&mut s, max);
    for (i, &p) in probs.iter().enumerate() {
        if hist.bin_counts[i] == 0 {
            continue;
        }
        let h = height(p);
        let _ = writeln!(
            s,
            "<rect class=\"bar\" x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"#4c72b0\"/>",
            LEFT + i as f64 * bw,
            BOTTOM - h,
            bw,
            h
        );
    }
    let h = height(undefined);
    let _ = writeln!(
        s,
        "<rect class=\"undefined\" x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"#c44e52\"/>",
        LEFT + (hist.bin_count as f64 + 1.0) * bw,
        BOTTOM - h,
        bw,
        h
    );
    let value_width = hist.bin_count as f64 * bw;
    for (label, frac) in [("-1", 0.0), ("0", 0.5), ("1", 1.0)] {
        let _ = writeln!(
            s,
            "<text x=\"{:.3}\" y=\"{:.1}\" text-anchor=\"middle\">{label}</text>",
            LEFT + frac * value_width,
            BOTTOM + 18.0
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.3}\" y=\"{:.1}\" text-anchor=\"middle\">Undef.</text>",
        LEFT + (hist.bin_count as f64 + 1.5) * bw,
        BOTTOM + 18.0
    );
    s.push_str("</svg>\n");
    Ok(s)
}

/// A polyline through the points with a marker on each.
pub fn curve_svg(curve: &CurveData) -> Result<String> {
    if curve.points.is_empty() {
        return Err(Error::Schema {
            field: "points".into(),
            message: "no points to plot".into(),
        });
    }
    let (mut x0, mut x1) = curve
        .points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.0), b.max(p.0))
        });
    if x0 == x1 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    let y_max = curve.points.iter().map(|p| p.1).fold(0.0, f64::max);
    let y_max = if y_max > 0.0 { y_max * 1.05 } else { 1.0 };
    let sx = |x: f64| LEFT + (RIGHT - LEFT) * (x - x0) / (x1 - x0);
    let sy = |y: f64| BOTTOM - (BOTTOM - TOP) * y / y_max;

    let mut s = open(&curve.title);
    axes(&mut s, &curve.x_label, &curve.y_label);
    y_ticks(&mut s, y_max);
    let pts: Vec<String> = curve
        .points
        .iter()
        .map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y)))
        .collect();
    let _ = writeln!(
        s,
        "<polyline class=\"curve\" points=\"{}\" fill=\"none\" stroke=\"#4c72b0\" stroke-width=\"2\"/>",
        pts.join(" ")
    );
    for &(x, y) in &curve.points {
        let _ = writeln!(
            s,
            "<circle class=\"point\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"4\" fill=\"#4c72b0\"/>",
            sx(x),
            sy(y)
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.3}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            sx(x),
            BOTTOM + 18.0,
            tick(x)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// One rectangle per (fairness bin, performance bin) cell, shaded by count.
/// Fairness runs left to right, performance bottom to top.
pub fn heatmap_svg(grid: &HeatmapGrid, title: &str) -> Result<String> {
    if grid.fairness_bins == 0 || grid.perf_bins == 0 {
        return Err(Error::Schema {
            field: "cells".into(),
            message: "no cells to plot".into(),
        });
    }
    if grid.cells.len() != grid.fairness_bins * grid.perf_bins {
        return Err(Error::Schema {
            field: "cells".into(),
            message: "length is not fairness_bins * perf_bins".into(),
        });
    }
    let max = grid.cells.iter().copied().max().unwrap_or(0).max(1) as f64;
    let cw = (RIGHT - LEFT) / grid.fairness_bins as f64;
    let ch = (BOTTOM - TOP) / grid.perf_bins as f64;

    let mut s = open(title);
    axes(&mut s, "measure value", "performance");
    for f in 0..grid.fairness_bins {
        for p in 0..grid.perf_bins {
            let c = grid.cells[f * grid.perf_bins + p];
            let t = c as f64 / max;
            let shade = |lo: f64, hi: f64| (hi + (lo - hi) * t).round() as u8;
            let _ = writeln!(
                s,
                "<rect class=\"cell\" x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"#{:02x}{:02x}{:02x}\"><title>{c}</title></rect>",
                LEFT + f as f64 * cw,
                BOTTOM - (p as f64 + 1.0) * ch,
                cw,
                ch,
                shade(8.0, 247.0),
                shade(48.0, 251.0),
                shade(107.0, 255.0)
            );
        }
    }
    for (label, frac) in [("-1", 0.0), ("0", 0.5), ("1", 1.0)] {
        let _ = writeln!(
            s,
            "<text x=\"{:.3}\" y=\"{:.1}\" text-anchor=\"middle\">{label}</text>",
            LEFT + frac * (RIGHT - LEFT),
            BOTTOM + 18.0
        );
    }
    for (label, frac) in [("0", 0.0), ("1", 1.0)] {
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.3}\" text-anchor=\"end\">{label}</text>",
            LEFT - 6.0,
            BOTTOM - frac * (BOTTOM - TOP) + 4.0
        );
    }
    let fu: u128 = grid.fairness_undefined.iter().sum();
    let pu: u128 = grid.perf_undefined.iter().sum();
    let _ = writeln!(
        s,
        "<text x=\"{RIGHT}\" y=\"50\" text-anchor=\"end\">undefined: measure {fu}, performance {pu}, both {}</text>",
        grid.both_undefined
    );
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::{bin_histogram, Pmf};
    use crate::rational::Rational;

    #[test]
    fn single_value_gives_one_bar() {
        let pmf = Pmf::from_counts([(Rational::ZERO, 8)], 0).unwrap();
        let svg = histogram_svg(&bin_histogram(&pmf, 41).unwrap(), "x").unwrap();
        assert_eq!(svg.matches("class=\"bar\"").count(), 1);
        assert_eq!(svg.matches("class=\"undefined\"").count(), 1);
        assert!(svg.contains("viewBox=\"0 0 800 600\""));
    }

    #[test]
    fn undefined_bar_sits_one_width_after_the_values() {
        let pmf = Pmf::from_counts([(Rational::ONE, 1)], 1).unwrap();
        let svg = histogram_svg(&bin_histogram(&pmf, 3).unwrap(), "").unwrap();
        let bw = (RIGHT - LEFT) / 5.0;
        assert!(svg.contains(&format!("class=\"bar\" x=\"{:.3}\"", LEFT + 2.0 * bw)));
        assert!(svg.contains(&format!("class=\"undefined\" x=\"{:.3}\"", LEFT + 4.0 * bw)));
    }

    #[test]
    fn empty_histogram_is_an_error() {
        let h = BinnedHistogram {
            bin_count: 3,
            bin_counts: vec![0; 3],
            undefined_count: 0,
        };
        assert!(matches!(histogram_svg(&h, ""), Err(Error::EmptyPmf)));
    }

    #[test]
    fn heatmap_has_one_rect_per_cell() {
        let grid = HeatmapGrid {
            fairness_bins: 5,
            perf_bins: 4,
            cells: (0..20).collect(),
            fairness_undefined: vec![0; 4],
            perf_undefined: vec![0; 5],
            both_undefined: 0,
        };
        let svg = heatmap_svg(&grid, "h").unwrap();
        assert_eq!(svg.matches("class=\"cell\"").count(), 20);
    }

    #[test]
    fn curve_escapes_text() {
        let c = CurveData {
            title: "a < b".into(),
            x_label: "IR".into(),
            y_label: "p".into(),
            points: vec![(0.25, 0.1), (0.5, 0.2)],
        };
        let svg = curve_svg(&c).unwrap();
        assert!(svg.contains("a &lt; b"));
        assert_eq!(svg.matches("class=\"point\"").count(), 2);
    }
}
