//! File formats: exact pmfs, sweeps, heatmaps and property reports as JSON or
//! CSV, and the JSON-lines batch of confusion matrices scored by the
//! `measure` command.
//!
//! Readers check documents field by field so a malformed file is reported
//! by the first offending field.

use std::io::BufRead;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::distribution::{Heatmap2D, Pmf, SweepCurve, SweepValue};
use crate::error::{Error, Result};
use crate::measures::measure_value;
use crate::properties::PropertyReport;
use crate::rational::Rational;
use crate::types::{ConfusionPair, Count, MeasureId, Stratum};

/// Token marking the undefined bucket in CSV files.
pub const UNDEFINED: &str = "UNDEFINED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PmfEntry {
    pub num: i64,
    pub den: i64,
    pub count: Count,
}

/// JSON form of one stratum's pmf, entries in ascending value order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PmfDocument {
    pub n: u64,
    pub p: u64,
    pub n_p: u64,
    pub measure: MeasureId,
    pub total: Count,
    pub undefined_count: Count,
    pub entries: Vec<PmfEntry>,
}

impl PmfDocument {
    pub fn new(measure: MeasureId, stratum: &Stratum, pmf: &Pmf) -> Self {
        PmfDocument {
            n: stratum.n,
            p: stratum.p,
            n_p: stratum.n_p,
            measure,
            total: pmf.total(),
            undefined_count: pmf.undefined_count(),
            entries: pmf
                .entries()
                .iter()
                .map(|(v, &count)| PmfEntry {
                    num: v.numer(),
                    den: v.denom(),
                    count,
                })
                .collect(),
        }
    }

    pub fn stratum(&self) -> Result<Stratum> {
        Stratum::new(self.n, self.p, self.n_p)
    }

    pub fn to_pmf(&self) -> Result<Pmf> {
        let entries = self
            .entries
            .iter()
            .map(|e| Ok((Rational::new(e.num, e.den)?, e.count)))
            .collect::<Result<Vec<_>>>()?;
        Pmf::from_counts(entries, self.undefined_count)
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Invariant(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Invariant(format!("csv buffer: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Invariant(format!("csv utf-8: {e}")))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Invariant(format!("csv: {e}"))
}

pub fn pmf_to_json(measure: MeasureId, stratum: &Stratum, pmf: &Pmf) -> Result<String> {
    to_json(&PmfDocument::new(measure, stratum, pmf))
}

/// CSV with header `value_num,value_den,count` and a final `UNDEFINED` row.
pub fn pmf_to_csv(pmf: &Pmf) -> Result<String> {
    let mut w = csv_writer();
    w.write_record(["value_num", "value_den", "count"])
        .map_err(csv_err)?;
    for (v, c) in pmf.entries() {
        w.write_record([v.numer().to_string(), v.denom().to_string(), c.to_string()])
            .map_err(csv_err)?;
    }
    w.write_record([
        UNDEFINED.to_string(),
        String::new(),
        pmf.undefined_count().to_string(),
    ])
    .map_err(csv_err)?;
    finish_csv(w)
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        field: field.into(),
        message: message.into(),
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema("<document>", format!("not valid JSON: {e}")))
}

fn field<'a>(obj: &'a Value, name: &str, path: &str) -> Result<&'a Value> {
    let map = obj
        .as_object()
        .ok_or_else(|| schema(path_or_root(path), "expected a JSON object"))?;
    map.get(name)
        .ok_or_else(|| schema(join_path(path, name), "missing"))
}

fn path_or_root(path: &str) -> String {
    if path.is_empty() {
        "<document>".into()
    } else {
        path.into()
    }
}

fn join_path(path: &str, name: &str) -> String {
    if path.is_empty() {
        name.into()
    } else {
        format!("{path}.{name}")
    }
}

fn as_u64(obj: &Value, name: &str, path: &str) -> Result<u64> {
    field(obj, name, path)?
        .as_u64()
        .ok_or_else(|| schema(join_path(path, name), "expected a non-negative integer"))
}

fn as_i64(obj: &Value, name: &str, path: &str) -> Result<i64> {
    field(obj, name, path)?
        .as_i64()
        .ok_or_else(|| schema(join_path(path, name), "expected an integer"))
}

fn as_count(obj: &Value, name: &str, path: &str) -> Result<Count> {
    let v = field(obj, name, path)?;
    serde_json::from_value::<Count>(v.clone())
        .map_err(|_| schema(join_path(path, name), "expected a non-negative integer"))
}

fn check_fields(obj: &Value, names: &[&str], path: &str) -> Result<()> {
    for name in names {
        field(obj, name, path)?;
    }
    Ok(())
}

/// Reads a pmf JSON document. Counts must add up to `total`.
pub fn parse_pmf_json(text: &str) -> Result<PmfDocument> {
    let doc = parse_json(text)?;
    let n = as_u64(&doc, "n", "")?;
    let p = as_u64(&doc, "p", "")?;
    let n_p = as_u64(&doc, "n_p", "")?;
    let measure = field(&doc, "measure", "")?
        .as_str()
        .and_then(|s| s.parse::<MeasureId>().ok())
        .ok_or_else(|| schema("measure", "expected a measure name"))?;
    let total = as_count(&doc, "total", "")?;
    let undefined_count = as_count(&doc, "undefined_count", "")?;
    let raw = field(&doc, "entries", "")?
        .as_array()
        .ok_or_else(|| schema("entries", "expected an array"))?;
    let mut entries = Vec::with_capacity(raw.len());
    for (i, e) in raw.iter().enumerate() {
        let path = format!("entries[{i}]");
        let entry = PmfEntry {
            num: as_i64(e, "num", &path)?,
            den: as_i64(e, "den", &path)?,
            count: as_count(e, "count", &path)?,
        };
        if entry.den <= 0 {
            return Err(schema(format!("{path}.den"), "expected a positive integer"));
        }
        entries.push(entry);
    }
    let doc = PmfDocument {
        n,
        p,
        n_p,
        measure,
        total,
        undefined_count,
        entries,
    };
    let sum = doc
        .entries
        .iter()
        .try_fold(doc.undefined_count, |acc, e| acc.checked_add(e.count))
        .ok_or_else(|| schema("entries", "counts overflow"))?;
    if sum != doc.total {
        return Err(schema(
            "total",
            format!("is {} but the counts add up to {sum}", doc.total),
        ));
    }
    Ok(doc)
}

/// Reads a pmf CSV file as written by [`pmf_to_csv`].
pub fn parse_pmf_csv(text: &str) -> Result<Pmf> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = r
        .headers()
        .map_err(|e| schema("<header>", e.to_string()))?
        .clone();
    for (i, want) in ["value_num", "value_den", "count"].iter().enumerate() {
        if headers.get(i) != Some(*want) {
            return Err(schema(*want, "missing from the header"));
        }
    }
    let mut entries = Vec::new();
    let mut undefined = None;
    for (i, rec) in r.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| schema(format!("row {row}"), e.to_string()))?;
        let get = |k: usize, name: &str| {
            rec.get(k)
                .ok_or_else(|| schema(format!("row {row}.{name}"), "missing"))
        };
        let count: Count = get(2, "count")?.parse().map_err(|_| {
            schema(
                format!("row {row}.count"),
                "expected a non-negative integer",
            )
        })?;
        let num = get(0, "value_num")?;
        if num == UNDEFINED {
            undefined = Some(count);
            continue;
        }
        let parse = |s: &str, name: &str| {
            s.parse::<i64>()
                .map_err(|_| schema(format!("row {row}.{name}"), "expected an integer"))
        };
        let value = Rational::new(
            parse(num, "value_num")?,
            parse(get(1, "value_den")?, "value_den")?,
        )
        .map_err(|e| schema(format!("row {row}.value_den"), e.to_string()))?;
        entries.push((value, count));
    }
    let undefined = undefined.ok_or_else(|| schema(UNDEFINED, "missing final row"))?;
    Pmf::from_counts(entries, undefined)
}

pub fn sweep_to_json(curve: &SweepCurve) -> Result<String> {
    to_json(curve)
}

/// CSV with header `ratio,n,p,n_p,value`.
pub fn sweep_to_csv(curve: &SweepCurve) -> Result<String> {
    let mut w = csv_writer();
    w.write_record(["ratio", "n", "p", "n_p", "value"])
        .map_err(csv_err)?;
    for pt in &curve.points {
        let value = match pt.value {
            SweepValue::Probability(p) => p.to_string(),
            SweepValue::Count(c) => c.to_string(),
        };
        w.write_record([
            pt.ratio.to_string(),
            pt.stratum.n.to_string(),
            pt.stratum.p.to_string(),
            pt.stratum.n_p.to_string(),
            value,
        ])
        .map_err(csv_err)?;
    }
    finish_csv(w)
}

/// Points of a curve as read back from a sweep file.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveData {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

impl From<&SweepCurve> for CurveData {
    fn from(c: &SweepCurve) -> Self {
        let other = match c.varied {
            crate::distribution::Axis::Ir => "GR",
            crate::distribution::Axis::Gr => "IR",
        };
        CurveData {
            title: format!("{} (n = {}, {other} = {})", c.measure.label(), c.n, c.fixed),
            x_label: c.varied.token().to_uppercase(),
            y_label: serde_json::to_value(c.statistic)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default(),
            points: c
                .points
                .iter()
                .map(|p| (p.ratio.to_f64(), p.value.to_f64()))
                .collect(),
        }
    }
}

pub fn parse_sweep_json(text: &str) -> Result<SweepCurve> {
    let doc = parse_json(text)?;
    check_fields(
        &doc,
        &[
            "measure",
            "n",
            "varied",
            "fixed",
            "statistic",
            "denominator",
            "points",
        ],
        "",
    )?;
    let points = doc["points"]
        .as_array()
        .ok_or_else(|| schema("points", "expected an array"))?;
    for (i, p) in points.iter().enumerate() {
        check_fields(p, &["ratio", "stratum", "value"], &format!("points[{i}]"))?;
    }
    serde_json::from_value(doc).map_err(|e| schema("<document>", e.to_string()))
}

pub fn parse_sweep_csv(text: &str) -> Result<CurveData> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = r
        .headers()
        .map_err(|e| schema("<header>", e.to_string()))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| schema(name, "missing from the header"))
    };
    let (ratio, value) = (col("ratio")?, col("value")?);
    let mut points = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| schema(format!("row {row}"), e.to_string()))?;
        let x: Rational = rec[ratio]
            .parse()
            .map_err(|_| schema(format!("row {row}.ratio"), "expected a ratio"))?;
        let y: Rational = rec[value]
            .parse()
            .map_err(|_| schema(format!("row {row}.value"), "expected a number"))?;
        points.push((x.to_f64(), y.to_f64()));
    }
    Ok(CurveData {
        title: String::new(),
        x_label: "ratio".into(),
        y_label: "value".into(),
        points,
    })
}

pub fn heatmap_to_json(heat: &Heatmap2D) -> Result<String> {
    to_json(heat)
}

/// CSV with header `fairness_bin,perf_bin,count`: every cell in row-major
/// order, then the marginals. `UNDEFINED` stands in for the bin of an
/// undefined coordinate.
pub fn heatmap_to_csv(heat: &Heatmap2D) -> Result<String> {
    let mut w = csv_writer();
    w.write_record(["fairness_bin", "perf_bin", "count"])
        .map_err(csv_err)?;
    for f in 0..heat.fairness_bins {
        for p in 0..heat.perf_bins {
            w.write_record([f.to_string(), p.to_string(), heat.cell(f, p).to_string()])
                .map_err(csv_err)?;
        }
    }
    for (p, c) in heat.fairness_undefined.iter().enumerate() {
        w.write_record([UNDEFINED.to_string(), p.to_string(), c.to_string()])
            .map_err(csv_err)?;
    }
    for (f, c) in heat.perf_undefined.iter().enumerate() {
        w.write_record([f.to_string(), UNDEFINED.to_string(), c.to_string()])
            .map_err(csv_err)?;
    }
    w.write_record([UNDEFINED, UNDEFINED, &heat.both_undefined.to_string()])
        .map_err(csv_err)?;
    finish_csv(w)
}

/// Counts of a heatmap without its measure and performance labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeatmapGrid {
    pub fairness_bins: usize,
    pub perf_bins: usize,
    /// Row-major `[fairness_bin * perf_bins + perf_bin]`.
    pub cells: Vec<Count>,
    pub fairness_undefined: Vec<Count>,
    pub perf_undefined: Vec<Count>,
    pub both_undefined: Count,
}

impl From<&Heatmap2D> for HeatmapGrid {
    fn from(h: &Heatmap2D) -> Self {
        HeatmapGrid {
            fairness_bins: h.fairness_bins,
            perf_bins: h.perf_bins,
            cells: h.cells.clone(),
            fairness_undefined: h.fairness_undefined.clone(),
            perf_undefined: h.perf_undefined.clone(),
            both_undefined: h.both_undefined,
        }
    }
}

pub fn parse_heatmap_json(text: &str) -> Result<Heatmap2D> {
    let doc = parse_json(text)?;
    check_fields(
        &doc,
        &[
            "measure",
            "perf",
            "fairness_bins",
            "perf_bins",
            "cells",
            "fairness_undefined",
            "perf_undefined",
            "both_undefined",
        ],
        "",
    )?;
    let heat: Heatmap2D =
        serde_json::from_value(doc).map_err(|e| schema("<document>", e.to_string()))?;
    if heat.cells.len() != heat.fairness_bins * heat.perf_bins {
        return Err(schema("cells", "length is not fairness_bins * perf_bins"));
    }
    if heat.fairness_undefined.len() != heat.perf_bins {
        return Err(schema("fairness_undefined", "length is not perf_bins"));
    }
    if heat.perf_undefined.len() != heat.fairness_bins {
        return Err(schema("perf_undefined", "length is not fairness_bins"));
    }
    Ok(heat)
}

pub fn parse_heatmap_csv(text: &str) -> Result<HeatmapGrid> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = r
        .headers()
        .map_err(|e| schema("<header>", e.to_string()))?
        .clone();
    for (i, want) in ["fairness_bin", "perf_bin", "count"].iter().enumerate() {
        if headers.get(i) != Some(*want) {
            return Err(schema(*want, "missing from the header"));
        }
    }
    let mut rows: Vec<(Option<usize>, Option<usize>, Count)> = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| schema(format!("row {row}"), e.to_string()))?;
        let bin = |k: usize, name: &str| -> Result<Option<usize>> {
            match &rec[k] {
                UNDEFINED => Ok(None),
                s => s.parse().map(Some).map_err(|_| {
                    schema(
                        format!("row {row}.{name}"),
                        "expected a bin index or UNDEFINED",
                    )
                }),
            }
        };
        let count: Count = rec[2].parse().map_err(|_| {
            schema(
                format!("row {row}.count"),
                "expected a non-negative integer",
            )
        })?;
        rows.push((bin(0, "fairness_bin")?, bin(1, "perf_bin")?, count));
    }
    let fairness_bins = rows.iter().filter_map(|r| r.0).max().map_or(0, |m| m + 1);
    let perf_bins = rows.iter().filter_map(|r| r.1).max().map_or(0, |m| m + 1);
    if fairness_bins == 0 || perf_bins == 0 {
        return Err(schema("fairness_bin", "no cells"));
    }
    let mut grid = HeatmapGrid {
        fairness_bins,
        perf_bins,
        cells: vec![0; fairness_bins * perf_bins],
        fairness_undefined: vec![0; perf_bins],
        perf_undefined: vec![0; fairness_bins],
        both_undefined: 0,
    };
    for (f, p, c) in rows {
        match (f, p) {
            (Some(f), Some(p)) => grid.cells[f * perf_bins + p] += c,
            (None, Some(p)) => grid.fairness_undefined[p] += c,
            (Some(f), None) => grid.perf_undefined[f] += c,
            (None, None) => grid.both_undefined += c,
        }
    }
    Ok(grid)
}

pub fn report_to_json(report: &PropertyReport) -> Result<String> {
    to_json(report)
}

/// CSV with one row per (measure, property) cell.
pub fn report_to_csv(report: &PropertyReport) -> Result<String> {
    let mut w = csv_writer();
    w.write_record([
        "measure",
        "property",
        "verdict",
        "statistic",
        "threshold",
        "witnesses",
    ])
    .map_err(csv_err)?;
    for c in &report.cells {
        let verdict = serde_json::to_value(c.verdict)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        w.write_record([
            c.measure.token().to_string(),
            c.property.token().to_string(),
            verdict,
            c.statistic.to_string(),
            c.threshold.map(|t| t.to_string()).unwrap_or_default(),
            c.witnesses.len().to_string(),
        ])
        .map_err(csv_err)?;
    }
    finish_csv(w)
}

/// One confusion pair of a batch. Unknown fields are rejected so that a
/// misspelled count cannot silently read as missing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<Value>,
    pub tp_p: u64,
    pub fn_p: u64,
    pub fp_p: u64,
    pub tn_p: u64,
    pub tp_up: u64,
    pub fn_up: u64,
    pub fp_up: u64,
    pub tn_up: u64,
}

impl MatrixRecord {
    pub fn pair(&self) -> ConfusionPair {
        ConfusionPair::from_array([
            self.tp_p, self.fn_p, self.fp_p, self.tn_p, self.tp_up, self.fn_up, self.fp_up,
            self.tn_up,
        ])
    }
}

/// Reads JSON lines, one record per non-blank line. Record indices count
/// from 0 over non-blank lines.
pub fn parse_batch(reader: impl BufRead) -> Result<Vec<MatrixRecord>> {
    let mut out = Vec::new();
    for (line_no, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let index = out.len();
        let rec: MatrixRecord = serde_json::from_str(&line).map_err(|e| Error::BadRecord {
            index,
            message: format!("line {}: {e}", line_no + 1),
        })?;
        out.push(rec);
    }
    Ok(out)
}

/// The six measures of one record, as `num/den` or `undefined`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ScoredRecord {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<Value>,
    pub accuracy_equality: String,
    pub statistical_parity: String,
    pub equal_opportunity: String,
    pub predictive_equality: String,
    pub positive_predictive_parity: String,
    pub negative_predictive_parity: String,
}

impl ScoredRecord {
    pub fn values(&self) -> [&str; 6] {
        [
            &self.accuracy_equality,
            &self.statistical_parity,
            &self.equal_opportunity,
            &self.predictive_equality,
            &self.positive_predictive_parity,
            &self.negative_predictive_parity,
        ]
    }
}

pub fn score_record(index: usize, record: &MatrixRecord) -> ScoredRecord {
    let pair = record.pair();
    let v = |m| measure_value(m, &pair).to_string();
    ScoredRecord {
        index,
        id: record.id.clone(),
        accuracy_equality: v(MeasureId::AccuracyEquality),
        statistical_parity: v(MeasureId::StatisticalParity),
        equal_opportunity: v(MeasureId::EqualOpportunity),
        predictive_equality: v(MeasureId::PredictiveEquality),
        positive_predictive_parity: v(MeasureId::PositivePredictiveParity),
        negative_predictive_parity: v(MeasureId::NegativePredictiveParity),
    }
}

pub fn measure_batch(records: &[MatrixRecord]) -> Vec<ScoredRecord> {
    records
        .iter()
        .enumerate()
        .map(|(i, r)| score_record(i, r))
        .collect()
}

/// One compact JSON object per line.
pub fn scored_to_jsonl(scored: &[ScoredRecord]) -> Result<String> {
    let mut out = String::new();
    for s in scored {
        out.push_str(
            &serde_json::to_string(s)
                .map_err(|e| Error::Invariant(format!("serialization failed: {e}")))?,
        );
        out.push('\n');
    }
    Ok(out)
}

/// CSV with header `index,id,<measure tokens...>`.
pub fn scored_to_csv(scored: &[ScoredRecord]) -> Result<String> {
    let mut w = csv_writer();
    let header: Vec<&str> = ["index", "id"]
        .into_iter()
        .chain(MeasureId::ALL.iter().map(|m| m.token()))
        .collect();
    w.write_record(&header).map_err(csv_err)?;
    for s in scored {
        let id = match &s.id {
            None => String::new(),
            Some(Value::String(v)) => v.clone(),
            Some(other) => other.to_string(),
        };
        let mut row = vec![s.index.to_string(), id];
        row.extend(s.values().iter().map(|v| v.to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    finish_csv(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::stratum_pmf_fast;

    fn eo_422() -> (Stratum, Pmf) {
        let s = Stratum::new(4, 2, 2).unwrap();
        (
            s,
            stratum_pmf_fast(MeasureId::EqualOpportunity, &s).unwrap(),
        )
    }

    #[test]
    fn pmf_json_round_trip() {
        let (s, pmf) = eo_422();
        let text = pmf_to_json(MeasureId::EqualOpportunity, &s, &pmf).unwrap();
        let doc = parse_pmf_json(&text).unwrap();
        assert_eq!((doc.total, doc.undefined_count), (34, 18));
        assert_eq!(doc.to_pmf().unwrap(), pmf);
        assert_eq!(doc.stratum().unwrap(), s);
        let values: Vec<_> = doc.entries.iter().map(|e| (e.num, e.den)).collect();
        assert_eq!(values, vec![(-1, 1), (0, 1), (1, 1)]);
    }

    #[test]
    fn pmf_csv_round_trip() {
        let (_, pmf) = eo_422();
        let text = pmf_to_csv(&pmf).unwrap();
        assert_eq!(
            text,
            "value_num,value_den,count\n-1,1,4\n0,1,8\n1,1,4\nUNDEFINED,,18\n"
        );
        assert_eq!(parse_pmf_csv(&text).unwrap(), pmf);
    }

    #[test]
    fn schema_errors_name_the_field() {
        let missing = r#"{"n": 4, "p": 2, "measure": "equal-opportunity"}"#;
        match parse_pmf_json(missing).unwrap_err() {
            Error::Schema { field, .. } => assert_eq!(field, "n_p"),
            other => panic!("unexpected {other:?}"),
        }
        let bad_entry = r#"{"n":4,"p":2,"n_p":2,"measure":"equal-opportunity","total":1,
            "undefined_count":0,"entries":[{"num":0,"den":"x","count":1}]}"#;
        match parse_pmf_json(bad_entry).unwrap_err() {
            Error::Schema { field, .. } => assert_eq!(field, "entries[0].den"),
            other => panic!("unexpected {other:?}"),
        }
        let bad_total = r#"{"n":4,"p":2,"n_p":2,"measure":"equal-opportunity","total":5,
            "undefined_count":0,"entries":[{"num":0,"den":1,"count":1}]}"#;
        match parse_pmf_json(bad_total).unwrap_err() {
            Error::Schema { field, .. } => assert_eq!(field, "total"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn batch_examples() {
        let input = "{\"tp_p\":2,\"fn_p\":0,\"fp_p\":0,\"tn_p\":2,\"tp_up\":1,\"fn_up\":1,\"fp_up\":1,\"tn_up\":1}\n\n\
                     {\"id\":\"b\",\"tp_p\":1,\"fn_p\":0,\"fp_p\":0,\"tn_p\":0,\"tp_up\":0,\"fn_up\":0,\"fp_up\":0,\"tn_up\":1}\n";
        let recs = parse_batch(input.as_bytes()).unwrap();
        let scored = measure_batch(&recs);
        assert_eq!(scored[0].statistical_parity, "0/1");
        assert_eq!(scored[0].predictive_equality, "-1/2");
        assert_eq!(scored[1].equal_opportunity, "undefined");
        assert_eq!(scored[1].index, 1);
        let lines = scored_to_jsonl(&scored).unwrap();
        assert!(lines
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("{\"index\":1,\"id\":\"b\","));
    }

    #[test]
    fn identical_groups_score_zero() {
        let rec = MatrixRecord {
            id: None,
            tp_p: 3,
            fn_p: 1,
            fp_p: 2,
            tn_p: 4,
            tp_up: 3,
            fn_up: 1,
            fp_up: 2,
            tn_up: 4,
        };
        assert!(score_record(0, &rec).values().iter().all(|v| *v == "0/1"));
    }

    #[test]
    fn bad_record_names_its_index() {
        let input = "{\"tp_p\":1,\"fn_p\":0,\"fp_p\":0,\"tn_p\":0,\"tp_up\":0,\"fn_up\":0,\"fp_up\":0,\"tn_up\":1}\n\
                     {\"tp_p\":-1,\"fn_p\":0,\"fp_p\":0,\"tn_p\":0,\"tp_up\":0,\"fn_up\":0,\"fp_up\":0,\"tn_up\":1}\n";
        match parse_batch(input.as_bytes()).unwrap_err() {
            Error::BadRecord { index, .. } => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
        let typo = "{\"tp_p\":1,\"fn_p\":0,\"fp_p\":0,\"tn_p\":0,\"tp_up\":0,\"fn_up\":0,\"fp_up\":0,\"tn_upp\":1}";
        assert!(matches!(
            parse_batch(typo.as_bytes()),
            Err(Error::BadRecord { index: 0, .. })
        ));
    }

    #[test]
    fn heatmap_csv_round_trip() {
        let heat = crate::distribution::joint_heatmap(
            MeasureId::EqualOpportunity,
            crate::measures::PerformanceId::Accuracy,
            4,
            5,
            4,
        )
        .unwrap();
        let text = heatmap_to_csv(&heat).unwrap();
        assert_eq!(text.lines().count(), 1 + 5 * 4 + 4 + 5 + 1);
        assert_eq!(parse_heatmap_csv(&text).unwrap(), HeatmapGrid::from(&heat));
        let json = heatmap_to_json(&heat).unwrap();
        assert_eq!(parse_heatmap_json(&json).unwrap(), heat);
    }
}
