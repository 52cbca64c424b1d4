//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when a criterion fails that is not a documented known gap, or
//! when a known gap unexpectedly starts passing.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use fairdist::distribution::{
    perfect_fairness_prob, stratum_pmf_bruteforce, stratum_pmf_fast, sweep_curve, undefined_prob,
    Axis, Denominator, Pmf, SweepStatistic,
};
use fairdist::export::{pmf_to_json, report_to_json, sweep_to_json};
use fairdist::properties::{property_report, PropertyConfig, PropertyId, RatioGrid};
use fairdist::{stratum_count, total_count, MeasureId, Rational, Stratum};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn paper_grid() -> Vec<Rational> {
    vec![r(1, 28), r(1, 4), r(1, 2), r(3, 4), r(27, 28)]
}

fn report_grid() -> Vec<Rational> {
    vec![r(1, 12), r(1, 4), r(1, 2), r(3, 4), r(11, 12)]
}

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

struct Criterion {
    id: &'static str,
    title: &'static str,
    /// Reason this criterion is expected to fail, if it is a known gap.
    known_gap: Option<&'static str>,
    run: fn() -> Outcome,
}

fn within(elapsed: Duration, limit: Duration) -> String {
    format!("{:.3?} (limit {:?})", elapsed, limit)
}

fn total_count_56() -> Outcome {
    let t = Instant::now();
    let c = total_count(56).unwrap();
    let e = t.elapsed();
    let limit = Duration::from_millis(1);
    Outcome::new(
        c == 553_270_671 && e < limit,
        format!("{c} in {}", within(e, limit)),
    )
}

fn partition_identity() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    for n in 0..=32u64 {
        let sum: u128 = if n == 0 {
            1
        } else {
            Stratum::all(n).map(|s| stratum_count(&s).unwrap()).sum()
        };
        if sum != total_count(n).unwrap() {
            bad.push(n);
        }
    }
    let e = t.elapsed();
    let limit = Duration::from_secs(10);
    Outcome::new(
        bad.is_empty() && e < limit,
        format!("mismatches at n = {bad:?}; {}", within(e, limit)),
    )
}

fn oracle_equivalence() -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in [2u64, 4, 8, 12] {
        for s in Stratum::all(n) {
            for m in MeasureId::ALL {
                checked += 1;
                if stratum_pmf_fast(m, &s).unwrap() != stratum_pmf_bruteforce(m, &s).unwrap() {
                    bad.push(format!("{m} {s}"));
                }
            }
        }
    }
    let e = t.elapsed();
    let limit = Duration::from_secs(300);
    Outcome::new(
        bad.is_empty() && e < limit,
        format!(
            "{checked} (measure, stratum) pairs, {} mismatches; {}",
            bad.len(),
            within(e, limit)
        ),
    )
}

fn ae_sp_identity() -> Outcome {
    let mut checked = 0;
    let mut bad = 0;
    let mut check = |s: &Stratum| {
        checked += 1;
        let ae = stratum_pmf_fast(MeasureId::AccuracyEquality, s).unwrap();
        let sp = stratum_pmf_fast(MeasureId::StatisticalParity, s).unwrap();
        if ae != sp {
            bad += 1;
        }
    };
    for n in 1..=12 {
        Stratum::all(n).for_each(|s| check(&s));
    }
    for &ir in &paper_grid() {
        for &gr in &paper_grid() {
            check(&Stratum::from_ratios(56, ir, gr).unwrap());
        }
    }
    Outcome::new(bad == 0, format!("{checked} strata, {bad} differ"))
}

fn class_swap_duality() -> Outcome {
    let mut checked = 0;
    let mut bad = 0;
    for n in 1..=12 {
        for s in Stratum::all(n) {
            let swapped = s.swap_classes();
            for (a, b) in [
                (MeasureId::PredictiveEquality, MeasureId::EqualOpportunity),
                (
                    MeasureId::NegativePredictiveParity,
                    MeasureId::PositivePredictiveParity,
                ),
            ] {
                checked += 1;
                if stratum_pmf_fast(a, &s).unwrap() != stratum_pmf_fast(b, &swapped).unwrap() {
                    bad += 1;
                }
            }
        }
    }
    Outcome::new(bad == 0, format!("{checked} strata pairs, {bad} differ"))
}

fn undefined_row() -> Outcome {
    let mut nonzero = 0;
    for n in 2..=12 {
        for s in Stratum::all(n).filter(|s| s.n_p >= 1 && s.n_unprotected() >= 1) {
            for m in [MeasureId::AccuracyEquality, MeasureId::StatisticalParity] {
                if !undefined_prob(&stratum_pmf_fast(m, &s).unwrap())
                    .unwrap()
                    .is_zero()
                {
                    nonzero += 1;
                }
            }
        }
    }
    let eo: Vec<Rational> = [r(1, 2), r(1, 4), r(1, 28)]
        .iter()
        .map(|&ir| {
            let s = Stratum::from_ratios(56, ir, r(1, 2)).unwrap();
            undefined_prob(&stratum_pmf_fast(MeasureId::EqualOpportunity, &s).unwrap()).unwrap()
        })
        .collect();
    let increasing = eo[0] < eo[1] && eo[1] < eo[2];
    Outcome::new(
        nonzero == 0 && increasing,
        format!(
            "AE/SP strata with undefined mass: {nonzero}; EO undefined at IR 1/2, 1/4, 1/28: {:.4}, {:.4}, {:.4}",
            eo[0].to_f64(),
            eo[1].to_f64(),
            eo[2].to_f64()
        ),
    )
}

fn perfect_fairness_shape() -> Outcome {
    let pf = |m, ir, gr| {
        perfect_fairness_prob(
            &stratum_pmf_fast(m, &Stratum::from_ratios(56, ir, gr).unwrap()).unwrap(),
        )
        .unwrap()
    };
    let half = r(1, 2);
    let eo_ok = pf(MeasureId::EqualOpportunity, r(1, 28), half)
        > pf(MeasureId::EqualOpportunity, half, half);
    let pe_ok = pf(MeasureId::PredictiveEquality, r(27, 28), half)
        > pf(MeasureId::PredictiveEquality, half, half);
    let mut ratios = Vec::new();
    for m in [MeasureId::AccuracyEquality, MeasureId::StatisticalParity] {
        let values: Vec<f64> = paper_grid()
            .iter()
            .flat_map(|&ir| paper_grid().into_iter().map(move |gr| (ir, gr)))
            .map(|(ir, gr)| pf(m, ir, gr).to_f64())
            .collect();
        let max = values.iter().copied().fold(f64::MIN, f64::max);
        let min = values.iter().copied().fold(f64::MAX, f64::min);
        ratios.push(max / min);
    }
    let flat = ratios.iter().all(|&q| q <= 2.0);
    Outcome::new(
        eo_ok && pe_ok && flat,
        format!(
            "EO low-IR rise: {eo_ok}; PE high-IR rise: {pe_ok}; AE max/min {:.3}, SP max/min {:.3} (limit 2)",
            ratios[0], ratios[1]
        ),
    )
}

/// Expected verdict symbols per property, columns AE, SP, EO, PE, PPP, NPP.
const EXPECTED: [(PropertyId, [&str; 6]); 8] = [
    (PropertyId::ImmunityIr, ["×", "×", "×", "×", "×", "×"]),
    (PropertyId::ImmunityGr, ["×", "×", "✓†", "✓†", "×", "×"]),
    (
        PropertyId::ResolutionStability,
        ["✓", "✓", "×", "×", "×", "×"],
    ),
    (PropertyId::FairnessSymmetry, ["✓", "✓", "✓", "✓", "×", "×"]),
    (PropertyId::IrSymmetry, ["✓", "✓", "×", "×", "×", "×"]),
    (PropertyId::GrSymmetry, ["✓", "✓", "✓", "✓", "×", "×"]),
    (
        PropertyId::PerfectFairnessStability,
        ["✓", "✓", "×", "×", "×", "×"],
    ),
    (
        PropertyId::UndefinedValues,
        [
            "n_p=0 or n_up=0",
            "n_p=0 or n_up=0",
            "low/high GR, low IR",
            "low/high GR, high IR",
            "low/high GR",
            "low/high GR",
        ],
    ),
];

fn property_pattern() -> Outcome {
    let t = Instant::now();
    let grid = RatioGrid::square(24, &report_grid()).unwrap();
    let report = property_report(&grid, &PropertyConfig::default()).unwrap();
    let e = t.elapsed();
    let mut mismatches = Vec::new();
    for (p, row) in EXPECTED {
        for (m, want) in MeasureId::ALL.iter().zip(row) {
            let got = report.cell(p, *m).unwrap().cell_text();
            if got != want {
                mismatches.push(format!("{p}/{m}: got {got}, expected {want}"));
            }
        }
    }
    let limit = Duration::from_secs(600);
    let matched = 48 - mismatches.len();
    Outcome::new(
        mismatches.is_empty() && e < limit,
        format!(
            "{matched}/48 cells match; {}; {}",
            if mismatches.is_empty() {
                "no mismatches".to_string()
            } else {
                mismatches.join("; ")
            },
            within(e, limit)
        ),
    )
}

fn performance() -> Outcome {
    let t = Instant::now();
    let mut pmfs = 0;
    for m in MeasureId::ALL {
        for &ir in &paper_grid() {
            for &gr in &paper_grid() {
                let p = stratum_pmf_fast(m, &Stratum::from_ratios(56, ir, gr).unwrap()).unwrap();
                assert!(p.total() > 0);
                pmfs += 1;
            }
        }
    }
    let e = t.elapsed();
    let limit = Duration::from_secs(300);
    Outcome::new(
        e < limit,
        format!("{pmfs} pmfs at n = 56 in {}", within(e, limit)),
    )
}

fn outputs(threads: usize) -> Vec<String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    pool.install(|| {
        let s = Stratum::from_ratios(56, r(1, 4), r(1, 2)).unwrap();
        let mut out = Vec::new();
        for m in MeasureId::ALL {
            let p: Pmf = stratum_pmf_fast(m, &s).unwrap();
            out.push(pmf_to_json(m, &s, &p).unwrap());
            let curve = sweep_curve(
                m,
                56,
                Axis::Ir,
                &paper_grid(),
                r(1, 2),
                SweepStatistic::PerfectFairness,
                Denominator::All,
            )
            .unwrap();
            out.push(sweep_to_json(&curve).unwrap());
        }
        let grid = RatioGrid::square(24, &report_grid()).unwrap();
        out.push(
            report_to_json(&property_report(&grid, &PropertyConfig::default()).unwrap()).unwrap(),
        );
        out
    })
}

fn determinism() -> Outcome {
    let one = outputs(1);
    let many = outputs(8);
    let bytes: usize = one.iter().map(|s| s.len()).sum();
    Outcome::new(
        one == many,
        format!("{} documents, {bytes} bytes, 1 vs 8 threads", one.len()),
    )
}

fn main() {
    let criteria = [
        Criterion {
            id: "AC-01",
            title: "total_count(56) = 553,270,671 in under 1 ms",
            known_gap: None,
            run: total_count_56,
        },
        Criterion {
            id: "AC-02",
            title: "partition identity for every n <= 32 in under 10 s",
            known_gap: None,
            run: partition_identity,
        },
        Criterion {
            id: "AC-03",
            title: "fast pmf equals brute force for all measures and strata, n in {2,4,8,12}",
            known_gap: None,
            run: oracle_equivalence,
        },
        Criterion {
            id: "AC-04",
            title: "AE and SP pmfs identical for n <= 12 and on the 25-point grid at n = 56",
            known_gap: None,
            run: ae_sp_identity,
        },
        Criterion {
            id: "AC-05",
            title: "class-swap duality PE/EO and NPP/PPP for n <= 12",
            known_gap: None,
            run: class_swap_duality,
        },
        Criterion {
            id: "AC-06",
            title: "undefined values: none for AE/SP with both groups present; EO rises as IR falls",
            known_gap: None,
            run: undefined_row,
        },
        Criterion {
            id: "AC-07",
            title: "perfect fairness shape at n = 56 (EO, PE rises; AE/SP max/min <= 2)",
            known_gap: Some(
                "exact AE/SP max/min over the full grid is about 3.9, driven by GR; the two rise clauses hold",
            ),
            run: perfect_fairness_shape,
        },
        Criterion {
            id: "AC-08",
            title: "property report at n = 24 reproduces the expected 48-cell pattern",
            known_gap: Some(
                "EO/PE immunity to GR: the defined-only exact distance for EO exceeds that of PPP, so no epsilon gives holds-with-caveat",
            ),
            run: property_pattern,
        },
        Criterion {
            id: "AC-09",
            title: "six pmfs at 25 grid points for n = 56 in under 5 min",
            known_gap: None,
            run: performance,
        },
        Criterion {
            id: "AC-10",
            title: "pmf, sweep and report bytes identical on 1 and 8 threads",
            known_gap: None,
            run: determinism,
        },
    ];

    let mut unexpected = BTreeMap::new();
    let mut passed = 0;
    for c in &criteria {
        let o = (c.run)();
        passed += usize::from(o.pass);
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("{status} {} {} :: {}", c.id, c.title, o.detail);
        match (o.pass, c.known_gap) {
            (false, Some(reason)) => println!("     {} known gap: {reason}", c.id),
            (false, None) => {
                unexpected.insert(c.id, "failed");
            }
            (true, Some(_)) => {
                unexpected.insert(c.id, "passed but is listed as a known gap");
            }
            (true, None) => {}
        }
    }
    println!("acceptance: {passed}/{} criteria pass", criteria.len());
    if !unexpected.is_empty() {
        for (id, why) in &unexpected {
            eprintln!("unexpected outcome: {id} {why}");
        }
        std::process::exit(1);
    }
}
