//! The `fairdist` command line.
//!
//! Every command renders its whole output in memory and then writes it in
//! one step, either to stdout or atomically to `--out` through a temporary
//! file in the same directory. A failing command leaves no output file.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::distribution::{
    bin_histogram, joint_heatmap, joint_heatmap_stratum, stratum_pmf_bruteforce, stratum_pmf_fast,
    sweep_curve, Axis, Denominator, SweepStatistic, DEFAULT_BINS, DEFAULT_HEATMAP_N,
    DEFAULT_PERF_BINS,
};
use crate::enumeration::{stratum_count, total_count};
use crate::error::{Error, Result};
use crate::export;
use crate::measures::PerformanceId;
use crate::properties::{property_report, PropertyConfig, RatioGrid};
use crate::rational::Rational;
use crate::svg;
use crate::types::{MeasureId, Stratum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INEXACT: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;
pub const EXIT_IO: i32 = 5;

const DEFAULT_GRID: &str = "1/28,1/4,1/2,3/4,27/28";

#[derive(Debug, Parser)]
#[command(
    name = "fairdist",
    version,
    about = "Exact distributions of group fairness measures over confusion matrices"
)]
pub struct Cli {
    /// Worker threads; all cores when omitted or 0.
    #[arg(long, global = true, env = "FAIRDIST_THREADS")]
    pub threads: Option<usize>,

    /// Output file, written atomically. Defaults to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format. `table` applies to `properties` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    Histogram,
    Curve,
    Heatmap,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of confusion pairs of size n, or of one stratum when --ir and
    /// --gr are given.
    Count {
        #[arg(long)]
        n: u64,
        #[arg(long, requires = "gr")]
        ir: Option<Rational>,
        #[arg(long, requires = "ir")]
        gr: Option<Rational>,
    },
    /// Exact pmf of one measure over one stratum.
    Pmf {
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        measure: MeasureId,
        /// Evaluate every pair instead of convolving per-group pmfs.
        #[arg(long)]
        bruteforce: bool,
    },
    /// A summary statistic along one ratio axis.
    Sweep {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        measure: MeasureId,
        #[arg(long)]
        vary: Axis,
        #[arg(long, value_delimiter = ',', default_value = DEFAULT_GRID)]
        grid: Vec<Rational>,
        /// Fixed IR when varying GR.
        #[arg(long)]
        ir: Option<Rational>,
        /// Fixed GR when varying IR.
        #[arg(long)]
        gr: Option<Rational>,
        #[arg(long, default_value = "perfect-fairness")]
        statistic: SweepStatistic,
        #[arg(long, default_value = "all")]
        denominator: Denominator,
    },
    /// Joint fairness-vs-performance histogram, pooled over every pair of
    /// size n or restricted to one stratum.
    Heatmap {
        #[arg(long, default_value_t = DEFAULT_HEATMAP_N)]
        n: u64,
        #[arg(long)]
        measure: MeasureId,
        #[arg(long, default_value = "accuracy")]
        perf: PerformanceId,
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
        #[arg(long, default_value_t = DEFAULT_PERF_BINS)]
        perf_bins: usize,
        #[arg(long, requires = "gr")]
        ir: Option<Rational>,
        #[arg(long, requires = "ir")]
        gr: Option<Rational>,
    },
    /// Verdicts for every property and measure on a ratio grid.
    Properties {
        #[arg(long, default_value_t = 56)]
        n: u64,
        /// Ratios used for both axes unless --ir-grid or --gr-grid is given.
        #[arg(long, value_delimiter = ',', default_value = DEFAULT_GRID)]
        grid: Vec<Rational>,
        #[arg(long, value_delimiter = ',')]
        ir_grid: Option<Vec<Rational>>,
        #[arg(long, value_delimiter = ',')]
        gr_grid: Option<Vec<Rational>>,
        #[command(flatten)]
        thresholds: Thresholds,
    },
    /// Scores JSON-lines confusion matrices with all six measures.
    Measure {
        /// Input file; stdin when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Renders an exported pmf, sweep or heatmap file as SVG.
    Plot {
        #[arg(long, value_enum)]
        kind: PlotKind,
        #[arg(long)]
        input: PathBuf,
        /// Fairness bins for histograms.
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
        #[arg(long)]
        title: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct Point {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub ir: Rational,
    #[arg(long)]
    pub gr: Rational,
}

#[derive(Debug, Args)]
pub struct Thresholds {
    #[arg(long)]
    pub epsilon: Option<Rational>,
    #[arg(long)]
    pub resolution_theta: Option<Rational>,
    #[arg(long)]
    pub pf_theta: Option<Rational>,
    #[arg(long)]
    pub undefined_effect: Option<Rational>,
}

impl Thresholds {
    fn config(&self) -> PropertyConfig {
        let d = PropertyConfig::default();
        PropertyConfig {
            immunity_epsilon: self.epsilon.unwrap_or(d.immunity_epsilon),
            resolution_theta: self.resolution_theta.unwrap_or(d.resolution_theta),
            perfect_fairness_theta: self.pf_theta.unwrap_or(d.perfect_fairness_theta),
            undefined_effect: self.undefined_effect.unwrap_or(d.undefined_effect),
        }
    }
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InexactRatio { .. } | Error::RatioOutOfRange { .. } => EXIT_INEXACT,
            Error::Overflow(_) | Error::Limit(_) => EXIT_LIMIT,
            Error::Io(_) => EXIT_IO,
            Error::BadBinCount(_) | Error::InvalidGrid(_) | Error::GridNotClosed { .. } => {
                EXIT_USAGE
            }
            _ => EXIT_DATA,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
/// Diagnostics go to stderr as a single line.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return EXIT_OK;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default();
            eprintln!("fairdist: {}", first.trim_start_matches("error: "));
            return EXIT_USAGE;
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("fairdist: {}", f.message.replace('\n', " "));
            f.code
        }
    }
}

pub fn run(cli: &Cli) -> std::result::Result<(), Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| usage(format!("cannot start worker pool: {e}")))?;
    let output = pool.install(|| render(cli))?;
    write_output(cli.out.as_deref(), &output).map_err(Failure::from)
}

fn render(cli: &Cli) -> std::result::Result<String, Failure> {
    if cli.format == Format::Table && !matches!(cli.command, Command::Properties { .. }) {
        return Err(usage("--format table is only available for properties"));
    }
    let csv = cli.format == Format::Csv;
    Ok(match &cli.command {
        Command::Count { n, ir, gr } => {
            let count = match (ir, gr) {
                (Some(ir), Some(gr)) => stratum_count(&Stratum::from_ratios(*n, *ir, *gr)?)?,
                _ => total_count(*n)?,
            };
            format!("{count}\n")
        }
        Command::Pmf {
            point,
            measure,
            bruteforce,
        } => {
            let s = Stratum::from_ratios(point.n, point.ir, point.gr)?;
            let pmf = if *bruteforce {
                stratum_pmf_bruteforce(*measure, &s)?
            } else {
                stratum_pmf_fast(*measure, &s)?
            };
            if csv {
                export::pmf_to_csv(&pmf)?
            } else {
                export::pmf_to_json(*measure, &s, &pmf)?
            }
        }
        Command::Sweep {
            n,
            measure,
            vary,
            grid,
            ir,
            gr,
            statistic,
            denominator,
        } => {
            let half = Rational::new(1, 2)?;
            let fixed = match vary {
                Axis::Ir if ir.is_some() => {
                    return Err(usage("--ir is the varied axis; fix GR with --gr"))
                }
                Axis::Gr if gr.is_some() => {
                    return Err(usage("--gr is the varied axis; fix IR with --ir"))
                }
                Axis::Ir => gr.unwrap_or(half),
                Axis::Gr => ir.unwrap_or(half),
            };
            let curve = sweep_curve(*measure, *n, *vary, grid, fixed, *statistic, *denominator)?;
            if csv {
                export::sweep_to_csv(&curve)?
            } else {
                export::sweep_to_json(&curve)?
            }
        }
        Command::Heatmap {
            n,
            measure,
            perf,
            bins,
            perf_bins,
            ir,
            gr,
        } => {
            let heat = match (ir, gr) {
                (Some(ir), Some(gr)) => joint_heatmap_stratum(
                    *measure,
                    *perf,
                    &Stratum::from_ratios(*n, *ir, *gr)?,
                    *bins,
                    *perf_bins,
                )?,
                _ => joint_heatmap(*measure, *perf, *n, *bins, *perf_bins)?,
            };
            if csv {
                export::heatmap_to_csv(&heat)?
            } else {
                export::heatmap_to_json(&heat)?
            }
        }
        Command::Properties {
            n,
            grid,
            ir_grid,
            gr_grid,
            thresholds,
        } => {
            let g = RatioGrid::new(
                *n,
                ir_grid.as_deref().unwrap_or(grid),
                gr_grid.as_deref().unwrap_or(grid),
            )?;
            let report = property_report(&g, &thresholds.config())?;
            match cli.format {
                Format::Json => export::report_to_json(&report)?,
                Format::Csv => export::report_to_csv(&report)?,
                Format::Table => report.to_table(),
            }
        }
        Command::Measure { input } => {
            let records = match input {
                Some(path) => export::parse_batch(io::BufReader::new(
                    std::fs::File::open(path).map_err(with_path(path))?,
                ))?,
                None => export::parse_batch(io::stdin().lock())?,
            };
            let scored = export::measure_batch(&records);
            if csv {
                export::scored_to_csv(&scored)?
            } else {
                export::scored_to_jsonl(&scored)?
            }
        }
        Command::Plot {
            kind,
            input,
            bins,
            title,
        } => plot(*kind, input, *bins, title.as_deref())?,
    })
}

fn with_path(path: &Path) -> impl Fn(io::Error) -> Error + '_ {
    move |e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn read_input(path: &Path) -> Result<String> {
    let mut text = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(with_path(path))?;
    Ok(text)
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn plot(kind: PlotKind, input: &Path, bins: usize, title: Option<&str>) -> Result<String> {
    let text = read_input(input)?;
    if text.trim().is_empty() {
        return Err(Error::EmptyPmf);
    }
    match kind {
        PlotKind::Histogram => {
            let (pmf, default_title) = if is_json(&text) {
                let doc = export::parse_pmf_json(&text)?;
                let s = doc.stratum()?;
                let t = format!(
                    "{} (n = {}, IR = {}, GR = {})",
                    doc.measure.label(),
                    s.n,
                    s.imbalance_ratio(),
                    s.group_ratio()
                );
                (doc.to_pmf()?, t)
            } else {
                (export::parse_pmf_csv(&text)?, String::new())
            };
            if pmf.is_empty() {
                return Err(Error::EmptyPmf);
            }
            let hist = bin_histogram(&pmf, bins)?;
            svg::histogram_svg(&hist, title.unwrap_or(&default_title))
        }
        PlotKind::Curve => {
            let mut data = if is_json(&text) {
                export::CurveData::from(&export::parse_sweep_json(&text)?)
            } else {
                export::parse_sweep_csv(&text)?
            };
            if let Some(t) = title {
                data.title = t.to_string();
            }
            svg::curve_svg(&data)
        }
        PlotKind::Heatmap => {
            let (grid, default_title) = if is_json(&text) {
                let h = export::parse_heatmap_json(&text)?;
                let t = format!("{} vs {}", h.measure.label(), h.perf.label());
                (export::HeatmapGrid::from(&h), t)
            } else {
                (export::parse_heatmap_csv(&text)?, String::new())
            };
            svg::heatmap_svg(&grid, title.unwrap_or(&default_title))
        }
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(with_path(path))?;
            tmp.write_all(text.as_bytes()).map_err(with_path(path))?;
            tmp.as_file().sync_all().map_err(with_path(path))?;
            tmp.persist(path).map_err(|e| with_path(path)(e.error))?;
        }
    }
    Ok(())
}
