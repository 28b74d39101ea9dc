//! Command-line front end: `normalize`, `analyze`, `cg`, `plot-data`.
//!
//! Exit codes: 0 success with every report holding, 2 bad input or usage,
//! 3 a sequence with no nonzero value, 4 some entropic relation failed.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use log::{debug, info};
use serde::Serialize;

use entropart::clebsch_gordan::{self, cg_squared_table, SpinCouple};
use entropart::entropy::{self, InequalityReport, LogBase, Options, DEFAULT_TOLERANCE};
use entropart::index_map::{self, DEFAULT_ENUMERATION_CAP};
use entropart::prob::{normalize, Distribution};
use entropart::{io, Error, Shape};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "entropart", version, about = "Entropic inequalities on partitioned index sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Logarithm base: 2, e or 10
    #[arg(long, global = true, default_value = "e")]
    pub base: LogBase,

    /// Output format; json unless the subcommand says otherwise
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Tolerance on residuals
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Turn a real sequence into p(y) = |s_y| / Σ|s|
    Normalize {
        #[arg(long)]
        input: PathBuf,
    },
    /// Entropic relations of the normalized sequence over one shape or all factorizations
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// e.g. 4x2; scans every factorization when omitted
        #[arg(long)]
        shape: Option<Shape>,
        #[arg(long, default_value_t = 3)]
        max_parts: usize,
    },
    /// Clebsch–Gordan table and its inequalities; spins are given as twice their value
    Cg {
        #[arg(long, allow_hyphen_values = true)]
        j1: i64,
        #[arg(long, allow_hyphen_values = true)]
        j2: i64,
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        /// Three-factor shape for strong subadditivity, e.g. 2x2x2 or 1x2x2
        #[arg(long)]
        shape: Option<Shape>,
    },
    /// Lattice rows of the index plane, or projected plane cuts for two-axis shapes
    PlotData {
        #[arg(long)]
        shape: Shape,
        #[arg(long, value_enum, default_value_t = PlotKind::Plane)]
        which: PlotKind,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    Plane,
    Projections,
}

/// A command that could not complete, with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DegenerateSequence => EXIT_DEGENERATE,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_INPUT, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure { code: EXIT_INPUT, message: e.to_string() }
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Runs one parsed command, writing its output to `out`. Returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let opts = Options { base: cli.base, tolerance: cli.tolerance.unwrap_or(DEFAULT_TOLERANCE) };
    if !(opts.tolerance >= 0.0 && opts.tolerance.is_finite()) {
        return Err(Failure { code: EXIT_INPUT, message: format!("bad tolerance {}", opts.tolerance) });
    }
    match &cli.command {
        Command::Normalize { input } => cmd_normalize(input, cli.format.unwrap_or(OutputFormat::Json), out),
        Command::Analyze { input, shape, max_parts } => cmd_analyze(
            input,
            shape.as_ref(),
            *max_parts,
            &opts,
            cli.format.unwrap_or(OutputFormat::Json),
            out,
        ),
        Command::Cg { j1, j2, j, m, shape } => {
            cmd_cg([*j1, *j2, *j, *m], shape.as_ref(), &opts, cli.format.unwrap_or(OutputFormat::Json), out)
        }
        Command::PlotData { shape, which, cap } => {
            cmd_plot_data(shape, *which, *cap, cli.format.unwrap_or(OutputFormat::Csv), out)
        }
    }
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn read_distribution(input: &PathBuf) -> Result<Distribution, Failure> {
    let seq = io::read_sequence(input)?;
    debug!("read {} values from {}", seq.values().len(), input.display());
    Ok(normalize(&seq)?)
}

pub fn cmd_normalize(input: &PathBuf, format: OutputFormat, out: &mut dyn Write) -> Outcome {
    let dist = read_distribution(input)?;
    match format {
        OutputFormat::Json => write_json(&dist, out)?,
        OutputFormat::Csv => {
            writeln!(out, "y,p")?;
            for (i, p) in dist.probs().iter().enumerate() {
                writeln!(out, "{},{}", i + 1, num(*p))?;
            }
        }
        OutputFormat::Text => {
            for (i, p) in dist.probs().iter().enumerate() {
                writeln!(out, "{:>6}  {}", i + 1, num(*p))?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct AnalysisOutput<'a> {
    n: usize,
    base: LogBase,
    notes: &'a [String],
    reports: &'a [InequalityReport],
    all_hold: bool,
}

/// Shortest round-trip form, with an exponent for very small or large values.
fn num(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

fn grouping_label(grouping: &[Vec<usize>]) -> String {
    grouping
        .iter()
        .map(|g| g.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("+"))
        .collect::<Vec<_>>()
        .join("|")
}

fn write_reports(
    reports: &[InequalityReport],
    notes: &[String],
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    match format {
        OutputFormat::Csv => {
            writeln!(out, "kind,shape,grouping,base,residual,holds")?;
            for r in reports {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.kind,
                    r.shape,
                    grouping_label(&r.grouping),
                    r.base,
                    num(r.residual),
                    r.holds
                )?;
            }
        }
        OutputFormat::Text => {
            for note in notes {
                writeln!(out, "note: {note}")?;
            }
            writeln!(out, "{:<22} {:<8} {:<10} {:>24}  holds", "kind", "shape", "grouping", "residual")?;
            for r in reports {
                writeln!(
                    out,
                    "{:<22} {:<8} {:<10} {:>24}  {}",
                    r.kind.to_string(),
                    r.shape.to_string(),
                    grouping_label(&r.grouping),
                    num(r.residual),
                    r.holds
                )?;
            }
        }
        OutputFormat::Json => unreachable!("json handled by caller"),
    }
    Ok(())
}

pub fn cmd_analyze(
    input: &PathBuf,
    shape: Option<&Shape>,
    max_parts: usize,
    opts: &Options,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Outcome {
    let dist = read_distribution(input)?;
    let (reports, notes) = match shape {
        Some(shape) => {
            let joint = dist.as_joint(shape)?;
            let reports = entropy::shape_reports(&joint, opts)?;
            let notes = if shape.rank() < 2 {
                vec![format!("shape {shape} has a single axis; nothing to compare")]
            } else {
                Vec::new()
            };
            (reports, notes)
        }
        None => {
            let outcome = entropy::scan(&dist, max_parts, opts);
            (outcome.reports, outcome.notes)
        }
    };
    info!("{} reports over N = {}", reports.len(), dist.len());
    let all_hold = reports.iter().all(|r| r.holds);
    match format {
        OutputFormat::Json => write_json(
            &AnalysisOutput { n: dist.len(), base: opts.base, notes: &notes, reports: &reports, all_hold },
            out,
        )?,
        _ => write_reports(&reports, &notes, format, out)?,
    }
    Ok(if all_hold { EXIT_OK } else { EXIT_VIOLATION })
}

#[derive(Serialize)]
struct CgOutput<'a> {
    table: &'a clebsch_gordan::CGTable,
    distribution: &'a Distribution,
    subadditivity: &'a InequalityReport,
    ssa: Option<&'a InequalityReport>,
    notes: &'a [String],
}

pub fn cmd_cg(
    twice: [i64; 4],
    triple: Option<&Shape>,
    opts: &Options,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Outcome {
    let [tj1, tj2, tj, tm] = twice;
    let couple = SpinCouple::from_twice(tj1, tj2, tj, tm)?;
    let (table, dist) = cg_squared_table(couple);
    let subadditivity = clebsch_gordan::cg_subadditivity(couple, opts)?;

    let mut notes = Vec::new();
    let triple = match triple {
        Some(shape) => Some(shape.clone()),
        None => {
            let found = clebsch_gordan::default_triple_shape(couple.total());
            if found.is_none() {
                notes.push(format!(
                    "N = {} has no three-factor shape with factors >= 2; pass --shape (e.g. 1x{}) to run strong subadditivity",
                    couple.total(),
                    couple.shape()
                ));
            }
            found
        }
    };
    let ssa = triple.map(|t| clebsch_gordan::cg_ssa(couple, &t, opts)).transpose()?;

    match format {
        OutputFormat::Json => write_json(
            &CgOutput { table: &table, distribution: &dist, subadditivity: &subadditivity, ssa: ssa.as_ref(), notes: &notes },
            out,
        )?,
        OutputFormat::Csv => {
            writeln!(out, "y,m1,m2,sign,radicand,f")?;
            for (i, e) in table.entries().iter().enumerate() {
                writeln!(out, "{},{},{},{},{},{}", i + 1, e.m1, e.m2, e.value.sign(), e.value.radicand(), num(dist.probs()[i]))?;
            }
        }
        OutputFormat::Text => {
            writeln!(out, "{couple} on shape {}", table.shape())?;
            for (i, e) in table.entries().iter().enumerate() {
                if !e.value.is_zero() {
                    writeln!(out, "  y={:<4} m1={:<5} m2={:<5} {}", i + 1, e.m1.to_string(), e.m2.to_string(), e.value)?;
                }
            }
            let reports: Vec<InequalityReport> = std::iter::once(subadditivity.clone()).chain(ssa.clone()).collect();
            write_reports(&reports, &notes, OutputFormat::Text, out)?;
        }
    }
    let holds = subadditivity.holds && ssa.as_ref().map_or(true, |r| r.holds);
    Ok(if holds { EXIT_OK } else { EXIT_VIOLATION })
}

pub fn cmd_plot_data(shape: &Shape, which: PlotKind, cap: usize, format: OutputFormat, out: &mut dyn Write) -> Outcome {
    match which {
        PlotKind::Plane => {
            let rows = index_map::lattice_points(shape, cap)?;
            match format {
                OutputFormat::Json => write_json(&rows, out)?,
                _ => index_map::write_lattice_csv(shape, &rows, &mut *out)?,
            }
        }
        PlotKind::Projections => {
            let segments = index_map::projected_intersections(shape, cap)?;
            match format {
                OutputFormat::Json => write_json(&segments, out)?,
                _ => index_map::write_projections_csv(&segments, &mut *out)?,
            }
        }
    }
    Ok(EXIT_OK)
}
