//! Command-line front end: argument parsing, dispatch and report emission.

mod commands;
mod input;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use thiserror::Error;
use toric_dioph::approx::Exponent;
use toric_dioph::arith::Place;

pub use input::{load_fan, DivisorArg};
pub use report::{fan_hash, Format};

pub const TOOL: &str = "toric-dioph";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{field}: {message}")]
    Usage { field: &'static str, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Library(#[from] toric_dioph::Error),
}

impl CliError {
    pub fn usage(field: &'static str, message: impl Into<String>) -> Self {
        CliError::Usage {
            field,
            message: message.into(),
        }
    }

    /// 1 when the fan itself fails validation, 2 for any other bad input.
    pub fn exit_code(&self) -> u8 {
        use toric_dioph::Error as E;
        match self {
            CliError::Library(
                E::NotSmoothComplete(_)
                | E::RaysNotPrimitive { .. }
                | E::ConeNotUnimodular { .. }
                | E::FacetUnpaired { .. }
                | E::PointNotCovered { .. },
            ) => 1,
            _ => 2,
        }
    }
}

/// Comma-separated integers such as `1,0,-2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct IntList(pub Vec<i64>);

impl FromStr for IntList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| format!("{x:?} is not an integer")))
            .collect::<Result<Vec<_>, _>>()
            .map(IntList)
    }
}

fn parse_place(s: &str) -> Result<Place, String> {
    let place = match s {
        "inf" | "infinity" | "∞" => Place::Infinity,
        "complex" => Place::Complex,
        _ => Place::Prime(s.parse().map_err(|_| format!("expected inf or a prime, got {s:?}"))?),
    };
    match place {
        Place::Prime(_) => place.check().map_err(|e| e.to_string()),
        _ => Ok(place),
    }
}

#[derive(Debug, Parser)]
#[command(name = "toric-dioph", version, about = "Approximation constants of smooth complete toric varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for randomized steps (splitting types).
    #[arg(long, global = true, env = "TORIC_DIOPH_SEED")]
    pub seed: Option<u64>,
    /// Worker threads for searches.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

/// A fan given as a JSON file or a bundled name, with a divisor on it.
#[derive(Clone, Debug, Args, Serialize)]
pub struct Target {
    /// Fan JSON path, or the name of a bundled fan.
    pub fan: String,
    /// `anticanonical`, inline coefficients `1,0,2`, or a JSON file holding the coefficient array.
    #[arg(long, default_value = "anticanonical")]
    pub divisor: DivisorArg,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case", tag = "name")]
pub enum Command {
    /// Smoothness and completeness checks.
    Validate { fan: String },
    /// Picard group, effective cone, primitive collections, beta and the accumulating locus.
    Analyze(Target),
    /// Positivity of a divisor and its globally generated representatives.
    Divisor(Target),
    /// Positive relations with their degrees, very-freeness and splitting types.
    Curve {
        #[command(flatten)]
        #[serde(flatten)]
        target: Target,
        /// Coefficient bound for enumerated relations.
        #[arg(long, default_value_t = 2)]
        bound: i64,
        /// Examine only this relation.
        #[arg(long)]
        relation: Option<IntList>,
    },
    /// Approximation experiments.
    Approx {
        #[command(subcommand)]
        mode: Approx,
    },
    /// Build the normal-form fan for `(s, t, a)` and report its essential constant.
    Kleinschmidt {
        s: usize,
        t: usize,
        #[arg(required = true, allow_negative_numbers = true)]
        a: Vec<i64>,
        #[arg(long, default_value = "anticanonical")]
        divisor: DivisorArg,
    },
    /// Consistency checks over every bundled fan.
    Corpus {
        /// Box bound for the accumulation checks.
        #[arg(long, default_value_t = 12)]
        bound: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleArg {
    All,
    ZeroFromAbove,
    ZeroFromBelow,
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineKind {
    /// Through the base point along the direction `m`.
    General,
    /// A torus-invariant line of the chart.
    Chart,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeightArg {
    Salberger,
    /// The monomial of the search chart.
    Chart,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionArg {
    All,
    OffLocus,
    OnLocus,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Approx {
    /// Slope of log height against log distance along a line through the base point.
    Slope {
        #[command(flatten)]
        #[serde(flatten)]
        target: Target,
        /// Line direction, one integer per chart coordinate.
        #[arg(long)]
        line: IntList,
        #[arg(long, value_enum, default_value_t = LineKind::General)]
        kind: LineKind,
        /// Chart cone; defaults to the effective-cone witness cone.
        #[arg(long)]
        chart: Option<usize>,
        #[arg(long, default_value = "inf", value_parser = parse_place)]
        place: Place,
        #[arg(long, value_enum, default_value_t = ScheduleArg::All)]
        schedule: ScheduleArg,
    },
    /// Minimum of `d^gamma H` over a box of chart points.
    Search {
        #[command(flatten)]
        #[serde(flatten)]
        target: Target,
        /// Exponent gamma, an integer or fraction such as `5/2`.
        #[arg(long, default_value = "2")]
        gamma: Exponent,
        #[arg(long, default_value_t = 40)]
        bound: u64,
        #[arg(long)]
        chart: Option<usize>,
        #[arg(long, default_value = "inf", value_parser = parse_place)]
        place: Place,
        #[arg(long, value_enum, default_value_t = HeightArg::Salberger)]
        height: HeightArg,
        #[arg(long, value_enum, default_value_t = RegionArg::All)]
        region: RegionArg,
    },
    /// Compare minima on and off the accumulating locus.
    Verify {
        #[command(flatten)]
        #[serde(flatten)]
        target: Target,
        #[arg(long, default_value_t = 20)]
        bound: u64,
        #[arg(long, default_value = "inf", value_parser = parse_place)]
        place: Place,
    },
    /// Cox lift, height and distance of a single point.
    Point {
        #[command(flatten)]
        #[serde(flatten)]
        target: Target,
        /// Point JSON file: `{"chart": c, "coords": [[num, den], ..]}`.
        point: PathBuf,
        #[arg(long, default_value = "inf", value_parser = parse_place)]
        place: Place,
    },
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Command::Validate { .. } => "validate",
            Command::Analyze(_) => "analyze",
            Command::Divisor(_) => "divisor",
            Command::Curve { .. } => "curve",
            Command::Approx { mode } => match mode {
                Approx::Slope { .. } => "approx slope",
                Approx::Search { .. } => "approx search",
                Approx::Verify { .. } => "approx verify",
                Approx::Point { .. } => "approx point",
            },
            Command::Kleinschmidt { .. } => "kleinschmidt",
            Command::Corpus { .. } => "corpus",
        };
        f.write_str(name)
    }
}

/// Everything a run depends on; embedded verbatim in the report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        if cli.jobs == Some(0) {
            return Err(CliError::usage("--jobs", "must be at least 1"));
        }
        match &cli.command {
            Command::Approx {
                mode: Approx::Search { bound, .. } | Approx::Verify { bound, .. },
            }
            | Command::Corpus { bound } => {
                if *bound == 0 || *bound > 1 << 20 {
                    return Err(CliError::usage("--bound", "must be between 1 and 2^20"));
                }
            }
            Command::Curve { bound, .. } if *bound < 1 => {
                return Err(CliError::usage("--bound", "must be at least 1"));
            }
            _ => {}
        }
        Ok(RunConfig {
            command: cli.command,
            format: cli.format,
            output: cli.output,
            seed: cli.seed.unwrap_or(DEFAULT_SEED),
            jobs: cli.jobs,
        })
    }
}

/// Run one command and emit its report; returns the process exit code.
pub fn run(cfg: &RunConfig) -> u8 {
    let work = || commands::dispatch(cfg);
    let outcome = match cfg.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(e) => Err(CliError::usage("--jobs", e.to_string())),
        },
        None => work(),
    };
    let written = outcome.and_then(|o| {
        let text = report::render(cfg, &o)?;
        report::emit(cfg.output.as_deref(), &text)?;
        Ok(o.passed)
    });
    match written {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
