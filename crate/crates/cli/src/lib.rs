//! The `cpn` command line: distances, Schmidt data, octant coordinates, figure data and the
//! invariant suites.
//!
//! Exit codes: 0 ok, 1 a check failed, 2 usage or invalid input, 3 dimension mismatch,
//! 4 I/O failure.

pub mod complex;
pub mod document;
pub mod figures;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use cpn_core::charts::{gnomonic_project, stereographic_project};
use cpn_core::entanglement::{closest_separable, is_max_entangled, is_separable, schmidt_decompose};
use cpn_core::orbits::{extrinsic_curvature_trace, orbit_volume, schmidt_cdf, schmidt_pdf, CP3_VOLUME};
use cpn_core::sampling::{ks_statistic, sample_batch};
use cpn_core::state::{fs_distance, to_octant_torus};
use cpn_core::tolerance::PREDICATE_TOL;
use cpn_core::verify::{self, Report, Suite};
use cpn_core::ProjectiveState;
use serde_json::{json, Map, Value};

use crate::complex::{format_state, parse_state, ParseComplexError};
use crate::document::{Document, Format, Table};
use crate::figures::{Figure, FigureParams};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseComplexError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Dimension(String),
    #[error("cannot write {target}: {source}")]
    Io { target: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Dimension(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

impl From<cpn_core::Error> for CliError {
    fn from(e: cpn_core::Error) -> Self {
        match e {
            cpn_core::Error::DimensionMismatch { .. } | cpn_core::Error::UnsupportedDimension(_) => {
                CliError::Dimension(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cpn", version, about = "Geometry of complex projective space drawn over a round octant")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; single results default to JSON, tables to CSV, reports to text.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Tolerance of the separability and maximal-entanglement predicates.
    #[arg(long, global = true, env = "CPN_PREDICATE_TOL", default_value_t = PREDICATE_TOL, allow_negative_numbers = true)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Metric,
    Entanglement,
    Orbits,
    Symplectic,
    Sampling,
    All,
}

impl SuiteArg {
    pub fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Metric => vec![Suite::Metric],
            SuiteArg::Entanglement => vec![Suite::Entanglement],
            SuiteArg::Orbits => vec![Suite::Orbits],
            SuiteArg::Symplectic => vec![Suite::Symplectic],
            SuiteArg::Sampling => vec![Suite::Sampling],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChartArg {
    Gnomonic,
    Stereographic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fubini-Study distance between two states given as amplitude lists ("1,0,1+2i").
    Distance {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Schmidt angle, entanglement predicates and closest separable state of a two-qubit state.
    Schmidt {
        #[arg(allow_hyphen_values = true)]
        state: String,
    },
    /// Octant radii, torus phases and chart point of a state in CP¹..CP³.
    Project {
        #[arg(allow_hyphen_values = true)]
        state: String,
        #[arg(long, value_enum, default_value_t = ChartArg::Gnomonic)]
        chart: ChartArg,
        /// Corner the stereographic chart is centered on.
        #[arg(long, default_value_t = 0)]
        pole: usize,
    },
    /// Data behind one of the figures.
    Figure {
        #[arg(value_enum)]
        name: Figure,
        #[arg(long, default_value_t = FigureParams::default().grid)]
        grid: usize,
        #[arg(long, default_value_t = FigureParams::default().samples)]
        samples: usize,
        #[arg(long, default_value_t = FigureParams::default().sigma, allow_negative_numbers = true)]
        sigma: f64,
        #[arg(long, default_value_t = FigureParams::default().distance, allow_negative_numbers = true)]
        distance: f64,
        #[arg(long, default_value_t = FigureParams::default().dim)]
        dim: usize,
    },
    /// Volume of the local-unitary orbit with Schmidt angle σ.
    OrbitVolume {
        #[arg(long, allow_negative_numbers = true)]
        sigma: f64,
    },
    /// Trace of the extrinsic curvature of the orbit with Schmidt angle σ.
    Curvature {
        #[arg(long, allow_negative_numbers = true)]
        sigma: f64,
    },
    /// Haar-random two-qubit states: Schmidt angles and Bloch radii.
    Sample {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Run invariant suites; exits 1 when any check fails.
    Check {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

/// What a successful run produced, and whether its checks passed.
#[derive(Debug)]
pub struct Outcome {
    pub document: Document,
    pub default_format: Format,
    pub checks_passed: bool,
}

fn record(schema: &str, fields: Value) -> Outcome {
    let Value::Object(fields) = fields else { unreachable!("records are objects") };
    Outcome { document: Document::Record { schema: schema.into(), fields }, default_format: Format::Json, checks_passed: true }
}

fn state(list: &str) -> Result<ProjectiveState, CliError> {
    Ok(ProjectiveState::new(&parse_state(list)?)?)
}

/// Runs a command without writing anything.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(CliError::Usage(format!("tolerance must be positive, got {}", cli.tol)));
    }
    match &cli.command {
        Command::Distance { a, b } => {
            let d = fs_distance(&state(a)?, &state(b)?)?;
            Ok(record("distance", json!({ "distance": d })))
        }
        Command::Schmidt { state: s } => {
            let s = state(s)?;
            let data = schmidt_decompose(&s)?;
            let closest = closest_separable(&s)?;
            Ok(record(
                "schmidt",
                json!({
                    "sigma": data.sigma,
                    "coefficients": data.coefficients,
                    "separable": is_separable(&s, cli.tol)?,
                    "max_entangled": is_max_entangled(&s, cli.tol)?,
                    "closest_separable": format_state(closest.state.amplitudes()),
                    "distance": closest.distance,
                    "unique": closest.unique,
                }),
            ))
        }
        Command::Project { state: s, chart, pole } => {
            let c = to_octant_torus(&state(s)?);
            let point = match chart {
                ChartArg::Gnomonic => gnomonic_project(&c.radii)?,
                ChartArg::Stereographic => stereographic_project(&c.radii, *pole)?,
            };
            let chart_name = match chart {
                ChartArg::Gnomonic => "gnomonic".to_string(),
                ChartArg::Stereographic => format!("stereographic:{pole}"),
            };
            Ok(record("project", json!({ "radii": c.radii, "phases": c.phases, "chart": chart_name, "chart_point": point.coords })))
        }
        Command::Figure { name, grid, samples, sigma, distance, dim } => {
            let p = FigureParams { grid: *grid, samples: *samples, sigma: *sigma, distance: *distance, dim: *dim };
            let table = figures::emit(*name, &p)?;
            Ok(Outcome { document: Document::Table(table), default_format: Format::Csv, checks_passed: true })
        }
        Command::OrbitVolume { sigma } => {
            let v = orbit_volume(*sigma)?;
            Ok(record(
                "orbit-volume",
                json!({ "sigma": sigma, "volume": v, "fraction_of_cp3": v / CP3_VOLUME, "pdf": schmidt_pdf(*sigma)? }),
            ))
        }
        Command::Curvature { sigma } => {
            let k = extrinsic_curvature_trace(*sigma)?;
            Ok(record("curvature", json!({ "sigma": sigma, "extrinsic_curvature_trace": k })))
        }
        Command::Sample { count, seed } => {
            let batch = sample_batch(*seed, *count as usize)?;
            let cols = ["index", "sigma", "bloch_radius"].map(String::from).to_vec();
            let mut t = Table::new("sample", cols);
            for (i, (s, r)) in batch.sigmas.iter().zip(&batch.bloch_radii).enumerate() {
                t.push(vec![json!(i), json!(s), json!(r)]);
            }
            let ks_sigma = ks_statistic(&batch.sigmas, |s| schmidt_cdf(s.clamp(0.0, std::f64::consts::FRAC_PI_4)).unwrap_or(1.0))?;
            let ks_radius = ks_statistic(&batch.bloch_radii, |r| r.clamp(0.0, 1.0).powi(3))?;
            let below = batch.bloch_radii.iter().filter(|&&r| r < 0.5).count() as f64 / batch.count as f64;
            t.metadata = vec![
                ("seed".into(), json!(seed)),
                ("count".into(), json!(count)),
                ("ks_sigma".into(), json!(ks_sigma)),
                ("ks_bloch_radius".into(), json!(ks_radius)),
                ("fraction_radius_below_half".into(), json!(below)),
            ];
            Ok(Outcome { document: Document::Table(t), default_format: Format::Csv, checks_passed: true })
        }
        Command::Check { suite, seed } => {
            let report = verify::run(&suite.suites(), *seed);
            Ok(report_outcome(&report, cli.format))
        }
    }
}

/// Report as text, or as a table when a format is requested.
pub fn report_outcome(report: &Report, format: Option<Format>) -> Outcome {
    let document = if format.is_some() {
        let cols = ["suite", "name", "measured", "tolerance", "comparison", "passed"].map(String::from).to_vec();
        let mut t = Table::new("check", cols);
        for o in &report.outcomes {
            let cmp = match o.comparison {
                verify::Comparison::AtMost => "at_most",
                verify::Comparison::AtLeast => "at_least",
            };
            t.push(vec![json!(o.suite.name()), json!(o.name), json!(o.measured), json!(o.tolerance), json!(cmp), json!(o.passed)]);
        }
        t.metadata = vec![("seed".into(), json!(report.seed)), ("failed".into(), json!(report.failures().count()))];
        Document::Table(t)
    } else {
        Document::Text(report.to_string())
    };
    Outcome { document, default_format: Format::Csv, checks_passed: report.passed() }
}

/// Writes the outcome where the flags say and returns the process exit code.
pub fn deliver(cli: &Cli, outcome: &Outcome) -> Result<u8, CliError> {
    let format = cli.format.unwrap_or(outcome.default_format);
    let target = cli.out.as_ref().map_or("standard output".to_string(), |p| p.display().to_string());
    let io_err = |source| CliError::Io { target: target.clone(), source };
    let mut w: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(io_err)?)),
        None => Box::new(io::stdout().lock()),
    };
    outcome.document.write(format, &mut w).and_then(|_| w.flush()).map_err(io_err)?;
    Ok(if outcome.checks_passed { 0 } else { 1 })
}

/// Object form of a record, for callers that want the fields without serializing.
pub fn record_fields(outcome: &Outcome) -> Option<&Map<String, Value>> {
    match &outcome.document {
        Document::Record { fields, .. } => Some(fields),
        _ => None,
    }
}
