//! Command-line front end. [`run`] is what the binary calls; it takes the
//! argument list and output streams so it can be driven from tests.

use std::f64::consts::TAU;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::distributions::{
    area_cdf_with, area_density, conditional_cdf_with, perimeter_cdf_with, perimeter_density_with, tabulate,
    ConditionalKind, DensityKind,
};
use crate::error::Error;
use crate::montecarlo::{sample_batch, summarize, SampleKind, SUMMARY_HEADER};
use crate::sphere::RngStream;
use crate::verify::{all_passed, run_suite, Suite, VerifyConfig};

/// The perimeter density diverges at `2π`; grids reaching it are evaluated
/// this far inside.
const PERIMETER_EDGE: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "sphtri",
    version,
    about = "Area and perimeter distributions of random spherical triangles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the density of the area or the perimeter.
    Density(CurveArgs),
    /// Tabulate the distribution function of the area or the perimeter.
    Cdf(CurveArgs),
    /// Tabulate a conditional distribution function at a fixed side or angle.
    Conditional(ConditionalArgs),
    /// Simulate a batch and print its summary row.
    Sample(SampleArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Statistic {
    Area,
    Perimeter,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Single evaluation point (conflicts with --from/--to/--steps).
    #[arg(long, conflicts_with_all = ["from", "to", "steps"])]
    pub at: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub from: f64,
    /// Upper end of the grid [default: 2π].
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// Quadrature tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Read angles in degrees instead of radians.
    #[arg(long)]
    pub degrees: bool,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, value_enum)]
    pub kind: Statistic,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct ConditionalArgs {
    /// One of area-given-side, perimeter-given-side, area-median,
    /// perimeter-angle-coords, perimeter-given-angle, area-given-angle,
    /// perimeter-bisector, area-side-coords.
    #[arg(long, value_parser = parse_conditional)]
    pub kind: ConditionalKind,
    /// The fixed side or angle, in (0, π).
    #[arg(long)]
    pub kappa: f64,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// primal, dual, primal-given-side or dual-given-angle.
    #[arg(long, value_parser = parse_sample)]
    pub kind: SampleKind,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fixed side or angle of the conditional samplers.
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub degrees: bool,
    /// Print one `sigma,tau` row per sample instead of the summary.
    #[arg(long)]
    pub raw: bool,
    /// Segments of the tabulated distribution functions in the summary.
    #[arg(long, default_value_t = 512)]
    pub intervals: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// identities, jacobians, elliptic, elliptic-identities (or eq78),
    /// duality, mc-vs-analytic or all.
    #[arg(long, value_parser = parse_suite, default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_conditional(s: &str) -> std::result::Result<ConditionalKind, String> {
    ConditionalKind::from_name(s).ok_or_else(|| format!("unknown conditional kind `{s}`"))
}

fn parse_sample(s: &str) -> std::result::Result<SampleKind, String> {
    SampleKind::from_name(s).ok_or_else(|| format!("unknown sampler `{s}`"))
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    Suite::from_name(s).ok_or_else(|| format!("unknown suite `{s}`"))
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parses `argv` (program name first) and runs the command. Returns 0 on
/// success, 1 on a usage or evaluation error, 2 when a verification check
/// fails.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Verification) => 2,
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    match command {
        Command::Density(a) => {
            let (xs, tol) = (grid(&a.grid)?, a.grid.tol);
            let curve = match a.kind {
                Statistic::Area => tabulate(DensityKind::AreaPdf, xs, |x| Ok(area_density(x)))?,
                Statistic::Perimeter => tabulate(DensityKind::PerimeterPdf, xs, |x| {
                    perimeter_density_with(x.min(TAU - PERIMETER_EDGE), tol)
                })?,
            };
            emit(&a.grid.out, &curve.to_csv(), stdout)
        }
        Command::Cdf(a) => {
            let (xs, tol) = (grid(&a.grid)?, a.grid.tol);
            let curve = match a.kind {
                Statistic::Area => tabulate(DensityKind::AreaCdf, xs, |x| area_cdf_with(x, tol))?,
                Statistic::Perimeter => tabulate(DensityKind::PerimeterCdf, xs, |x| perimeter_cdf_with(x, tol))?,
            };
            emit(&a.grid.out, &curve.to_csv(), stdout)
        }
        Command::Conditional(a) => {
            let xs = grid(&a.grid)?;
            let kappa = angle(a.kappa, a.grid.degrees);
            if !(kappa > 0.0 && kappa < std::f64::consts::PI) {
                return Err(Failure::Usage(format!("--kappa {kappa} outside (0, π)")));
            }
            let (kind, tol) = (a.kind, a.grid.tol);
            let curve = tabulate(DensityKind::Conditional, xs, |x| {
                conditional_cdf_with(kind, x, kappa, tol)
            })?;
            emit(&a.grid.out, &curve.to_csv(), stdout)
        }
        Command::Sample(a) => {
            let kappa = match (a.kind.is_conditional(), a.kappa) {
                (true, Some(k)) => angle(k, a.degrees),
                (true, None) => return Err(Failure::Usage(format!("{} needs --kappa", a.kind.name()))),
                (false, Some(_)) => return Err(Failure::Usage(format!("{} takes no --kappa", a.kind.name()))),
                (false, None) => 0.0,
            };
            let batch = sample_batch::<f64>(a.kind, kappa, a.n, &RngStream::new(a.seed, 0))?;
            let text = if a.raw {
                let mut s = String::from("sigma,tau\n");
                for (sigma, tau) in &batch.stats {
                    s.push_str(&format!("{sigma:.16e},{tau:.16e}\n"));
                }
                s
            } else {
                format!("{SUMMARY_HEADER}\n{}\n", summarize(&batch, a.intervals)?.csv_row())
            };
            emit(&a.out, &text, stdout)
        }
        Command::Verify(a) => {
            let cfg = VerifyConfig {
                n: a.n,
                seed: a.seed,
                ..Default::default()
            };
            let reports = run_suite(a.suite, &cfg)?;
            let mut text = String::new();
            for r in &reports {
                text.push_str(&format!("{r}\n"));
            }
            emit(&a.out, &text, stdout)?;
            if all_passed(&reports) {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn angle(x: f64, degrees: bool) -> f64 {
    if degrees {
        x.to_radians()
    } else {
        x
    }
}

/// Evaluation points: `--at`, or `steps` equally spaced points from `from`
/// to `to` inclusive.
fn grid(g: &GridArgs) -> std::result::Result<Vec<f64>, Failure> {
    if let Some(at) = g.at {
        let at = angle(at, g.degrees);
        if !(0.0..=TAU).contains(&at) {
            return Err(Failure::Usage(format!("--at {at} outside [0, 2π]")));
        }
        return Ok(vec![at]);
    }
    let from = angle(g.from, g.degrees);
    let to = g.to.map_or(TAU, |t| angle(t, g.degrees));
    if !(from >= 0.0 && from < to && to <= TAU) {
        return Err(Failure::Usage(format!(
            "range must satisfy 0 ≤ from < to ≤ 2π, got from = {from}, to = {to}"
        )));
    }
    if g.steps < 2 {
        return Err(Failure::Usage("--steps must be at least 2".into()));
    }
    let last = (g.steps - 1) as f64;
    Ok((0..g.steps)
        .map(|i| {
            if i + 1 == g.steps {
                to
            } else {
                from + (to - from) * i as f64 / last
            }
        })
        .collect())
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let written = match out {
        Some(path) => std::fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    };
    written.map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}
