//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use spindiscord_core::distribution::Scheme;
use spindiscord_core::scaling::{CriticalForm, ScalingParams};
use spindiscord_core::spinchain::{GroundStateSource, SolverOptions};
use spindiscord_core::Error;

use crate::cache::CachedSolver;
use crate::figures::{self, FigureOutput};
use crate::output::{Cell, Format, Table};

pub const CACHE_ENV: &str = "SPINDISCORD_CACHE";
pub const DEFAULT_CACHE_DIR: &str = "./cache";

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_NUMERICAL: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "spindiscord", version, about = "Quantum discord of XXZ ring ground states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the ground state and store it in the cache.
    GroundState {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Normalized discord near the critical temperature (closed form only).
    Fig1 {
        /// Reduced-temperature grid `start:stop:step`.
        #[arg(long, default_value = "0.5:1.5:0.01")]
        t_range: String,
        /// Separation of the far pair.
        #[arg(long, default_value_t = 20.0)]
        r: f64,
        #[arg(long, default_value_t = 0.1)]
        alpha: f64,
        #[arg(long, default_value_t = 0.6)]
        nu: f64,
        #[arg(long, default_value_t = 4.0)]
        xi0: f64,
        #[arg(long, value_enum, default_value = "power-law")]
        form: Form,
        #[command(flatten)]
        common: Common,
    },
    /// Discord against separation.
    Fig2 {
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[command(flatten)]
        grid: DeltaGrid,
        #[command(flatten)]
        common: Common,
    },
    /// Discord against anisotropy.
    Fig3 {
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "-1.5:2.5:0.05")]
        delta_range: String,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        rs: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Ratio of off-diagonal to diagonal correlations against anisotropy.
    Fig4 {
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "-0.95:2.5:0.05")]
        delta_range: String,
        #[arg(long, value_delimiter = ',', default_value = "1,3")]
        rs: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Histogram of the conditional entropy over measurement directions.
    Fig5 {
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        common: Common,
    },
    /// Moments of the conditional entropy against anisotropy.
    Fig6 {
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "-0.5:2.5:0.05")]
        delta_range: String,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        rs: Vec<usize>,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    PowerLaw,
    Kt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    /// Gauss-Legendre grid with the uniform measure on the sphere.
    Sphere,
    /// Midpoint grid with a flat measure in (θ, φ).
    Flat,
    /// Seeded Monte Carlo, uniform on the sphere.
    Mc,
}

#[derive(Debug, Args)]
pub struct DeltaGrid {
    #[arg(long, allow_hyphen_values = true, conflicts_with = "delta_range")]
    delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    delta_range: Option<String>,
}

#[derive(Debug, Args)]
pub struct Sampling {
    /// Grid size `NxM` in (θ, φ).
    #[arg(long, default_value = "256x256")]
    quadrature: String,
    #[arg(long, value_enum, default_value = "sphere")]
    measure: Measure,
    /// Sample count for `--measure mc`.
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Overrides `SPINDISCORD_CACHE` and the default `./cache`.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Omit the timestamp so identical runs give identical bytes.
    #[arg(long)]
    deterministic: bool,
}

/// Failure of a command, tagged with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_NUMERICAL,
            message: format!("io: {e}"),
        }
    }
}

/// Bad input maps to 1, failures of the numerics to 2.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NoConvergence { .. }
        | Error::DegenerateGroundState(_)
        | Error::PositivityViolated { .. }
        | Error::UndefinedRatio(_) => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

/// Inclusive grid `start:stop:step`. Points are rounded to 1e-12 so that
/// e.g. `1.0` lands exactly on the grid.
pub fn parse_range(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, step] = parts[..] else {
        return Err(format!("range `{text}` is not of the form start:stop:step"));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("`{s}` is not a number"))
    };
    let (a, b, step) = (num(a)?, num(b)?, num(step)?);
    if !(step > 0.0) {
        return Err("range step must be positive".into());
    }
    if b < a {
        return Err("range is empty".into());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize + 1;
    Ok((0..n)
        .map(|i| ((a + step * i as f64) * 1e12).round() / 1e12)
        .collect())
}

/// Grid size `NxM`.
pub fn parse_quadrature(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("quadrature `{text}` is not of the form NxM"))?;
    let p = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("`{s}` is not a count"));
    Ok((p(a)?, p(b)?))
}

fn scheme(s: &Sampling, seed: u64) -> Result<Scheme, Failure> {
    let scheme = match s.measure {
        Measure::Mc => Scheme::UniformSphere {
            n: s.samples,
            seed,
        },
        Measure::Sphere | Measure::Flat => {
            let (n_theta, n_phi) = parse_quadrature(&s.quadrature).map_err(Failure::usage)?;
            if s.measure == Measure::Sphere {
                Scheme::GaussGrid { n_theta, n_phi }
            } else {
                Scheme::FlatAngles { n_theta, n_phi }
            }
        }
    };
    scheme.validate()?;
    Ok(scheme)
}

fn cache_dir(flag: &Option<PathBuf>) -> PathBuf {
    flag.clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

fn solver(common: &Common, n: usize) -> Result<CachedSolver, Failure> {
    if !(common.tol > 0.0 && common.tol <= 1e-4) {
        return Err(Failure::usage("--tol must lie in (0, 1e-4]"));
    }
    if n < 4 || !n.is_multiple_of(2) || n > spindiscord_core::spinchain::MAX_SITES {
        return Err(Failure::usage(format!(
            "--n must be an even number of sites between 4 and {}, got {n}",
            spindiscord_core::spinchain::MAX_SITES
        )));
    }
    if n >= 22 {
        eprintln!(
            "warning: N={n} has a {}-state sector; expect minutes of runtime and a large workspace",
            spindiscord_core::spinchain::binomial(n, n / 2)
        );
    }
    let options = SolverOptions {
        tol: common.tol,
        seed: common.seed,
        ..SolverOptions::default()
    };
    Ok(CachedSolver::new(Some(cache_dir(&common.cache_dir)), options))
}

fn check_rs(rs: &[usize], n: usize) -> Result<(), Failure> {
    if rs.is_empty() {
        return Err(Failure::usage("--rs must not be empty"));
    }
    match rs.iter().find(|&&r| r == 0 || r >= n) {
        Some(r) => Err(Failure::usage(format!("separation {r} outside 1..{n}"))),
        None => Ok(()),
    }
}

fn config_echo(table: &mut Table, command: &str, n: Option<usize>, common: &Common) {
    table.provenance.insert(
        "config".into(),
        json!({
            "command": command,
            "n_sites": n,
            "seed": common.seed,
            "tol": common.tol,
            "version": env!("CARGO_PKG_VERSION"),
        }),
    );
}

fn emit(mut out: FigureOutput, command: &str, n: Option<usize>, common: &Common) -> Result<(), Failure> {
    config_echo(&mut out.table, command, n, common);
    out.table
        .write(common.out.as_deref(), common.format, common.deterministic)?;
    match out.error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn ground_state_cmd(n: usize, delta: f64, common: &Common) -> Result<(), Failure> {
    let mut solver = solver(common, n)?;
    let gs = solver.ground_state(n, delta)?;
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "energy {:.12}", gs.energy)?;
    writeln!(stdout, "residual {:e}", gs.residual)?;
    writeln!(stdout, "dimension {}", gs.basis.dim())?;
    if solver.hits > 0 {
        writeln!(stdout, "cache hit")?;
    }
    if common.out.is_some() {
        let mut t = Table::new(&["n", "delta", "energy", "residual", "dimension"]);
        t.push(vec![
            n.into(),
            delta.into(),
            gs.energy.into(),
            gs.residual.into(),
            Cell::from(gs.basis.dim()),
        ]);
        config_echo(&mut t, "ground-state", Some(n), common);
        t.write(common.out.as_deref(), common.format, common.deterministic)?;
    }
    Ok(())
}

fn deltas(grid: &DeltaGrid) -> Result<Vec<f64>, Failure> {
    match (grid.delta, &grid.delta_range) {
        (Some(d), None) => Ok(vec![d]),
        (None, Some(r)) => parse_range(r).map_err(Failure::usage),
        (None, None) => Ok(vec![1.0]),
        (Some(_), Some(_)) => Err(Failure::usage("give either --delta or --delta-range")),
    }
}

pub fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::GroundState { n, delta, common } => ground_state_cmd(n, delta, &common),
        Command::Fig1 {
            t_range,
            r,
            alpha,
            nu,
            xi0,
            form,
            common,
        } => {
            let ts = parse_range(&t_range).map_err(Failure::usage)?;
            let params = ScalingParams {
                alpha,
                nu,
                xi0,
                r,
                form: match form {
                    Form::PowerLaw => CriticalForm::PowerLaw,
                    Form::Kt => CriticalForm::KosterlitzThouless,
                },
                ..ScalingParams::default()
            };
            let out = figures::fig1(&params, &ts)?;
            emit(out, "fig1", None, &common)
        }
        Command::Fig2 { n, grid, common } => {
            let solver = solver(&common, n)?;
            let ds = deltas(&grid)?;
            emit(figures::fig2(&solver, n, &ds), "fig2", Some(n), &common)
        }
        Command::Fig3 {
            n,
            delta_range,
            rs,
            common,
        } => {
            let solver = solver(&common, n)?;
            check_rs(&rs, n)?;
            let ds = parse_range(&delta_range).map_err(Failure::usage)?;
            emit(figures::fig3(&solver, n, &ds, &rs), "fig3", Some(n), &common)
        }
        Command::Fig4 {
            n,
            delta_range,
            rs,
            common,
        } => {
            let solver = solver(&common, n)?;
            check_rs(&rs, n)?;
            let ds = parse_range(&delta_range).map_err(Failure::usage)?;
            emit(figures::fig4(&solver, n, &ds, &rs), "fig4", Some(n), &common)
        }
        Command::Fig5 {
            n,
            delta,
            r,
            sampling,
            common,
        } => {
            let mut solver = solver(&common, n)?;
            check_rs(&[r], n)?;
            let scheme = scheme(&sampling, common.seed)?;
            let out = figures::fig5(&mut solver, n, delta, r, scheme)?;
            emit(out, "fig5", Some(n), &common)
        }
        Command::Fig6 {
            n,
            delta_range,
            rs,
            sampling,
            common,
        } => {
            let solver = solver(&common, n)?;
            check_rs(&rs, n)?;
            let scheme = scheme(&sampling, common.seed)?;
            let ds = parse_range(&delta_range).map_err(Failure::usage)?;
            emit(figures::fig6(&solver, n, &ds, &rs, scheme), "fig6", Some(n), &common)
        }
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
