//! Command-line harness around `arc_widom`: capacity constants, extremal
//! solves, limit-function grids, envelopes and verification suites.

pub mod cache;
pub mod commands;
pub mod report;
pub mod suites;

use std::path::PathBuf;
use std::thread;

use arc_widom::{parse_complex, ArcGeometry64};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::cache::Solver;
use crate::report::{Format, Report};

/// Cache directory used when `--cache-dir` is absent.
pub const CACHE_ENV: &str = "ARCWIDOM_CACHE";

/// Largest degree accepted on the command line.
pub const MAX_DEGREE: usize = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Numeric(#[from] arc_widom::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for bad input, 1 for everything that went wrong afterwards.
    pub fn exit_code(&self) -> u8 {
        use arc_widom::Error as E;
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(E::Domain(_) | E::OnBoundary(_) | E::WrongChart { .. } | E::TrivialRegime { .. }) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "arc-widom", version, about = "Extremal polynomials on circular arcs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacity and chart constants of the arc.
    Capacity,
    /// Solve the extremal problem at each --u0.
    Solve,
    /// Limit function, Green's function and kernel diagonal on a grid.
    Limit {
        /// Evaluation points; defaults to a polar grid.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Vec<String>,
        /// Radii inside the disc for the default grid; reflected outside.
        #[arg(long, default_value_t = 4)]
        rings: usize,
        #[arg(long, default_value_t = 16)]
        rays: usize,
    },
    /// Upper envelope L_n at each --u0 against its asymptote.
    Envelope,
    /// Run a verification suite; exits with 1 when it fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    ThiranDetaille,
    SzegoWidom,
    Kernel,
    FiniteN,
    Involution,
    Subharmonicity,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::ThiranDetaille => "thiran-detaille",
            Suite::SzegoWidom => "szego-widom",
            Suite::Kernel => "kernel",
            Suite::FiniteN => "finite-n",
            Suite::Involution => "involution",
            Suite::Subharmonicity => "subharmonicity",
        }
    }
}

#[derive(Debug, Args)]
pub struct Options {
    /// Arc half-angle in radians, 0 < α < π.
    #[arg(long, global = true, default_value_t = std::f64::consts::FRAC_PI_2, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Evaluation points `a+bi` or `inf`, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub u0: Vec<String>,
    /// θ-grid size M of the solver.
    #[arg(long, global = true)]
    pub grid_m: Option<usize>,
    /// φ-grid size K of the solver.
    #[arg(long, global = true, default_value_t = 64)]
    pub grid_k: usize,
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
}

/// Validated options.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub geom: ArcGeometry64,
    pub n: Option<usize>,
    pub nmax: Option<usize>,
    /// `None` entries are `u₀ = ∞`.
    pub u0: Vec<Option<Complex64>>,
    pub grid_m: Option<usize>,
    pub grid_k: usize,
    pub tol: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
}

pub fn parse_points(list: &[String]) -> Result<Vec<Option<Complex64>>, CliError> {
    list.iter().map(|s| parse_complex(s).map_err(CliError::Input)).collect()
}

impl RunConfig {
    pub fn from_options(o: &Options) -> Result<Self, CliError> {
        let geom = ArcGeometry64::new(o.alpha).map_err(|e| CliError::Input(e.to_string()))?;
        for (flag, v) in [("--n", o.n), ("--nmax", o.nmax)] {
            if v.is_some_and(|v| v > MAX_DEGREE) {
                return Err(CliError::Input(format!("{flag} exceeds {MAX_DEGREE}")));
            }
        }
        if !(o.tol > 0.0 && o.tol < 1.0) {
            return Err(CliError::Input(format!("--tol {} outside (0, 1)", o.tol)));
        }
        if o.grid_k < 32 {
            return Err(CliError::Input("--grid-k must be at least 32".into()));
        }
        let cache_dir = o.cache_dir.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
        Ok(Self {
            geom,
            n: o.n,
            nmax: o.nmax,
            u0: parse_points(&o.u0)?,
            grid_m: o.grid_m,
            grid_k: o.grid_k,
            tol: o.tol,
            format: o.format,
            out: o.out.clone(),
            cache_dir,
        })
    }

    pub fn solver(&self) -> Solver {
        Solver {
            geom: self.geom,
            grid_m: self.grid_m,
            grid_k: self.grid_k,
            tol: self.tol,
            cache_dir: self.cache_dir.clone(),
        }
    }

    pub fn require_n(&self) -> Result<usize, CliError> {
        self.n.ok_or_else(|| CliError::Input("--n is required".into()))
    }

    /// Checks an explicit `--grid-m` against the solver minimum for degree `n`.
    pub fn check_grid(&self, n: usize) -> Result<(), CliError> {
        match self.grid_m {
            Some(m) if m < 8 * (n + 1) => Err(CliError::Input(format!("--grid-m {m} below 8(n+1) = {}", 8 * (n + 1)))),
            _ => Ok(()),
        }
    }

    pub fn u0_or(&self, default: &[Option<Complex64>]) -> Vec<Option<Complex64>> {
        if self.u0.is_empty() {
            default.to_vec()
        } else {
            self.u0.clone()
        }
    }
}

/// Maps `f` over `items` on all available cores, keeping the input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let chunk = items.len().div_ceil(workers).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| s.spawn(|| part.iter().map(&f).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

/// Like [`par_map`] for fallible work; the first error in input order wins.
pub fn try_par_map<T: Sync, R: Send>(
    items: &[T],
    f: impl Fn(&T) -> Result<R, CliError> + Sync,
) -> Result<Vec<R>, CliError> {
    par_map(items, f).into_iter().collect()
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let cfg = RunConfig::from_options(&cli.opts)?;
    match &cli.command {
        Command::Capacity => commands::capacity(&cfg),
        Command::Solve => commands::solve(&cfg),
        Command::Limit { points, rings, rays } => commands::limit(&cfg, &parse_points(points)?, *rings, *rays),
        Command::Envelope => commands::envelope(&cfg),
        Command::Verify { suite } => suites::verify(*suite, &cfg),
    }
}

/// Renders the report to `--out` (atomically) or returns it for stdout.
pub fn emit(report: &Report, cfg_out: Option<&PathBuf>, format: Format) -> Result<Option<String>, CliError> {
    let text = report.render(format)?;
    match cfg_out {
        Some(path) => {
            cache::write_atomic(path, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
