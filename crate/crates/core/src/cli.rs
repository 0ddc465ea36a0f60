//! Command-line front end: parameter handling, curve emission and check
//! reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::creep::{creep_psi, MaterialParameters};
use crate::csv::{format_number, Table};
use crate::error::Error as NumericError;
use crate::hadamard_operators::{verify_eigenfunction, verify_power_law_property, OperatorConfig};
use crate::relaxation_solver::{check_admissible, solve_relaxation, SolverReport, UniformGrid};
use crate::transform_checks::{check_laplace_identity, DEFAULT_PROBES, MIN_ST};

pub const FIGURE_ORDERS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

pub const DEFAULT_RELAX_H: f64 = 0.01;
pub const DEFAULT_RELAX_T_MAX: f64 = 50.0;
pub const DEFAULT_CREEP_T_MAX: f64 = 1e3;
pub const DEFAULT_CREEP_SAMPLES: usize = 400;
pub const CREEP_LOG_START: f64 = 1e-3;

pub const POWER_LAW_BETAS: [f64; 3] = [0.5, 1.0, 2.0];
pub const POWER_LAW_PANELS: usize = 10_000;
pub const POWER_LAW_TOLERANCE: f64 = 1e-4;
pub const EIGEN_TIMES: [f64; 3] = [0.5, 1.0, 2.0];
pub const EIGEN_PANELS: usize = 4_000;
pub const EIGEN_TOLERANCE: f64 = 5e-4;
pub const LAPLACE_TOLERANCE: f64 = 2e-2;

/// Exit status for a configuration or numerical failure.
pub const EXIT_INVALID: u8 = 1;
/// Exit status when a check exceeds its tolerance.
pub const EXIT_TOLERANCE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Parser)]
#[command(
    name = "lomnitz",
    version,
    about = "Generalized Lomnitz creep and relaxation curves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Creep function psi_nu(t) for each order.
    Creep(CommonArgs),
    /// Relaxation function phi_nu(t) from the Volterra solver.
    Relax(CommonArgs),
    /// Power-law and eigenfunction identities of the operator.
    OperatorCheck(CommonArgs),
    /// Laplace-domain identity between creep and relaxation.
    LaplaceCheck(CommonArgs),
    /// Four CSVs (creep/relaxation, linear/log time axis).
    Figures(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Table,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Comma-separated orders in (0, 1].
    #[arg(long, value_delimiter = ',', default_values_t = FIGURE_ORDERS, allow_negative_numbers = true)]
    pub nu: Vec<f64>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub q: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub tau0: f64,
    /// Solver step (relax, laplace-check, figures).
    #[arg(long, allow_negative_numbers = true)]
    pub h: Option<f64>,
    #[arg(long = "t-max", allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    /// Output file (directory for `figures`); stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub log_spacing: bool,
    /// Number of output samples (creep, or log-spaced relax output).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Comma-separated Laplace variables (laplace-check).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub probes: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Creep,
    Relax,
    OperatorCheck,
    LaplaceCheck,
    Figures,
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: Action,
    pub nu_list: Vec<f64>,
    pub q: f64,
    pub tau0: f64,
    pub h: f64,
    pub t_max: f64,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub log_spacing: bool,
    pub samples: usize,
    pub probes: Vec<f64>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let (sub, args) = match &cli.command {
            Command::Creep(a) => (Action::Creep, a),
            Command::Relax(a) => (Action::Relax, a),
            Command::OperatorCheck(a) => (Action::OperatorCheck, a),
            Command::LaplaceCheck(a) => (Action::LaplaceCheck, a),
            Command::Figures(a) => (Action::Figures, a),
        };
        Self::from_args(sub, args)
    }

    pub fn from_args(subcommand: Action, args: &CommonArgs) -> Result<Self, CliError> {
        let probes = args
            .probes
            .clone()
            .unwrap_or_else(|| DEFAULT_PROBES.to_vec());
        let t_max = args.t_max.unwrap_or(match subcommand {
            Action::Creep => DEFAULT_CREEP_T_MAX,
            Action::LaplaceCheck => {
                let s_min = probes.iter().copied().fold(f64::INFINITY, f64::min);
                (MIN_ST / s_min).max(30.0)
            }
            _ => DEFAULT_RELAX_T_MAX,
        });
        let config = Self {
            subcommand,
            nu_list: args.nu.clone(),
            q: args.q,
            tau0: args.tau0,
            h: args.h.unwrap_or(DEFAULT_RELAX_H),
            t_max,
            output_path: args.out.clone(),
            format: args.format,
            log_spacing: args.log_spacing,
            samples: args.samples.unwrap_or(DEFAULT_CREEP_SAMPLES),
            probes,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.nu_list.is_empty() {
            return bad("--nu needs at least one order".into());
        }
        for &nu in &self.nu_list {
            if !(nu > 0.0 && nu <= 1.0) {
                return bad(format!("order {nu} outside (0, 1]"));
            }
        }
        for (name, v) in [("--q", self.q), ("--tau0", self.tau0), ("--h", self.h)] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.t_max.is_finite() && self.t_max >= 0.0) {
            return bad(format!("--t-max must be non-negative, got {}", self.t_max));
        }
        if self.samples == 0 {
            return bad("--samples must be positive".into());
        }
        if self.probes.is_empty() || self.probes.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return bad("--probes must be positive".into());
        }
        let solves = matches!(
            self.subcommand,
            Action::Relax | Action::Figures | Action::LaplaceCheck
        );
        if solves {
            if self.t_max <= 0.0 {
                return bad("--t-max must be positive for the relaxation solver".into());
            }
            for p in self.materials()? {
                check_admissible(&p, self.h)?;
            }
        }
        if self.subcommand == Action::Creep && self.log_spacing && self.t_max <= CREEP_LOG_START {
            return bad(format!("--log-spacing needs --t-max > {CREEP_LOG_START}"));
        }
        Ok(())
    }

    fn materials(&self) -> Result<Vec<MaterialParameters>, CliError> {
        self.nu_list
            .iter()
            .map(|&nu| MaterialParameters::new(self.q, 1.0, self.tau0, nu).map_err(CliError::from))
            .collect()
    }
}

/// What a run produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub status: u8,
    /// Text for standard output (empty when everything went to files).
    pub stdout: String,
    pub written: Vec<PathBuf>,
}

/// `n` points from `lo` to `hi`, geometric.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64))
        .collect()
}

/// `n` points from `0` to `hi`; a single point when `hi = 0`.
pub fn lin_space(hi: f64, n: usize) -> Vec<f64> {
    if hi == 0.0 || n == 1 {
        return vec![0.0];
    }
    (0..n).map(|k| hi * k as f64 / (n - 1) as f64).collect()
}

/// Log-spaced times with `per_decade` points per decade on `[lo, hi]`,
/// hitting every power of ten exactly.
pub fn decades(lo_exp: i32, hi_exp: i32, per_decade: usize) -> Vec<f64> {
    let steps = (hi_exp - lo_exp) as usize * per_decade;
    (0..=steps)
        .map(|k| {
            let e = lo_exp as f64 + k as f64 / per_decade as f64;
            if k % per_decade == 0 {
                10f64.powi(e.round() as i32)
            } else {
                10f64.powf(e)
            }
        })
        .collect()
}

fn column_name(prefix: &str, nu: f64) -> String {
    format!("{prefix}_nu={}", format_number(nu))
}

pub fn creep_table(materials: &[MaterialParameters], times: &[f64]) -> Result<Table, CliError> {
    let mut header = vec!["t".to_string()];
    header.extend(materials.iter().map(|p| column_name("psi", p.nu())));
    let mut table = Table::new(header);
    for &t in times {
        let mut row = vec![t];
        for p in materials {
            row.push(creep_psi(p, t)?);
        }
        table.push_row(row);
    }
    Ok(table)
}

/// Solves all orders concurrently; results keep the order of `materials`.
pub fn solve_all(
    materials: &[MaterialParameters],
    grid: &UniformGrid,
) -> Result<Vec<SolverReport>, CliError> {
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = materials
            .iter()
            .map(|p| scope.spawn(move || solve_relaxation(p, grid)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    results
        .into_iter()
        .map(|r| r.map_err(CliError::from))
        .collect()
}

/// Relaxation table on the grid nodes `indices`.
pub fn relax_table(reports: &[SolverReport], grid: &UniformGrid, indices: &[usize]) -> Table {
    let mut header = vec!["t".to_string()];
    header.extend(reports.iter().map(|r| {
        let nu = r.solution.label().trim_start_matches("phi_nu=");
        format!("phi_nu={}", format_number(nu.parse().unwrap_or(f64::NAN)))
    }));
    let mut table = Table::new(header);
    for &j in indices {
        let mut row = vec![grid.time(j)];
        row.extend(reports.iter().map(|r| r.solution.values()[j]));
        table.push_row(row);
    }
    let mut summary = format!("h={}", format_number(grid.h()));
    for (r, name) in reports.iter().zip(&table.header[1..]) {
        let nu = name.trim_start_matches("phi_nu=");
        let _ = write!(
            summary,
            " gamma[nu={nu}]={} refinement_error[nu={nu}]={}",
            format_number(r.gamma),
            format_number(r.refinement_error)
        );
    }
    table.comments.push(summary);
    let runtime: Vec<&str> = reports.iter().map(|r| r.runtime_note.as_str()).collect();
    table
        .comments
        .push(format!("runtime {}", runtime.join("; ")));
    table
}

/// Grid nodes nearest to `times`, deduplicated, ascending.
pub fn nearest_nodes(grid: &UniformGrid, times: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = times
        .iter()
        .map(|t| ((t / grid.h()).round() as usize).min(grid.n()))
        .collect();
    idx.dedup();
    idx
}

fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Table => table.to_text(),
    }
}

fn emit(text: String, path: Option<&Path>, outcome: &mut Outcome) -> Result<(), CliError> {
    match path {
        Some(path) => {
            std::fs::write(path, text).map_err(|source| CliError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            outcome.written.push(path.to_path_buf());
        }
        None => outcome.stdout.push_str(&text),
    }
    Ok(())
}

/// Rows of a check report.
struct CheckReport {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    failed: bool,
}

impl CheckReport {
    fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
            failed: false,
        }
    }

    fn push(&mut self, mut cells: Vec<String>, residual: f64, tolerance: f64) {
        let pass = residual <= tolerance;
        self.failed |= !pass;
        cells.push(format_number(residual));
        cells.push(format_number(tolerance));
        cells.push(if pass { "pass" } else { "FAIL" }.to_string());
        self.rows.push(cells);
    }

    fn render(&self, format: Format) -> String {
        let sep = match format {
            Format::Csv => ",",
            Format::Table => "  ",
        };
        let widths: Vec<usize> = (0..self.header.len())
            .map(|k| {
                self.rows
                    .iter()
                    .map(|r| r[k].len())
                    .fold(self.header[k].len(), usize::max)
            })
            .collect();
        let line = |cells: Vec<&str>| -> String {
            match format {
                Format::Csv => cells.join(sep),
                Format::Table => cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join(sep),
            }
        };
        let mut out = line(self.header.clone());
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
            out.push('\n');
        }
        out
    }
}

fn power_law_samples() -> Vec<f64> {
    log_space(0.1, 10.0, 9)
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let materials = config.materials()?;
    let mut outcome = Outcome::default();
    let out = config.output_path.as_deref();
    match config.subcommand {
        Action::Creep => {
            let times = if config.log_spacing {
                log_space(CREEP_LOG_START, config.t_max, config.samples)
            } else {
                lin_space(config.t_max, config.samples)
            };
            let table = creep_table(&materials, &times)?;
            emit(render(&table, config.format), out, &mut outcome)?;
        }
        Action::Relax => {
            let grid = UniformGrid::with_horizon(config.h, config.t_max)?;
            let reports = solve_all(&materials, &grid)?;
            let indices: Vec<usize> = if config.log_spacing {
                nearest_nodes(&grid, &log_space(grid.h(), grid.horizon(), config.samples))
            } else {
                (0..=grid.n()).collect()
            };
            let table = relax_table(&reports, &grid, &indices);
            emit(render(&table, config.format), out, &mut outcome)?;
        }
        Action::OperatorCheck => {
            let mut report = CheckReport::new(vec![
                "check",
                "nu",
                "beta",
                "residual",
                "tolerance",
                "status",
            ]);
            let samples = power_law_samples();
            for &nu in &config.nu_list {
                let cfg = OperatorConfig::model(nu)?;
                for beta in POWER_LAW_BETAS {
                    let r = verify_power_law_property(&cfg, beta, &samples, POWER_LAW_PANELS)?;
                    report.push(
                        vec!["power_law".into(), format_number(nu), format_number(beta)],
                        r,
                        POWER_LAW_TOLERANCE,
                    );
                }
                let r = verify_eigenfunction(&cfg, &EIGEN_TIMES, EIGEN_PANELS)?;
                report.push(
                    vec!["eigenfunction".into(), format_number(nu), "-".into()],
                    r,
                    EIGEN_TOLERANCE,
                );
            }
            emit(report.render(config.format), out, &mut outcome)?;
            if report.failed {
                outcome.status = EXIT_TOLERANCE;
            }
        }
        Action::LaplaceCheck => {
            let grid = UniformGrid::with_horizon(config.h, config.t_max)?;
            let reports = solve_all(&materials, &grid)?;
            let mut report = CheckReport::new(vec!["nu", "s", "residual", "tolerance", "status"]);
            for (p, r) in materials.iter().zip(&reports) {
                for res in check_laplace_identity(p, &r.solution, &config.probes)? {
                    report.push(
                        vec![format_number(p.nu()), format_number(res.s)],
                        res.residual,
                        LAPLACE_TOLERANCE,
                    );
                }
            }
            emit(report.render(config.format), out, &mut outcome)?;
            if report.failed {
                outcome.status = EXIT_TOLERANCE;
            }
        }
        Action::Figures => {
            let dir = out.unwrap_or(Path::new("."));
            std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
            let grid = UniformGrid::with_horizon(config.h, config.t_max)?;
            let linear_times: Vec<f64> = grid.times().collect();
            let reports = solve_all(&materials, &grid)?;
            let log_nodes = nearest_nodes(
                &grid,
                &decades(
                    grid.h().log10().floor() as i32,
                    grid.horizon().log10().ceil() as i32,
                    50,
                )
                .into_iter()
                .filter(|&t| t >= grid.h() && t <= grid.horizon())
                .collect::<Vec<_>>(),
            );
            let files = [
                ("creep_linear.csv", creep_table(&materials, &linear_times)?),
                (
                    "creep_log.csv",
                    creep_table(&materials, &decades(-3, 3, 100))?,
                ),
                (
                    "relax_linear.csv",
                    relax_table(&reports, &grid, &(0..=grid.n()).collect::<Vec<_>>()),
                ),
                ("relax_log.csv", relax_table(&reports, &grid, &log_nodes)),
            ];
            for (name, table) in files {
                emit(
                    render(&table, config.format),
                    Some(&dir.join(name)),
                    &mut outcome,
                )?;
            }
        }
    }
    Ok(outcome)
}

/// Parses `args`, runs, writes stdout/stderr; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { 0 };
        }
    };
    let outcome = RunConfig::from_cli(&cli).and_then(|c| run(&c));
    match outcome {
        Ok(o) => {
            print!("{}", o.stdout);
            if o.status == EXIT_TOLERANCE {
                eprintln!("error: one or more checks exceeded their tolerance");
            }
            o.status
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}
