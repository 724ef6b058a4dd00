//! Command-line front end for the waveguide mode solver.
//!
//! `wavefem solve` runs one benchmark guide at one element order and writes a
//! CSV table of analytic against computed cutoff wave numbers, optionally
//! followed by a sampled field of one mode.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 usage error, 3 I/O error.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use wavefem::scenarios::{run_scenario_with, FieldSample, FillRect, ScenarioRun, SolveOptions};
use wavefem::{Diagonal, Order, Scenario, ScenarioKind};

pub const EXIT_NUMERICAL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

pub const MODES_HEADER: [&str; 5] = ["mode", "analytic_k0", "computed_k0", "abs_err", "rel_err"];
pub const FIELD_HEADER: [&str; 5] = ["x", "y", "Hx", "Hy", "hz"];

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(wavefem::Error),
    Io { path: Option<PathBuf>, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Numerical(e) => write!(f, "error: {e}"),
            CliError::Io { path: Some(p), message } => write!(f, "error: {}: {message}", p.display()),
            CliError::Io { path: None, message } => write!(f, "error: {message}"),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ScenarioArg {
    HollowSquare,
    DielectricLoaded,
    FerriteFilled,
}

impl From<ScenarioArg> for ScenarioKind {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::HollowSquare => ScenarioKind::HollowSquare,
            ScenarioArg::DielectricLoaded => ScenarioKind::DielectricLoaded,
            ScenarioArg::FerriteFilled => ScenarioKind::FerriteFilled,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagonalArg {
    Rising,
    Falling,
}

impl From<DiagonalArg> for Diagonal {
    fn from(d: DiagonalArg) -> Self {
        match d {
            DiagonalArg::Rising => Diagonal::Rising,
            DiagonalArg::Falling => Diagonal::Falling,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "wavefem",
    version,
    about = "Finite-element cutoff wave numbers of rectangular waveguides"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one guide and write the mode table.
    Solve(SolveArgs),
}

#[derive(Debug, clap::Args)]
struct SolveArgs {
    #[arg(long, value_enum, default_value = "hollow_square")]
    scenario: ScenarioArg,
    /// Element order, 2 or 3.
    #[arg(long, default_value_t = 3)]
    order: usize,
    /// Cells across the width [default: scenario's reference mesh]
    #[arg(long)]
    nx: Option<usize>,
    /// Cells across the height [default: scenario's reference mesh]
    #[arg(long)]
    ny: Option<usize>,
    /// Axial propagation constant in 1/cm.
    #[arg(long, default_value_t = 0.0)]
    kz: f64,
    /// Number of analytic modes to report.
    #[arg(long, default_value_t = 3)]
    modes: usize,
    /// Eigenvalues at or below this are discarded [default: 1e-6 of the largest]
    #[arg(long)]
    zero_cutoff: Option<f64>,
    /// Relative spread within which eigenvalues are merged.
    #[arg(long, default_value_t = wavefem::eigen::DEFAULT_MERGE_TOL)]
    merge_tol: f64,
    #[arg(long, value_enum, default_value = "rising")]
    diagonal: DiagonalArg,
    /// Dielectric block `x0,y0,x1,y1` in cm (dielectric_loaded only).
    #[arg(long, value_parser = parse_fill)]
    fill: Option<FillRect>,
    /// Relative permittivity of the dielectric block (dielectric_loaded only).
    #[arg(long)]
    fill_eps: Option<f64>,
    /// Mode table path; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Field-sample table path.
    #[arg(long)]
    fields: Option<PathBuf>,
    /// 1-based analytic mode whose field is sampled.
    #[arg(long, default_value_t = 1)]
    field_mode: usize,
    /// Sample points per side of the field grid.
    #[arg(long, default_value_t = 21)]
    samples: usize,
}

fn parse_fill(s: &str) -> std::result::Result<FillRect, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match v[..] {
        [x0, y0, x1, y1] => Ok(FillRect::new(x0, y0, x1, y1)),
        _ => Err(format!("expected four comma-separated numbers, got {}", v.len())),
    }
}

/// Validated settings of one `solve` invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioKind,
    pub order: Order,
    pub nx: usize,
    pub ny: usize,
    pub kz: f64,
    pub modes: usize,
    pub zero_cutoff: Option<f64>,
    pub merge_tol: f64,
    pub diagonal: Diagonal,
    pub fill: Option<FillRect>,
    pub fill_eps: Option<f64>,
    pub output: Option<PathBuf>,
    pub fields: Option<PathBuf>,
    pub field_mode: usize,
    pub samples: usize,
}

/// Outcome of argument parsing: a run, or text clap wants shown (help,
/// version) before exiting successfully.
#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Run(RunConfig),
    Info(String),
}

/// Parses `argv` (program name first) into a validated configuration.
pub fn parse_args<S: AsRef<str>>(argv: &[S]) -> Result<Parsed, CliError> {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(Parsed::Info(e.to_string())),
                _ => Err(CliError::Usage(e.to_string())),
            };
        }
    };
    let Command::Solve(a) = cli.command;
    let usage = |m: String| CliError::Usage(format!("error: {m}"));

    let order = Order::from_degree(a.order).map_err(|_| usage(format!("--order must be 2 or 3, got {}", a.order)))?;
    let kind = ScenarioKind::from(a.scenario);
    let reference = Scenario::new(kind, order);
    if !(a.kz.is_finite() && a.kz >= 0.0) {
        return Err(usage(format!("--kz must be finite and non-negative, got {}", a.kz)));
    }
    if let Some(z) = a.zero_cutoff {
        if !(z.is_finite() && z >= 0.0) {
            return Err(usage(format!("--zero-cutoff must be finite and non-negative, got {z}")));
        }
    }
    if !(a.merge_tol.is_finite() && a.merge_tol >= 0.0) {
        return Err(usage(format!(
            "--merge-tol must be finite and non-negative, got {}",
            a.merge_tol
        )));
    }
    if kind != ScenarioKind::DielectricLoaded && (a.fill.is_some() || a.fill_eps.is_some()) {
        return Err(usage(
            "--fill and --fill-eps apply only to --scenario dielectric_loaded".into(),
        ));
    }
    if let Some(e) = a.fill_eps {
        if !(e.is_finite() && e >= 1.0) {
            return Err(usage(format!("--fill-eps must be at least 1, got {e}")));
        }
    }
    if a.samples < 2 {
        return Err(usage(format!("--samples must be at least 2, got {}", a.samples)));
    }
    if a.fields.is_some() && !(1..=a.modes).contains(&a.field_mode) {
        return Err(usage(format!(
            "--field-mode must lie in 1..={}, got {}",
            a.modes, a.field_mode
        )));
    }

    let config = RunConfig {
        scenario: kind,
        order,
        nx: a.nx.unwrap_or(reference.nx),
        ny: a.ny.unwrap_or(reference.ny),
        kz: a.kz,
        modes: a.modes,
        zero_cutoff: a.zero_cutoff,
        merge_tol: a.merge_tol,
        diagonal: a.diagonal.into(),
        fill: a.fill,
        fill_eps: a.fill_eps,
        output: a.output,
        fields: a.fields,
        field_mode: a.field_mode,
        samples: a.samples,
    };
    config.scenario().validate().map_err(|e| usage(e.to_string()))?;
    Ok(Parsed::Run(config))
}

impl RunConfig {
    pub fn scenario(&self) -> Scenario {
        let mut s = Scenario::new(self.scenario, self.order)
            .with_cells(self.nx, self.ny)
            .with_kz(self.kz)
            .with_diagonal(self.diagonal);
        if self.fill.is_some() || self.fill_eps.is_some() {
            let fill = self.fill.or(s.fill).expect("dielectric scenario has a default fill");
            s = s.with_fill(fill, self.fill_eps);
        }
        s
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            zero_cutoff: self.zero_cutoff,
            merge_tol: self.merge_tol,
            ..SolveOptions::default()
        }
    }

    /// Arguments that parse back to this configuration.
    pub fn to_args(&self) -> Vec<String> {
        let mut v: Vec<String> = vec!["wavefem".into(), "solve".into()];
        let mut push = |k: &str, val: String| {
            v.push(format!("--{k}"));
            v.push(val);
        };
        push("scenario", self.scenario.name().into());
        push("order", self.order.degree().to_string());
        push("nx", self.nx.to_string());
        push("ny", self.ny.to_string());
        push("kz", self.kz.to_string());
        push("modes", self.modes.to_string());
        if let Some(z) = self.zero_cutoff {
            push("zero-cutoff", z.to_string());
        }
        push("merge-tol", self.merge_tol.to_string());
        push(
            "diagonal",
            match self.diagonal {
                Diagonal::Rising => "rising",
                Diagonal::Falling => "falling",
            }
            .into(),
        );
        if let Some(f) = self.fill {
            push("fill", format!("{},{},{},{}", f.x0, f.y0, f.x1, f.y1));
        }
        if let Some(e) = self.fill_eps {
            push("fill-eps", e.to_string());
        }
        if let Some(p) = &self.output {
            push("output", p.display().to_string());
        }
        if let Some(p) = &self.fields {
            push("fields", p.display().to_string());
        }
        push("field-mode", self.field_mode.to_string());
        push("samples", self.samples.to_string());
        v
    }
}

pub fn run(config: &RunConfig) -> Result<ScenarioRun, CliError> {
    run_scenario_with(&config.scenario(), config.modes, &config.solve_options()).map_err(CliError::Numerical)
}

fn fixed(v: f64) -> String {
    format!("{v:.6}")
}

fn sci(v: f64) -> String {
    format!("{v:.5e}")
}

/// Mode table as CSV text.
pub fn modes_csv(run: &ScenarioRun) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io {
        path: None,
        message: e.to_string(),
    };
    w.write_record(MODES_HEADER).map_err(io)?;
    for c in &run.comparisons {
        let opt = |v: Option<f64>, f: fn(f64) -> String| v.map(f).unwrap_or_default();
        w.write_record([
            c.mode.to_string(),
            fixed(c.analytic_k0),
            opt(c.computed_k0, fixed),
            opt(c.abs_err(), sci),
            opt(c.rel_err(), sci),
        ])
        .map_err(io)?;
    }
    finish(w)
}

/// Field samples as CSV text.
pub fn fields_csv(samples: &[FieldSample]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io {
        path: None,
        message: e.to_string(),
    };
    w.write_record(FIELD_HEADER).map_err(io)?;
    for s in samples {
        w.write_record([fixed(s.x), fixed(s.y), sci(s.hx), sci(s.hy), sci(s.hz)])
            .map_err(io)?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Io {
        path: None,
        message: e.to_string(),
    })?;
    String::from_utf8(bytes).map_err(|e| CliError::Io {
        path: None,
        message: e.to_string(),
    })
}

/// Field of the computed mode paired with analytic mode `config.field_mode`.
pub fn selected_field(run: &ScenarioRun, config: &RunConfig) -> Result<Vec<FieldSample>, CliError> {
    let c = run.comparisons.get(config.field_mode - 1).ok_or_else(|| {
        CliError::Usage(format!(
            "error: --field-mode {} exceeds the {} reported modes",
            config.field_mode,
            run.comparisons.len()
        ))
    })?;
    let idx = c.distinct_index.ok_or_else(|| {
        CliError::Numerical(wavefem::Error::InvalidArgument(format!(
            "analytic mode {} has no computed counterpart to sample",
            c.mode
        )))
    })?;
    run.field_samples(idx, config.samples, config.samples)
        .map_err(CliError::Numerical)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: Some(path.to_path_buf()),
        message: e.to_string(),
    })
}

/// Writes the mode table (and field samples when requested).
pub fn emit_results(run: &ScenarioRun, config: &RunConfig) -> Result<(), CliError> {
    let table = modes_csv(run)?;
    let field = config
        .fields
        .as_ref()
        .map(|p| Ok::<_, CliError>((p, fields_csv(&selected_field(run, config)?)?)));
    match &config.output {
        Some(p) => write_file(p, &table)?,
        None => std::io::stdout()
            .write_all(table.as_bytes())
            .map_err(|e| CliError::Io {
                path: None,
                message: e.to_string(),
            })?,
    }
    if let Some(f) = field {
        let (path, text) = f?;
        write_file(path, &text)?;
    }
    Ok(())
}

/// Full command: parse, solve, write.
pub fn main_with_args<S: AsRef<str>>(argv: &[S]) -> Result<(), CliError> {
    match parse_args(argv)? {
        Parsed::Info(text) => {
            print!("{text}");
            Ok(())
        }
        Parsed::Run(config) => {
            let run = run(&config)?;
            emit_results(&run, &config)
        }
    }
}
