//! The `qnlse` command line.
//!
//! Exit codes: 0 when every check passes, 1 on a numerical or tolerance failure,
//! 2 on usage or configuration errors. [`run`] never panics on bad input.

mod output;
pub mod suites;

pub use output::{
    frame_csv, frame_name, frame_svg, svg_plot, table_path, Report, Series, Table, Value,
};

use crate::error::Error;
use crate::integrators::{
    convergence_study, manufactured_state, propagate, ConvergenceReport, ConvergenceScenario,
    GridSpec, Propagation, WaveField,
};
use crate::residuals::{
    scan_residual, DerivativeMethod, EquationParams, EquationTag, FieldSampler,
};
use crate::solutions::{
    classical_limit_study, classical_plane_wave_field, compare_spatial, product_solution_field,
    q_plane_wave_field, FreeParticleSpec, HypergeometricWave, LimitFamily, SolutionKind,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use suites::{phi_form, SuiteOutcome};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const SEED_VAR: &str = "QNLSE_SEED";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "qnlse",
    version,
    about = "Checks, propagates and compares solutions of q-deformed nonlinear Schrodinger equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
enum Command {
    /// Run every invariant suite
    Verify(#[command(flatten)] Options),
    /// Residual of a solution under one equation on the grid
    Residual(#[command(flatten)] Options),
    /// Propagate the manufactured q-plane wave and write the frames
    Propagate(#[command(flatten)] Options),
    /// Step-halving study with a fitted order
    Converge(#[command(flatten)] Options),
    /// Distance to the ordinary plane wave as q -> 1
    Limit(#[command(flatten)] Options),
    /// Pointwise comparison of the new and NRT spatial factors
    Compare(#[command(flatten)] Options),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Analytic,
    Fd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scenario {
    Time,
    Space,
    Propagation,
}

#[derive(Debug, Clone, PartialEq, Args)]
struct Options {
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    q: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    p: f64,
    #[arg(long, default_value_t = 0.5)]
    mass: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// new, nrt, or a specific form: new-psi, new-phi, nrt-phi, new-time, new-space, nrt-time, nrt-space
    #[arg(long, default_value = "new", value_parser = parse_tag)]
    equation: EquationTag,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    xmin: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    xmax: f64,
    #[arg(long, default_value_t = 101)]
    nx: usize,
    /// Time step (converge: base step of the ODE scenarios)
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::Analytic)]
    method: Method,
    /// Pass threshold; the meaning depends on the command
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file (propagate: output directory)
    #[arg(long)]
    out: Option<PathBuf>,
    /// residual: own, q-plane, classical, hypergeometric, product-new, product-nrt;
    /// limit: q-plane, product-new, product-nrt (default: all three)
    #[arg(long)]
    solution: Option<SolutionArg>,
    /// gamma of the hypergeometric evaluation path
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = Scenario::Time)]
    scenario: Scenario,
    #[arg(long, default_value_t = 3)]
    levels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SolutionArg {
    Own,
    QPlane,
    Classical,
    Hypergeometric,
    Product(SolutionKind),
}

impl std::str::FromStr for SolutionArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "own" => SolutionArg::Own,
            "q-plane" => SolutionArg::QPlane,
            "classical" => SolutionArg::Classical,
            "hypergeometric" => SolutionArg::Hypergeometric,
            "product-new" => SolutionArg::Product(SolutionKind::NewEquation),
            "product-nrt" => SolutionArg::Product(SolutionKind::Nrt),
            _ => return Err(format!("unknown solution '{s}'")),
        })
    }
}

impl SolutionArg {
    fn name(self) -> &'static str {
        match self {
            SolutionArg::Own => "own",
            SolutionArg::QPlane => "q-plane",
            SolutionArg::Classical => "classical",
            SolutionArg::Hypergeometric => "hypergeometric",
            SolutionArg::Product(SolutionKind::NewEquation) => "product-new",
            SolutionArg::Product(SolutionKind::Nrt) => "product-nrt",
        }
    }
}

fn parse_tag(s: &str) -> Result<EquationTag, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Numeric(Error::Config(_) | Error::Domain(_)) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_FAIL,
        }
    }
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    let result = match cli.command {
        Command::Verify(o) => cmd_verify(&o),
        Command::Residual(o) => cmd_residual(&o),
        Command::Propagate(o) => cmd_propagate(&o),
        Command::Converge(o) => cmd_converge(&o),
        Command::Limit(o) => cmd_limit(&o),
        Command::Compare(o) => cmd_compare(&o),
    };
    match result {
        Ok(passed) => {
            if passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("qnlse: {e}");
            e.exit_code()
        }
    }
}

impl Options {
    fn spec(&self) -> CliResult<FreeParticleSpec> {
        FreeParticleSpec::new(self.q, self.p, self.mass, self.hbar).map_err(usage)
    }

    fn grid(&self, default_dt: f64, default_steps: usize) -> CliResult<GridSpec> {
        GridSpec::new(
            self.xmin,
            self.xmax,
            self.nx,
            self.dt.unwrap_or(default_dt),
            self.steps.unwrap_or(default_steps),
        )
        .map_err(usage)
    }

    fn method(&self) -> DerivativeMethod {
        match self.method {
            Method::Analytic => DerivativeMethod::Analytic,
            Method::Fd => DerivativeMethod::finite_difference(),
        }
    }

    fn check_equation(&self) -> CliResult<()> {
        self.equation.kind().check_time_q(self.q).map_err(usage)
    }

    fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }
}

fn seed() -> CliResult<u64> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s.trim().parse().map_err(|_| {
            CliError::Usage(format!("{SEED_VAR} must be an unsigned integer, got '{s}'"))
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    output::write_file(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Writes `report` in the configured format; `plot` is required for SVG output.
fn emit(opts: &Options, report: &Report, plot: Option<String>) -> CliResult<()> {
    let out = opts.out();
    match opts.format {
        Format::Json => match out {
            Some(path) => write(path, &report.to_json()),
            None => print_stdout(&report.to_json()),
        },
        Format::Csv => match out {
            Some(path) => {
                write(path, &report.to_csv())?;
                if let Some(table) = &report.table {
                    write(&table_path(path), &table.to_csv())?;
                }
                Ok(())
            }
            None => {
                print_stdout(&report.to_csv())?;
                match &report.table {
                    Some(table) => print_stdout(&format!("\n{}", table.to_csv())),
                    None => Ok(()),
                }
            }
        },
        Format::Svg => {
            let svg = plot.ok_or_else(|| {
                CliError::Usage("this command has no plot; use --format csv or json".into())
            })?;
            match out {
                Some(path) => write(path, &svg),
                None => print_stdout(&svg),
            }
        }
    }
}

fn print_stdout(s: &str) -> CliResult<()> {
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(s.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

fn status(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn suite_line(s: &SuiteOutcome) -> String {
    let relation = match s.relation {
        suites::Relation::AtMost => "<=",
        suites::Relation::AtLeast => ">=",
        suites::Relation::Within => "within",
    };
    format!(
        "{} {:<24} {:.3e} {relation} {:.1e}  ({})",
        status(s.passed),
        s.name,
        s.metric,
        s.threshold,
        s.detail
    )
}

fn cmd_verify(opts: &Options) -> CliResult<bool> {
    let spec = opts.spec()?;
    opts.check_equation()?;
    let grid = opts.grid(0.1, 10)?;
    let seed = seed()?;
    let method = opts.method();
    let tol = opts.tol.unwrap_or(match method {
        DerivativeMethod::Analytic => 1e-8,
        DerivativeMethod::FiniteDifference { .. } => 1e-5,
    });
    if opts.format == Format::Svg {
        return Err(CliError::Usage(
            "verify has no plot; use --format csv or json".into(),
        ));
    }

    let mut outcomes = suites::run_all(seed);
    outcomes.push(suites::configured(&spec, opts.equation, &grid, method, tol));

    let mut report = Report::default();
    report.set("command", "verify");
    report.set("seed", seed as usize);
    for s in &outcomes {
        eprintln!("{}", suite_line(s));
        report.set(format!("{}.pass", s.name), s.passed);
        report.set(format!("{}.metric", s.name), s.metric);
        report.set(format!("{}.threshold", s.name), s.threshold);
        report.set(format!("{}.detail", s.name), s.detail.clone());
    }
    let all = outcomes.iter().all(|s| s.passed);
    report.set("all_pass", all);
    emit(opts, &report, None)?;
    Ok(all)
}

fn residual_sampler(
    opts: &Options,
    spec: &FreeParticleSpec,
) -> CliResult<Box<dyn FieldSampler + Send>> {
    let tag = opts.equation;
    let psi: Box<dyn FieldSampler + Send> = match opts.solution.unwrap_or(SolutionArg::Own) {
        SolutionArg::Own => return Ok(suites::own_solution(tag, spec)?),
        SolutionArg::QPlane => Box::new(q_plane_wave_field(spec)),
        SolutionArg::Classical => Box::new(classical_plane_wave_field(spec)),
        SolutionArg::Hypergeometric => {
            if opts.gamma <= 0.0 && opts.gamma.fract() == 0.0 {
                return Err(CliError::Usage(format!(
                    "gamma = {} is a pole of the hypergeometric function",
                    opts.gamma
                )));
            }
            Box::new(HypergeometricWave {
                spec: *spec,
                gamma: opts.gamma,
            })
        }
        SolutionArg::Product(kind) => Box::new(product_solution_field(kind, spec).map_err(usage)?),
    };
    Ok(phi_form(tag, spec.q, psi))
}

fn cmd_residual(opts: &Options) -> CliResult<bool> {
    let spec = opts.spec()?;
    opts.check_equation()?;
    let grid = opts.grid(0.1, 10)?;
    let method = opts.method();
    let tol = opts.tol.unwrap_or(1e-6);
    if opts.format == Format::Svg {
        return Err(CliError::Usage(
            "residual has no plot; use --format csv or json".into(),
        ));
    }
    let sampler = residual_sampler(opts, &spec)?;
    let params = EquationParams::free_particle(&spec);
    let r = scan_residual(opts.equation, sampler.as_ref(), &params, &grid, method)?;
    let passed = r.max_abs <= tol;

    let mut report = Report::default();
    report.set("command", "residual");
    report.set("equation", r.equation_tag.clone());
    report.set("solution", opts.solution.unwrap_or(SolutionArg::Own).name());
    report.set("q", spec.q);
    report.set(
        "method",
        if method == DerivativeMethod::Analytic {
            "analytic"
        } else {
            "fd"
        },
    );
    report.set("max_abs", r.max_abs);
    report.set("l2", r.l2);
    report.set("worst_x", r.worst_point.0);
    report.set("worst_t", r.worst_point.1);
    report.set("n_samples", r.n_samples);
    report.set("tol", tol);
    report.set("pass", passed);
    eprintln!(
        "{} residual {} (solution {}): max {:.3e}, l2 {:.3e} over {} samples, tol {:.1e}",
        status(passed),
        r.equation_tag,
        opts.solution.unwrap_or(SolutionArg::Own).name(),
        r.max_abs,
        r.l2,
        r.n_samples,
        tol
    );
    emit(opts, &report, None)?;
    Ok(passed)
}

fn cmd_propagate(opts: &Options) -> CliResult<bool> {
    let spec = opts.spec()?;
    opts.check_equation()?;
    let kind = opts.equation.kind();
    let probe = opts.grid(1.0, 0)?;
    let dt = opts
        .dt
        .unwrap_or_else(|| probe.stable_dt(spec.m, spec.hbar));
    let steps = opts.steps.unwrap_or(((0.1 / dt).round() as usize).max(1));
    let grid = GridSpec::new(opts.xmin, opts.xmax, opts.nx, dt, steps).map_err(usage)?;
    let tol = opts.tol.unwrap_or(1e-3);
    let dir = opts
        .out()
        .ok_or_else(|| CliError::Usage("propagate needs --out DIR for the frames".into()))?;
    if let Some(warning) = grid.stability_warning(spec.m, spec.hbar) {
        eprintln!("qnlse: warning: {warning}");
    }

    let exact = manufactured_state(kind, &spec);
    let initial = WaveField::sample(grid, 0.0, &exact)?;
    let frames = propagate(&Propagation::free(kind, &spec), &initial, &exact)?;
    let last = frames.last().expect("the initial frame is always returned");
    let error = last.interior_error(&exact)?;
    let passed = error <= tol;

    for (step, frame) in frames.iter().enumerate() {
        write(&dir.join(frame_name(step, "csv")), &frame_csv(frame))?;
    }
    let mut report = Report::default();
    report.set("command", "propagate");
    report.set("equation", kind.name());
    report.set("q", spec.q);
    report.set("dx", grid.dx());
    report.set("dt", grid.dt);
    report.set("n_steps", grid.n_steps);
    report.set("final_time", last.t);
    report.set("n_frames", frames.len());
    report.set("interior_error", error);
    report.set("tol", tol);
    report.set(
        "stability_warning",
        grid.stability_warning(spec.m, spec.hbar).is_some(),
    );
    report.set("pass", passed);
    eprintln!(
        "{} propagate {} q = {}: {} frames to t = {}, interior error {:.3e} (tol {:.1e})",
        status(passed),
        kind.name(),
        spec.q,
        frames.len(),
        last.t,
        error,
        tol
    );
    match opts.format {
        Format::Csv => write(&dir.join("report.csv"), &report.to_csv())?,
        Format::Json => write(&dir.join("report.json"), &report.to_json())?,
        Format::Svg => {
            let title = format!("{} q = {} at t = {:.4}", kind.name(), spec.q, last.t);
            write(
                &dir.join(frame_name(frames.len() - 1, "svg")),
                &frame_svg(last, &title),
            )?;
            write(&dir.join("report.json"), &report.to_json())?;
        }
    }
    Ok(passed)
}

fn convergence_table(r: &ConvergenceReport, column: &str) -> Table {
    let mut table = Table::new(&[column, "error"]);
    for (h, e) in r.resolutions.iter().zip(&r.errors) {
        table.push(vec![*h, *e]);
    }
    table
}

fn cmd_converge(opts: &Options) -> CliResult<bool> {
    let spec = opts.spec()?;
    opts.check_equation()?;
    let kind = opts.equation.kind();
    let (scenario, expected, default_tol) = match opts.scenario {
        Scenario::Time => (
            ConvergenceScenario::SeparatedTime {
                kind,
                spec,
                t_end: 1.0,
                base_step: opts.dt.unwrap_or(0.1),
            },
            4.0,
            0.5,
        ),
        Scenario::Space => (
            ConvergenceScenario::SeparatedSpace {
                kind,
                spec,
                x_end: 1.0,
                base_step: opts.dt.unwrap_or(0.1),
            },
            4.0,
            0.5,
        ),
        Scenario::Propagation => {
            let grid = opts.grid(1e-4, 1000)?;
            let finest_dx = grid.dx() / f64::powi(2.0, opts.levels.saturating_sub(1) as i32);
            let limit = 0.2 * finest_dx * finest_dx * spec.m / spec.hbar;
            if grid.dt > limit {
                eprintln!(
                    "qnlse: warning: dt = {} exceeds the explicit-scheme heuristic {limit:.3e} on the finest level (dx = {finest_dx:.3e})",
                    grid.dt
                );
            }
            (
                ConvergenceScenario::Propagation {
                    equation: kind,
                    spec,
                    x_min: grid.x_min,
                    x_max: grid.x_max,
                    base_dx: grid.dx(),
                    dt: grid.dt,
                    t_end: grid.dt * grid.n_steps as f64,
                },
                2.0,
                0.3,
            )
        }
    };
    let tol = opts.tol.unwrap_or(default_tol);
    let r = convergence_study(&scenario, opts.levels)?;
    let passed = (r.observed_order - expected).abs() <= tol;

    let name = match opts.scenario {
        Scenario::Time => "time",
        Scenario::Space => "space",
        Scenario::Propagation => "propagation",
    };
    let mut report = Report::default();
    report.set("command", "converge");
    report.set("scenario", name);
    report.set("equation", kind.name());
    report.set("q", spec.q);
    report.set("levels", r.errors.len());
    report.set("observed_order", r.observed_order);
    report.set("finest_pair_order", r.finest_pair_order());
    report.set("expected_order", expected);
    report.set("tol", tol);
    report.set("monotone", r.monotone);
    report.set("pass", passed);
    report.table = Some(convergence_table(&r, "step"));
    eprintln!(
        "{} converge {name} ({}): order {:.3}, expected {expected} +/- {tol}{}",
        status(passed),
        kind.name(),
        r.observed_order,
        if r.monotone {
            ""
        } else {
            ", errors not monotone"
        }
    );
    let plot = svg_plot(
        &format!("{name} convergence, order {:.2}", r.observed_order),
        "step",
        &[Series {
            name: "error",
            points: r
                .resolutions
                .iter()
                .copied()
                .zip(r.errors.iter().copied())
                .collect(),
        }],
        true,
    );
    emit(opts, &report, Some(plot))?;
    Ok(passed)
}

fn cmd_limit(opts: &Options) -> CliResult<bool> {
    let spec = opts.spec()?;
    let grid = opts.grid(0.1, 10)?;
    let min_order = opts.tol.unwrap_or(0.9);
    let families: Vec<LimitFamily> = match opts.solution {
        None => LimitFamily::ALL.to_vec(),
        Some(SolutionArg::QPlane) => vec![LimitFamily::QPlaneWave],
        Some(SolutionArg::Product(kind)) => vec![LimitFamily::Product(kind)],
        Some(other) => {
            return Err(CliError::Usage(format!(
                "limit takes --solution q-plane, product-new or product-nrt, not {}",
                other.name()
            )))
        }
    };
    let deltas = suites::LIMIT_DELTAS;

    let mut report = Report::default();
    report.set("command", "limit");
    report.set("min_order", min_order);
    let mut columns = vec!["q_minus_1".to_string()];
    let mut series = Vec::new();
    let mut passed = true;
    for family in &families {
        let r = classical_limit_study(*family, &spec, &deltas, &grid)?;
        let ok = r.observed_order >= min_order;
        passed &= ok;
        report.set(format!("{family}.fitted_order"), r.observed_order);
        report.set(format!("{family}.finest_pair_order"), r.finest_pair_order());
        report.set(format!("{family}.pass"), ok);
        eprintln!(
            "{} limit {family}: fitted order {:.3} (finest pair {:.3}), need >= {min_order}",
            status(ok),
            r.observed_order,
            r.finest_pair_order()
        );
        columns.push(format!("{family}"));
        series.push((family.name(), r));
    }
    report.set("pass", passed);
    let mut table = Table {
        columns,
        rows: Vec::new(),
    };
    for (i, delta) in deltas.iter().enumerate() {
        let mut row = vec![*delta];
        row.extend(series.iter().map(|(_, r)| r.errors[i]));
        table.push(row);
    }
    report.table = Some(table);
    let plot = svg_plot(
        "sup distance to the plane wave",
        "q - 1",
        &series
            .iter()
            .map(|(name, r)| Series {
                name,
                points: r
                    .resolutions
                    .iter()
                    .copied()
                    .zip(r.errors.iter().copied())
                    .collect(),
            })
            .collect::<Vec<_>>(),
        true,
    );
    emit(opts, &report, Some(plot))?;
    Ok(passed)
}

fn cmd_compare(opts: &Options) -> CliResult<bool> {
    let spec = opts.spec()?;
    let grid = opts.grid(0.1, 10)?;
    let points = compare_spatial(&spec, grid.xs()).map_err(|e| match e {
        Error::Domain(_) | Error::Config(_) => usage(e),
        other => other.into(),
    })?;
    let mut table = Table::new(&["x", "diff", "abs_g_new", "abs_g_nrt"]);
    let mut max_diff: f64 = 0.0;
    let mut worst_x = f64::NAN;
    for p in &points {
        let d = p.difference();
        if d > max_diff || worst_x.is_nan() {
            max_diff = max_diff.max(d);
            worst_x = p.x;
        }
        table.push(vec![p.x, d, p.g_new.norm(), p.g_nrt.norm()]);
    }
    let passed = opts.tol.is_none_or(|tol| max_diff <= tol);

    let mut report = Report::default();
    report.set("command", "compare");
    report.set("q", spec.q);
    report.set("max_diff", max_diff);
    report.set("worst_x", worst_x);
    if let Some(tol) = opts.tol {
        report.set("tol", tol);
    }
    report.set("pass", passed);
    eprintln!(
        "{} compare q = {}: max |g_new - g_nrt| = {:.3e} at x = {worst_x}",
        status(passed),
        spec.q,
        max_diff
    );
    let column =
        |j: usize| -> Vec<(f64, f64)> { table.rows.iter().map(|r| (r[0], r[j])).collect() };
    let plot = svg_plot(
        &format!("spatial factors at q = {}", spec.q),
        "x",
        &[
            Series {
                name: "|g_new - g_nrt|",
                points: column(1),
            },
            Series {
                name: "|g_new|",
                points: column(2),
            },
            Series {
                name: "|g_nrt|",
                points: column(3),
            },
        ],
        false,
    );
    report.table = Some(table);
    emit(opts, &report, Some(plot))?;
    Ok(passed)
}
