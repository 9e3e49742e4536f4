//! `staticgeom` command line: one subcommand per check, a JSON report on
//! stdout (or `--out`), CSV side outputs where a module defines one.
//!
//! Exit codes: 0 passed, 1 a check failed, 2 usage or configuration error,
//! 3 numerical failure.

mod report;

pub use report::{to_json, ErrorInfo, Report};

use crate::asymptotics::{build_chart, build_chart_scaled, extract_expansion, flux_limit, sphere_h_expansion_check};
use crate::error::GeomError;
use crate::horizon_killing::{check_bound, solve_a0, summary, write_csv as write_killing_csv, HorizonProblem};
use crate::hypersurfaces::{perturb_sphere, read_profile_csv, Hypersurface, InnerBoundary, RegionSpec};
use crate::imcf::{default_flow_tol, flow_axisym, flow_sphere_analytic, h_evolution_check, q_monotonicity, FlowTrace};
use crate::inequality::{
    divergence_identity, dss_identity, global_divergence_check, kottler_mass, reverse_penrose, two_horizon,
    verify_brendle_warped, verify_main, verify_null_homologous, InequalityReport, DEFAULT_TOL,
};
use crate::models::{ricci_rr_at_horizon, sample_radii, static_residual, ModelConfig, StaticModel};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser, Serialize)]
#[command(name = "staticgeom", version, about = "Geometric inequalities on static warped-product manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Model JSON, inline (starting with `{`) or a file path.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance of the check (negative values demand strict slack).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Omit the timestamp so identical runs give identical reports.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Inspect the resolved model.
    #[command(subcommand)]
    Models(ModelsCommand),
    /// Inequalities and identities.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Mass from the conformal boundary expansion.
    #[command(subcommand)]
    Mass(MassCommand),
    /// Inverse mean curvature flow.
    #[command(subcommand)]
    Flow(FlowCommand),
    /// Leading Killing coefficient on a horizon.
    #[command(subcommand)]
    Killing(KillingCommand),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelsCommand {
    /// The resolved model.
    Show,
    /// Horizon data.
    Horizons,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct SurfaceArgs {
    /// Coordinate sphere of this areal radius.
    #[arg(long)]
    pub sphere: Option<f64>,
    /// Profile CSV (`# theta,u`).
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Base radius of a perturbed sphere.
    #[arg(long)]
    pub s0: Option<f64>,
    /// Relative amplitude of the Legendre perturbation.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub perturb: f64,
    #[arg(long, default_value_t = 2)]
    pub mode: usize,
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct RegionArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Index of the inner horizon.
    #[arg(long, default_value_t = 0)]
    pub horizon: usize,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyCommand {
    /// Static equations and scalar curvature at sample radii.
    Static {
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Inequality for null-homologous boundaries.
    Null(SurfaceArgs),
    /// Main inequality over a horizon.
    Main(RegionArgs),
    /// Warped-product form in the distance chart.
    Warped(RegionArgs),
    /// Reverse Penrose inequality.
    Penrose {
        /// Also extract the mass from the asymptotic expansion.
        #[arg(long)]
        extract: bool,
    },
    /// Two-horizon equality.
    Twohorizon,
    /// Horizon identity of the de Sitter-Schwarzschild family.
    Identity,
    /// Divergence identity; global when no surface is given.
    Divergence(RegionArgs),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MassCommand {
    /// Fit of the boundary expansion.
    Extract {
        /// Rescale the chart's initial value by `1 + delta` and renormalize.
        #[arg(long, allow_hyphen_values = true)]
        rescale: Option<f64>,
        /// Write the chart as `# s,rho`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Limit of the boundary flux.
    Flux,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct FlowArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long = "T", default_value_t = 1.0)]
    pub t_end: f64,
    /// Minimum number of time steps.
    #[arg(long, default_value_t = 64)]
    pub steps: usize,
    /// Use the closed-form sphere flow.
    #[arg(long)]
    pub analytic: bool,
    /// Trace CSV path.
    #[arg(long, default_value = "trace.csv")]
    pub csv: PathBuf,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowCommand {
    /// Inverse mean curvature flow with Q tracking.
    Imcf(FlowArgs),
    /// Q along the sphere flow and the mean-curvature evolution check.
    Qcheck {
        #[arg(long)]
        s0: Option<f64>,
        #[arg(long = "T", default_value_t = 1.0)]
        t_end: f64,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KillingCommand {
    /// Solve for a0 on a horizon of the model, or on explicit data.
    Solve {
        #[arg(long, default_value_t = 0)]
        horizon: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        radius: Option<f64>,
        /// `a,b,c` for `Ric(dr, dr) = a + b cos(theta) + c cos^2(theta)`.
        #[arg(long, allow_hyphen_values = true)]
        ric: Option<String>,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Write `# theta,ric_rr,a0`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Geom(GeomError),
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        Failure::Geom(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Geom(e) if e.is_numerical() => EXIT_NUMERICAL,
            Failure::Geom(_) => EXIT_CONFIG,
        }
    }

    fn info(&self) -> ErrorInfo {
        match self {
            Failure::Config(m) => ErrorInfo { kind: "Config".into(), message: m.clone() },
            Failure::Geom(e) => {
                let debug = format!("{e:?}");
                let kind = debug.split(['(', ' ', '{']).next().unwrap_or("").to_string();
                ErrorInfo { kind, message: e.to_string() }
            }
        }
    }
}

/// Results of one command, plus an error that ended it after partial output.
struct Outcome {
    results: Vec<Value>,
    passed: bool,
    resolved: Value,
    stopped: Option<Failure>,
}

impl Outcome {
    fn new(results: Vec<Value>, passed: bool, resolved: Value) -> Self {
        Outcome { results, passed, resolved, stopped: None }
    }
}

fn value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn load_model(cli: &Cli) -> Result<StaticModel, Failure> {
    let spec = cli.model.as_deref().ok_or_else(|| Failure::Config("--model is required".into()))?;
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| Failure::Config(format!("reading model '{spec}': {e}")))?
    };
    Ok(ModelConfig::from_json(&text)?.build()?)
}

/// Default base radius: the maximum of `f` between two horizons, twice an
/// inner horizon, or 1.
fn default_radius(model: &StaticModel) -> f64 {
    match (model.horizons().len(), model.inner_horizon()) {
        (2, _) => model.lapse.stationary_point().unwrap_or(1.0),
        (_, Some((_, h))) => 2.0 * h.s_root,
        _ => 1.0,
    }
}

fn build_surface(model: &StaticModel, args: &SurfaceArgs) -> Result<Option<Hypersurface>, Failure> {
    let chosen = [args.sphere.is_some(), args.profile.is_some(), args.s0.is_some() || args.perturb != 0.0];
    if chosen.iter().filter(|c| **c).count() > 1 {
        return Err(Failure::Config("give one of --sphere, --profile or --s0/--perturb".into()));
    }
    if let Some(s) = args.sphere {
        return Ok(Some(Hypersurface::sphere(s)));
    }
    if let Some(path) = &args.profile {
        let file = File::open(path).map_err(|e| Failure::Config(format!("reading profile {}: {e}", path.display())))?;
        return Ok(Some(Hypersurface::graph(read_profile_csv(BufReader::new(file))?)));
    }
    if args.s0.is_some() || args.perturb != 0.0 {
        let s0 = args.s0.unwrap_or_else(|| default_radius(model));
        return Ok(Some(perturb_sphere(model, s0, args.perturb, args.mode, args.grid)?));
    }
    Ok(None)
}

fn require_surface(model: &StaticModel, args: &SurfaceArgs) -> Result<Hypersurface, Failure> {
    build_surface(model, args)?
        .ok_or_else(|| Failure::Config("a surface is required (--sphere, --profile or --s0/--perturb)".into()))
}

fn surface_summary(surface: &Hypersurface) -> Value {
    match surface {
        Hypersurface::CoordinateSphere { s } => json!({"sphere": s}),
        Hypersurface::AxisymGraph(p) => json!({"graph": {"grid": p.grid_size(), "min": p.min(), "max": p.max()}}),
    }
}

fn inequality(report: InequalityReport, resolved: Value) -> Outcome {
    let passed = report.holds();
    Outcome::new(vec![value(&report)], passed, resolved)
}

fn create(path: &PathBuf) -> Result<File, Failure> {
    File::create(path).map_err(|e| Failure::Config(format!("writing {}: {e}", path.display())))
}

fn run_models(model: &StaticModel, cmd: &ModelsCommand) -> Outcome {
    let resolved = json!({"model": value(&ModelConfig::from_model(model))});
    match cmd {
        ModelsCommand::Show => Outcome::new(vec![value(model)], true, resolved),
        ModelsCommand::Horizons => {
            let rows = model
                .horizons()
                .iter()
                .map(|h| {
                    let mut v = value(h);
                    v["ricci_rr"] = json!(ricci_rr_at_horizon(model, h));
                    v
                })
                .collect();
            Outcome::new(rows, true, resolved)
        }
    }
}

fn run_verify(model: &StaticModel, cmd: &VerifyCommand, tol: Option<f64>) -> Result<Outcome, Failure> {
    let mut resolved = json!({"model": value(&ModelConfig::from_model(model))});
    let over_horizon = |args: &RegionArgs| -> Result<RegionSpec, Failure> {
        Ok(RegionSpec::new(InnerBoundary::Horizon(args.horizon), require_surface(model, &args.surface)?))
    };
    let outcome = match cmd {
        VerifyCommand::Static { points } => {
            let tol = tol.unwrap_or(1e-6);
            resolved["tol"] = json!(tol);
            let reports = sample_radii(model, *points)
                .into_iter()
                .map(|s| static_residual(model, s, 8))
                .collect::<crate::Result<Vec<_>>>()?;
            let passed = reports.iter().all(|r| r.max_residual() <= tol && r.max_scalar_error() <= tol);
            Outcome::new(reports.iter().map(value).collect(), passed, resolved)
        }
        VerifyCommand::Null(args) => {
            let tol = tol.unwrap_or(DEFAULT_TOL);
            let surface = require_surface(model, args)?;
            resolved["tol"] = json!(tol);
            resolved["surface"] = surface_summary(&surface);
            inequality(verify_null_homologous(model, &RegionSpec::new(InnerBoundary::Empty, surface), tol)?, resolved)
        }
        VerifyCommand::Main(args) | VerifyCommand::Warped(args) => {
            let tol = tol.unwrap_or(DEFAULT_TOL);
            let region = over_horizon(args)?;
            resolved["tol"] = json!(tol);
            resolved["surface"] = surface_summary(&region.outer);
            let report = if matches!(cmd, VerifyCommand::Main(_)) {
                verify_main(model, &region, tol)?
            } else {
                verify_brendle_warped(model, &region, tol)?
            };
            inequality(report, resolved)
        }
        VerifyCommand::Penrose { extract } => {
            let tol = tol.unwrap_or(DEFAULT_TOL);
            resolved["tol"] = json!(tol);
            let extracted = if *extract { Some(extract_expansion(model, &build_chart(model)?)?.mass) } else { None };
            inequality(reverse_penrose(model, extracted, tol)?, resolved)
        }
        VerifyCommand::Twohorizon => {
            let tol = tol.unwrap_or(1e-9);
            resolved["tol"] = json!(tol);
            inequality(two_horizon(model, tol)?, resolved)
        }
        VerifyCommand::Identity => {
            let tol = tol.unwrap_or(1e-9);
            resolved["tol"] = json!(tol);
            inequality(dss_identity(model, tol)?, resolved)
        }
        VerifyCommand::Divergence(args) => {
            let tol = tol.unwrap_or(1e-8);
            resolved["tol"] = json!(tol);
            match build_surface(model, &args.surface)? {
                None => inequality(global_divergence_check(model, tol)?, resolved),
                Some(surface) => {
                    resolved["surface"] = surface_summary(&surface);
                    let region = RegionSpec::new(InnerBoundary::Horizon(args.horizon), surface);
                    inequality(divergence_identity(model, &region, tol)?, resolved)
                }
            }
        }
    };
    Ok(outcome)
}

fn run_mass(model: &StaticModel, cmd: &MassCommand, tol: Option<f64>) -> Result<Outcome, Failure> {
    let tol = tol.unwrap_or(1e-3);
    let mut resolved = json!({"model": value(&ModelConfig::from_model(model)), "tol": tol});
    let expected = kottler_mass(model)?;
    let mut chart = match cmd {
        MassCommand::Extract { rescale: Some(delta), .. } => build_chart_scaled(model, 1.0 + delta)?,
        _ => build_chart(model)?,
    };
    match cmd {
        MassCommand::Extract { rescale, csv } => {
            if rescale.is_some() {
                resolved["renormalization_offset"] = json!(chart.renormalize()?);
            }
            if let Some(path) = csv {
                chart.write_csv(create(path)?)?;
            }
            let fit = extract_expansion(model, &chart)?;
            let h_check = sphere_h_expansion_check(model, &chart, fit.tr_tau)?;
            let scale = expected.abs().max(f64::MIN_POSITIVE);
            let mass_ok = (fit.mass - expected).abs() <= tol * scale || (expected == 0.0 && fit.mass.abs() <= tol);
            let alpha_gap = (fit.alpha + fit.tr_tau / model.n as f64).abs();
            let alpha_ok = alpha_gap <= tol * fit.tr_tau.abs().max(f64::MIN_POSITIVE) || alpha_gap <= tol * 1e-7;
            let mut fit_value = value(&fit);
            fit_value["expected_mass"] = json!(expected);
            Ok(Outcome::new(vec![fit_value, value(&h_check)], mass_ok && alpha_ok, resolved))
        }
        MassCommand::Flux => {
            let limit = flux_limit(model, &chart)?;
            let passed = (limit.limit - limit.expected).abs() <= tol * limit.expected.abs().max(f64::MIN_POSITIVE)
                || (limit.expected == 0.0 && limit.limit.abs() <= tol);
            Ok(Outcome::new(vec![value(&limit)], passed, resolved))
        }
    }
}

#[derive(Debug, Serialize)]
struct FlowSummary {
    t_end: f64,
    samples: usize,
    dt: f64,
    grid: usize,
    area_law_error: f64,
    q_initial: Option<f64>,
    q_final: Option<f64>,
    /// `max |Q(t) - Q(0)|`.
    q_spread: Option<f64>,
    deficit_per_area_initial: f64,
    deficit_per_area_final: f64,
    stopped: Option<String>,
}

fn flow_summary(trace: &FlowTrace) -> FlowSummary {
    let (first, last) = (&trace.states[0], trace.last());
    let q_spread =
        first.q.map(|q0| trace.states.iter().filter_map(|s| s.q).map(|q| (q - q0).abs()).fold(0.0, f64::max));
    FlowSummary {
        t_end: last.t,
        samples: trace.states.len(),
        dt: trace.dt,
        grid: trace.grid,
        area_law_error: trace.area_law_error(),
        q_initial: first.q,
        q_final: last.q,
        q_spread,
        deficit_per_area_initial: first.umbilicity_deficit / first.area,
        deficit_per_area_final: last.umbilicity_deficit / last.area,
        stopped: trace.stopped.as_ref().map(|e| e.to_string()),
    }
}

fn run_flow(model: &StaticModel, cmd: &FlowCommand, tol: Option<f64>) -> Result<Outcome, Failure> {
    let mut resolved = json!({"model": value(&ModelConfig::from_model(model))});
    match cmd {
        FlowCommand::Imcf(args) => {
            let surface =
                build_surface(model, &args.surface)?.unwrap_or_else(|| Hypersurface::sphere(default_radius(model)));
            resolved["surface"] = surface_summary(&surface);
            let trace = match (&surface, args.analytic) {
                (Hypersurface::CoordinateSphere { s }, true) => flow_sphere_analytic(model, *s, args.t_end)?,
                (_, true) => return Err(Failure::Config("--analytic needs a coordinate sphere".into())),
                _ => flow_axisym(model, &surface, args.t_end, args.steps, args.surface.grid)?,
            };
            trace.write_csv(model, create(&args.csv)?)?;
            let mut results = vec![value(&flow_summary(&trace))];
            let area_tol = 1e-4;
            resolved["area_law_tol"] = json!(area_tol);
            let mut passed = trace.area_law_error() <= area_tol;
            if trace.states[0].q.is_some() {
                let tol = tol.unwrap_or_else(|| default_flow_tol(&trace));
                resolved["tol"] = json!(tol);
                let mono = q_monotonicity(&trace, tol)?;
                passed &= mono.passed;
                results.push(value(&mono));
            }
            let mut outcome = Outcome::new(results, passed, resolved);
            outcome.stopped = trace.stopped.clone().map(Failure::Geom);
            Ok(outcome)
        }
        FlowCommand::Qcheck { s0, t_end } => {
            let s0 = s0.unwrap_or_else(|| default_radius(model));
            let trace = flow_sphere_analytic(model, s0, *t_end)?;
            let q0 = trace.states[0].q.ok_or(GeomError::WrongCosmologicalSign(model.epsilon))?;
            let tol = tol.unwrap_or(1e-6 * q0.abs());
            resolved["s0"] = json!(s0);
            resolved["tol"] = json!(tol);
            let summary = flow_summary(&trace);
            let h = h_evolution_check(model, s0)?;
            let passed = summary.q_spread.unwrap_or(0.0) <= tol && h.passed;
            Ok(Outcome::new(vec![value(&summary), value(&h)], passed, resolved))
        }
    }
}

fn parse_ric(text: &str) -> Result<[f64; 3], Failure> {
    let parts = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Config(format!("--ric '{text}': {e}")))?;
    match parts[..] {
        [a] => Ok([a, 0.0, 0.0]),
        [a, b] => Ok([a, b, 0.0]),
        [a, b, c] => Ok([a, b, c]),
        _ => Err(Failure::Config(format!("--ric takes up to three coefficients, got '{text}'"))),
    }
}

fn run_killing(cli: &Cli, cmd: &KillingCommand) -> Result<Outcome, Failure> {
    let KillingCommand::Solve { horizon, n, kappa, radius, ric, grid, csv } = cmd;
    let mut resolved = json!({"grid": grid});
    let (problem, horizon_volume) = match (ric, &cli.model) {
        (Some(ric), _) => {
            let [a, b, c] = parse_ric(ric)?;
            let n = n.ok_or_else(|| Failure::Config("--ric needs --n".into()))?;
            let kappa = kappa.ok_or_else(|| Failure::Config("--ric needs --kappa".into()))?;
            let radius = radius.unwrap_or(1.0);
            resolved["problem"] = json!({"n": n, "kappa": kappa, "radius": radius, "ric": [a, b, c]});
            let p = HorizonProblem::from_fn(n, kappa, radius, *grid, |t| a + b * t.cos() + c * t.cos().powi(2))?;
            let volume = radius.powi(n as i32 - 1) * crate::numerics::unit_sphere_volume(n - 1);
            (p, volume)
        }
        (None, Some(_)) => {
            let model = load_model(cli)?;
            resolved["model"] = value(&ModelConfig::from_model(&model));
            resolved["horizon"] = json!(horizon);
            let volume = model.horizon(*horizon)?.volume;
            (HorizonProblem::from_model_horizon(&model, *horizon, *grid)?, volume)
        }
        (None, None) => return Err(Failure::Config("give --model or --ric with --n and --kappa".into())),
    };
    let potential = solve_a0(&problem)?;
    if let Some(path) = csv {
        write_killing_csv(&problem, &potential, create(path)?)?;
    }
    let bound_holds = check_bound(&potential, &problem);
    let residual_ok = potential.residual <= 1e-10 * ((problem.n as f64 - 1.0) * problem.kappa).max(f64::MIN_POSITIVE);
    let mut s = value(&summary(&potential, &problem));
    s["bound_holds"] = json!(bound_holds);
    s["horizon_term"] = json!(potential.min_value * horizon_volume);
    s["companions"] = json!({
        "a1": potential.companions.a1,
        "a2": potential.companions.a2,
        "b0": potential.companions.b0,
        "b2": potential.companions.b2,
        "b1": "grad a0",
    });
    Ok(Outcome::new(vec![s], bound_holds && residual_ok, resolved))
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Models(cmd) => Ok(run_models(&load_model(cli)?, cmd)),
        Command::Verify(cmd) => run_verify(&load_model(cli)?, cmd, cli.tol),
        Command::Mass(cmd) => run_mass(&load_model(cli)?, cmd, cli.tol),
        Command::Flow(cmd) => run_flow(&load_model(cli)?, cmd, cli.tol),
        Command::Killing(cmd) => run_killing(cli, cmd),
    }
}

fn timestamp(cli: &Cli) -> Option<u64> {
    if cli.no_timestamp {
        return None;
    }
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).ok().map(|d| d.as_secs())
}

/// Runs one command; the report goes to `stdout` (or `--out`), messages to `stderr`.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_CONFIG
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_PASS
            };
        }
    };
    let mut config = value(&cli);
    let (results, passed, failure) = match execute(&cli) {
        Ok(outcome) => {
            config["resolved"] = outcome.resolved;
            (outcome.results, outcome.passed, outcome.stopped)
        }
        Err(failure) => (vec![], false, Some(failure)),
    };
    let report = Report {
        tool: "staticgeom",
        version: env!("CARGO_PKG_VERSION"),
        timestamp: timestamp(&cli),
        config,
        results,
        passed: passed && failure.is_none(),
        error: failure.as_ref().map(Failure::info),
    };
    let text = to_json(&report);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("writing {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_CONFIG;
    }
    match failure {
        Some(f) => {
            let _ = writeln!(stderr, "error: {}", f.info().message);
            f.exit_code()
        }
        None if report.passed => EXIT_PASS,
        None => {
            let _ = writeln!(stderr, "check failed");
            EXIT_FAIL
        }
    }
}

/// Runs with the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
