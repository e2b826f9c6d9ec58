//! Command-line front end.
//!
//! Every command produces a [`RunReport`], printed as text or, with `--json`,
//! as versioned JSON. Exit status is 0 when every check passes, 1 on a
//! mathematical failure and 2 on an input error.

mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::constants::{
    biharmonic_gradient_constant, biharmonic_gradient_exact, lame_constant_2d_elliptic,
    lame_constant_2d_series_adaptive, lame_constant_3d_log, lame_stokes_constant,
    planar_deformed_constant, stokes_constant, SharpConstantResult,
};
use crate::criteria::{
    check_mmp_doubled, check_mmp_with, parse_criteria_file, CriteriaOptions, ScalarField,
};
use crate::error::{Error, Result};
use crate::kernels::{kernel_for, SystemKind, SystemSpec};
use crate::numerics::{QuadratureSpec, SphereSearch};
use crate::oracle::{extremal_constant_at, hemisphere_sup_with, DEFAULT_RADIUS_FACTOR};

pub use report::{CrossCheck, PointVerdict, ResultEntry, RunReport, REPORT_VERSION};

/// Agreement required between the closed forms of one constant.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Requested accuracy of the adaptive power series in `constant`.
pub const SERIES_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "sharpk",
    version,
    about = "Sharp constants in half-space maximum principles"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text, env = "SHARPK_FORMAT")]
    pub format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall time in the report. Off by default so reports are
    /// byte-reproducible.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a sharp constant in every available closed form.
    Constant(SystemArgs),
    /// Compare the closed form with the numerical oracles.
    Verify(VerifyArgs),
    /// Tabulate a constant over a parameter range as CSV.
    Sweep(SweepArgs),
    /// Check the maximum modulus criteria for a coefficient system.
    Criteria(CriteriaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemName {
    Harmonic,
    Lame,
    Stokes,
    BiharmonicGradient,
    PlanarDeformed,
}

impl SystemName {
    fn as_str(self) -> &'static str {
        match self {
            SystemName::Harmonic => "harmonic",
            SystemName::Lame => "lame",
            SystemName::Stokes => "stokes",
            SystemName::BiharmonicGradient => "biharmonic-gradient",
            SystemName::PlanarDeformed => "planar-deformed",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    pub system: SystemName,
    /// Space dimension; planar-deformed is fixed to 2.
    #[arg(long)]
    pub n: Option<usize>,
    /// Lamé kernel parameter κ = (λ + μ)/(λ + 3μ).
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["lambda", "mu"])]
    pub kappa: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "mu")]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "lambda")]
    pub mu: Option<f64>,
    /// Stokes viscosity; the constant does not depend on it.
    #[arg(long)]
    pub nu: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Sup,
    Extremal,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum, default_value_t = Level::Both)]
    pub level: Level,
    /// Absolute tolerance of the hemisphere and boundary quadratures.
    #[arg(long, env = "SHARPK_QUAD_TOL", default_value_t = QuadratureSpec::DEFAULT_ABS_TOL_HEMISPHERE)]
    pub quad_tol: f64,
    #[arg(long, env = "SHARPK_MAX_SUBDIVISIONS", default_value_t = QuadratureSpec::DEFAULT_MAX_SUBDIVISIONS)]
    pub max_subdivisions: usize,
    /// Coarse grid size for the supremum over directions.
    #[arg(long, env = "SHARPK_GRID")]
    pub grid: Option<usize>,
    /// Boundary truncation radius in units of xₙ.
    #[arg(long, env = "SHARPK_RADIUS_FACTOR", default_value_t = DEFAULT_RADIUS_FACTOR)]
    pub radius_factor: f64,
    /// Allowed |closed form − supremum|.
    #[arg(long, env = "SHARPK_SUP_TOL", default_value_t = 1e-6)]
    pub sup_tol: f64,
    /// Added to the extremal error estimate to form its tolerance.
    #[arg(long, env = "SHARPK_EXTREMAL_SLACK", default_value_t = 1e-6)]
    pub extremal_slack: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Kappa,
    N,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Swept parameter; defaults to kappa for lame and n otherwise.
    #[arg(long, value_enum)]
    pub param: Option<SweepParam>,
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CriteriaArgs {
    /// JSON coefficient document.
    pub input: PathBuf,
    #[arg(long, env = "SHARPK_ELLIPTICITY_SAMPLES", default_value_t = crate::criteria::DEFAULT_ELLIPTICITY_SAMPLES)]
    pub samples: usize,
    /// Coarse grid size for the condition (ii) minimization.
    #[arg(long, env = "SHARPK_CRITERIA_GRID")]
    pub grid: Option<usize>,
    #[arg(long, env = "SHARPK_FACTOR_TOL", default_value_t = crate::criteria::FACTOR_TOL_REL)]
    pub factor_tol: f64,
    /// Also check complex systems through the doubled real system.
    #[arg(long)]
    pub doubled: bool,
}

/// Parses `args`, runs the command and prints the report. Returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let json = cli.json || cli.format == Format::Json;
    match run(&cli) {
        Ok(report) => {
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if report.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } => 1,
        Error::Domain { .. } | Error::Unsupported(_) | Error::InvalidInput(_) => 2,
    }
}

pub fn run(cli: &Cli) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Constant(a) => cmd_constant(a)?,
        Command::Verify(a) => cmd_verify(a)?,
        Command::Sweep(a) => cmd_sweep(a)?,
        Command::Criteria(a) => cmd_criteria(a)?,
    };
    if cli.timing {
        report.wall_time_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

fn system_spec(a: &SystemArgs) -> Result<SystemSpec> {
    let reject = |given: bool, what: &str| {
        if given {
            Err(Error::InvalidInput(format!(
                "--{what} does not apply to {}",
                a.system.as_str()
            )))
        } else {
            Ok(())
        }
    };
    if a.system != SystemName::Lame {
        reject(a.kappa.is_some(), "kappa")?;
        reject(a.lambda.is_some(), "lambda")?;
        reject(a.mu.is_some(), "mu")?;
    }
    if a.system != SystemName::Stokes {
        reject(a.nu.is_some(), "nu")?;
    }
    let n = || {
        a.n.ok_or_else(|| Error::InvalidInput(format!("{} needs --n", a.system.as_str())))
    };
    match a.system {
        SystemName::Harmonic => SystemSpec::harmonic(n()?),
        SystemName::Lame => match (a.kappa, a.lambda, a.mu) {
            (Some(k), _, _) => SystemSpec::lame_kappa(n()?, k),
            (None, Some(l), Some(m)) => SystemSpec::lame(n()?, l, m),
            _ => Err(Error::InvalidInput(
                "lame needs --kappa or both --lambda and --mu".into(),
            )),
        },
        SystemName::Stokes => SystemSpec::stokes(n()?, a.nu.unwrap_or(1.0)),
        SystemName::BiharmonicGradient => SystemSpec::new(SystemKind::Biharmonic, n()?),
        SystemName::PlanarDeformed => SystemSpec::new(SystemKind::PlanarDeformed, a.n.unwrap_or(2)),
    }
}

fn record_system(report: &mut RunReport, a: &SystemArgs, spec: &SystemSpec) {
    report.input("system", a.system.as_str());
    report.input("n", spec.n());
    if let Some(k) = spec.kappa() {
        report.input("kappa", k);
    }
    if let Some(l) = a.lambda {
        report.input("lambda", l);
    }
    if let Some(m) = a.mu {
        report.input("mu", m);
    }
    if let Some(nu) = a.nu {
        report.input("nu", nu);
    }
}

fn exact_entry(label: &str, value: f64) -> ResultEntry {
    ResultEntry {
        label: label.to_string(),
        value,
        err_est: 0.0,
        method: "exact".to_string(),
        argmax: None,
        notes: Vec::new(),
    }
}

/// All closed forms available for the system; the first entry is the primary value.
fn closed_forms(spec: &SystemSpec) -> Result<Vec<ResultEntry>> {
    let n = spec.n();
    let entry = |label: &str, r: SharpConstantResult| ResultEntry::from_result(label, &r);
    let mut out = Vec::new();
    match spec.kind() {
        SystemKind::Stokes { .. } => {
            out.push(entry("gamma_ratio", stokes_constant(n)?));
            out.push(entry("integral_1d", lame_stokes_constant(n, 1.0)?));
            if n == 2 {
                out.push(entry("elliptic", lame_constant_2d_elliptic(1.0)?));
            } else if n == 3 {
                out.push(entry("log_form", lame_constant_3d_log(1.0)?));
            }
        }
        SystemKind::Harmonic | SystemKind::Lame { .. } | SystemKind::LameKappa { .. } => {
            let kappa = spec.kappa().expect("Lamé-type systems carry kappa");
            out.push(entry("integral_1d", lame_stokes_constant(n, kappa)?));
            if matches!(spec.kind(), SystemKind::Harmonic) {
                out.push(exact_entry("exact", 1.0));
            }
            if n == 2 && (0.0..=1.0).contains(&kappa) {
                out.push(entry("elliptic", lame_constant_2d_elliptic(kappa)?));
                if kappa < 1.0 {
                    out.push(entry(
                        "series",
                        lame_constant_2d_series_adaptive(kappa, SERIES_TOL)?,
                    ));
                }
            }
            if n == 3 && (0.0..=1.0).contains(&kappa) {
                out.push(entry("log_form", lame_constant_3d_log(kappa)?));
            }
        }
        SystemKind::Biharmonic => {
            out.push(entry("integral_1d", biharmonic_gradient_constant(n)?));
            if let Some(v) = biharmonic_gradient_exact(n) {
                out.push(exact_entry("exact", v));
            }
        }
        SystemKind::PlanarDeformed => {
            out.push(entry("gamma_ratio", planar_deformed_constant()));
            out.push(exact_entry("exact", 4.0 / std::f64::consts::PI));
        }
    }
    Ok(out)
}

fn cross_check_all(report: &mut RunReport) {
    let Some(primary) = report.results.first().cloned() else {
        return;
    };
    for other in report.results.iter().skip(1) {
        let tol = CLOSED_FORM_TOL.max(primary.err_est + other.err_est);
        report
            .cross_checks
            .push(CrossCheck::new(&primary, other, tol));
    }
    report.pass = report.cross_checks.iter().all(|c| c.pass);
}

pub fn cmd_constant(a: &SystemArgs) -> Result<RunReport> {
    let spec = system_spec(a)?;
    let mut report = RunReport::new("constant");
    record_system(&mut report, a, &spec);
    report.results = closed_forms(&spec)?;
    cross_check_all(&mut report);
    Ok(report)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<RunReport> {
    let spec = system_spec(&a.system)?;
    let kernel = kernel_for(&spec)?;
    let n = spec.n();
    if n != 2 && n != 3 {
        return Err(Error::Unsupported(format!(
            "numerical verification needs n = 2 or n = 3, got n = {n}"
        )));
    }
    let quad = QuadratureSpec::adaptive(a.quad_tol).with_max_subdivisions(a.max_subdivisions);
    quad.validate()?;
    let mut search = SphereSearch::for_dimension(kernel.m());
    if let Some(g) = a.grid {
        if g == 0 {
            return Err(Error::InvalidInput("--grid must be positive".into()));
        }
        search.coarse_points = g;
    }
    let mut report = RunReport::new("verify");
    record_system(&mut report, &a.system, &spec);
    report.input("level", format!("{:?}", a.level).to_lowercase());
    report.input("quad_tol", a.quad_tol);
    report.input("max_subdivisions", a.max_subdivisions);
    report.input("grid", search.coarse_points);
    report.input("radius_factor", a.radius_factor);

    let closed = closed_forms(&spec)?.remove(0);
    report.results.push(closed.clone());

    let sup = hemisphere_sup_with(&kernel, &quad, &search)?;
    let sup_entry = ResultEntry::from_result("hemisphere_sup", &sup);
    if a.level != Level::Extremal {
        report.results.push(sup_entry.clone());
        report
            .cross_checks
            .push(CrossCheck::new(&closed, &sup_entry, a.sup_tol));
    }
    if a.level != Level::Sup {
        let z = sup
            .argmax
            .clone()
            .expect("numeric supremum records its argmax");
        let mut x = vec![0.0; n];
        x[n - 1] = 1.0;
        let ext = extremal_constant_at(&spec, x, z, Some(a.radius_factor))?;
        let ext_entry = ResultEntry::from_result("extremal_boundary", &ext);
        let tol = ext.err_est + a.extremal_slack;
        report.results.push(ext_entry.clone());
        report
            .cross_checks
            .push(CrossCheck::new(&closed, &ext_entry, tol));
    }
    report.pass = report.cross_checks.iter().all(|c| c.pass);
    Ok(report)
}

fn sweep_grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidInput(format!(
            "--steps must be at least 2, got {steps}"
        )));
    }
    if !from.is_finite() || !to.is_finite() {
        return Err(Error::InvalidInput("sweep bounds must be finite".into()));
    }
    if from == to {
        return Err(Error::InvalidInput(format!(
            "degenerate range: from = to = {from}"
        )));
    }
    let h = (to - from) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                to
            } else {
                from + i as f64 * h
            }
        })
        .collect())
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<RunReport> {
    let sys = &a.system;
    let param = a.param.unwrap_or(if sys.system == SystemName::Lame {
        SweepParam::Kappa
    } else {
        SweepParam::N
    });
    let grid = sweep_grid(a.from, a.to, a.steps)?;
    let mut report = RunReport::new("sweep");
    report.input("system", sys.system.as_str());
    report.input("param", format!("{param:?}").to_lowercase());
    report.input("from", a.from);
    report.input("to", a.to);
    report.input("steps", a.steps);
    report.input("out", a.out.display().to_string());

    let rows: Vec<(f64, SharpConstantResult)> = match param {
        SweepParam::Kappa => {
            if sys.system != SystemName::Lame {
                return Err(Error::InvalidInput(
                    "kappa can only be swept for lame".into(),
                ));
            }
            if sys.kappa.is_some() || sys.lambda.is_some() {
                return Err(Error::InvalidInput(
                    "the swept kappa cannot also be fixed".into(),
                ));
            }
            let n = sys
                .n
                .ok_or_else(|| Error::InvalidInput("lame needs --n".into()))?;
            report.input("n", n);
            grid.par_iter()
                .map(|&k| lame_stokes_constant(n, k).map(|r| (k, r)))
                .collect::<Result<Vec<_>>>()?
        }
        SweepParam::N => {
            if sys.n.is_some() {
                return Err(Error::InvalidInput(
                    "the swept n cannot also be fixed".into(),
                ));
            }
            let dims = grid
                .iter()
                .map(|&v| {
                    let r = v.round();
                    if (v - r).abs() > 1e-9 || r < 2.0 {
                        Err(Error::InvalidInput(format!(
                            "n grid value {v} is not an integer ≥ 2"
                        )))
                    } else {
                        Ok(r as usize)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            dims.par_iter()
                .map(|&n| {
                    let args = SystemArgs {
                        n: Some(n),
                        ..sys.clone()
                    };
                    let spec = system_spec(&args)?;
                    let primary = closed_forms(&spec)?.remove(0);
                    let r = SharpConstantResult::new(
                        primary.value,
                        method_of(&spec, n)?,
                        primary.err_est,
                    );
                    Ok((n as f64, r))
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    write_sweep_csv(&a.out, &rows)?;
    for (p, r) in &rows {
        report
            .results
            .push(ResultEntry::from_result(format!("{p}"), r));
    }
    Ok(report)
}

fn method_of(spec: &SystemSpec, n: usize) -> Result<crate::constants::Method> {
    Ok(match spec.kind() {
        SystemKind::Stokes { .. } => stokes_constant(n)?.method,
        SystemKind::PlanarDeformed => planar_deformed_constant().method,
        _ => crate::constants::Method::ClosedForm1dIntegral,
    })
}

fn write_sweep_csv(path: &std::path::Path, rows: &[(f64, SharpConstantResult)]) -> Result<()> {
    let io_err = |e: &dyn std::fmt::Display| {
        Error::InvalidInput(format!("cannot write {}: {e}", path.display()))
    };
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(&e))?;
    w.write_record(["parameter", "value", "err_est", "method"])
        .map_err(|e| io_err(&e))?;
    for (p, r) in rows {
        w.write_record([
            p.to_string(),
            r.value.to_string(),
            r.err_est.to_string(),
            r.method.as_str().to_string(),
        ])
        .map_err(|e| io_err(&e))?;
    }
    w.flush().map_err(|e| io_err(&e))?;
    Ok(())
}

pub fn cmd_criteria(a: &CriteriaArgs) -> Result<RunReport> {
    let doc = parse_criteria_file(&a.input)?;
    let opts = CriteriaOptions {
        ellipticity_samples: a.samples,
        factor_tol: a.factor_tol,
        grid: a.grid,
    };
    let mut report = RunReport::new("criteria");
    report.input("input", a.input.display().to_string());
    report.input("m", doc.m);
    report.input("n", doc.n);
    report.input("field", doc.field);
    report.input("points", doc.points.len());
    report.input("ellipticity_samples", a.samples);
    report.input("factor_tol", a.factor_tol);
    if let Some(g) = a.grid {
        report.input("grid", g);
    }
    let doubled = a.doubled && doc.field == ScalarField::Complex;
    let verdicts = doc
        .points
        .par_iter()
        .enumerate()
        .map(|(index, p)| {
            let verdict = check_mmp_with(&p.system, &opts)?;
            let doubled_overall = if doubled {
                Some(check_mmp_doubled(&p.system, &opts)?.overall)
            } else {
                None
            };
            Ok(PointVerdict {
                index,
                x: p.x.clone(),
                verdict,
                doubled_overall,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    report.pass = verdicts
        .iter()
        .all(|p| p.verdict.overall && p.doubled_overall.unwrap_or(true));
    if verdicts
        .iter()
        .any(|p| p.doubled_overall.is_some_and(|d| d != p.verdict.overall))
    {
        report
            .notes
            .push("direct and doubled-real verdicts disagree".into());
    }
    if doc.points.len() > 1 {
        report
            .notes
            .push("verdict is the conjunction over the sampled points only".into());
    }
    report.verdicts = verdicts;
    Ok(report)
}
