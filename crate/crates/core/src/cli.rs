//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage or parse error,
//! 3 I/O failure, 4 numerical failure.

use crate::error::Error;
use crate::hamiltonian::{ConfigError, FieldConfiguration};
use crate::output::{self, Summary};
use crate::propagator::{IntegratorOptions, Route, Trajectory};
use crate::qstate::PureQubitState;
use crate::scenarios::{
    self, ComplexityReport, RunOptions, ScenarioName, ScenarioParams, ScenarioSpec, TolerancePolicy,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Environment variable giving the default sweep parallelism.
pub const JOBS_ENV: &str = "COMPLEXKIT_JOBS";

#[derive(Debug, Parser)]
#[command(
    name = "complexkit",
    version,
    about = "Krylov and information-geometric complexity of qubit evolutions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one of the reference scenarios and emit its time series.
    Scenario(ScenarioArgs),
    /// Evolve a state under a field read from a JSON config.
    Trace(TraceArgs),
    /// Evaluate summary scalars over a parameter grid.
    Sweep(SweepArgs),
    /// Run the golden-value table.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    Default,
    Strict,
}

#[derive(Debug, Clone, Args)]
pub struct Overrides {
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Final time; defaults to the scenario's own.
    #[arg(long = "t-f", allow_hyphen_values = true)]
    pub t_f: Option<f64>,
}

impl Overrides {
    fn params(&self) -> Result<ScenarioParams, Error> {
        let mut p = ScenarioParams::default();
        let pairs = [
            ("omega", self.omega),
            ("omega0", self.omega0),
            ("nu0", self.nu0),
            ("beta0", self.beta0),
            ("nu", self.nu),
            ("t_f", self.t_f),
        ];
        for (name, v) in pairs {
            if let Some(v) = v {
                p.set(name, v)?;
            }
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    #[arg(value_parser = parse_scenario)]
    pub name: ScenarioName,
    #[command(flatten)]
    pub overrides: Overrides,
    #[arg(long, default_value_t = 2049)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Force the time-ordered integrator even where a closed form exists.
    #[arg(long)]
    pub numeric: bool,
    /// Add the generation time to the summary.
    #[arg(long)]
    pub stamp: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    /// Field configuration JSON.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t1: f64,
    #[arg(long, default_value_t = 2049)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long)]
    pub numeric: bool,
    #[arg(long)]
    pub stamp: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Parameter to vary: a scenario parameter, or t0/t1/theta0/phi0 with --config.
    #[arg(long)]
    pub param: String,
    /// Grid `a:b:step` with `step > 0`.
    #[arg(long, allow_hyphen_values = true)]
    pub range: String,
    #[arg(long, value_parser = parse_scenario, conflicts_with = "config", required_unless_present = "config")]
    pub scenario: Option<ScenarioName>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t1: Option<f64>,
    #[arg(long, default_value_t = 2049)]
    pub samples: usize,
    /// Worker threads; defaults to $COMPLEXKIT_JOBS, then the core count.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long)]
    pub numeric: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long = "tolerance-profile", value_enum, default_value_t = Profile::Default)]
    pub profile: Profile,
    /// Hold every quadrature row to this tolerance instead.
    #[arg(long = "quadrature-tolerance")]
    pub quadrature_tolerance: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

fn parse_scenario(s: &str) -> Result<ScenarioName, String> {
    s.parse::<ScenarioName>().map_err(|_| {
        let names: Vec<&str> = ScenarioName::ALL.iter().map(|n| n.as_str()).collect();
        format!(
            "unknown scenario '{s}' (expected one of: {})",
            names.join(", ")
        )
    })
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: m.into(),
        }
    }

    fn io(e: io::Error, what: &str) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{what}: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::NotNormalized { .. } => EXIT_USAGE,
            _ => EXIT_NUMERIC,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Parse(_) => Self::usage(e.to_string()),
            ConfigError::Invalid(inner) => {
                let mut f = Failure::from(inner);
                f.message = format!("invalid config: {}", f.message);
                f
            }
        }
    }
}

/// Entry point for the binary; returns the process exit status.
pub fn main() -> i32 {
    run(std::env::args_os())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn execute(cmd: &Command) -> Result<i32, Failure> {
    match cmd {
        Command::Scenario(a) => cmd_scenario(a),
        Command::Trace(a) => cmd_trace(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn route(numeric: bool) -> Route {
    if numeric {
        Route::Numeric
    } else {
        Route::Best
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::io(e, &p.display().to_string()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn emit_report(report: &ComplexityReport, out: &OutputArgs, stamp: bool) -> Result<i32, Failure> {
    let mut summary = Summary::from_report(report);
    if stamp {
        summary.generated_unix = Some(unix_now());
    }
    let w = open_out(&out.out)?;
    let res = match out.format {
        Format::Csv => output::write_series_csv(w, report, &summary),
        Format::Json => output::write_series_json(w, report, &summary),
    };
    res.map_err(|e| Failure::io(e, "write failed"))?;
    Ok(EXIT_OK)
}

fn cmd_scenario(a: &ScenarioArgs) -> Result<i32, Failure> {
    let spec = ScenarioSpec::new(a.name, &a.overrides.params()?)?;
    let opts = RunOptions {
        samples: a.samples,
        route: route(a.numeric),
        ..RunOptions::default()
    };
    let report = scenarios::run_scenario(&spec, &opts)?;
    emit_report(&report, &a.output, a.stamp)
}

fn read_config(path: &PathBuf) -> Result<FieldConfiguration, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::io(e, &path.display().to_string()))?;
    Ok(FieldConfiguration::from_json(&text)?)
}

#[derive(Clone)]
struct TraceSetup {
    config: FieldConfiguration,
    theta0: f64,
    phi0: f64,
    t0: f64,
    t1: f64,
    samples: usize,
    route: Route,
}

impl TraceSetup {
    fn run(&self) -> Result<ComplexityReport, Error> {
        let psi0 = PureQubitState::from_angles(self.theta0, self.phi0)?;
        let traj = Trajectory::build(
            &self.config,
            &psi0,
            self.t0,
            self.t1,
            self.samples,
            IntegratorOptions::default(),
            self.route,
        )?;
        let mut report = scenarios::analyze(&traj)?;
        report.scenario = format!("trace:{}", self.config.kind_name());
        report.parameters = [
            ("theta0", self.theta0),
            ("phi0", self.phi0),
            ("t0", self.t0),
            ("t1", self.t1),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        Ok(report)
    }

    fn set(&mut self, name: &str, v: f64) -> Result<(), Error> {
        match name {
            "theta0" => self.theta0 = v,
            "phi0" => self.phi0 = v,
            "t0" => self.t0 = v,
            "t1" => self.t1 = v,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "cannot sweep '{name}' with --config (use t0, t1, theta0 or phi0)"
                )))
            }
        }
        Ok(())
    }
}

fn cmd_trace(a: &TraceArgs) -> Result<i32, Failure> {
    let setup = TraceSetup {
        config: read_config(&a.config)?,
        theta0: a.theta0,
        phi0: a.phi0,
        t0: a.t0,
        t1: a.t1,
        samples: a.samples,
        route: route(a.numeric),
    };
    let report = setup.run()?;
    emit_report(&report, &a.output, a.stamp)
}

/// Grid points of `a:b:step`, inclusive of `b` up to rounding.
pub fn parse_range(s: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::InvalidArgument(format!("range '{s}' must be a:b:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let (a, b, step) = (nums[0], nums[1], nums[2]);
    if !(a.is_finite() && b.is_finite() && step.is_finite()) {
        return Err(bad());
    }
    if step <= 0.0 {
        return Err(Error::InvalidArgument("range step must be positive".into()));
    }
    if b < a {
        return Err(Error::InvalidArgument(format!("range '{s}' is empty")));
    }
    let n = ((b - a) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| a + i as f64 * step).collect())
}

fn jobs(requested: Option<usize>) -> Result<usize, Failure> {
    if let Some(j) = requested {
        return if j > 0 {
            Ok(j)
        } else {
            Err(Failure::usage("--jobs must be positive"))
        };
    }
    match std::env::var(JOBS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(j) if j > 0 => Ok(j),
            _ => Err(Failure::usage(format!(
                "{JOBS_ENV} must be a positive integer, got '{v}'"
            ))),
        },
        Err(_) => Ok(0),
    }
}

fn cmd_sweep(a: &SweepArgs) -> Result<i32, Failure> {
    let grid = parse_range(&a.range)?;
    let opts = RunOptions {
        samples: a.samples,
        route: route(a.numeric),
        ..RunOptions::default()
    };
    let point: Box<dyn Fn(f64) -> Result<ComplexityReport, Error> + Sync> =
        match (&a.scenario, &a.config) {
            (Some(name), _) => {
                let base = a.overrides.params()?;
                if !ScenarioParams::NAMES.contains(&a.param.as_str()) {
                    return Err(Failure::usage(format!(
                        "unknown parameter '{}' (expected one of: {})",
                        a.param,
                        ScenarioParams::NAMES.join(", ")
                    )));
                }
                let name = *name;
                let param = a.param.clone();
                Box::new(move |v| {
                    let mut p = base;
                    p.set(&param, v)?;
                    scenarios::run_scenario(&ScenarioSpec::new(name, &p)?, &opts)
                })
            }
            (None, Some(path)) => {
                let setup = TraceSetup {
                    config: read_config(path)?,
                    theta0: a.theta0,
                    phi0: a.phi0,
                    t0: a.t0,
                    // Sweeping t1 supplies it at every grid point.
                    t1: match (a.t1, a.param.as_str()) {
                        (Some(t), _) => t,
                        (None, "t1") => f64::NAN,
                        (None, _) => return Err(Failure::usage("--t1 is required with --config")),
                    },
                    samples: a.samples,
                    route: opts.route,
                };
                let param = a.param.clone();
                setup.clone().set(&param, 0.0)?;
                Box::new(move |v| {
                    let mut s = setup.clone();
                    s.set(&param, v)?;
                    s.run()
                })
            }
            (None, None) => {
                return Err(Failure::usage("either --scenario or --config is required"))
            }
        };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs(a.jobs)?)
        .build()
        .map_err(|e| Failure {
            code: EXIT_NUMERIC,
            message: e.to_string(),
        })?;
    let results: Vec<Result<ComplexityReport, Error>> =
        pool.install(|| grid.par_iter().map(|&v| point(v)).collect());
    let mut rows = Vec::with_capacity(grid.len());
    for (v, r) in grid.iter().zip(results) {
        let r = r.map_err(|e| {
            let mut f = Failure::from(e);
            f.message = format!("{} = {v}: {}", a.param, f.message);
            f
        })?;
        rows.push(output::sweep_row(*v, &r));
    }
    let w = open_out(&a.output.out)?;
    let res = match a.output.format {
        Format::Csv => output::write_sweep_csv(w, &rows),
        Format::Json => output::write_sweep_json(w, &rows),
    };
    res.map_err(|e| Failure::io(e, "write failed"))?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32, Failure> {
    let mut policy = match a.profile {
        Profile::Default => TolerancePolicy::default(),
        Profile::Strict => TolerancePolicy::strict(),
    };
    if let Some(t) = a.quadrature_tolerance {
        if !(t > 0.0) {
            return Err(Failure::usage("--quadrature-tolerance must be positive"));
        }
        policy.quadrature_override = Some(t);
    }
    let table = scenarios::verify_all(&policy);
    let mut w = open_out(&None)?;
    let res = if a.json {
        serde_json::to_writer_pretty(&mut w, &table)
            .map_err(io::Error::other)
            .and_then(|_| writeln!(w))
    } else {
        w.write_all(table.render().as_bytes())
    };
    res.and_then(|_| w.flush())
        .map_err(|e| Failure::io(e, "write failed"))?;
    Ok(if table.all_passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}
