//! Command-line front end: `certify`, `hardness`, `simulate`, `plan`,
//! `budget` and `replay`.
//!
//! Exit codes: 0 Yes (or success), 1 No, 2 Inconclusive, 64 usage or
//! validation error, 70 internal or oracle failure.

mod args;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use clap::Parser;
use serde::{Deserialize, Serialize};

pub use args::{
    BallArgs, BudgetArgs, CertifyArgs, Cli, Command, CommonArgs, HardnessArgs, PlanArgs, QueryArgs,
    ReplayArgs, SimulateArgs, TableFormat,
};

use crate::domain::{ThresholdQuery, Verdict};
use crate::error::Error;
use crate::nn::{load_model, Model};
use crate::oracle::{bernoulli, subprocess_oracle};
use crate::robustness::{
    adversarial_hardness, ball_sampler, certify_density, HardnessSearch, Probe, RobustnessQuery,
    Sampler,
};
use crate::seed::SeedSpec;
use crate::sim::{complexity_sweep, linear_grid};
use crate::strategy::{worst_case_budget, StrategyKind};
use crate::tester::{plan_tester, Execution, Limits};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INTERNAL: i32 = 70;

pub const SEED_ENV: &str = "QUANTCERT_SEED";

/// Everything needed to reproduce a run. Thread count and output path are
/// left out because they do not affect results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub limits: Limits,
    pub batch_size: usize,
    pub record_timing: bool,
}

impl RunConfig {
    /// Resolves the seed (`QUANTCERT_SEED`, then `--seed`, then OS entropy)
    /// and validates the shared flags.
    pub fn resolve(
        command: Command,
        common: &CommonArgs,
        env_seed: Option<&str>,
    ) -> Result<Self, CliError> {
        let seed = match env_seed {
            Some(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV}={s:?} is not a u64")))?,
            None => common.seed.unwrap_or_else(rand::random),
        };
        if common.batch_size == 0 {
            return Err(CliError::Usage("--batch-size must be at least 1".into()));
        }
        if common.threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        Ok(Self {
            command,
            seed,
            limits: Limits {
                max_samples: common.max_samples,
                max_wall_ms: common.max_wall_ms,
            },
            batch_size: common.batch_size,
            record_timing: !common.no_timing,
        })
    }

    pub fn execution(&self, threads: usize) -> Result<Execution, Error> {
        let mut exec = Execution::default()
            .with_threads(threads)?
            .with_batch_size(self.batch_size)?
            .with_limits(self.limits);
        if !self.record_timing {
            exec = exec.without_timing();
        }
        Ok(exec)
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(Error),
    ReplayMismatch,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::ReplayMismatch => EXIT_INTERNAL,
            CliError::Run(e) => match e {
                Error::OutOfRange { .. }
                | Error::Degenerate(_)
                | Error::InvalidInterval { .. }
                | Error::InvalidConfidence(_)
                | Error::DimensionMismatch { .. }
                | Error::InvalidArgument(_)
                | Error::Model(_) => EXIT_USAGE,
                Error::NoYesFound { .. } => EXIT_NO,
                Error::Timeout => EXIT_INCONCLUSIVE,
                Error::DomainError(_) | Error::Oracle(_) | Error::Io(_) => EXIT_INTERNAL,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Run(e) => write!(f, "{e}"),
            CliError::ReplayMismatch => f.write_str("replayed report differs from the original"),
        }
    }
}

/// Rendered output of one run plus its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Emitted {
    pub text: String,
    pub code: i32,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn render<T: Serialize>(config: &RunConfig, body: T) -> String {
    let mut s = serde_json::to_string_pretty(&Envelope { config, body }).expect("report serializes");
    s.push('\n');
    s
}

pub fn verdict_exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Yes => EXIT_YES,
        Verdict::No => EXIT_NO,
        Verdict::Inconclusive(_) => EXIT_INCONCLUSIVE,
    }
}

/// Parses `argv` (including the program name), runs it and writes to the
/// process's standard streams.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with_io(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run_cli`] with explicit output streams.
pub fn run_cli_with_io<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    let result = match cli.command {
        Command::Replay(r) => replay(&r, &cli.common),
        command => RunConfig::resolve(command, &cli.common, env_seed.as_deref())
            .and_then(|config| execute(&config, cli.common.threads)),
    };
    match result.and_then(|emitted| write_output(&emitted, cli.common.out.as_deref(), out)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "quantcert: {e}");
            e.exit_code()
        }
    }
}

fn write_output(emitted: &Emitted, path: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    match path {
        Some(p) => fs::write(p, &emitted.text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?,
        None => out.write_all(emitted.text.as_bytes()).map_err(Error::Io)?,
    }
    Ok(emitted.code)
}

/// Runs a resolved config. `threads` only affects speed.
pub fn execute(config: &RunConfig, threads: usize) -> Result<Emitted, CliError> {
    let exec = config.execution(threads)?;
    let seed = SeedSpec::new(config.seed);
    match &config.command {
        Command::Certify(a) => certify(config, a, seed, &exec),
        Command::Hardness(a) => hardness(config, a, seed, &exec),
        Command::Simulate(a) => simulate(config, a, seed, &exec),
        Command::Plan(a) => plan(config, a),
        Command::Budget(a) => {
            let query = to_query(&a.query)?;
            let budget = worst_case_budget(&query)?;
            #[derive(Serialize)]
            struct Body<'a> {
                query: &'a ThresholdQuery,
                budget: crate::strategy::BudgetBound,
            }
            Ok(Emitted {
                text: render(config, Body { query: &query, budget }),
                code: 0,
            })
        }
        Command::Replay(_) => Err(CliError::Usage("a replay config cannot itself be a replay".into())),
    }
}

fn to_query(q: &QueryArgs) -> Result<ThresholdQuery, Error> {
    ThresholdQuery::new(q.theta, q.eta, q.delta)
}

fn read_model(path: &Path) -> Result<Arc<Model>, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Usage(format!("cannot read model {}: {e}", path.display())))?;
    let model = load_model(&bytes)
        .map_err(|e| CliError::Usage(format!("model {}: {e}", path.display())))?;
    Ok(Arc::new(model))
}

/// Reads row `row` of a CSV file of floats. Lines starting with `#` are
/// skipped.
pub fn read_center(path: &Path, row: usize) -> Result<Vec<f64>, CliError> {
    let usage = |m: String| CliError::Usage(format!("center {}: {m}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| usage(e.to_string()))?;
    let record = reader
        .records()
        .nth(row)
        .ok_or_else(|| usage(format!("has no row {row}")))?
        .map_err(|e| usage(e.to_string()))?;
    record
        .iter()
        .filter(|f| !f.is_empty())
        .map(|f| f.parse::<f64>().map_err(|_| usage(format!("'{f}' is not a number"))))
        .collect()
}

fn require<T: Copy>(value: Option<T>, flag: &str, why: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("{flag} is required {why}")))
}

fn certify(config: &RunConfig, a: &CertifyArgs, seed: SeedSpec, exec: &Execution) -> Result<Emitted, CliError> {
    let query = to_query(&a.query)?;
    let report = if let Some(p) = a.bernoulli {
        let oracle = bernoulli(p)?;
        let mut r = a.strategy.run(&query, &oracle, seed, exec)?;
        r.notes.push(format!("synthetic Bernoulli oracle with p = {p}"));
        r
    } else {
        let center_path = a
            .ball
            .center
            .as_deref()
            .ok_or_else(|| CliError::Usage("--center is required with --model or --oracle-cmd".into()))?;
        let center = read_center(center_path, a.ball.center_row)?;
        let eps = require(a.ball.eps, "--eps", "with --model or --oracle-cmd")?;
        if let Some(model_path) = &a.model {
            let model = read_model(model_path)?;
            let rq = RobustnessQuery::new(center, eps, a.ball.norm, query)?;
            certify_density(&rq, model, a.strategy, seed, exec)?
        } else if let Some(cmd) = &a.oracle_cmd {
            let label = require(a.reference_label, "--reference-label", "with --oracle-cmd")?;
            let sampler: Arc<dyn Sampler> = Arc::from(ball_sampler(a.ball.norm, center, eps)?);
            let note = sampler.note();
            let description = sampler.description();
            let argv = vec!["sh".to_string(), "-c".to_string(), cmd.clone()];
            let oracle = subprocess_oracle(&argv, sampler, label)?;
            let mut r = a.strategy.run(&query, &oracle, seed, exec)?;
            r.notes.push(format!("input distribution: {description}; reference label {label}"));
            r.notes.extend(note);
            r
        } else {
            return Err(CliError::Usage(
                "one of --model, --oracle-cmd or --bernoulli is required".into(),
            ));
        }
    };
    Ok(Emitted {
        text: render(config, &report),
        code: verdict_exit_code(report.verdict),
    })
}

fn hardness(config: &RunConfig, a: &HardnessArgs, seed: SeedSpec, exec: &Execution) -> Result<Emitted, CliError> {
    let query = to_query(&a.query)?;
    let search = match (&a.eps_grid, a.eps_lo, a.eps_hi) {
        (Some(grid), None, None) => HardnessSearch::Sweep(grid.clone()),
        (None, Some(lo), Some(hi)) => HardnessSearch::Bisect {
            lo,
            hi,
            resolution: a.resolution,
        },
        _ => {
            return Err(CliError::Usage(
                "give either --eps-grid or both --eps-lo and --eps-hi".into(),
            ))
        }
    };
    let first_eps = match &search {
        HardnessSearch::Sweep(g) => *g.first().ok_or_else(|| CliError::Usage("--eps-grid is empty".into()))?,
        HardnessSearch::Bisect { lo, .. } => *lo,
    };
    let model = read_model(&a.model)?;
    let center = read_center(&a.center, a.center_row)?;
    let template = RobustnessQuery::new(center, first_eps, a.norm, query)?;

    #[derive(Serialize)]
    struct Body<'a> {
        query: &'a ThresholdQuery,
        strategy: StrategyKind,
        search: &'a HardnessSearch,
        hardness: Option<f64>,
        probe_log: &'a [Probe],
    }
    let body = |hardness, probe_log| Body {
        query: &query,
        strategy: a.strategy,
        search: &search,
        hardness,
        probe_log,
    };
    match adversarial_hardness(model, &template, &search, a.strategy, seed, exec) {
        Ok(r) => Ok(Emitted {
            text: render(config, body(Some(r.hardness), &r.probe_log)),
            code: 0,
        }),
        Err(Error::NoYesFound { probes }) => Ok(Emitted {
            text: render(config, body(None, &probes)),
            code: EXIT_NO,
        }),
        Err(e) => Err(e.into()),
    }
}

/// `start:end:step` or a comma-separated list, every value in `[0, 1]`.
pub fn parse_p_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |m: &str| CliError::Usage(format!("--p-grid '{spec}': {m}"));
    let grid = if spec.contains(':') {
        let parts: Vec<f64> = spec
            .split(':')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("expected start:end:step"))?;
        if parts.len() != 3 {
            return Err(bad("expected start:end:step"));
        }
        linear_grid(parts[0], parts[1], parts[2])?
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("expected comma-separated numbers"))?
    };
    if grid.is_empty() || grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(bad("every p must lie in [0, 1]"));
    }
    Ok(grid)
}

fn simulate(config: &RunConfig, a: &SimulateArgs, seed: SeedSpec, exec: &Execution) -> Result<Emitted, CliError> {
    let query = to_query(&a.query)?;
    let grid = parse_p_grid(&a.p_grid)?;
    if a.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let table = complexity_sweep(&a.strategy, &query, &grid, a.trials, seed, exec)?;
    let text = match a.format {
        TableFormat::Csv => table.to_csv(),
        TableFormat::Json => render(config, &table),
    };
    Ok(Emitted { text, code: 0 })
}

fn plan(config: &RunConfig, a: &PlanArgs) -> Result<Emitted, CliError> {
    let plan = plan_tester(a.theta1, a.theta2, a.delta)?;
    let text = if a.json {
        #[derive(Serialize)]
        struct Body {
            plan: crate::tester::TesterPlan,
        }
        render(config, Body { plan })
    } else {
        format!(
            "N={}\neta1={:.6}\neta2={:.6}\nt={:.6}\n",
            plan.n_samples, plan.eta1, plan.eta2, plan.t
        )
    };
    Ok(Emitted { text, code: 0 })
}

fn without_wall_time(mut v: serde_json::Value) -> serde_json::Value {
    if let Some(obj) = v.as_object_mut() {
        obj.remove("wall_time_ms");
    }
    v
}

fn replay(a: &ReplayArgs, common: &CommonArgs) -> Result<Emitted, CliError> {
    let usage = |m: String| CliError::Usage(format!("replay {}: {m}", a.report.display()));
    let text = fs::read_to_string(&a.report).map_err(|e| usage(e.to_string()))?;
    let original: serde_json::Value = serde_json::from_str(&text).map_err(|e| usage(e.to_string()))?;
    let config_value = original
        .get("config")
        .cloned()
        .ok_or_else(|| usage("no embedded config".into()))?;
    let config: RunConfig = serde_json::from_value(config_value).map_err(|e| usage(e.to_string()))?;
    let emitted = execute(&config, common.threads)?;
    if a.verify {
        let fresh: serde_json::Value = serde_json::from_str(&emitted.text)
            .map_err(|_| usage("only JSON reports can be verified".into()))?;
        if without_wall_time(fresh) != without_wall_time(original) {
            return Err(CliError::ReplayMismatch);
        }
    }
    Ok(emitted)
}
