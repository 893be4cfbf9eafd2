//! Experiment commands behind the `gcsim` binary.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 internal
//! consistency failure inside a replication.

pub mod output;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::engine::{run_replication_traced, run_replications, TraceRecord, TraceSink};
use crate::error::{Error, Result, ValidationError};
use crate::model::{validate_scenario, Scenario, SchemeKind, ValidatedScenario};
use crate::oracle::{cutoff_blocking, ChainSpec};
use crate::stats::{aggregate, BlockingReport};

pub use output::{fmt12, parse_csv, report_rows, to_csv, to_json, ReportRow, CSV_HEADER};

/// Environment variable capping worker threads; 0 or unset means one per core.
pub const THREADS_ENV: &str = "GCSIM_THREADS";

#[derive(Debug, Parser)]
#[command(name = "gcsim", version, about = "Guard-channel call admission control simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a scenario file and print it normalized.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run one scenario and report its blocking metrics.
    Run(RunArgs),
    /// Run one scenario under all four schemes with common random numbers.
    Compare(RunArgs),
    /// Repeat the four-scheme comparison over a parameter grid.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Exact blocking probabilities of a cutoff-priority cell.
    Oracle {
        /// Channels S.
        channels: u32,
        /// Guard channels g.
        guard: u32,
        /// New call arrival rate.
        new_rate: f64,
        /// Handoff arrival rate.
        handoff_rate: f64,
        /// Per-call service rate.
        service_rate: f64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replications: Option<u32>,
    #[arg(long)]
    pub scheme: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Dump the event trace of replication 0.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SweepParam {
    NewCallRate,
    ExogenousHandoffRate,
    TotalChannels,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::NewCallRate => "new_call_rate",
            SweepParam::ExogenousHandoffRate => "exogenous_handoff_rate",
            SweepParam::TotalChannels => "total_channels",
        }
    }

    fn is_integer(self) -> bool {
        self == SweepParam::TotalChannels
    }

    fn apply(self, s: &mut Scenario, value: f64) {
        match self {
            SweepParam::NewCallRate => s.traffic.new_call_rate = value,
            SweepParam::ExogenousHandoffRate => s.traffic.exogenous_handoff_rate = value,
            SweepParam::TotalChannels => s.policy.total_channels = value as u32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepSpec {
    /// Evenly spaced grid from `from` to `to` inclusive. Integer parameters
    /// are rounded and must land on distinct values.
    pub fn grid(&self) -> Result<Vec<f64>> {
        let bad = |rule: &str| Error::Validation(vec![ValidationError::new("sweep", rule)]);
        if !(self.from.is_finite() && self.to.is_finite()) || self.from >= self.to {
            return Err(bad("--from must be less than --to"));
        }
        if self.steps < 2 {
            return Err(bad("--steps must be at least 2"));
        }
        if self.from < 0.0 {
            return Err(bad("sweep values must be non-negative"));
        }
        let n = self.steps - 1;
        let mut values: Vec<f64> = (0..self.steps)
            .map(|i| {
                if i == n {
                    self.to
                } else {
                    self.from + (self.to - self.from) * i as f64 / n as f64
                }
            })
            .collect();
        if self.param.is_integer() {
            if self.from.fract() != 0.0 || self.to.fract() != 0.0 {
                return Err(bad("integer parameters need integer --from and --to"));
            }
            for v in values.iter_mut() {
                *v = v.round();
            }
            if values.windows(2).any(|w| w[0] == w[1]) {
                return Err(bad("too many steps for the integer range"));
            }
        }
        Ok(values)
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => 1,
        Error::Logic(_) => 3,
        Error::Validation(_) | Error::Index { .. } | Error::Domain(_) | Error::Config(_) => 2,
    }
}

/// Worker thread cap from `GCSIM_THREADS`.
pub fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))),
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    Scenario::from_json_str(&text)
}

fn validated(s: Scenario) -> Result<ValidatedScenario> {
    validate_scenario(s).map_err(Error::Validation)
}

/// Identifier used in report rows: the config file stem.
fn scenario_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into())
}

impl RunArgs {
    fn load(&self) -> Result<Scenario> {
        let mut s = load_scenario(&self.config)?;
        if let Some(seed) = self.seed {
            s.base_seed = seed;
        }
        if let Some(n) = self.replications {
            s.replications = n;
        }
        if let Some(name) = &self.scheme {
            s.scheme = name.parse()?;
        }
        Ok(s)
    }

    fn emit(&self, rows: &[ReportRow], stdout: &mut dyn Write) -> Result<()> {
        let text = match self.format {
            Format::Csv => to_csv(rows),
            Format::Json => to_json(rows),
        };
        match &self.output {
            Some(path) => fs::write(path, text).map_err(io_err(path)),
            None => stdout
                .write_all(text.as_bytes())
                .map_err(io_err(Path::new("<stdout>"))),
        }
    }
}

/// Run every replication of `s` and aggregate them.
pub fn simulate(s: &ValidatedScenario, threads: usize) -> Result<BlockingReport> {
    let results = run_replications(s, threads).map_err(|e| match e {
        Error::Logic(msg) => Error::Logic(format!(
            "{msg}\n  rerun `gcsim run` with --trace PATH to capture the event trace of replication 0"
        )),
        other => other,
    })?;
    aggregate(&results)
}

/// The same scenario under each scheme, sharing seeds.
pub fn compare_schemes(s: &Scenario, threads: usize) -> Result<Vec<BlockingReport>> {
    SchemeKind::ALL
        .iter()
        .map(|&scheme| {
            let mut variant = s.clone();
            variant.scheme = scheme;
            simulate(&validated(variant)?, threads)
        })
        .collect()
}

struct TraceWriter<W: Write> {
    out: W,
    error: Option<std::io::Error>,
}

impl<W: Write> TraceSink for TraceWriter<W> {
    fn record(&mut self, rec: TraceRecord) {
        if self.error.is_none() {
            if let Err(e) = writeln!(self.out, "{}", rec.to_line()) {
                self.error = Some(e);
            }
        }
    }
}

fn write_trace(s: &ValidatedScenario, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut sink = TraceWriter {
        out: std::io::BufWriter::new(file),
        error: None,
    };
    run_replication_traced(s, 0, &mut sink)?;
    if let Some(e) = sink.error {
        return Err(io_err(path)(e));
    }
    sink.out.flush().map_err(io_err(path))
}

pub fn cmd_validate(config: &Path, stdout: &mut dyn Write) -> Result<()> {
    let s = validated(load_scenario(config)?)?;
    writeln!(stdout, "{}", s.to_json_pretty()).map_err(io_err(Path::new("<stdout>")))
}

pub fn cmd_run(args: &RunArgs, stdout: &mut dyn Write) -> Result<()> {
    let threads = threads_from_env()?;
    let s = validated(args.load()?)?;
    if let Some(path) = &args.trace {
        write_trace(&s, path)?;
    }
    let report = simulate(&s, threads)?;
    args.emit(&report_rows(&scenario_id(&args.config), None, &report), stdout)
}

pub fn cmd_compare(args: &RunArgs, stdout: &mut dyn Write) -> Result<()> {
    let threads = threads_from_env()?;
    let s = validated(args.load()?)?.into_inner();
    let id = scenario_id(&args.config);
    let rows: Vec<ReportRow> = compare_schemes(&s, threads)?
        .iter()
        .flat_map(|r| report_rows(&id, None, r))
        .collect();
    args.emit(&rows, stdout)
}

pub fn cmd_sweep(args: &RunArgs, sweep: &SweepSpec, stdout: &mut dyn Write) -> Result<()> {
    let threads = threads_from_env()?;
    let base = validated(args.load()?)?.into_inner();
    let id = scenario_id(&args.config);
    let mut rows = Vec::new();
    for value in sweep.grid()? {
        let mut s = base.clone();
        sweep.param.apply(&mut s, value);
        for report in compare_schemes(&s, threads)? {
            rows.extend(report_rows(&id, Some((sweep.param.name(), value)), &report));
        }
    }
    args.emit(&rows, stdout)
}

pub fn cmd_oracle(spec: &ChainSpec, stdout: &mut dyn Write) -> Result<()> {
    let b = cutoff_blocking(spec)?;
    writeln!(stdout, "P_new {}\nP_handoff {}", fmt12(b.new_call), fmt12(b.handoff))
        .map_err(io_err(Path::new("<stdout>")))
}

/// Dispatch a parsed command line, reporting failures on `stderr`.
pub fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Validate { config } => cmd_validate(config, stdout),
        Command::Run(args) => cmd_run(args, stdout),
        Command::Compare(args) => cmd_compare(args, stdout),
        Command::Sweep {
            run,
            param,
            from,
            to,
            steps,
        } => cmd_sweep(
            run,
            &SweepSpec {
                param: *param,
                from: *from,
                to: *to,
                steps: *steps,
            },
            stdout,
        ),
        Command::Oracle {
            channels,
            guard,
            new_rate,
            handoff_rate,
            service_rate,
        } => cmd_oracle(
            &ChainSpec {
                channels: *channels,
                guard: *guard,
                new_rate: *new_rate,
                handoff_rate: *handoff_rate,
                service_rate: *service_rate,
            },
            stdout,
        ),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "gcsim: {e}");
            exit_code(&e)
        }
    }
}
