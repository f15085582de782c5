//! The `skilltrace` command line.
//!
//! Exit codes: 0 success, 1 usage, 2 validation or replay failure, 3 I/O.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use skilltrace_core::domain::log::{self, LogError};
use skilltrace_core::domain::ReplayError;
use skilltrace_core::metrics::{ActiveSprints, MetricsConfig, MoodMissingPolicy};
use skilltrace_core::reporting::{self, Format, ReportError, ReportKind};
use skilltrace_core::synth::{self, SynthConfig, TeamSize, RNG_ALGORITHM};
use skilltrace_service::config::{ConfigError, DATA_DIR_ENV};
use skilltrace_service::store::{self, StoreError};
use skilltrace_service::{App, ServiceConfig, SystemClock};

#[derive(Debug, Parser)]
#[command(name = "skilltrace", version, about = "Scrum activity log, skill analytics and HTTP service")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Validate a log and install it as a deployment's event log.
    Import {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        data_dir: Option<PathBuf>,
        /// Replace an existing log.
        #[arg(long)]
        force: bool,
    },
    /// Write a deployment's event log as JSONL.
    Export {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
    /// Compute an analytics artifact from a log file.
    Report {
        kind: ReportArg,
        #[arg(long)]
        log: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// participant_id,score CSV (skills-vs-external only).
        #[arg(long)]
        external: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        top_k: usize,
        #[arg(long, value_enum, default_value = "cohort-worst")]
        mood_missing: MoodArg,
        #[arg(long, value_enum, default_value = "membership")]
        active_sprints: ActiveArg,
    },
    /// Generate a synthetic cohort log.
    Synth {
        /// Full generator config as JSON; the flags below override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        teams: Option<u32>,
        /// Members per team: `N` or `LO-HI`.
        #[arg(long, value_parser = parse_team_size)]
        members: Option<TeamSize>,
        #[arg(long)]
        sprints: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replay-check a log and report the first error.
    Validate {
        #[arg(long)]
        log: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportArg {
    Skills,
    Scatter,
    HeatmapCollab,
    HeatmapMood,
    SkillsVsExternal,
}

impl From<ReportArg> for ReportKind {
    fn from(k: ReportArg) -> Self {
        match k {
            ReportArg::Skills => ReportKind::Skills,
            ReportArg::Scatter => ReportKind::Scatter,
            ReportArg::HeatmapCollab => ReportKind::HeatmapCollab,
            ReportArg::HeatmapMood => ReportKind::HeatmapMood,
            ReportArg::SkillsVsExternal => ReportKind::SkillsVsExternal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MoodArg {
    CohortWorst,
    Exclude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ActiveArg {
    Membership,
    AllTeamSprints,
}

fn parse_team_size(text: &str) -> Result<TeamSize, String> {
    let num = |s: &str| s.trim().parse::<u32>().map_err(|e| format!("{s:?}: {e}"));
    match text.split_once('-') {
        Some((lo, hi)) => Ok(TeamSize::Range([num(lo)?, num(hi)?])),
        None => Ok(TeamSize::Fixed(num(text)?)),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn io(path: &Path, err: io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

fn log_error(path: &Path, err: LogError) -> CliError {
    match err {
        LogError::Io(e) => CliError::io(path, e),
        LogError::Replay(e) => replay_error(path, &e),
    }
}

fn replay_error(path: &Path, err: &ReplayError) -> CliError {
    CliError::Validation(format!("{}: {err}", path.display()))
}

impl From<StoreError> for CliError {
    fn from(err: StoreError) -> Self {
        match err {
            StoreError::Io(e) => CliError::Io(e.to_string()),
            StoreError::Replay { path, source } => replay_error(&path, &source),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(err: ConfigError) -> Self {
        match err {
            ConfigError::Io { .. } => CliError::Io(err.to_string()),
            _ => CliError::Validation(err.to_string()),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(err: ReportError) -> Self {
        match err {
            ReportError::Csv(_) => CliError::Io(err.to_string()),
            _ => CliError::Validation(err.to_string()),
        }
    }
}

/// Parses `args` (program name first) and runs the command. Messages go to
/// `out`/`err`; the return value is the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let help = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            if help {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = write!(err, "{e}");
            return 1;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Serve { config } => serve(config.as_deref(), out),
        Command::Import { log, config, data_dir, force } => {
            let cfg = service_config(config.as_deref(), data_dir)?;
            let (events, world) = log::load_world(&log).map_err(|e| log_error(&log, e))?;
            store::install_log(&cfg.data_dir, &events, force)?;
            let issued = store::issue_missing_tokens(&cfg.token_path(), &world)?;
            say(
                out,
                format!(
                    "imported {} events into {}; issued {issued} tokens in {}",
                    events.len(),
                    cfg.data_dir.display(),
                    cfg.token_path().display()
                ),
            )
        }
        Command::Export { out: path, config, data_dir } => {
            let cfg = service_config(config.as_deref(), data_dir)?;
            let source = cfg.data_dir.join(store::LOG_FILE);
            let events = log::load(&source).map_err(|e| log_error(&source, e))?;
            emit(path.as_deref(), log::to_jsonl(&events).as_bytes(), out)
        }
        Command::Report { kind, log: path, format, external, out: target, top_k, mood_missing, active_sprints } => {
            if top_k == 0 {
                return Err(CliError::Usage("--top-k must be positive".into()));
            }
            let kind = ReportKind::from(kind);
            if kind == ReportKind::SkillsVsExternal && external.is_none() {
                return Err(CliError::Usage("skills-vs-external needs --external <csv>".into()));
            }
            let (_, world) = log::load_world(&path).map_err(|e| log_error(&path, e))?;
            let scores = match &external {
                Some(p) => Some(reporting::parse_external_scores(fs::File::open(p).map_err(|e| CliError::io(p, e))?)?),
                None => None,
            };
            let config = MetricsConfig {
                mood_missing: match mood_missing {
                    MoodArg::CohortWorst => MoodMissingPolicy::CohortWorst,
                    MoodArg::Exclude => MoodMissingPolicy::Exclude,
                },
                active_sprints: match active_sprints {
                    ActiveArg::Membership => ActiveSprints::Membership,
                    ActiveArg::AllTeamSprints => ActiveSprints::AllTeamSprints,
                },
                ..MetricsConfig::default()
            };
            let format = match format {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            };
            let body = reporting::render(kind, format, &world, &config, scores.as_ref(), top_k)?;
            emit(target.as_deref(), body.as_bytes(), out)
        }
        Command::Synth { config, teams, members, sprints, seed, out: path } => {
            let mut cfg = match &config {
                Some(p) => {
                    let text = fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
                    serde_json::from_str::<SynthConfig>(&text)
                        .map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?
                }
                None => SynthConfig::default(),
            };
            cfg.teams = teams.unwrap_or(cfg.teams);
            cfg.members_per_team = members.unwrap_or(cfg.members_per_team);
            cfg.sprints = sprints.unwrap_or(cfg.sprints);
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.rng = RNG_ALGORITHM.to_string();
            let events = synth::generate(&cfg).map_err(|e| CliError::Validation(e.to_string()))?;
            emit(Some(&path), log::to_jsonl(&events).as_bytes(), out)?;
            // the effective config, including the generator id, documents the run
            let echo = serde_json::to_string_pretty(&cfg).expect("config serializes");
            say(out, echo)
        }
        Command::Validate { log: path } => {
            let (events, world) = log::load_world(&path).map_err(|e| log_error(&path, e))?;
            say(
                out,
                format!(
                    "ok: {} events, {} participants, {} teams, {} tasks",
                    events.len(),
                    world.participants.len(),
                    world.teams.len(),
                    world.tasks.len()
                ),
            )
        }
    }
}

fn say(out: &mut dyn Write, line: String) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|e| CliError::Io(e.to_string()))
}

fn emit(path: Option<&Path>, bytes: &[u8], out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => store::atomic_write(p, bytes).map_err(|e| CliError::io(p, e)),
        None => out.write_all(bytes).map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Config file (or defaults), then the environment, then `--data-dir`.
fn service_config(path: Option<&Path>, data_dir: Option<PathBuf>) -> Result<ServiceConfig, CliError> {
    let cfg = match path {
        Some(p) => ServiceConfig::load(p)?,
        None => ServiceConfig::default().with_env_override(std::env::var_os(DATA_DIR_ENV).map(PathBuf::from)),
    };
    Ok(match data_dir {
        Some(dir) => cfg.with_env_override(Some(dir)),
        None => cfg,
    })
}

fn serve(config: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = service_config(config, None)?;
    let (app, report) = App::open(cfg.clone(), Arc::new(SystemClock))?;
    if report.truncated_bytes > 0 {
        say(out, format!("recovered: dropped {} bytes of a torn final line", report.truncated_bytes))?;
    }
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Io(e.to_string()))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(&cfg.listen_address)
            .await
            .map_err(|e| CliError::Io(format!("bind {}: {e}", cfg.listen_address)))?;
        let addr = listener.local_addr().map_err(|e| CliError::Io(e.to_string()))?;
        say(out, format!("listening on {addr} ({} events replayed)", report.events))?;
        out.flush().map_err(|e| CliError::Io(e.to_string()))?;
        skilltrace_service::serve(app, listener).await.map_err(|e| CliError::Io(e.to_string()))
    })
}
