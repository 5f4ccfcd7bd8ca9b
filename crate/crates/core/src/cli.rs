//! The `nlpulse` command line.
//!
//! Every command prints one JSON document on stdout. Failures print
//! `{"error": {"kind", "message"}}` on stderr and exit with 1 (usage),
//! 2 (io) or 3 (validation).

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::{DateTime, Utc};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::api::{serve, ApiError};
use crate::cfp::timeline_to_ics;
use crate::classify::{evaluate, load_labeled, train, ClassifierModel, ClassifyError, TopicClassifier, DEFAULT_ALPHA};
use crate::config::{Config, ConfigError};
use crate::ingest::{load_tweet_fixtures, FixtureLoad, MetadataError, SourceError};
use crate::linker::write_links;
use crate::pipeline::{build, ingest_records, PipelineContext, PipelineError, Relabel};
use crate::store::{Store, StoreError};

#[derive(Debug, Parser)]
#[command(name = "nlpulse", version, about = "Curate, classify and analyze research tweets")]
pub struct Cli {
    /// JSON config file shared with the API server.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Store directory; overrides the config.
    #[arg(long, global = true)]
    pub store: Option<PathBuf>,
    /// Reference time for the run, RFC 3339 (default: now).
    #[arg(long, global = true, value_parser = parse_now)]
    pub now: Option<DateTime<Utc>>,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_now(s: &str) -> Result<DateTime<Utc>, String> {
    DateTime::parse_from_rfc3339(s)
        .map(|d| d.with_timezone(&Utc))
        .map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize, dedupe and store tweet dumps.
    Ingest {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Train the naive Bayes layer on a labeled JSON-Lines corpus.
    Train {
        labeled: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
    },
    /// Relabel every stored tweet with a model.
    Classify {
        #[arg(long)]
        model: PathBuf,
    },
    /// Extract deadlines, link papers, aggregate statistics and commit.
    Build {
        /// Model for tweets without a label; defaults to the config's or the bundled one.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Evaluate a model on held-out labeled tweets.
    Eval {
        #[arg(long)]
        model: PathBuf,
        heldout: PathBuf,
    },
    /// Write the timeline, statistics or links of the live snapshot.
    Export {
        #[arg(long, value_enum)]
        what: ExportWhat,
        #[arg(short, long)]
        output: PathBuf,
        /// Only this conference's statistics.
        #[arg(long)]
        tag: Option<String>,
    },
    /// Run the JSON API and the scheduler.
    Serve {
        #[arg(long)]
        port: Option<u16>,
        /// Serve only; never run the pipeline on a timer.
        #[arg(long)]
        no_schedule: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportWhat {
    Timeline,
    Stats,
    Links,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Validation(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Validation(_) => "validation",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Validation(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SourceError> for CliError {
    fn from(e: SourceError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<MetadataError> for CliError {
    fn from(e: MetadataError) -> Self {
        match e {
            MetadataError::FileNotFound(_) | MetadataError::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<StoreError> for CliError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Busy => CliError::Validation(e.to_string()),
            PipelineError::Source(e) => e.into(),
            PipelineError::Store(e) => e.into(),
            PipelineError::Metadata(e) => e.into(),
            PipelineError::Classify(e) => e.into(),
            PipelineError::Analytics(e) => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ApiError> for CliError {
    fn from(e: ApiError) -> Self {
        match e {
            ApiError::Pipeline(p) => p.into(),
            other => CliError::Io(other.to_string()),
        }
    }
}

/// Parses `args` and runs the command, writing to the given streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli, out),
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => Err(CliError::Usage(e.render().to_string().trim().to_string())),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let body = json!({"error": {"kind": e.kind(), "message": e.message()}});
            let _ = writeln!(err, "{body}");
            e.exit_code()
        }
    }
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let filter = tracing_subscriber::EnvFilter::try_from_env("NLPULSE_LOG")
        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info"));
    tracing_subscriber::fmt().with_env_filter(filter).with_writer(std::io::stderr).init();
    run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn load_config(cli: &Cli) -> Result<Config, CliError> {
    let mut config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(dir) = &cli.store {
        config.store_dir = dir.clone();
    }
    Ok(config)
}

fn load_model(path: &Path) -> Result<ClassifierModel, CliError> {
    if !path.exists() {
        return Err(CliError::Io(format!("model file not found: {}", path.display())));
    }
    Ok(ClassifierModel::load(path)?)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let now = cli.now.unwrap_or_else(Utc::now);
    let mut config = load_config(&cli)?;
    match &cli.command {
        Command::Ingest { files } => {
            let mut load = FixtureLoad::default();
            for f in files {
                let l = load_tweet_fixtures(f)?;
                load.records.extend(l.records);
                load.errors.extend(l.errors);
            }
            let store = Store::open(&config.store_dir)?;
            emit(out, &ingest_records(&store, load, now)?)
        }
        Command::Train { labeled, output, alpha } => {
            if !labeled.exists() {
                return Err(CliError::Io(format!("file not found: {}", labeled.display())));
            }
            let corpus = load_labeled(labeled)?;
            let mut model = train(&corpus, *alpha)?;
            model.training_meta.corpus_until = corpus.iter().map(|e| e.tweet.time_utc).max();
            model.save(output)?;
            emit(
                out,
                &json!({
                    "model": output,
                    "vocabulary": model.vocabulary.len(),
                    "training_meta": model.training_meta,
                }),
            )
        }
        Command::Classify { model } => {
            let model = load_model(model)?;
            config.model_path = None;
            let ctx = context_with(&config, Arc::new(model))?;
            let store = Store::open(&config.store_dir)?;
            let report = build(&store, &ctx, Relabel::All, now)?;
            let snap = store.snapshot();
            emit(
                out,
                &json!({
                    "version": report.version,
                    "relabeled": report.labeled,
                    "topics": snap.topic_counts().into_iter().map(|(k, v)| (k.as_str(), v)).collect::<std::collections::BTreeMap<_, _>>(),
                }),
            )
        }
        Command::Build { model } => {
            let ctx = match model {
                Some(p) => context_with(&config, Arc::new(load_model(p)?))?,
                None => PipelineContext::from_config(&config)?,
            };
            let store = Store::open(&config.store_dir)?;
            emit(out, &build(&store, &ctx, Relabel::Missing, now)?)
        }
        Command::Eval { model, heldout } => {
            let model = load_model(model)?;
            if !heldout.exists() {
                return Err(CliError::Io(format!("file not found: {}", heldout.display())));
            }
            let set = load_labeled(heldout)?;
            emit(out, &evaluate(&model, &set)?)
        }
        Command::Export { what, output, tag } => {
            let store = Store::open(&config.store_dir)?;
            let snap = store.snapshot();
            let derived = snap.derived();
            let mut w = BufWriter::new(File::create(output)?);
            let count = match what {
                ExportWhat::Timeline => {
                    if output.extension().is_some_and(|e| e.eq_ignore_ascii_case("ics")) {
                        w.write_all(timeline_to_ics(&derived.timeline).as_bytes())?;
                    } else {
                        serde_json::to_writer_pretty(&mut w, &derived.timeline)?;
                    }
                    derived.timeline.upcoming.len() + derived.timeline.past.len()
                }
                ExportWhat::Stats => match tag {
                    Some(t) => {
                        let t = t.trim_start_matches('#').to_lowercase();
                        let s = derived
                            .stats
                            .get(&t)
                            .ok_or_else(|| CliError::Validation(format!("no statistics for conference {t:?}")))?;
                        serde_json::to_writer_pretty(&mut w, s)?;
                        1
                    }
                    None => {
                        serde_json::to_writer_pretty(&mut w, &derived.stats)?;
                        derived.stats.len()
                    }
                },
                ExportWhat::Links => {
                    let links: Vec<_> = snap.data().links.values().cloned().collect();
                    write_links(&mut w, &links)?;
                    links.len()
                }
            };
            w.flush()?;
            emit(
                out,
                &json!({"what": format!("{what:?}").to_lowercase(), "output": output, "count": count, "version": snap.version()}),
            )
        }
        Command::Serve { port, no_schedule } => {
            if let Some(p) = port {
                config.port = *p;
            }
            if *no_schedule {
                config.schedule.enabled = false;
            }
            let store = Arc::new(Store::open(&config.store_dir)?);
            let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
            rt.block_on(serve(&config, store))?;
            emit(out, &json!({"status": "stopped"}))
        }
    }
}

fn context_with(config: &Config, model: Arc<dyn TopicClassifier + Send + Sync>) -> Result<PipelineContext, CliError> {
    let base = PipelineContext::from_config(&Config {
        model_path: None,
        ..config.clone()
    })?;
    Ok(PipelineContext { classifier: model, ..base })
}
