//! The JSON configuration file shared by the CLI and the API server.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use chrono::{NaiveDate, NaiveTime};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::analytics::{ConferenceRegistry, EngagementWeights, DEFAULT_TOP_K};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// A conference during which ingestion runs at the live interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiveConference {
    pub tag: String,
    pub start: NaiveDate,
    /// Inclusive.
    pub end: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleConfig {
    /// Time of day (UTC) of the daily run, `HH:MM` or `HH:MM:SS`.
    #[serde(deserialize_with = "de_time", serialize_with = "ser_time")]
    pub daily_at: NaiveTime,
    #[serde(default)]
    pub live_conferences: Vec<LiveConference>,
    #[serde(default = "default_interval")]
    pub live_interval_secs: u64,
    /// Whether `serve` also runs the scheduler.
    #[serde(default = "default_true")]
    pub enabled: bool,
}

fn default_true() -> bool {
    true
}

fn default_interval() -> u64 {
    3600
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self {
            daily_at: NaiveTime::from_hms_opt(6, 0, 0).unwrap(),
            live_conferences: Vec::new(),
            live_interval_secs: default_interval(),
            enabled: true,
        }
    }
}

fn de_time<'de, D: Deserializer<'de>>(d: D) -> Result<NaiveTime, D::Error> {
    let s = String::deserialize(d)?;
    NaiveTime::parse_from_str(&s, "%H:%M:%S")
        .or_else(|_| NaiveTime::parse_from_str(&s, "%H:%M"))
        .map_err(|_| serde::de::Error::custom(format!("invalid time of day {s:?}")))
}

fn ser_time<S: Serializer>(t: &NaiveTime, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.format("%H:%M:%S").to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default = "default_store_dir")]
    pub store_dir: PathBuf,
    /// Tweet JSON-Lines dumps read on every ingest.
    #[serde(default)]
    pub sources: Vec<PathBuf>,
    /// Source tags to pull; empty pulls everything.
    #[serde(default)]
    pub queries: Vec<String>,
    #[serde(default)]
    pub venues_path: Option<PathBuf>,
    #[serde(default)]
    pub papers_path: Option<PathBuf>,
    /// Conference tag to its hashtag aliases.
    #[serde(default)]
    pub conferences: ConferenceRegistry,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub weights: EngagementWeights,
    #[serde(default = "default_k")]
    pub k: usize,
    /// Classifier model; the bundled baseline is used when absent.
    #[serde(default)]
    pub model_path: Option<PathBuf>,
    #[serde(default)]
    pub cors_origin: Option<String>,
    #[serde(default = "default_host")]
    pub host: String,
    #[serde(default = "default_port")]
    pub port: u16,
}

fn default_host() -> String {
    "127.0.0.1".into()
}

fn default_store_dir() -> PathBuf {
    PathBuf::from("nlpulse-store")
}

fn default_k() -> usize {
    DEFAULT_TOP_K
}

fn default_port() -> u16 {
    8080
}

impl Default for Config {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults deserialize")
    }
}

impl Config {
    /// Reads and validates a config file. Relative paths inside it resolve
    /// against the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut config = Self::from_json(&text)?;
        if let Some(base) = path.parent() {
            config.rebase(base);
        }
        Ok(config)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let mut config: Config = serde_json::from_str(text)?;
        config.normalize();
        config.validate()?;
        Ok(config)
    }

    fn normalize(&mut self) {
        let registry: BTreeMap<String, BTreeSet<String>> = std::mem::take(&mut self.conferences)
            .into_iter()
            .map(|(tag, aliases)| {
                let tag = tag.trim_start_matches('#').to_lowercase();
                let mut aliases: BTreeSet<String> =
                    aliases.iter().map(|a| a.trim_start_matches('#').to_lowercase()).collect();
                aliases.insert(tag.clone());
                (tag, aliases)
            })
            .collect();
        self.conferences = registry;
        for live in &mut self.schedule.live_conferences {
            live.tag = live.tag.trim_start_matches('#').to_lowercase();
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        if self.schedule.live_interval_secs < 60 {
            return invalid(format!(
                "schedule.live_interval_secs must be at least 60, got {}",
                self.schedule.live_interval_secs
            ));
        }
        for live in &self.schedule.live_conferences {
            if live.start > live.end {
                return invalid(format!("live conference {} ends before it starts", live.tag));
            }
        }
        if self.k == 0 {
            return invalid("k must be positive".into());
        }
        self.weights.validate().map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.store_dir);
        self.sources.iter_mut().for_each(fix);
        self.venues_path.iter_mut().for_each(fix);
        self.papers_path.iter_mut().for_each(fix);
        self.model_path.iter_mut().for_each(fix);
    }
}
