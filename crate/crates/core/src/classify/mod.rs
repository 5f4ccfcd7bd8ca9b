//! Six-way topic classification of research tweets.
//!
//! Classification is two-layered: a fixed-priority phrase [rule layer](apply_rules)
//! decides whenever one of its triggers is present, and a multinomial naive
//! Bayes [`ClassifierModel`] handles everything else.

mod corpus;
mod eval;
mod model;
mod rules;
mod tokenize;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::Tweet;

pub use corpus::{load_labeled, parse_labeled, write_labeled, LabeledExample};
pub use eval::{cohen_kappa, evaluate, ClassMetrics, EvalReport};
pub use model::{train, ClassifierModel, TrainingMeta, DEFAULT_ALPHA};
pub use rules::{apply_rules, Rule};
pub use tokenize::{tokenize, URL_TOKEN};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("evaluation set is empty")]
    EmptySet,
    #[error("label lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("smoothing alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),
    #[error("unknown topic label {0:?}")]
    UnknownLabel(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// The six discussion topics. Declaration order is the tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TopicLabel {
    NewPaper,
    CallForPapers,
    ReadingMaterial,
    CareerOpportunity,
    TalkSeminar,
    Other,
}

impl TopicLabel {
    pub const ALL: [TopicLabel; 6] = [
        TopicLabel::NewPaper,
        TopicLabel::CallForPapers,
        TopicLabel::ReadingMaterial,
        TopicLabel::CareerOpportunity,
        TopicLabel::TalkSeminar,
        TopicLabel::Other,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TopicLabel::NewPaper => "NewPaper",
            TopicLabel::CallForPapers => "CallForPapers",
            TopicLabel::ReadingMaterial => "ReadingMaterial",
            TopicLabel::CareerOpportunity => "CareerOpportunity",
            TopicLabel::TalkSeminar => "TalkSeminar",
            TopicLabel::Other => "Other",
        }
    }
}

impl fmt::Display for TopicLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TopicLabel {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ClassifyError::UnknownLabel(s.to_string()))
    }
}

/// A classifier decision for one tweet.
///
/// `confidence` is set only by the statistical layer and `rule_fired` only by
/// the rule layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledTweet {
    pub tweet_id: String,
    pub label: TopicLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_fired: Option<String>,
}

/// Anything that can assign a topic to a tweet.
pub trait TopicClassifier {
    fn classify(&self, tweet: &Tweet) -> LabeledTweet;
}
