//! Response bodies. Field names and shapes are part of the published schemas.

use std::collections::BTreeSet;

use chrono::{DateTime, Utc};
use serde::Serialize;

use crate::analytics::{EngagementWeights, Metric, TimeWindow};
use crate::cfp::CfpEntry;
use crate::classify::TopicLabel;
use crate::ingest::{PaperRecord, Tweet};
use crate::pipeline::RunReport;
use crate::store::Snapshot;

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub error: ErrorDetail,
}

#[derive(Debug, Serialize)]
pub struct ErrorDetail {
    pub status: u16,
    pub code: String,
    pub message: String,
}

#[derive(Debug, Serialize)]
pub struct HealthBody {
    pub status: &'static str,
    pub snapshot: u64,
}

/// A stored tweet with its classification and conference tags.
#[derive(Debug, Serialize)]
pub struct TweetView<'a> {
    #[serde(flatten)]
    pub tweet: &'a Tweet,
    pub topic: Option<TopicLabel>,
    pub confidence: Option<f64>,
    pub rule_fired: Option<&'a str>,
    pub conferences: Vec<&'a str>,
}

impl<'a> TweetView<'a> {
    pub fn new(snap: &'a Snapshot, tweet: &'a Tweet) -> Self {
        let label = snap.label(&tweet.id);
        Self {
            tweet,
            topic: label.map(|l| l.label),
            confidence: label.and_then(|l| l.confidence),
            rule_fired: label.and_then(|l| l.rule_fired.as_deref()),
            conferences: snap
                .conference_tags(&tweet.id)
                .map(|s| s.iter().map(String::as_str).collect())
                .unwrap_or_default(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TweetPageBody<'a> {
    pub snapshot: u64,
    pub total: usize,
    pub offset: usize,
    pub limit: usize,
    pub items: Vec<TweetView<'a>>,
}

#[derive(Debug, Serialize)]
pub struct TopicCount {
    pub topic: TopicLabel,
    pub count: usize,
}

#[derive(Debug, Serialize)]
pub struct TopicsSummaryBody {
    pub snapshot: u64,
    pub total: usize,
    pub unlabeled: usize,
    pub topics: Vec<TopicCount>,
}

#[derive(Debug, Serialize)]
pub struct ConferenceSummary<'a> {
    pub tag: &'a str,
    pub aliases: Vec<&'a str>,
    pub tweet_count: usize,
    pub has_stats: bool,
}

#[derive(Debug, Serialize)]
pub struct ConferencesBody<'a> {
    pub snapshot: u64,
    pub conferences: Vec<ConferenceSummary<'a>>,
}

#[derive(Debug, Serialize)]
pub struct TimelineBody<'a> {
    pub snapshot: u64,
    pub computed_at: Option<DateTime<Utc>>,
    pub upcoming: &'a [CfpEntry],
    pub past: &'a [CfpEntry],
}

#[derive(Debug, Serialize)]
pub struct PaperScore<'a> {
    pub rank: usize,
    pub paper_id: &'a str,
    pub title: Option<&'a str>,
    pub url: Option<&'a str>,
    pub score: f64,
    pub tweet_count: usize,
    pub likes: u64,
    pub retweets: u64,
    pub replies: u64,
}

#[derive(Debug, Serialize)]
pub struct PopularPapersBody<'a> {
    pub snapshot: u64,
    pub window: TimeWindow,
    pub k: usize,
    pub weights: EngagementWeights,
    pub papers: Vec<PaperScore<'a>>,
}

#[derive(Debug, Serialize)]
pub struct PaperTweetsBody<'a> {
    pub snapshot: u64,
    pub paper_id: &'a str,
    pub paper: Option<&'a PaperRecord>,
    pub total: usize,
    pub offset: usize,
    pub limit: usize,
    pub items: Vec<TweetView<'a>>,
}

#[derive(Debug, Serialize)]
pub struct ScoredTweet<'a> {
    pub rank: usize,
    pub score: f64,
    #[serde(flatten)]
    pub tweet: TweetView<'a>,
}

#[derive(Debug, Serialize)]
pub struct PopularTweetsBody<'a> {
    pub snapshot: u64,
    pub window: TimeWindow,
    pub metric: Metric,
    pub k: usize,
    pub items: Vec<ScoredTweet<'a>>,
}

#[derive(Debug, Serialize)]
pub struct IngestBody {
    pub snapshot: u64,
    pub report: RunReport,
}

pub(crate) fn aliases(set: Option<&BTreeSet<String>>) -> Vec<&str> {
    set.map(|s| s.iter().map(String::as_str).collect()).unwrap_or_default()
}
