//! One ingestion run: pull, normalize, dedupe, classify, tag, extract, link,
//! aggregate, commit.
//!
//! Everything derived is recomputed over the whole corpus on every run and
//! only the differences are committed, so repeating a run with the same
//! inputs and the same `now` leaves the store content unchanged.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, LazyLock, Mutex, TryLockError};

use chrono::{DateTime, Utc};
use serde::Serialize;
use thiserror::Error;

use crate::analytics::{
    conference_stats, paper_popularity, tag_conference, AnalyticsError, ConferenceRegistry, EngagementWeights,
};
use crate::cfp::{build_cfp_entry, build_timeline};
use crate::classify::{parse_labeled, train, ClassifierModel, ClassifyError, TopicClassifier, TopicLabel, DEFAULT_ALPHA};
use crate::config::Config;
use crate::ingest::{
    dedupe, load_papers, load_venues, normalize_tweet, Engagement, FileSource, FixtureLoad, MetadataError,
    PaperRecord, SourceError, Tweet, TweetSource, VenueRecord,
};
use crate::linker::{match_by_title, match_by_url, LinkSet, PaperIndex};
use crate::store::{CommitBatch, DerivedArtifacts, SnapshotData, Store, StoreError};

static BUNDLED_LABELED: &str = include_str!("../fixtures/labeled.jsonl");

static BUNDLED_MODEL: LazyLock<Arc<ClassifierModel>> = LazyLock::new(|| {
    let corpus = parse_labeled(BUNDLED_LABELED).expect("bundled fixture parses");
    Arc::new(train(&corpus, DEFAULT_ALPHA).expect("bundled fixture trains"))
});

/// The baseline model trained on the bundled template fixture.
pub fn bundled_model() -> Arc<ClassifierModel> {
    BUNDLED_MODEL.clone()
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("a pipeline run is already in progress")]
    Busy,
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Metadata(#[from] MetadataError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
}

/// Counts from one run, logged by the scheduler and printed by the CLI.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub version: u64,
    pub pulled: usize,
    pub parse_errors: usize,
    pub normalize_errors: usize,
    pub inserted: usize,
    pub updated: usize,
    pub labeled: usize,
    pub tagged: usize,
    pub linked: usize,
    pub cfp_entries: usize,
    pub tweets_total: usize,
    pub upcoming_deadlines: usize,
    pub conferences: usize,
    /// First few problems, for the log.
    pub errors: Vec<String>,
}

const MAX_REPORTED_ERRORS: usize = 20;

/// Static inputs of the derivation stages.
#[derive(Clone)]
pub struct PipelineContext {
    pub venues: Vec<VenueRecord>,
    pub papers: Vec<PaperRecord>,
    pub index: Arc<PaperIndex>,
    pub registry: ConferenceRegistry,
    pub weights: EngagementWeights,
    pub k: usize,
    pub classifier: Arc<dyn TopicClassifier + Send + Sync>,
}

impl PipelineContext {
    pub fn new(
        venues: Vec<VenueRecord>,
        papers: Vec<PaperRecord>,
        registry: ConferenceRegistry,
        weights: EngagementWeights,
        k: usize,
        classifier: Arc<dyn TopicClassifier + Send + Sync>,
    ) -> Self {
        let index = Arc::new(PaperIndex::build(&papers));
        Self {
            venues,
            papers,
            index,
            registry,
            weights,
            k,
            classifier,
        }
    }

    /// Loads metadata and the model named by the config.
    pub fn from_config(config: &Config) -> Result<Self, PipelineError> {
        let venues = config.venues_path.as_ref().map(load_venues).transpose()?.unwrap_or_default();
        let papers = config.papers_path.as_ref().map(load_papers).transpose()?.unwrap_or_default();
        let classifier: Arc<dyn TopicClassifier + Send + Sync> = match &config.model_path {
            Some(p) => Arc::new(ClassifierModel::load(p)?),
            None => bundled_model(),
        };
        Ok(Self::new(
            venues,
            papers,
            config.conferences.clone(),
            config.weights,
            config.k,
            classifier,
        ))
    }
}

/// New and refreshed tweets from a set of raw records.
struct Ingested {
    inserts: Vec<Tweet>,
    updates: Vec<Tweet>,
}

fn normalize_and_dedupe(load: FixtureLoad, base: &SnapshotData, report: &mut RunReport) -> Ingested {
    report.pulled += load.records.len();
    report.parse_errors += load.errors.len();
    for e in &load.errors {
        push_error(report, format!("line {}: {}", e.line, e.reason));
    }
    let mut tweets = Vec::with_capacity(load.records.len());
    for raw in &load.records {
        match normalize_tweet(raw) {
            Ok(t) => tweets.push(t),
            Err(e) => {
                report.normalize_errors += 1;
                push_error(report, format!("tweet {:?}: {e}", raw.id));
            }
        }
    }
    let known: HashMap<String, Engagement> =
        base.tweets.iter().map(|(id, t)| (id.clone(), t.engagement_counts())).collect();
    let out = dedupe(tweets, &known);
    report.inserted = out.inserts.len();
    report.updated = out.updates.len();
    Ingested {
        inserts: out.inserts,
        updates: out.updates,
    }
}

fn push_error(report: &mut RunReport, msg: String) {
    if report.errors.len() < MAX_REPORTED_ERRORS {
        report.errors.push(msg);
    }
}

/// Which tweets get a fresh classifier decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relabel {
    /// Only tweets without a stored label.
    Missing,
    /// Every tweet.
    All,
}

/// Adds labels, conference tags, links, CFP entries and derived artifacts to
/// `batch`, relative to `base` with the batch's tweets applied.
fn derive_into(
    ctx: &PipelineContext,
    base: &SnapshotData,
    batch: &mut CommitBatch,
    relabel: Relabel,
    now: DateTime<Utc>,
    report: &mut RunReport,
) -> Result<(), PipelineError> {
    let mut work = base.clone();
    work.apply(batch)?;

    for (id, tweet) in &work.tweets {
        let stored = work.labels.get(id);
        if relabel == Relabel::All || stored.is_none() {
            let fresh = ctx.classifier.classify(tweet);
            if stored != Some(&fresh) {
                batch.labels.push(fresh);
            }
        }
    }
    report.labeled = batch.labels.len();
    let labels: BTreeMap<&str, TopicLabel> = work
        .labels
        .iter()
        .map(|(id, l)| (id.as_str(), l.label))
        .chain(batch.labels.iter().map(|l| (l.tweet_id.as_str(), l.label)))
        .collect();

    let empty = BTreeSet::new();
    for (id, tweet) in &work.tweets {
        let tags = tag_conference(tweet, &ctx.registry);
        if &tags != work.conference_tags.get(id).unwrap_or(&empty) {
            batch.conference_tags.insert(id.clone(), tags);
        }

        for link in match_by_url(tweet, &ctx.index).into_iter().chain(match_by_title(tweet, &ctx.index)) {
            if !work.links.contains_key(&(link.paper_id.clone(), link.tweet_id.clone())) {
                batch.links.push(link);
            }
        }

        if labels.get(id.as_str()) == Some(&TopicLabel::CallForPapers) {
            if let Ok(entry) = build_cfp_entry(tweet, &ctx.venues) {
                if work.cfp_entries.get(id) != Some(&entry) {
                    batch.cfp_entries.push(entry);
                }
            }
        }
    }
    // several matches of one pair in a run collapse to the preferred one
    let links = LinkSet::from_links(std::mem::take(&mut batch.links));
    batch.links = links.links;
    report.tagged = batch.conference_tags.len();
    report.linked = batch.links.len();
    report.cfp_entries = batch.cfp_entries.len();

    // the batch now carries inserts and derived rows; replay it on the base
    let mut work = base.clone();
    work.apply(batch)?;
    let derived = derive_artifacts(ctx, &work, now)?;
    report.tweets_total = work.tweets.len();
    report.upcoming_deadlines = derived.timeline.upcoming.len();
    report.conferences = derived.stats.len();
    batch.derived = Some(derived);
    Ok(())
}

fn derive_artifacts(ctx: &PipelineContext, data: &SnapshotData, now: DateTime<Utc>) -> Result<DerivedArtifacts, PipelineError> {
    let entries: Vec<_> = data
        .cfp_entries
        .values()
        .filter(|e| data.labels.get(&e.tweet_id).map(|l| l.label) == Some(TopicLabel::CallForPapers))
        .cloned()
        .collect();
    let timeline = build_timeline(&entries, now);

    let links = LinkSet::from_links(data.links.values().cloned());
    let mut stats = BTreeMap::new();
    for tag in ctx.registry.keys() {
        let tweets = data
            .tweets
            .iter()
            .filter(|(id, _)| data.conference_tags.get(*id).is_some_and(|s| s.contains(tag)))
            .map(|(_, t)| t.as_ref());
        stats.insert(tag.clone(), conference_stats(tag, tweets, &links, &ctx.weights, ctx.k));
    }
    let popularity = paper_popularity(&links.by_paper, |id| data.tweets.get(id).map(Arc::as_ref), &ctx.weights)?;
    let papers = ctx.papers.iter().map(|p| (p.paper_id.clone(), p.clone())).collect();
    Ok(DerivedArtifacts {
        timeline,
        stats,
        popularity,
        papers,
        weights: ctx.weights,
        computed_at: Some(now),
    })
}

/// Normalizes, dedupes and commits raw records without deriving anything.
pub fn ingest_records(store: &Store, load: FixtureLoad, now: DateTime<Utc>) -> Result<RunReport, PipelineError> {
    let base = store.snapshot();
    let mut report = RunReport::default();
    let ingested = normalize_and_dedupe(load, base.data(), &mut report);
    let mut batch = CommitBatch::new(now);
    batch.inserts = ingested.inserts;
    batch.updates = ingested.updates;
    let snap = store.commit(batch)?;
    report.version = snap.version();
    report.tweets_total = snap.len();
    Ok(report)
}

/// Recomputes every derived artifact over the stored corpus and commits.
pub fn build(store: &Store, ctx: &PipelineContext, relabel: Relabel, now: DateTime<Utc>) -> Result<RunReport, PipelineError> {
    let base = store.snapshot();
    let mut report = RunReport::default();
    let mut batch = CommitBatch::new(now);
    derive_into(ctx, base.data(), &mut batch, relabel, now, &mut report)?;
    report.version = store.commit(batch)?.version();
    Ok(report)
}

/// The full pipeline over a tweet source. At most one run executes at a time;
/// a concurrent call returns [`PipelineError::Busy`] instead of waiting.
pub struct Pipeline {
    store: Arc<Store>,
    source: Arc<dyn TweetSource>,
    queries: Vec<String>,
    ctx: PipelineContext,
    running: Mutex<()>,
}

impl Pipeline {
    pub fn new(store: Arc<Store>, source: Arc<dyn TweetSource>, queries: Vec<String>, ctx: PipelineContext) -> Self {
        Self {
            store,
            source,
            queries,
            ctx,
            running: Mutex::new(()),
        }
    }

    pub fn from_config(config: &Config, store: Arc<Store>) -> Result<Self, PipelineError> {
        let ctx = PipelineContext::from_config(config)?;
        let source = Arc::new(FileSource::new(config.sources.clone()));
        Ok(Self::new(store, source, config.queries.clone(), ctx))
    }

    pub fn store(&self) -> &Arc<Store> {
        &self.store
    }

    pub fn context(&self) -> &PipelineContext {
        &self.ctx
    }

    pub fn run(&self, now: DateTime<Utc>) -> Result<RunReport, PipelineError> {
        let _guard = match self.running.try_lock() {
            Ok(g) => g,
            Err(TryLockError::WouldBlock) => return Err(PipelineError::Busy),
            Err(TryLockError::Poisoned(p)) => p.into_inner(),
        };
        let base = self.store.snapshot();
        let mut load = FixtureLoad::default();
        let queries: Vec<&str> = if self.queries.is_empty() {
            vec![""]
        } else {
            self.queries.iter().map(String::as_str).collect()
        };
        for q in queries {
            let pulled = self.source.pull(q, None)?;
            load.records.extend(pulled.records);
            load.errors.extend(pulled.errors);
        }

        let mut report = RunReport::default();
        let ingested = normalize_and_dedupe(load, base.data(), &mut report);
        let mut batch = CommitBatch::new(now);
        batch.inserts = ingested.inserts;
        batch.updates = ingested.updates;
        derive_into(&self.ctx, base.data(), &mut batch, Relabel::Missing, now, &mut report)?;
        report.version = self.store.commit(batch)?.version();
        Ok(report)
    }
}
