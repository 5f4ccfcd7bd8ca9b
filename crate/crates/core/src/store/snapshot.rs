use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use chrono::{DateTime, Utc};

use super::{CommitBatch, DerivedArtifacts, StoreError};
use crate::cfp::CfpEntry;
use crate::classify::{LabeledTweet, TopicLabel};
use crate::ingest::Tweet;
use crate::linker::PaperLink;

/// The stored content of a snapshot, without indexes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SnapshotData {
    pub tweets: BTreeMap<String, Arc<Tweet>>,
    pub labels: BTreeMap<String, LabeledTweet>,
    pub conference_tags: BTreeMap<String, BTreeSet<String>>,
    /// Keyed by `(paper_id, tweet_id)`.
    pub links: BTreeMap<(String, String), PaperLink>,
    pub cfp_entries: BTreeMap<String, CfpEntry>,
    pub derived: Arc<DerivedArtifacts>,
}

fn dangling(kind: &str, id: &str) -> StoreError {
    StoreError::Consistency(format!("{kind} refers to unknown tweet {id:?}"))
}

impl SnapshotData {
    /// Applies a batch, rejecting it whole if any id dangles.
    pub(crate) fn apply(&mut self, batch: &CommitBatch) -> Result<(), StoreError> {
        let mut next = self.tweets.clone();
        for t in &batch.inserts {
            if next.insert(t.id.clone(), Arc::new(t.clone())).is_some() {
                return Err(StoreError::Consistency(format!("tweet {:?} inserted twice", t.id)));
            }
        }
        for t in &batch.updates {
            match next.get_mut(&t.id) {
                Some(slot) => *slot = Arc::new(t.clone()),
                None => return Err(dangling("update", &t.id)),
            }
        }
        if let Some(l) = batch.labels.iter().find(|l| !next.contains_key(&l.tweet_id)) {
            return Err(dangling("label", &l.tweet_id));
        }
        if let Some(id) = batch.conference_tags.keys().find(|id| !next.contains_key(*id)) {
            return Err(dangling("conference tag", id));
        }
        if let Some(l) = batch.links.iter().find(|l| !next.contains_key(&l.tweet_id)) {
            return Err(dangling("link", &l.tweet_id));
        }
        if let Some(e) = batch.cfp_entries.iter().find(|e| !next.contains_key(&e.tweet_id)) {
            return Err(dangling("cfp entry", &e.tweet_id));
        }
        if let Some(derived) = &batch.derived {
            let stats_tweets = derived.timeline.entries().map(|e| &e.tweet_id);
            if let Some(id) = stats_tweets.into_iter().find(|id| !next.contains_key(*id)) {
                return Err(dangling("timeline", id));
            }
        }

        self.tweets = next;
        for l in &batch.labels {
            self.labels.insert(l.tweet_id.clone(), l.clone());
        }
        for (id, tags) in &batch.conference_tags {
            self.conference_tags.insert(id.clone(), tags.clone());
        }
        for l in &batch.links {
            self.links
                .entry((l.paper_id.clone(), l.tweet_id.clone()))
                .and_modify(|cur| {
                    if (l.method, &l.evidence) < (cur.method, &cur.evidence) {
                        *cur = l.clone();
                    }
                })
                .or_insert_with(|| l.clone());
        }
        for e in &batch.cfp_entries {
            self.cfp_entries.insert(e.tweet_id.clone(), e.clone());
        }
        if let Some(derived) = &batch.derived {
            self.derived = Arc::new(derived.clone());
        }
        Ok(())
    }
}

/// An immutable, versioned view of the store with its query indexes.
#[derive(Debug)]
pub struct Snapshot {
    version: u64,
    created_at: DateTime<Utc>,
    data: SnapshotData,
    /// Tweets in query order: newest first, then id ascending.
    order: Vec<Arc<Tweet>>,
    by_topic: HashMap<TopicLabel, Vec<usize>>,
    by_conference: BTreeMap<String, Vec<usize>>,
    by_paper: BTreeMap<String, Vec<usize>>,
}

fn query_order(a: &Tweet, b: &Tweet) -> std::cmp::Ordering {
    b.time_utc.cmp(&a.time_utc).then_with(|| a.id.cmp(&b.id))
}

impl Snapshot {
    pub fn empty() -> Self {
        Self::build(0, DateTime::<Utc>::UNIX_EPOCH, SnapshotData::default(), None)
    }

    /// Builds indexes. A precomputed `order` is used when it lists exactly the
    /// stored tweets.
    pub(crate) fn build(
        version: u64,
        created_at: DateTime<Utc>,
        data: SnapshotData,
        order: Option<Vec<String>>,
    ) -> Self {
        let from_index = order.and_then(|ids| {
            if ids.len() != data.tweets.len() {
                return None;
            }
            let tweets: Option<Vec<Arc<Tweet>>> = ids.iter().map(|id| data.tweets.get(id).cloned()).collect();
            tweets.filter(|ts| ts.windows(2).all(|w| query_order(&w[0], &w[1]).is_lt()))
        });
        let order = from_index.unwrap_or_else(|| {
            let mut ts: Vec<Arc<Tweet>> = data.tweets.values().cloned().collect();
            ts.sort_by(|a, b| query_order(a, b));
            ts
        });

        let position: HashMap<&str, usize> = order.iter().enumerate().map(|(i, t)| (t.id.as_str(), i)).collect();
        let mut by_topic: HashMap<TopicLabel, Vec<usize>> = HashMap::new();
        for l in data.labels.values() {
            by_topic.entry(l.label).or_default().push(position[l.tweet_id.as_str()]);
        }
        let mut by_conference: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (id, tags) in &data.conference_tags {
            for tag in tags {
                by_conference.entry(tag.clone()).or_default().push(position[id.as_str()]);
            }
        }
        let mut by_paper: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (paper, tweet) in data.links.keys() {
            by_paper.entry(paper.clone()).or_default().push(position[tweet.as_str()]);
        }
        for v in by_topic.values_mut().chain(by_conference.values_mut()).chain(by_paper.values_mut()) {
            v.sort_unstable();
            v.dedup();
        }

        Self {
            version,
            created_at,
            data,
            order,
            by_topic,
            by_conference,
            by_paper,
        }
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn created_at(&self) -> DateTime<Utc> {
        self.created_at
    }

    pub fn data(&self) -> &SnapshotData {
        &self.data
    }

    pub fn derived(&self) -> &DerivedArtifacts {
        &self.data.derived
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn tweet(&self, id: &str) -> Option<&Arc<Tweet>> {
        self.data.tweets.get(id)
    }

    pub fn label(&self, id: &str) -> Option<&LabeledTweet> {
        self.data.labels.get(id)
    }

    pub fn conference_tags(&self, id: &str) -> Option<&BTreeSet<String>> {
        self.data.conference_tags.get(id)
    }

    /// Tweets in query order.
    pub fn ordered(&self) -> &[Arc<Tweet>] {
        &self.order
    }

    pub fn links_for_paper<'a>(&'a self, paper_id: &'a str) -> impl Iterator<Item = &'a PaperLink> + 'a {
        self.data
            .links
            .range((paper_id.to_string(), String::new())..)
            .take_while(move |((p, _), _)| p == paper_id)
            .map(|(_, l)| l)
    }

    /// Paper id to linked tweet ids, sorted.
    pub fn links_by_paper(&self) -> BTreeMap<String, Vec<String>> {
        let mut out: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (paper, tweet) in self.data.links.keys() {
            out.entry(paper.clone()).or_default().push(tweet.clone());
        }
        out
    }

    pub fn conference_tags_in_use(&self) -> impl Iterator<Item = (&String, usize)> {
        self.by_conference.iter().map(|(t, v)| (t, v.len()))
    }

    pub fn topic_counts(&self) -> BTreeMap<TopicLabel, usize> {
        TopicLabel::ALL
            .into_iter()
            .map(|l| (l, self.by_topic.get(&l).map_or(0, Vec::len)))
            .collect()
    }

    pub(crate) fn topic_positions(&self, topic: TopicLabel) -> &[usize] {
        self.by_topic.get(&topic).map_or(&[], Vec::as_slice)
    }

    pub(crate) fn conference_positions(&self, tag: &str) -> &[usize] {
        self.by_conference.get(tag).map_or(&[], Vec::as_slice)
    }

    pub(crate) fn paper_positions(&self, paper: &str) -> &[usize] {
        self.by_paper.get(paper).map_or(&[], Vec::as_slice)
    }
}
