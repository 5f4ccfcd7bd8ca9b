use std::sync::Arc;

use chrono::{DateTime, NaiveDate, Utc};

use super::{Snapshot, StoreError};
use crate::classify::TopicLabel;
use crate::ingest::Tweet;

pub const MAX_PAGE_LIMIT: usize = 200;

/// One filter over a snapshot. A query intersects its selectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    Topic(TopicLabel),
    Conference(String),
    Paper(String),
    /// Half-open `[from, to)`; either side may be open.
    TimeRange {
        from: Option<DateTime<Utc>>,
        to: Option<DateTime<Utc>>,
    },
    Id(String),
}

fn parse_instant(value: &str) -> Option<DateTime<Utc>> {
    DateTime::parse_from_rfc3339(value)
        .map(|d| d.with_timezone(&Utc))
        .ok()
        .or_else(|| {
            NaiveDate::parse_from_str(value, "%Y-%m-%d")
                .ok()
                .map(|d| d.and_hms_opt(0, 0, 0).unwrap().and_utc())
        })
}

impl Selector {
    /// Parses a `key=value` selector as used in query strings.
    pub fn parse(key: &str, value: &str) -> Result<Self, StoreError> {
        let unknown = || StoreError::UnknownSelector(format!("{key}={value}"));
        match key {
            "topic" => value.parse().map(Selector::Topic).map_err(|_| unknown()),
            "conference" => Ok(Selector::Conference(value.trim().trim_start_matches('#').to_lowercase())),
            "paper" => Ok(Selector::Paper(value.to_string())),
            "id" => Ok(Selector::Id(value.to_string())),
            "from" => Ok(Selector::TimeRange {
                from: Some(parse_instant(value).ok_or_else(unknown)?),
                to: None,
            }),
            "to" => Ok(Selector::TimeRange {
                from: None,
                to: Some(parse_instant(value).ok_or_else(unknown)?),
            }),
            _ => Err(unknown()),
        }
    }

    fn positions<'s>(&self, snap: &'s Snapshot) -> Option<&'s [usize]> {
        match self {
            Selector::Topic(t) => Some(snap.topic_positions(*t)),
            Selector::Conference(c) => Some(snap.conference_positions(c)),
            Selector::Paper(p) => Some(snap.paper_positions(p)),
            _ => None,
        }
    }

    fn accepts(&self, snap: &Snapshot, tweet: &Tweet) -> bool {
        match self {
            Selector::Topic(t) => snap.label(&tweet.id).is_some_and(|l| l.label == *t),
            Selector::Conference(c) => snap.conference_tags(&tweet.id).is_some_and(|tags| tags.contains(c)),
            Selector::Paper(p) => snap.links_for_paper(p).any(|l| l.tweet_id == tweet.id),
            Selector::TimeRange { from, to } => {
                from.is_none_or(|f| tweet.time_utc >= f) && to.is_none_or(|t| tweet.time_utc < t)
            }
            Selector::Id(id) => tweet.id == *id,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Page {
    pub offset: usize,
    pub limit: usize,
}

impl Default for Page {
    fn default() -> Self {
        Self { offset: 0, limit: 20 }
    }
}

#[derive(Debug, Clone)]
pub struct QueryPage {
    pub total: usize,
    pub items: Vec<Arc<Tweet>>,
}

/// Tweets matching every selector, newest first then by id, paginated.
pub fn query(snap: &Snapshot, selectors: &[Selector], page: Page) -> Result<QueryPage, StoreError> {
    if page.limit > MAX_PAGE_LIMIT {
        return Err(StoreError::PageTooLarge(page.limit));
    }
    let order = snap.ordered();

    if let [Selector::Id(id)] = selectors {
        let found: Vec<_> = snap.tweet(id).cloned().into_iter().collect();
        let total = found.len();
        let items = found.into_iter().skip(page.offset).take(page.limit).collect();
        return Ok(QueryPage { total, items });
    }

    let seed = selectors
        .iter()
        .filter_map(|s| s.positions(snap))
        .min_by_key(|p| p.len());
    let matches = |t: &Tweet| selectors.iter().all(|s| s.accepts(snap, t));

    let hits: Vec<&Arc<Tweet>> = match seed {
        Some(positions) => positions.iter().map(|&i| &order[i]).filter(|t| matches(t)).collect(),
        None => order.iter().filter(|t| matches(t)).collect(),
    };
    Ok(QueryPage {
        total: hits.len(),
        items: hits.into_iter().skip(page.offset).take(page.limit).cloned().collect(),
    })
}
