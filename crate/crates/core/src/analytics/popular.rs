use std::cmp::Ordering;
use std::str::FromStr;

use chrono::{DateTime, Duration, NaiveDate, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use super::{engagement, AnalyticsError, EngagementWeights};
use crate::ingest::Tweet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    LastWeek,
    LastMonth,
    AllTime,
    Custom,
}

impl FromStr for WindowKind {
    type Err = AnalyticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "last_week" => Ok(Self::LastWeek),
            "last_month" => Ok(Self::LastMonth),
            "all_time" => Ok(Self::AllTime),
            "custom" => Ok(Self::Custom),
            _ => Err(AnalyticsError::Unknown {
                what: "window",
                value: s.to_string(),
            }),
        }
    }
}

/// Half-open interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub kind: WindowKind,
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
}

impl TimeWindow {
    pub fn custom(start: DateTime<Utc>, end: DateTime<Utc>) -> Result<Self, AnalyticsError> {
        if start >= end {
            return Err(AnalyticsError::InvalidWindow);
        }
        Ok(Self {
            kind: WindowKind::Custom,
            start,
            end,
        })
    }

    pub fn last_week(now: DateTime<Utc>) -> Self {
        Self {
            kind: WindowKind::LastWeek,
            start: now - Duration::days(7),
            end: now,
        }
    }

    pub fn last_month(now: DateTime<Utc>) -> Self {
        Self {
            kind: WindowKind::LastMonth,
            start: now - Duration::days(30),
            end: now,
        }
    }

    pub fn all_time() -> Self {
        let day = |y, m, d| Utc.from_utc_datetime(&NaiveDate::from_ymd_opt(y, m, d).unwrap().into());
        Self {
            kind: WindowKind::AllTime,
            start: day(2006, 1, 1),
            end: day(9999, 12, 31),
        }
    }

    /// Relative windows anchored at `now`. Custom windows need explicit bounds.
    pub fn of_kind(kind: WindowKind, now: DateTime<Utc>) -> Result<Self, AnalyticsError> {
        match kind {
            WindowKind::LastWeek => Ok(Self::last_week(now)),
            WindowKind::LastMonth => Ok(Self::last_month(now)),
            WindowKind::AllTime => Ok(Self::all_time()),
            WindowKind::Custom => Err(AnalyticsError::InvalidWindow),
        }
    }

    pub fn contains(&self, t: DateTime<Utc>) -> bool {
        self.start <= t && t < self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Likes,
    Retweets,
    Engagement,
}

impl FromStr for Metric {
    type Err = AnalyticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "likes" => Ok(Self::Likes),
            "retweets" => Ok(Self::Retweets),
            "engagement" => Ok(Self::Engagement),
            _ => Err(AnalyticsError::Unknown {
                what: "metric",
                value: s.to_string(),
            }),
        }
    }
}

impl Metric {
    pub fn value(self, tweet: &Tweet, weights: &EngagementWeights) -> f64 {
        match self {
            Metric::Likes => tweet.likes as f64,
            Metric::Retweets => tweet.retweets as f64,
            Metric::Engagement => engagement(tweet, weights),
        }
    }

    fn compare(self, a: &Tweet, b: &Tweet, weights: &EngagementWeights) -> Ordering {
        match self {
            Metric::Likes => a.likes.cmp(&b.likes),
            Metric::Retweets => a.retweets.cmp(&b.retweets),
            Metric::Engagement => engagement(a, weights).total_cmp(&engagement(b, weights)),
        }
    }
}

/// Top `k` tweets inside `window` by `metric`; ties go to the newer tweet,
/// then the smaller id.
pub fn popular_tweets<'a>(
    tweets: impl IntoIterator<Item = &'a Tweet>,
    window: &TimeWindow,
    metric: Metric,
    k: usize,
    weights: &EngagementWeights,
) -> Vec<&'a Tweet> {
    let mut hits: Vec<&Tweet> = tweets.into_iter().filter(|t| window.contains(t.time_utc)).collect();
    hits.sort_by(|a, b| {
        metric
            .compare(b, a, weights)
            .then_with(|| b.time_utc.cmp(&a.time_utc))
            .then_with(|| a.id.cmp(&b.id))
    });
    hits.truncate(k);
    hits
}
