//! Popularity scoring, conference statistics, and windowed popular tweets.

mod conference;
mod popular;
mod stats;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::Tweet;

pub use conference::{tag_conference, ConferenceRegistry};
pub use popular::{popular_tweets, Metric, TimeWindow, WindowKind};
pub use stats::{conference_stats, ConferenceStats, RankedCount, RankedScore, StatsAccumulator};

pub const DEFAULT_TOP_K: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error("linked tweet {0:?} is not in the corpus")]
    DanglingTweetId(String),
    #[error("invalid time window: start must precede end")]
    InvalidWindow,
    #[error("weights must be finite and non-negative")]
    InvalidWeights,
    #[error("unknown {what} {value:?}")]
    Unknown { what: &'static str, value: String },
}

/// Weights of the engagement score. The tweet itself counts `w_tweet`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngagementWeights {
    pub w_tweet: f64,
    pub w_like: f64,
    pub w_retweet: f64,
    pub w_reply: f64,
}

impl Default for EngagementWeights {
    fn default() -> Self {
        Self {
            w_tweet: 1.0,
            w_like: 1.0,
            w_retweet: 2.0,
            w_reply: 2.0,
        }
    }
}

impl EngagementWeights {
    pub fn validate(&self) -> Result<(), AnalyticsError> {
        let ok = [self.w_tweet, self.w_like, self.w_retweet, self.w_reply]
            .iter()
            .all(|w| w.is_finite() && *w >= 0.0);
        if ok {
            Ok(())
        } else {
            Err(AnalyticsError::InvalidWeights)
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            w_tweet: self.w_tweet * c,
            w_like: self.w_like * c,
            w_retweet: self.w_retweet * c,
            w_reply: self.w_reply * c,
        }
    }
}

pub fn engagement(tweet: &Tweet, weights: &EngagementWeights) -> f64 {
    weights.w_tweet
        + weights.w_like * tweet.likes as f64
        + weights.w_retweet * tweet.retweets as f64
        + weights.w_reply * tweet.replies as f64
}

/// Sum of linked tweets' engagement per paper. Papers without links are
/// absent.
pub fn paper_popularity<'a, F>(
    by_paper: &std::collections::BTreeMap<String, Vec<String>>,
    lookup: F,
    weights: &EngagementWeights,
) -> Result<std::collections::BTreeMap<String, f64>, AnalyticsError>
where
    F: Fn(&str) -> Option<&'a Tweet>,
{
    let mut scores = std::collections::BTreeMap::new();
    for (paper, tweet_ids) in by_paper {
        if tweet_ids.is_empty() {
            continue;
        }
        let mut score = 0.0;
        for id in tweet_ids {
            let t = lookup(id).ok_or_else(|| AnalyticsError::DanglingTweetId(id.clone()))?;
            score += engagement(t, weights);
        }
        scores.insert(paper.clone(), score);
    }
    Ok(scores)
}

/// Scores in descending order, ties by id.
pub fn rank_scores<'a>(scores: impl IntoIterator<Item = (&'a String, &'a f64)>) -> Vec<RankedScore> {
    let mut ranked: Vec<RankedScore> = scores
        .into_iter()
        .map(|(id, s)| RankedScore {
            paper_id: id.clone(),
            score: *s,
        })
        .collect();
    ranked.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.paper_id.cmp(&b.paper_id)));
    ranked
}


#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, HashMap};

    use chrono::{TimeZone, Utc};

    use super::test_support::tweet;
    use super::*;

    #[test]
    fn engagement_formula() {
        let at = Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap();
        let w = EngagementWeights::default();
        assert_eq!(engagement(&tweet("a", at, 0, 0, 0), &w), 1.0);
        assert_eq!(engagement(&tweet("a", at, 3, 1, 0), &w), 6.0);
        assert_eq!(engagement(&tweet("a", at, 3, 1, 7), &w.scaled(0.0)), 0.0);
    }

    #[test]
    fn popularity_sums() {
        let at = Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap();
        let tweets: HashMap<String, Tweet> = [tweet("a", at, 3, 1, 0), tweet("b", at, 0, 1, 1)]
            .into_iter()
            .map(|t| (t.id.clone(), t))
            .collect();
        let links = BTreeMap::from([
            ("p1".to_string(), vec!["a".to_string(), "b".to_string()]),
            ("p2".to_string(), vec![]),
        ]);
        let w = EngagementWeights::default();
        let scores = paper_popularity(&links, |id| tweets.get(id), &w).unwrap();
        assert_eq!(scores.get("p1"), Some(&11.0));
        assert!(!scores.contains_key("p2"));

        let dangling = BTreeMap::from([("p".to_string(), vec!["zzz".to_string()])]);
        assert_eq!(
            paper_popularity(&dangling, |id| tweets.get(id), &w),
            Err(AnalyticsError::DanglingTweetId("zzz".into()))
        );
    }

    #[test]
    fn ranking_ties_by_id() {
        let scores = BTreeMap::from([("b".to_string(), 2.0), ("a".to_string(), 2.0), ("c".to_string(), 5.0)]);
        let ids: Vec<_> = rank_scores(&scores).into_iter().map(|r| r.paper_id).collect();
        assert_eq!(ids, ["c", "a", "b"]);
    }

    #[test]
    fn weights_validate() {
        assert!(EngagementWeights::default().validate().is_ok());
        let mut w = EngagementWeights { w_like: -1.0, ..Default::default() };
        assert!(w.validate().is_err());
        w.w_like = f64::NAN;
        assert!(w.validate().is_err());
    }
}
