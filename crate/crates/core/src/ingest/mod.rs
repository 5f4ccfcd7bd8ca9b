//! Tweet and bibliographic metadata ingestion.
//!
//! Raw tweet dumps arrive as JSON-Lines files; [`normalize_tweet`] turns each
//! record into a [`Tweet`] with extracted hashtags, mentions and URLs, and
//! [`dedupe`] separates new tweets from counter refreshes of known ones.

mod dedupe;
mod metadata;
pub(crate) mod normalize;
mod source;

use std::collections::BTreeSet;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

pub use dedupe::{dedupe, DedupeOutcome, Engagement};
pub use metadata::{load_papers, load_venues, parse_papers, parse_venues, MetadataError};
pub use normalize::{
    extract_hashtags, extract_mentions, extract_urls, normalize_tweet, parse_timestamp,
    NormalizeError,
};
pub use source::{load_tweet_fixtures, parse_tweet_lines, FileSource, FixtureLoad, LineError, SourceError, TweetSource};

/// A tweet record as found in a source dump, before normalization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTweetRecord {
    pub id: String,
    pub created_at: String,
    pub username: String,
    pub text: String,
    #[serde(default)]
    pub likes: i64,
    #[serde(default)]
    pub retweets: i64,
    #[serde(default)]
    pub replies: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    #[serde(default)]
    pub source_tag: String,
}

/// A normalized tweet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tweet {
    pub id: String,
    pub time_utc: DateTime<Utc>,
    pub username: String,
    pub text: String,
    pub hashtags: BTreeSet<String>,
    pub mentions: BTreeSet<String>,
    pub urls: Vec<String>,
    pub likes: u64,
    pub retweets: u64,
    pub replies: u64,
    pub language: String,
    pub source_tags: BTreeSet<String>,
}

impl Tweet {
    pub fn engagement_counts(&self) -> Engagement {
        Engagement {
            likes: self.likes,
            retweets: self.retweets,
            replies: self.replies,
        }
    }
}

/// A venue from the curated venue list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VenueRecord {
    pub key: String,
    pub display_name: String,
    /// Match keywords, stored uppercase.
    pub aliases: Vec<String>,
    #[serde(default)]
    pub is_workshop: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
}

/// A paper from the anthology metadata dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: String,
    pub title: String,
    pub url: String,
    pub year: i32,
    pub venue_key: String,
}
