use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use super::{extract_dates, match_venue};
use crate::ingest::{Tweet, VenueRecord};

/// One deadline on the timeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfpEntry {
    pub tweet_id: String,
    pub venue_key: String,
    pub venue_display: String,
    pub is_workshop: bool,
    pub deadline: NaiveDate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub website: Option<String>,
    /// Time of the announcing tweet.
    pub extracted_at: DateTime<Utc>,
}

/// Why a call-for-papers tweet produced no entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfpSkip {
    NoVenue,
    NoDate,
}

impl CfpSkip {
    pub fn as_str(self) -> &'static str {
        match self {
            CfpSkip::NoVenue => "no-venue",
            CfpSkip::NoDate => "no-date",
        }
    }
}

const SOCIAL_HOSTS: &[&str] = &["twitter.com", "t.co", "x.com", "mobile.twitter.com", "pic.twitter.com"];

fn is_social(url: &str) -> bool {
    url::Url::parse(url)
        .ok()
        .and_then(|u| u.host_str().map(|h| h.trim_start_matches("www.").to_ascii_lowercase()))
        .is_some_and(|h| SOCIAL_HOSTS.contains(&h.as_str()))
}

/// Builds a timeline entry from a tweet already classified as a call for
/// papers. The deadline is the earliest date after the tweet's own date,
/// falling back to the earliest date mentioned at all.
pub fn build_cfp_entry(tweet: &Tweet, venues: &[VenueRecord]) -> Result<CfpEntry, CfpSkip> {
    let venue_match = match_venue(&tweet.text, venues).ok_or(CfpSkip::NoVenue)?;
    let dates = extract_dates(&tweet.text, tweet.time_utc);
    let tweet_day = tweet.time_utc.date_naive();
    let deadline = dates
        .iter()
        .map(|m| m.date)
        .filter(|d| *d > tweet_day)
        .min()
        .or_else(|| dates.iter().map(|m| m.date).min())
        .ok_or(CfpSkip::NoDate)?;
    let venue = venues
        .iter()
        .find(|v| v.key == venue_match.venue_key)
        .expect("match refers to a listed venue");

    Ok(CfpEntry {
        tweet_id: tweet.id.clone(),
        venue_key: venue.key.clone(),
        venue_display: venue.display_name.clone(),
        is_workshop: venue_match.is_workshop,
        deadline,
        website: tweet.urls.iter().find(|u| !is_social(u)).cloned(),
        extracted_at: tweet.time_utc,
    })
}
