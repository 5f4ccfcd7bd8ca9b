#![allow(dead_code)]

use std::collections::BTreeSet;

use chrono::{DateTime, Duration, TimeZone, Utc};
use nlpulse::ingest::Tweet;

pub fn base_time() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2020, 7, 1, 0, 0, 0).unwrap()
}

pub fn tweet(id: &str, minutes: i64) -> Tweet {
    Tweet {
        id: id.into(),
        time_utc: base_time() + Duration::minutes(minutes),
        username: "someone".into(),
        text: format!("tweet {id}"),
        hashtags: BTreeSet::new(),
        mentions: BTreeSet::new(),
        urls: vec![],
        likes: 0,
        retweets: 0,
        replies: 0,
        language: "en".into(),
        source_tags: BTreeSet::new(),
    }
}

pub mod fixture;
pub mod schema;
pub mod http;
