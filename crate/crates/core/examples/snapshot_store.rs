//! Commits to an on-disk store, simulates a crash mid-commit and reopens.
//!
//! ```text
//! cargo run --example snapshot_store [dir]
//! ```

use std::collections::HashMap;

use chrono::{Duration, TimeZone, Utc};
use nlpulse::classify::{LabeledTweet, TopicLabel};
use nlpulse::ingest::{dedupe, load_tweet_fixtures, normalize_tweet};
use nlpulse::store::{query, CommitBatch, CrashPoint, Page, Selector, Store};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join(format!("nlpulse-example-{}", std::process::id())));
    let load = load_tweet_fixtures(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/tweets.jsonl"))?;
    let parsed = load.records.iter().filter_map(|r| normalize_tweet(r).ok()).collect();
    // the dump repeats one id
    let tweets = dedupe(parsed, &HashMap::new()).inserts;
    let (a, b) = tweets.split_at(tweets.len() / 2);
    let t0 = Utc.with_ymd_and_hms(2020, 7, 7, 0, 0, 0).unwrap();

    let store = Store::open(&dir)?;
    let mut batch = CommitBatch::new(t0);
    batch.inserts = a.to_vec();
    batch.labels = a
        .iter()
        .map(|t| LabeledTweet { tweet_id: t.id.clone(), label: TopicLabel::NewPaper, confidence: None, rule_fired: None })
        .collect();
    let v1 = store.commit(batch)?;
    println!("version {} with {} tweets in {}", v1.version(), v1.len(), dir.display());

    let mut batch = CommitBatch::new(t0 + Duration::hours(1));
    batch.inserts = b.to_vec();
    let err = store.commit_with_crash(batch.clone(), CrashPoint::AfterIndex).unwrap_err();
    println!("crashed: {err}");
    drop(store);

    let store = Store::open(&dir)?;
    println!("reopened at version {} with {} tweets", store.snapshot().version(), store.snapshot().len());
    let v2 = store.commit(batch)?;
    println!("version {} with {} tweets; v1 still sees {}", v2.version(), v2.len(), v1.len());

    let page = query(&v2, &[Selector::Topic(TopicLabel::NewPaper)], Page { offset: 0, limit: 5 })?;
    println!("NewPaper: {} total, first page:", page.total);
    for t in &page.items {
        println!("  {} {}", t.time_utc, t.id);
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
