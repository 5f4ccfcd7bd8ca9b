//! Parses the bundled tweet dump, normalizes it and deduplicates it against
//! an empty store, then again against itself.
//!
//! ```text
//! cargo run --example ingest_fixtures [path.jsonl]
//! ```

use std::collections::{BTreeMap, HashMap};

use nlpulse::ingest::{dedupe, load_tweet_fixtures, normalize_tweet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/tweets.jsonl").into());
    let load = load_tweet_fixtures(&path)?;
    for e in &load.errors {
        eprintln!("line {}: {}", e.line, e.reason);
    }
    let tweets: Vec<_> = load.records.iter().filter_map(|r| normalize_tweet(r).ok()).collect();
    println!("{} records, {} parse errors, {} normalized", load.records.len(), load.errors.len(), tweets.len());

    let first = dedupe(tweets.clone(), &HashMap::new());
    let known = first.inserts.iter().map(|t| (t.id.clone(), t.engagement_counts())).collect();
    let again = dedupe(tweets, &known);
    println!("first pass: {} inserts; second pass: {} inserts, {} updates", first.inserts.len(), again.inserts.len(), again.updates.len());

    let mut tags: BTreeMap<&str, usize> = BTreeMap::new();
    for t in &first.inserts {
        for h in &t.hashtags {
            *tags.entry(h).or_default() += 1;
        }
    }
    println!("hashtags: {tags:?}");
    if let Some(t) = first.inserts.first() {
        println!("{}", serde_json::to_string_pretty(t)?);
    }
    Ok(())
}
