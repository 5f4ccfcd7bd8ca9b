use std::path::PathBuf;
use std::sync::Arc;

use chrono::{DateTime, TimeZone, Utc};
use nlpulse::config::Config;
use nlpulse::ingest::load_tweet_fixtures;
use nlpulse::pipeline::{build, ingest_records, PipelineContext, Relabel};
use nlpulse::store::Store;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> PathBuf {
    fixtures_dir().join(name)
}

/// Reference time for everything built from the fixture corpus.
pub fn fixture_now() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2020, 7, 7, 0, 0, 0).unwrap()
}

pub fn fixture_config() -> Config {
    Config::load(fixture("config.json")).expect("fixture config")
}

/// The fixture corpus ingested and built into an in-memory store.
pub fn fixture_store() -> (Arc<Store>, Config, PipelineContext) {
    let config = fixture_config();
    let ctx = PipelineContext::from_config(&config).expect("fixture context");
    let store = Arc::new(Store::in_memory());
    let load = load_tweet_fixtures(fixture("tweets.jsonl")).expect("fixture tweets");
    ingest_records(&store, load, fixture_now()).expect("ingest");
    build(&store, &ctx, Relabel::Missing, fixture_now()).expect("build");
    (store, config, ctx)
}

/// A synthetic corpus written under `dir` and a config pointing at it.
pub fn synthetic_config(dir: &std::path::Path, tweets: usize, papers: usize, seed: u64) -> Config {
    nlpulse::synth::synthetic_corpus(tweets, papers, seed).write(dir).expect("write corpus");
    let config = serde_json::json!({
        "store_dir": "store",
        "sources": ["tweets.jsonl"],
        "venues_path": "venues.json",
        "papers_path": "papers.json",
        "conferences": {
            "acl2020": ["acl2020", "acl2020nlp"],
            "emnlp2020": ["emnlp2020"],
            "coling2020": ["coling2020"]
        },
    });
    let path = dir.join("config.json");
    std::fs::write(&path, config.to_string()).expect("write config");
    Config::load(path).expect("synthetic config")
}
