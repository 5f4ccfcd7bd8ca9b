//! Builds a store from the fixtures and either prints a few API responses
//! or serves them.
//!
//! ```text
//! cargo run --example api_server            # print responses
//! cargo run --example api_server -- serve   # listen on 127.0.0.1:8080
//! ```

use std::sync::Arc;

use axum::body::Body;
use axum::http::Request;
use http_body_util::BodyExt;
use nlpulse::api::{app, ApiState};
use nlpulse::config::Config;
use nlpulse::ingest::load_tweet_fixtures;
use nlpulse::pipeline::{build, ingest_records, PipelineContext, Relabel};
use nlpulse::store::Store;
use tower::ServiceExt;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = Config::load(format!("{FIXTURES}/config.json"))?;
    let now = "2020-07-07T00:00:00Z".parse()?;
    let store = Arc::new(Store::in_memory());
    ingest_records(&store, load_tweet_fixtures(format!("{FIXTURES}/tweets.jsonl"))?, now)?;
    build(&store, &PipelineContext::from_config(&config)?, Relabel::Missing, now)?;

    let state = ApiState::new(store, None, config.conferences.clone(), None, config.k);
    let router = app(&config, state);
    if std::env::args().nth(1).as_deref() == Some("serve") {
        let listener = tokio::net::TcpListener::bind(("127.0.0.1", config.port)).await?;
        println!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, router).await?;
        return Ok(());
    }
    for uri in [
        "/api/health",
        "/api/topics/summary",
        "/api/tweets?topic=CallForPapers&limit=2",
        "/api/conferences/acl2020/stats",
        "/api/papers/popular?k=3",
        "/api/tweets?limit=999",
    ] {
        let res = router.clone().oneshot(Request::get(uri).body(Body::empty())?).await?;
        let status = res.status();
        let body = res.into_body().collect().await?.to_bytes();
        let json: serde_json::Value = serde_json::from_slice(&body)?;
        println!("GET {uri} -> {status}\n{}\n", serde_json::to_string_pretty(&json)?);
    }
    Ok(())
}
