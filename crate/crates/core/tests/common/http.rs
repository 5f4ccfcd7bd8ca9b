use axum::body::{Body, Bytes};
use axum::http::{HeaderMap, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use tower::ServiceExt;

pub struct Reply {
    pub status: StatusCode,
    pub headers: HeaderMap,
    pub body: Bytes,
}

impl Reply {
    pub fn json(&self) -> serde_json::Value {
        serde_json::from_slice(&self.body).unwrap_or_else(|e| panic!("not json ({e}): {:?}", self.body))
    }

    pub fn snapshot_header(&self) -> Option<u64> {
        self.headers
            .get(nlpulse::api::SNAPSHOT_HEADER)
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.parse().ok())
    }
}

pub async fn send(app: &Router, req: Request<Body>) -> Reply {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let headers = resp.headers().clone();
    let body = resp.into_body().collect().await.unwrap().to_bytes();
    Reply { status, headers, body }
}

pub async fn get(app: &Router, uri: &str) -> Reply {
    send(app, Request::get(uri).body(Body::empty()).unwrap()).await
}

/// Every JSON endpoint on the fixture corpus, with the schema its body must
/// satisfy.
pub const CASES: &[(&str, &str)] = &[
    ("/api/health", "api/health.json"),
    ("/api/tweets", "api/tweets.json"),
    ("/api/tweets?topic=CallForPapers&limit=2", "api/tweets.json"),
    ("/api/tweets?conference=acl2020&offset=5&limit=5", "api/tweets.json"),
    ("/api/tweets?conference=%23ACL2020&topic=NewPaper", "api/tweets.json"),
    ("/api/tweets?from=2020-07-05&to=2020-07-08T00:00:00Z&limit=200", "api/tweets.json"),
    ("/api/tweets?paper=2020.acl-main.442", "api/tweets.json"),
    ("/api/tweets?offset=1000", "api/tweets.json"),
    ("/api/topics/summary", "api/topics_summary.json"),
    ("/api/conferences", "api/conferences.json"),
    ("/api/conferences/acl2020/stats", "api/conference_stats.json"),
    ("/api/conferences/emnlp2020/stats", "api/conference_stats.json"),
    ("/api/cfp/timeline", "api/cfp_timeline.json"),
    ("/api/papers/popular", "api/popular_papers.json"),
    ("/api/papers/popular?window=last_week&k=3", "api/popular_papers.json"),
    ("/api/papers/2020.acl-main.442/tweets", "api/paper_tweets.json"),
    ("/api/papers/2020.acl-main.442/tweets?offset=1&limit=1", "api/paper_tweets.json"),
    ("/api/popular", "api/popular_tweets.json"),
    ("/api/popular?window=last_month&metric=likes", "api/popular_tweets.json"),
    ("/api/popular?window=all_time&metric=retweets&k=5", "api/popular_tweets.json"),
    ("/api/nope", "api/error.json"),
    ("/api/tweets?limit=201", "api/error.json"),
    ("/api/tweets?color=red", "api/error.json"),
    ("/api/tweets?topic=Gossip", "api/error.json"),
    ("/api/conferences/naacl1999/stats", "api/error.json"),
    ("/api/papers/9999.none-main.1/tweets", "api/error.json"),
    ("/api/popular?window=yesterday", "api/error.json"),
    ("/api/popular?metric=vibes", "api/error.json"),
    ("/api/papers/popular?k=0", "api/error.json"),
];
