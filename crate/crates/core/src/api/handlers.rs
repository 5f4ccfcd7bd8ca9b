use std::collections::BTreeMap;

use axum::extract::{Path, RawQuery, State};
use axum::http::header::{AUTHORIZATION, CONTENT_TYPE};
use axum::http::{HeaderMap, HeaderName, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use chrono::Utc;

use super::params::Params;
use super::views::*;
use super::{versioned, ApiState, HttpError, SNAPSHOT_HEADER};
use crate::analytics::{engagement, popular_tweets as rank_tweets, Metric, TimeWindow, WindowKind};
use crate::cfp::timeline_to_ics;
use crate::classify::TopicLabel;
use crate::pipeline::PipelineError;
use crate::store::{query, Page, Selector, Snapshot, StoreError};

type Result<T> = std::result::Result<T, HttpError>;

fn store_error(e: StoreError) -> HttpError {
    match e {
        StoreError::UnknownSelector(s) => HttpError::bad_request(format!("unknown selector {s}")),
        StoreError::PageTooLarge(n) => HttpError::bad_request(format!("limit {n} exceeds the page cap")),
        other => HttpError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", other.to_string()),
    }
}

fn window(params: &Params, default: WindowKind, snap: &Snapshot) -> Result<TimeWindow> {
    let kind = match params.get("window") {
        None => default,
        Some(w) => w
            .parse::<WindowKind>()
            .ok()
            .filter(|k| *k != WindowKind::Custom)
            .ok_or_else(|| HttpError::bad_request(format!("window must be last_week, last_month or all_time, got {w:?}")))?,
    };
    let anchor = snap.derived().computed_at.unwrap_or(snap.created_at());
    TimeWindow::of_kind(kind, anchor).map_err(|e| HttpError::bad_request(e.to_string()))
}

pub(super) async fn health(State(state): State<ApiState>) -> Response {
    let v = state.0.store.snapshot().version();
    versioned(v, &HealthBody { status: "ok", snapshot: v })
}

pub(super) async fn tweets(State(state): State<ApiState>, RawQuery(raw): RawQuery) -> Result<Response> {
    let params = Params::parse(
        raw.as_deref(),
        &["topic", "conference", "paper", "from", "to", "id", "offset", "limit"],
    )?;
    let (offset, limit) = params.page()?;
    let selectors = params
        .iter()
        .filter(|(k, _)| !matches!(*k, "offset" | "limit"))
        .map(|(k, v)| Selector::parse(k, v))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(store_error)?;
    let snap = state.0.store.snapshot();
    let page = query(&snap, &selectors, Page { offset, limit }).map_err(store_error)?;
    let body = TweetPageBody {
        snapshot: snap.version(),
        total: page.total,
        offset,
        limit,
        items: page.items.iter().map(|t| TweetView::new(&snap, t)).collect(),
    };
    Ok(versioned(snap.version(), &body))
}

pub(super) async fn topics_summary(State(state): State<ApiState>, RawQuery(raw): RawQuery) -> Result<Response> {
    Params::parse(raw.as_deref(), &[])?;
    let snap = state.0.store.snapshot();
    let counts = snap.topic_counts();
    let labeled: usize = counts.values().sum();
    let body = TopicsSummaryBody {
        snapshot: snap.version(),
        total: snap.len(),
        unlabeled: snap.len() - labeled,
        topics: TopicLabel::ALL
            .into_iter()
            .map(|topic| TopicCount {
                topic,
                count: counts[&topic],
            })
            .collect(),
    };
    Ok(versioned(snap.version(), &body))
}

pub(super) async fn conferences(State(state): State<ApiState>, RawQuery(raw): RawQuery) -> Result<Response> {
    Params::parse(raw.as_deref(), &[])?;
    let snap = state.0.store.snapshot();
    let in_use: BTreeMap<&str, usize> = snap.conference_tags_in_use().map(|(t, n)| (t.as_str(), n)).collect();
    let mut tags: Vec<&str> = state.0.registry.keys().map(String::as_str).collect();
    tags.extend(snap.derived().stats.keys().map(String::as_str));
    tags.extend(in_use.keys());
    tags.sort_unstable();
    tags.dedup();
    let body = ConferencesBody {
        snapshot: snap.version(),
        conferences: tags
            .into_iter()
            .map(|tag| ConferenceSummary {
                tag,
                aliases: aliases(state.0.registry.get(tag)),
                tweet_count: in_use.get(tag).copied().unwrap_or(0),
                has_stats: snap.derived().stats.contains_key(tag),
            })
            .collect(),
    };
    Ok(versioned(snap.version(), &body))
}

pub(super) async fn conference_stats(
    State(state): State<ApiState>,
    Path(tag): Path<String>,
    RawQuery(raw): RawQuery,
) -> Result<Response> {
    Params::parse(raw.as_deref(), &[])?;
    let snap = state.0.store.snapshot();
    let tag = tag.trim_start_matches('#').to_lowercase();
    let stats = snap
        .derived()
        .stats
        .get(&tag)
        .ok_or_else(|| HttpError::not_found(format!("no statistics for conference {tag:?}")))?;
    Ok(versioned(snap.version(), stats))
}

pub(super) async fn timeline(State(state): State<ApiState>, RawQuery(raw): RawQuery) -> Result<Response> {
    Params::parse(raw.as_deref(), &[])?;
    let snap = state.0.store.snapshot();
    let d = snap.derived();
    let body = TimelineBody {
        snapshot: snap.version(),
        computed_at: d.computed_at,
        upcoming: &d.timeline.upcoming,
        past: &d.timeline.past,
    };
    Ok(versioned(snap.version(), &body))
}

pub(super) async fn timeline_ics(State(state): State<ApiState>, RawQuery(raw): RawQuery) -> Result<Response> {
    Params::parse(raw.as_deref(), &[])?;
    let snap = state.0.store.snapshot();
    let ics = timeline_to_ics(&snap.derived().timeline);
    let mut resp = ics.into_response();
    let h = resp.headers_mut();
    h.insert(CONTENT_TYPE, HeaderValue::from_static("text/calendar; charset=utf-8"));
    h.insert(HeaderName::from_static(SNAPSHOT_HEADER), HeaderValue::from(snap.version()));
    Ok(resp)
}

pub(super) async fn popular_papers(State(state): State<ApiState>, RawQuery(raw): RawQuery) -> Result<Response> {
    let params = Params::parse(raw.as_deref(), &["window", "k"])?;
    let k = params.k(state.0.k)?;
    let snap = state.0.store.snapshot();
    let window = window(&params, WindowKind::AllTime, &snap)?;
    let derived = snap.derived();
    let weights = derived.weights;

    let mut scored = Vec::new();
    for (paper_id, tweet_ids) in snap.data().links.keys().fold(BTreeMap::<&str, Vec<&str>>::new(), |mut m, (p, t)| {
        m.entry(p.as_str()).or_default().push(t.as_str());
        m
    }) {
        let tweets: Vec<_> = tweet_ids
            .iter()
            .filter_map(|id| snap.tweet(id))
            .filter(|t| window.contains(t.time_utc))
            .collect();
        if tweets.is_empty() {
            continue;
        }
        let record = derived.papers.get(paper_id);
        scored.push(PaperScore {
            rank: 0,
            paper_id,
            title: record.map(|p| p.title.as_str()),
            url: record.map(|p| p.url.as_str()),
            score: tweets.iter().map(|t| engagement(t, &weights)).sum(),
            tweet_count: tweets.len(),
            likes: tweets.iter().map(|t| t.likes).sum(),
            retweets: tweets.iter().map(|t| t.retweets).sum(),
            replies: tweets.iter().map(|t| t.replies).sum(),
        });
    }
    scored.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.paper_id.cmp(b.paper_id)));
    scored.truncate(k);
    for (i, p) in scored.iter_mut().enumerate() {
        p.rank = i + 1;
    }
    let body = PopularPapersBody {
        snapshot: snap.version(),
        window,
        k,
        weights,
        papers: scored,
    };
    Ok(versioned(snap.version(), &body))
}

pub(super) async fn paper_tweets(
    State(state): State<ApiState>,
    Path(paper_id): Path<String>,
    RawQuery(raw): RawQuery,
) -> Result<Response> {
    let params = Params::parse(raw.as_deref(), &["offset", "limit"])?;
    let (offset, limit) = params.page()?;
    let snap = state.0.store.snapshot();
    let paper = snap.derived().papers.get(&paper_id);
    let page = query(&snap, &[Selector::Paper(paper_id.clone())], Page { offset, limit }).map_err(store_error)?;
    if paper.is_none() && page.total == 0 {
        return Err(HttpError::not_found(format!("unknown paper {paper_id:?}")));
    }
    let body = PaperTweetsBody {
        snapshot: snap.version(),
        paper_id: &paper_id,
        paper,
        total: page.total,
        offset,
        limit,
        items: page.items.iter().map(|t| TweetView::new(&snap, t)).collect(),
    };
    Ok(versioned(snap.version(), &body))
}

pub(super) async fn popular_tweets(State(state): State<ApiState>, RawQuery(raw): RawQuery) -> Result<Response> {
    let params = Params::parse(raw.as_deref(), &["window", "metric", "k"])?;
    let k = params.k(state.0.k)?;
    let metric = match params.get("metric") {
        None => Metric::Engagement,
        Some(m) => m
            .parse()
            .map_err(|_| HttpError::bad_request(format!("metric must be likes, retweets or engagement, got {m:?}")))?,
    };
    let snap = state.0.store.snapshot();
    let window = window(&params, WindowKind::LastWeek, &snap)?;
    let weights = snap.derived().weights;
    let ranked = rank_tweets(snap.ordered().iter().map(|t| t.as_ref()), &window, metric, k, &weights);
    let body = PopularTweetsBody {
        snapshot: snap.version(),
        window,
        metric,
        k,
        items: ranked
            .into_iter()
            .enumerate()
            .map(|(i, t)| ScoredTweet {
                rank: i + 1,
                score: metric.value(t, &weights),
                tweet: TweetView::new(&snap, t),
            })
            .collect(),
    };
    Ok(versioned(snap.version(), &body))
}

pub(super) async fn admin_ingest(State(state): State<ApiState>, headers: HeaderMap) -> Result<Response> {
    let Some(expected) = state.0.admin_token.clone() else {
        return Err(HttpError::new(
            StatusCode::FORBIDDEN,
            "admin_disabled",
            "the admin endpoint is disabled; set NLPULSE_ADMIN_TOKEN to enable it",
        ));
    };
    let given = headers
        .get(AUTHORIZATION)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.strip_prefix("Bearer "));
    if given != Some(expected.as_str()) {
        return Err(HttpError::new(StatusCode::UNAUTHORIZED, "unauthorized", "missing or wrong bearer token"));
    }
    let Some(pipeline) = state.0.pipeline.clone() else {
        return Err(HttpError::new(StatusCode::SERVICE_UNAVAILABLE, "no_pipeline", "no pipeline configured"));
    };
    let outcome = tokio::task::spawn_blocking(move || pipeline.run(Utc::now()))
        .await
        .map_err(|e| HttpError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?;
    match outcome {
        Ok(report) => Ok(versioned(report.version, &IngestBody { snapshot: report.version, report })),
        Err(PipelineError::Busy) => Err(HttpError::new(StatusCode::CONFLICT, "busy", "a pipeline run is already in progress")),
        Err(e) => Err(HttpError::new(StatusCode::INTERNAL_SERVER_ERROR, "pipeline_failed", e.to_string())),
    }
}
