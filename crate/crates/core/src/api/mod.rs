//! HTTP JSON facade over store snapshots.
//!
//! Every response carries the `X-Snapshot-Version` header. Handlers load one
//! snapshot per request, so a body never mixes versions, and list bodies are
//! pure functions of that version and the query string. Relative time windows
//! are anchored at the snapshot's computation time rather than the wall clock
//! for the same reason.

mod handlers;
mod params;
mod views;

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Request, State};
use axum::http::{HeaderName, HeaderValue, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Serialize;
use thiserror::Error;
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::analytics::ConferenceRegistry;
use crate::config::Config;
use crate::pipeline::{Pipeline, PipelineError};
use crate::schedule::run_schedule;
use crate::store::Store;

pub use views::{
    ConferenceSummary, ConferencesBody, ErrorBody, ErrorDetail, HealthBody, IngestBody, PaperScore, PaperTweetsBody,
    PopularPapersBody, PopularTweetsBody, ScoredTweet, TimelineBody, TopicCount, TopicsSummaryBody, TweetPageBody, TweetView,
};

pub const SNAPSHOT_HEADER: &str = "x-snapshot-version";
pub const ADMIN_TOKEN_ENV: &str = "NLPULSE_ADMIN_TOKEN";

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("cannot bind port {port}: {source}")]
    Bind {
        port: u16,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("server error: {0}")]
    Io(#[from] std::io::Error),
}

pub(crate) struct Inner {
    pub store: Arc<Store>,
    pub pipeline: Option<Arc<Pipeline>>,
    pub registry: ConferenceRegistry,
    pub admin_token: Option<String>,
    pub k: usize,
}

/// Shared handler state. Cheap to clone.
#[derive(Clone)]
pub struct ApiState(pub(crate) Arc<Inner>);

impl ApiState {
    pub fn new(
        store: Arc<Store>,
        pipeline: Option<Arc<Pipeline>>,
        registry: ConferenceRegistry,
        admin_token: Option<String>,
        k: usize,
    ) -> Self {
        Self(Arc::new(Inner {
            store,
            pipeline,
            registry,
            admin_token: admin_token.filter(|t| !t.is_empty()),
            k,
        }))
    }
}

/// A JSON error response.
pub(crate) struct HttpError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl HttpError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            code,
            message: message.into(),
        }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", message)
    }
}

impl IntoResponse for HttpError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            error: ErrorDetail {
                status: self.status.as_u16(),
                code: self.code.to_string(),
                message: self.message,
            },
        };
        (self.status, Json(body)).into_response()
    }
}

/// JSON body stamped with the snapshot version it was computed from.
pub(crate) fn versioned<T: Serialize>(version: u64, body: &T) -> Response {
    let mut resp = Json(body).into_response();
    resp.headers_mut().insert(HeaderName::from_static(SNAPSHOT_HEADER), HeaderValue::from(version));
    resp
}

async fn stamp_version(State(state): State<ApiState>, req: Request, next: Next) -> Response {
    let mut resp = next.run(req).await;
    if !resp.headers().contains_key(SNAPSHOT_HEADER) {
        let v = state.0.store.snapshot().version();
        resp.headers_mut().insert(HeaderName::from_static(SNAPSHOT_HEADER), HeaderValue::from(v));
    }
    resp
}

async fn not_found(req: Request) -> HttpError {
    HttpError::not_found(format!("no route for {} {}", req.method(), req.uri().path()))
}

async fn method_not_allowed(req: Request) -> HttpError {
    HttpError::new(
        StatusCode::METHOD_NOT_ALLOWED,
        "method_not_allowed",
        format!("{} not allowed on {}", req.method(), req.uri().path()),
    )
}

pub fn router(state: ApiState) -> Router {
    Router::new()
        .route("/api/health", get(handlers::health))
        .route("/api/tweets", get(handlers::tweets))
        .route("/api/topics/summary", get(handlers::topics_summary))
        .route("/api/conferences", get(handlers::conferences))
        .route("/api/conferences/{tag}/stats", get(handlers::conference_stats))
        .route("/api/cfp/timeline", get(handlers::timeline))
        .route("/api/cfp/timeline.ics", get(handlers::timeline_ics))
        .route("/api/papers/popular", get(handlers::popular_papers))
        .route("/api/papers/{paper_id}/tweets", get(handlers::paper_tweets))
        .route("/api/popular", get(handlers::popular_tweets))
        .route("/api/admin/ingest", post(handlers::admin_ingest))
        .fallback(not_found)
        .method_not_allowed_fallback(method_not_allowed)
        .layer(middleware::from_fn_with_state(state.clone(), stamp_version))
        .with_state(state)
}

fn cors(origin: &str) -> CorsLayer {
    let allow = if origin == "*" {
        AllowOrigin::any()
    } else {
        AllowOrigin::exact(HeaderValue::from_str(origin).unwrap_or(HeaderValue::from_static("null")))
    };
    CorsLayer::new()
        .allow_origin(allow)
        .allow_methods([axum::http::Method::GET, axum::http::Method::POST])
        .allow_headers([axum::http::header::AUTHORIZATION, axum::http::header::CONTENT_TYPE])
        .expose_headers([HeaderName::from_static(SNAPSHOT_HEADER)])
}

/// The router with the config's CORS policy applied.
pub fn app(config: &Config, state: ApiState) -> Router {
    let r = router(state);
    match &config.cors_origin {
        Some(origin) => r.layer(cors(origin)),
        None => r,
    }
}

/// Serves the API on `config.host:config.port` until Ctrl-C, running the
/// scheduler on a background thread when enabled.
pub async fn serve(config: &Config, store: Arc<Store>) -> Result<(), ApiError> {
    let pipeline = Arc::new(Pipeline::from_config(config, store.clone())?);
    if config.schedule.enabled {
        let schedule = config.schedule.clone();
        let p = pipeline.clone();
        std::thread::Builder::new()
            .name("scheduler".into())
            .spawn(move || run_schedule(&schedule, &p))?;
    }
    let token = std::env::var(ADMIN_TOKEN_ENV).ok();
    let state = ApiState::new(store, Some(pipeline), config.conferences.clone(), token, config.k);

    let addr: SocketAddr = format!("{}:{}", config.host, config.port)
        .parse()
        .map_err(|e| ApiError::Bind {
            port: config.port,
            source: std::io::Error::new(std::io::ErrorKind::InvalidInput, e),
        })?;
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|source| ApiError::Bind { port: config.port, source })?;
    tracing::info!(%addr, "listening");
    axum::serve(listener, app(config, state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
