//! JSON-over-HTTP service for the explorer front end.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Instant;

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::cors::CorsLayer;

use lattice_core::Pattern;

use crate::json;
use crate::payload::{self, AppError, WitnessParams};

#[derive(Debug, Default)]
pub struct AppState {
    /// Summary section of a census file written by `lattice census`.
    pub census: Option<Value>,
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/classify", post(classify))
        .route("/quadruples", get(quadruples))
        .route("/witness", post(witness))
        .route("/census/summary", get(census_summary))
        .route("/healthz", get(|| async { "ok" }))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

fn error(status: StatusCode, message: &str) -> Response {
    (status, Json(json::error(message))).into_response()
}

fn app_error(e: AppError) -> Response {
    error(StatusCode::BAD_REQUEST, &e.to_string())
}

/// A pattern as text (grid, hex or pairs) or as an integer mask.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum PatternField {
    Text(String),
    Mask(u16),
}

impl PatternField {
    pub fn parse(&self) -> Result<Pattern, AppError> {
        match self {
            PatternField::Text(s) => payload::parse_pattern(s),
            PatternField::Mask(m) => Ok(Pattern::new(*m)),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifyRequest {
    #[serde(alias = "mask")]
    pattern: PatternField,
    #[serde(default)]
    spectral: bool,
    #[serde(default)]
    delta: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessRequest {
    #[serde(alias = "mask")]
    pattern: PatternField,
    family: String,
    #[serde(default)]
    params: WitnessParams,
}

#[allow(clippy::result_large_err)]
fn parse_body<T: serde::de::DeserializeOwned>(body: &Bytes) -> Result<(T, Value), Response> {
    let echo: Value = serde_json::from_slice(body)
        .map_err(|e| error(StatusCode::BAD_REQUEST, &format!("malformed JSON: {e}")))?;
    let req = serde_json::from_value(echo.clone())
        .map_err(|e| error(StatusCode::BAD_REQUEST, &format!("bad request: {e}")))?;
    Ok((req, echo))
}

async fn blocking<F>(f: F) -> Result<Value, Response>
where
    F: FnOnce() -> Result<Value, AppError> + Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| error(StatusCode::INTERNAL_SERVER_ERROR, &e.to_string()))?
        .map_err(app_error)
}

async fn classify(body: Bytes) -> Response {
    let start = Instant::now();
    let (req, echo): (ClassifyRequest, Value) = match parse_body(&body) {
        Ok(x) => x,
        Err(r) => return r,
    };
    let result = blocking(move || {
        let p = req.pattern.parse()?;
        payload::classify(p, req.spectral, req.delta)
    })
    .await;
    match result {
        Ok(v) => Json(json::envelope(echo, v, ms(start))).into_response(),
        Err(r) => r,
    }
}

async fn witness(body: Bytes) -> Response {
    let start = Instant::now();
    let (req, echo): (WitnessRequest, Value) = match parse_body(&body) {
        Ok(x) => x,
        Err(r) => return r,
    };
    let result = blocking(move || {
        let p = req.pattern.parse()?;
        payload::witness(p, &req.family, &req.params)
    })
    .await;
    match result {
        Ok(v) => Json(json::envelope(echo, v, ms(start))).into_response(),
        Err(r) => r,
    }
}

async fn quadruples(Query(q): Query<HashMap<String, String>>) -> Response {
    let start = Instant::now();
    let point = match q.get("point").map(|s| payload::parse_point(s)).transpose() {
        Ok(p) => p,
        Err(e) => return app_error(e),
    };
    let echo = json!({ "point": q.get("point") });
    Json(json::envelope(echo, payload::quadruples(point), ms(start))).into_response()
}

async fn census_summary(State(state): State<Arc<AppState>>) -> Response {
    let start = Instant::now();
    match &state.census {
        Some(summary) => {
            Json(json::envelope(json!({}), summary.clone(), ms(start))).into_response()
        }
        None => error(
            StatusCode::NOT_FOUND,
            "no census file loaded; run `lattice census` and pass --census",
        ),
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl ServeError {
    pub fn port_busy(&self) -> bool {
        matches!(self, ServeError::Bind { source, .. } if source.kind() == std::io::ErrorKind::AddrInUse)
    }
}

pub async fn serve(bind: &str, port: u16, state: AppState) -> Result<(), ServeError> {
    let addr = format!("{bind}:{port}");
    let listener = tokio::net::TcpListener::bind(&addr)
        .await
        .map_err(|source| ServeError::Bind {
            addr: addr.clone(),
            source,
        })?;
    let local: SocketAddr = listener.local_addr()?;
    eprintln!("listening on http://{local}");
    axum::serve(listener, router(Arc::new(state))).await?;
    Ok(())
}
