use std::net::SocketAddr;
use std::path::PathBuf;
use std::time::Instant;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use fdnf_core::formula::Path;
use fdnf_core::rules::{rule_table, Params};
use fdnf_core::solution::write_solutions;
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

use crate::session::{Mode, Session, SessionError, TaskSource};
use crate::store::SessionStore;

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub error: String,
    pub code: &'static str,
}

#[derive(Debug)]
pub enum ApiError {
    Session(SessionError),
    NotFound(String),
    BadRequest(String),
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        ApiError::Session(e)
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::BadRequest(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::Session(e) => (StatusCode::BAD_REQUEST, ErrorBody { error: e.to_string(), code: e.code() }),
            ApiError::NotFound(id) => {
                (StatusCode::NOT_FOUND, ErrorBody { error: format!("no session {id}"), code: "NotFound" })
            }
            ApiError::BadRequest(why) => (StatusCode::BAD_REQUEST, ErrorBody { error: why, code: "BadRequest" }),
        };
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Debug, Deserialize)]
pub struct CreateRequest {
    #[serde(flatten)]
    pub source: TaskSource,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default = "default_feedback")]
    pub live_feedback: bool,
    #[serde(default)]
    pub task_id: Option<String>,
    #[serde(default)]
    pub student: Option<String>,
}

fn default_mode() -> Mode {
    Mode::Rule
}

fn default_feedback() -> bool {
    true
}

#[derive(Debug, Deserialize)]
pub struct ApplyRequest {
    pub rule: u8,
    #[serde(default)]
    pub params: Params,
}

#[derive(Debug, Deserialize)]
pub struct InputRequest {
    pub formula: String,
}

fn on_session<T>(store: &SessionStore, id: &str, f: impl FnOnce(&mut Session) -> Result<T, SessionError>) -> ApiResult<T> {
    match store.with(id, f) {
        Some(r) => Ok(Json(r?)),
        None => Err(ApiError::NotFound(id.to_string())),
    }
}

async fn create(
    State(store): State<SessionStore>,
    body: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<crate::session::SessionState>), ApiError> {
    let Json(req) = body?;
    let id = uuid::Uuid::new_v4().to_string();
    let session = Session::new(id, &req.source, req.mode, req.live_feedback)?.with_task(req.task_id, req.student);
    let state = session.state();
    store.insert(session);
    Ok((StatusCode::CREATED, Json(state)))
}

async fn show(State(store): State<SessionStore>, UrlPath(id): UrlPath<String>) -> impl IntoResponse {
    on_session(&store, &id, |s| Ok(s.state()))
}

async fn mark(
    State(store): State<SessionStore>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<Path>, JsonRejection>,
) -> impl IntoResponse {
    let Json(path) = body?;
    on_session(&store, &id, |s| s.mark(&path))
}

async fn apply(
    State(store): State<SessionStore>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<ApplyRequest>, JsonRejection>,
) -> impl IntoResponse {
    let Json(req) = body?;
    on_session(&store, &id, |s| s.apply(req.rule, &req.params))
}

async fn input(
    State(store): State<SessionStore>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<InputRequest>, JsonRejection>,
) -> impl IntoResponse {
    let Json(req) = body?;
    on_session(&store, &id, |s| s.input(&req.formula))
}

async fn undo(State(store): State<SessionStore>, UrlPath(id): UrlPath<String>) -> impl IntoResponse {
    on_session(&store, &id, Session::undo)
}

async fn export(State(store): State<SessionStore>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    let attempt = store.with(&id, |s| s.export()).ok_or_else(|| ApiError::NotFound(id.clone()))?;
    let bytes = write_solutions(&[attempt]);
    Ok(([(header::CONTENT_TYPE, "application/json")], bytes).into_response())
}

async fn rules() -> impl IntoResponse {
    Json(rule_table())
}

pub fn router(store: SessionStore) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/mark", post(mark))
        .route("/sessions/{id}/apply", post(apply))
        .route("/sessions/{id}/input", post(input))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/export", get(export))
        .route("/rules", get(rules))
        .with_state(store)
}

/// The API plus, when given, static files served from `static_dir`.
pub fn app(store: SessionStore, static_dir: Option<PathBuf>) -> Router {
    let api = router(store);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Serves until the listener fails, expiring idle sessions once a minute.
pub async fn serve(addr: SocketAddr, store: SessionStore, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let sweeper = store.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(std::time::Duration::from_secs(60));
        loop {
            tick.tick().await;
            sweeper.expire_idle(Instant::now());
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, app(store, static_dir)).await
}
