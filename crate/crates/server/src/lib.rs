//! HTTP sessions in which a human plays Bob against the Activation Strategy.
//!
//! Routes:
//! - `POST /sessions` creates a game; Alice's first move is already on the board.
//! - `GET /sessions/{id}` returns the board.
//! - `POST /sessions/{id}/moves` plays Bob's move and returns the board after Alice's reply.
//! - `GET /sessions/{id}/hints` maps each uncolored vertex to its legal colors.
//! - `GET /sessions/{id}/transcript` downloads the replayable transcript.

pub mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex, TryLockError};
use std::time::{Duration, Instant};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use cliquegame_core::EngineError;
use serde::Serialize;
use tower_http::cors::CorsLayer;

pub use session::{
    AliceTurnView, CreateRequest, GenerateParams, MoveRequest, Session, SessionError, SessionView,
};

#[derive(Debug, Clone)]
pub struct ServerConfig {
    /// Sessions untouched for this long are dropped.
    pub idle_timeout: Duration,
    /// Allow any origin (local UI development).
    pub permissive_cors: bool,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            idle_timeout: Duration::from_secs(3600),
            permissive_cors: false,
        }
    }
}

struct Entry {
    session: Arc<Mutex<Session>>,
    last_active: Instant,
}

#[derive(Clone)]
pub struct AppState {
    sessions: Arc<Mutex<HashMap<String, Entry>>>,
    config: Arc<ServerConfig>,
}

impl AppState {
    pub fn new(config: ServerConfig) -> Self {
        AppState {
            sessions: Arc::default(),
            config: Arc::new(config),
        }
    }

    pub fn session_count(&self) -> usize {
        self.sessions.lock().unwrap().len()
    }

    /// Drops idle sessions; returns how many were removed.
    pub fn purge_expired(&self) -> usize {
        let idle = self.config.idle_timeout;
        let mut map = self.sessions.lock().unwrap();
        let before = map.len();
        map.retain(|_, e| e.last_active.elapsed() < idle);
        before - map.len()
    }

    fn insert(&self, session: Session) -> Arc<Mutex<Session>> {
        let session = Arc::new(Mutex::new(session));
        let id = session.lock().unwrap().id.clone();
        let entry = Entry {
            session: Arc::clone(&session),
            last_active: Instant::now(),
        };
        self.sessions.lock().unwrap().insert(id, entry);
        session
    }

    /// Looks up a live session and marks it used.
    fn touch(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        let mut map = self.sessions.lock().unwrap();
        let expired = match map.get(id) {
            None => return Err(ApiError::not_found(id)),
            Some(e) => e.last_active.elapsed() >= self.config.idle_timeout,
        };
        if expired {
            map.remove(id);
            return Err(ApiError::not_found(id));
        }
        let entry = map.get_mut(id).expect("present");
        entry.last_active = Instant::now();
        Ok(Arc::clone(&entry.session))
    }
}

#[derive(Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    status: StatusCode,
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
    /// Monochromatic clique the rejected move would complete.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clique: Option<Vec<usize>>,
}

impl ApiError {
    fn new(status: StatusCode, error: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            error,
            message: message.into(),
            location: None,
            clique: None,
        }
    }

    fn not_found(id: &str) -> Self {
        ApiError::new(
            StatusCode::NOT_FOUND,
            "not_found",
            format!("no live session {id}"),
        )
    }

    fn busy() -> Self {
        ApiError::new(
            StatusCode::CONFLICT,
            "conflict",
            "another request is updating this session",
        )
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        match e {
            SessionError::Invalid { location, message } => ApiError {
                location,
                ..ApiError::new(StatusCode::BAD_REQUEST, "invalid", message)
            },
            SessionError::Stale { expected, actual } => ApiError::new(
                StatusCode::CONFLICT,
                "conflict",
                format!("client saw {expected} moves but the game has {actual}"),
            ),
            SessionError::Illegal(EngineError::GameOver) => ApiError::new(
                StatusCode::CONFLICT,
                "game_over",
                "the game is already over",
            ),
            SessionError::Illegal(err) => {
                let clique = match &err {
                    EngineError::RuleViolation { clique, .. } => Some(clique.clone()),
                    _ => None,
                };
                ApiError {
                    clique,
                    ..ApiError::new(
                        StatusCode::UNPROCESSABLE_ENTITY,
                        "illegal_move",
                        err.to_string(),
                    )
                }
            }
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "invalid", r.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

fn lock(session: &Mutex<Session>) -> Result<std::sync::MutexGuard<'_, Session>, ApiError> {
    match session.try_lock() {
        Ok(guard) => Ok(guard),
        Err(TryLockError::WouldBlock) => Err(ApiError::busy()),
        Err(TryLockError::Poisoned(p)) => Ok(p.into_inner()),
    }
}

fn new_id() -> String {
    format!("{:032x}", rand::random::<u128>())
}

async fn create(
    State(app): State<AppState>,
    body: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let Json(req) = body?;
    app.purge_expired();
    let session = Session::create(new_id(), req)?;
    let view = session.view();
    tracing::info!(id = %view.id, n = view.colors.len(), k = view.k, c = view.c, "session created");
    app.insert(session);
    Ok((StatusCode::CREATED, Json(view)))
}

async fn view(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<SessionView>, ApiError> {
    let session = app.touch(&id)?;
    let guard = lock(&session)?;
    Ok(Json(guard.view()))
}

async fn submit(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<MoveRequest>, JsonRejection>,
) -> Result<Json<SessionView>, ApiError> {
    let session = app.touch(&id)?;
    let Json(req) = body?;
    let mut guard = lock(&session)?;
    guard.submit(&req)?;
    Ok(Json(guard.view()))
}

#[derive(Serialize)]
struct Hints {
    hints: std::collections::BTreeMap<usize, Vec<u8>>,
}

async fn hints(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let session = app.touch(&id)?;
    let guard = lock(&session)?;
    Ok(Json(Hints {
        hints: guard.hints(),
    })
    .into_response())
}

async fn transcript(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let session = app.touch(&id)?;
    let guard = lock(&session)?;
    Ok(Json(guard.transcript()).into_response())
}

pub fn router(app: AppState) -> Router {
    let cors = app.config.permissive_cors;
    let router = Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(view))
        .route("/sessions/{id}/moves", post(submit))
        .route("/sessions/{id}/hints", get(hints))
        .route("/sessions/{id}/transcript", get(transcript))
        .with_state(app);
    if cors {
        router.layer(CorsLayer::permissive())
    } else {
        router
    }
}

/// Serves until ctrl-c, purging idle sessions once a minute.
pub async fn serve(addr: SocketAddr, config: ServerConfig) -> std::io::Result<()> {
    let app = AppState::new(config);
    let sweeper = app.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            let dropped = sweeper.purge_expired();
            if dropped > 0 {
                tracing::info!(dropped, "expired sessions removed");
            }
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(app))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
