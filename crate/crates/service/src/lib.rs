//! HTTP + JSON session service hosting live games against an engine.
//!
//! Routes: `POST /sessions`, `GET /sessions/{id}`, `POST /sessions/{id}/moves`,
//! `GET /sessions/{id}/hint`, `GET /sessions/{id}/analysis`.

pub mod engine;
pub mod error;
pub mod session;
pub mod store;
pub mod view;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex as StdMutex};
use std::time::{Duration, Instant};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use linkgame::{solve_diagram_with, SolveError, SolveOptions};
use tokio::sync::Mutex;

pub use engine::{EnginePolicy, MoveSource};
pub use error::{ApiError, ServiceError};
pub use session::{CreateRequest, MoveRequest, SessionMeta, SessionSource};
pub use view::{AnalysisView, CreateResponse, EngineReply, HintView, MoveResponse, MoveView, StateView};

use session::{engine_strategy, now, Session};
use store::Store;

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    /// Directory for session logs; sessions live in memory only without it.
    pub data_dir: Option<PathBuf>,
    /// Sessions idle for longer are dropped.
    pub ttl: Option<Duration>,
    /// Largest number of unresolved crossings the engine and hints solve.
    pub engine_bound: usize,
    /// Largest number of unresolved crossings an analysis request solves.
    pub analysis_bound: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig { data_dir: None, ttl: Some(Duration::from_secs(24 * 3600)), engine_bound: 10, analysis_bound: 12 }
    }
}

type Shared = Arc<Mutex<Session>>;

struct Inner {
    sessions: StdMutex<HashMap<String, Shared>>,
    store: Option<Store>,
    config: ServiceConfig,
}

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

impl AppState {
    /// Opens the data directory, if any, and replays its sessions.
    pub fn new(config: ServiceConfig) -> Result<Self, ServiceError> {
        let store = config.data_dir.as_ref().map(Store::open).transpose()?;
        let mut sessions = HashMap::new();
        if let Some(store) = &store {
            for p in store.load_all()? {
                let id = p.meta.id.clone();
                let session = Session::restore(p.meta, p.config, &p.moves)
                    .map_err(|message| ServiceError::Corrupt { path: PathBuf::from(format!("{id}.log")), message })?;
                sessions.insert(id, Arc::new(Mutex::new(session)));
            }
        }
        Ok(AppState { inner: Arc::new(Inner { sessions: StdMutex::new(sessions), store, config }) })
    }

    pub fn session_count(&self) -> usize {
        self.inner.sessions.lock().unwrap().len()
    }

    fn insert(&self, session: Session) {
        let id = session.meta.id.clone();
        self.inner.sessions.lock().unwrap().insert(id, Arc::new(Mutex::new(session)));
    }

    fn drop_session(&self, id: &str) {
        self.inner.sessions.lock().unwrap().remove(id);
        if let Some(store) = &self.inner.store {
            store.remove(id);
        }
    }

    /// Locks a live session in arrival order, dropping it once expired.
    async fn lock(&self, id: &str) -> Result<tokio::sync::OwnedMutexGuard<Session>, ApiError> {
        let shared = self.inner.sessions.lock().unwrap().get(id).cloned();
        let shared = shared.ok_or_else(|| ApiError::SessionNotFound(id.to_string()))?;
        let mut guard = shared.lock_owned().await;
        if let Some(ttl) = self.inner.config.ttl {
            if guard.last_seen.elapsed() > ttl {
                drop(guard);
                self.drop_session(id);
                return Err(ApiError::SessionNotFound(id.to_string()));
            }
        }
        guard.last_seen = Instant::now();
        Ok(guard)
    }

    fn persist(&self, id: &str, moves: &[linkgame::Move]) -> Result<(), ApiError> {
        match &self.inner.store {
            Some(store) if !moves.is_empty() => store.append(id, moves).map_err(|e| ApiError::Internal(e.to_string())),
            _ => Ok(()),
        }
    }
}

/// Runs the engine if it is to move; the solver runs off the async workers.
async fn engine_turn(session: &mut Session, bound: usize) -> Result<Option<EngineReply>, ApiError> {
    let snapshot = session.clone();
    let choice = tokio::task::spawn_blocking(move || snapshot.engine_choice(bound))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?;
    choice.map(|c| session.apply_engine(c)).transpose()
}

async fn create_session(
    State(app): State<AppState>,
    Json(request): Json<CreateRequest>,
) -> Result<(StatusCode, Json<CreateResponse>), ApiError> {
    let (source, config) = request.config()?;
    let engine = request.human.other();
    let meta = SessionMeta {
        id: uuid::Uuid::new_v4().simple().to_string(),
        source,
        human: request.human,
        engine_strategy: engine_strategy(&request.engine, &config, engine)?,
        engine: request.engine,
        created: now(),
    };
    let mut session = Session::new(meta, config)?;
    if let Some(store) = &app.inner.store {
        store.create(&session.meta, &session.config, session.word_source()).map_err(|e| ApiError::Internal(e.to_string()))?;
    }
    let engine_reply = engine_turn(&mut session, app.inner.config.engine_bound).await?;
    app.persist(&session.meta.id, session.state.history())?;
    let state = session.view();
    app.insert(session);
    Ok((StatusCode::CREATED, Json(CreateResponse { state, engine_reply })))
}

async fn get_session(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<StateView>, ApiError> {
    Ok(Json(app.lock(&id).await?.view()))
}

async fn post_move(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Json(request): Json<MoveRequest>,
) -> Result<Json<MoveResponse>, ApiError> {
    let mut session = app.lock(&id).await?;
    if let Some((state, engine_reply)) = session.replayed(request) {
        return Ok(Json(MoveResponse { state, engine_reply, replayed: true }));
    }
    let mv = session.check_human_move(request)?;
    // Work on a copy so a failure leaves the session untouched; the human
    // move and the engine reply reach the log together.
    let mut next = session.clone();
    let before = next.state.history().len();
    next.state = next.state.apply_move(mv).map_err(|e| ApiError::IllegalMove(e.to_string()))?;
    let engine_reply = engine_turn(&mut next, app.inner.config.engine_bound).await?;
    app.persist(&id, &next.state.history()[before..])?;
    next.updated = now();
    *session = next;
    Ok(Json(MoveResponse { state: session.view(), engine_reply, replayed: false }))
}

async fn get_hint(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<HintView>, ApiError> {
    let session = app.lock(&id).await?;
    let snapshot = session.clone();
    let bound = app.inner.config.engine_bound;
    let hint = tokio::task::spawn_blocking(move || snapshot.hint(bound)).await.map_err(|e| ApiError::Internal(e.to_string()))?;
    Ok(Json(hint?))
}

async fn get_analysis(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<AnalysisView>, ApiError> {
    let session = app.lock(&id).await?;
    let state = session.state.clone();
    let options = SolveOptions { bound: app.inner.config.analysis_bound, budget: state.budget(), ..SolveOptions::default() };
    let result = tokio::task::spawn_blocking(move || solve_diagram_with(&state, &options))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?;
    let result = result.map_err(|e| match e {
        SolveError::BoundExceeded { .. } => ApiError::AnalysisBoundExceeded(e.to_string()),
        other => ApiError::Internal(other.to_string()),
    })?;
    Ok(Json(AnalysisView {
        winner: result.winner,
        winning_role: result.winning_role,
        summary: result.summary(),
        principal_variation: result.principal_variation.iter().map(|&m| m.into()).collect(),
        nodes: result.nodes,
        unknown_leaves: result.unknown_leaves,
        unknown_influence: result.unknown_influence,
    }))
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/moves", post(post_move))
        .route("/sessions/{id}/hint", get(get_hint))
        .route("/sessions/{id}/analysis", get(get_analysis))
        .with_state(state)
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> Result<(), ServiceError> {
    let state = AppState::new(config)?;
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|source| ServiceError::Io { path: PathBuf::from(addr.to_string()), source })?;
    axum::serve(listener, router(state))
        .await
        .map_err(|source| ServiceError::Io { path: PathBuf::from(addr.to_string()), source })
}
