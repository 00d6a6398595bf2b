use std::path::PathBuf;

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::json;
use thiserror::Error;

/// Errors returned to API clients, each with a stable code.
#[derive(Debug, Error)]
pub enum ApiError {
    #[error("no session '{0}'")]
    SessionNotFound(String),
    #[error("{0}")]
    InvalidPayload(String),
    #[error("the shadow has {0} components; games need exactly 2")]
    UnsupportedComponents(usize),
    #[error("it is not the {0}'s turn")]
    OutOfTurn(String),
    #[error("the game is over")]
    GameOver,
    #[error("{0}")]
    IllegalMove(String),
    #[error("state version {got} is stale; the session is at version {current}")]
    StaleVersion { got: u64, current: u64 },
    #[error("{0}")]
    AnalysisBoundExceeded(String),
    #[error("{0}")]
    Internal(String),
}

impl ApiError {
    pub fn code(&self) -> &'static str {
        match self {
            ApiError::SessionNotFound(_) => "session_not_found",
            ApiError::InvalidPayload(_) => "invalid_payload",
            ApiError::UnsupportedComponents(_) => "unsupported_components",
            ApiError::OutOfTurn(_) => "out_of_turn",
            ApiError::GameOver => "game_over",
            ApiError::IllegalMove(_) => "illegal_move",
            ApiError::StaleVersion { .. } => "stale_version",
            ApiError::AnalysisBoundExceeded(_) => "analysis_bound_exceeded",
            ApiError::Internal(_) => "internal",
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::SessionNotFound(_) => StatusCode::NOT_FOUND,
            ApiError::InvalidPayload(_) => StatusCode::BAD_REQUEST,
            ApiError::UnsupportedComponents(_) | ApiError::IllegalMove(_) | ApiError::AnalysisBoundExceeded(_) => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            ApiError::OutOfTurn(_) | ApiError::GameOver | ApiError::StaleVersion { .. } => StatusCode::CONFLICT,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": { "code": self.code(), "message": self.to_string() } });
        (self.status(), Json(body)).into_response()
    }
}

/// Errors starting the service or reloading persisted sessions.
#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Corrupt { path: PathBuf, message: String },
}
