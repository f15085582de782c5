use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use serde_json::{json, Value};
use skilltrace_core::domain::{DomainError, ParticipantId};
use skilltrace_core::metrics::MetricsError;
use skilltrace_core::reporting::ReportError;

/// Error body: `{code, message, detail}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: String,
    pub message: String,
    pub detail: Value,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self { status, code: code.into(), message: message.into(), detail: Value::Null }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }

    pub fn bad_request(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, message)
    }

    pub fn unauthorized(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNAUTHORIZED, "UNAUTHENTICATED", message)
    }

    pub fn not_found(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, code, message)
    }

    pub fn conflict(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::CONFLICT, code, message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "INTERNAL", message)
    }

    /// Maps a domain rejection. Membership failures of the caller are 403;
    /// the same failure about some other participant is a 400.
    pub fn domain(err: DomainError, actor: Option<&ParticipantId>) -> Self {
        let status = match &err {
            DomainError::UnknownParticipant(_)
            | DomainError::UnknownTeam(_)
            | DomainError::UnknownTask(_)
            | DomainError::UnknownSprint(_) => StatusCode::NOT_FOUND,
            DomainError::NotTeamMember { participant, .. } if Some(participant) == actor => StatusCode::FORBIDDEN,
            DomainError::NotAssignee { .. } => StatusCode::FORBIDDEN,
            _ => StatusCode::BAD_REQUEST,
        };
        let detail = match &err {
            DomainError::IllegalTransition { task, from, action } => {
                json!({"task": task, "from": from.to_string(), "action": action})
            }
            DomainError::LikertOutOfRange { value, scale } => json!({"value": value, "scale": scale.to_string()}),
            _ => Value::Null,
        };
        Self::new(status, err.code(), err.to_string()).with_detail(detail)
    }
}

impl From<ReportError> for ApiError {
    fn from(err: ReportError) -> Self {
        let status = match err {
            ReportError::Csv(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        Self::new(status, err.code(), err.to_string())
    }
}

impl From<MetricsError> for ApiError {
    fn from(err: MetricsError) -> Self {
        Self::bad_request(err.code(), err.to_string())
    }
}

impl From<std::io::Error> for ApiError {
    fn from(err: std::io::Error) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "IO_ERROR", err.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}
