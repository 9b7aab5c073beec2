use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use reshape_core::{PatternSyntaxError, RepairError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("session {0} not found")]
    SessionNotFound(String),
    #[error("cluster {0} not found")]
    ClusterNotFound(usize),
    #[error(transparent)]
    Pattern(#[from] PatternSyntaxError),
    #[error("no target has been labeled yet")]
    NoSynthesis,
    #[error(transparent)]
    Repair(#[from] RepairError),
    #[error("branch {0} does not exist")]
    BranchNotFound(usize),
    #[error("payload is empty")]
    EmptyPayload,
    #[error("malformed CSV: {0}")]
    BadCsv(String),
    #[error("CSV input needs a column name")]
    ColumnRequired,
    #[error("column {0:?} not found")]
    MissingColumn(String),
    #[error("{rows} rows exceed the limit of {cap}")]
    TooManyRows { rows: usize, cap: usize },
    #[error("unknown export format {0:?}")]
    UnknownFormat(String),
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error("storage failure: {0}")]
    Storage(String),
}

impl ServiceError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::SessionNotFound(_) => "session_not_found",
            ServiceError::ClusterNotFound(_) => "cluster_not_found",
            ServiceError::Pattern(_) => "pattern_syntax",
            ServiceError::NoSynthesis => "no_target",
            ServiceError::Repair(RepairError::UnknownSource(_)) => "unknown_source",
            ServiceError::Repair(RepairError::IndexOutOfRange { .. }) => "alternate_out_of_range",
            ServiceError::BranchNotFound(_) => "branch_not_found",
            ServiceError::EmptyPayload => "empty_payload",
            ServiceError::BadCsv(_) => "malformed_csv",
            ServiceError::ColumnRequired => "column_required",
            ServiceError::MissingColumn(_) => "missing_column",
            ServiceError::TooManyRows { .. } => "too_many_rows",
            ServiceError::UnknownFormat(_) => "unknown_format",
            ServiceError::BadRequest(_) => "bad_request",
            ServiceError::Storage(_) => "storage",
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ServiceError::SessionNotFound(_) | ServiceError::ClusterNotFound(_) | ServiceError::BranchNotFound(_) => {
                StatusCode::NOT_FOUND
            }
            ServiceError::NoSynthesis => StatusCode::CONFLICT,
            ServiceError::TooManyRows { .. } => StatusCode::PAYLOAD_TOO_LARGE,
            ServiceError::Pattern(_) | ServiceError::Repair(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Storage(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub error: &'static str,
    pub detail: String,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            error: self.code(),
            detail: self.to_string(),
        };
        (self.status(), Json(body)).into_response()
    }
}
