//! HTTP routes over the session store.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use reshape_core::{Pattern, SynthConfig};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::ServiceError;
use crate::export::{program_json, script_text, transformed_csv, ExportFormat};
use crate::ingest::{self, Format};
use crate::session::{Session, TargetChoice};
use crate::store::SessionStore;

pub type AppState = Arc<SessionStore>;

/// Large enough for a million-row upload.
const BODY_LIMIT: usize = 512 * 1024 * 1024;

pub fn router(store: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(session_summary))
        .route("/sessions/{id}/hierarchy", get(hierarchy))
        .route("/sessions/{id}/target", post(label_target))
        .route("/sessions/{id}/program", get(program))
        .route("/sessions/{id}/preview", get(preview))
        .route("/sessions/{id}/repair", post(repair))
        .route("/sessions/{id}/export", get(export))
        .layer(DefaultBodyLimit::max(BODY_LIMIT))
        .with_state(store)
}

/// Profiling and synthesis are CPU bound; keep them off the reactor.
async fn blocking<T, F>(f: F) -> Result<T, ServiceError>
where
    F: FnOnce() -> Result<T, ServiceError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ServiceError::Storage(format!("worker failed: {e}")))?
}

fn json_body<T: DeserializeOwned>(body: &[u8]) -> Result<T, ServiceError> {
    serde_json::from_slice(body).map_err(|e| ServiceError::BadRequest(e.to_string()))
}

fn utf8(body: &[u8]) -> Result<&str, ServiceError> {
    std::str::from_utf8(body).map_err(|_| ServiceError::BadRequest("body is not UTF-8".into()))
}

#[derive(Debug, Default, Deserialize)]
struct CreateQuery {
    column: Option<String>,
    format: Option<Format>,
    k: Option<usize>,
}

#[derive(Debug, Deserialize)]
struct CreateRequest {
    data: Option<String>,
    rows: Option<Vec<String>>,
    #[serde(default = "lines")]
    format: Format,
    column: Option<String>,
    k: Option<usize>,
}

fn lines() -> Format {
    Format::Lines
}

fn content_type(headers: &HeaderMap) -> &str {
    headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.split(';').next())
        .map(str::trim)
        .unwrap_or("text/plain")
}

async fn create_session(
    State(store): State<AppState>,
    Query(query): Query<CreateQuery>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Response, ServiceError> {
    let cap = store.config().row_cap;
    let base = store.config().synth;
    let (column, k) = match content_type(&headers) {
        "application/json" => {
            let req: CreateRequest = json_body(&body)?;
            let name = req.column.or(query.column);
            let column = match (req.rows, req.data) {
                (Some(rows), None) => {
                    if rows.is_empty() {
                        return Err(ServiceError::EmptyPayload);
                    }
                    if rows.len() > cap {
                        return Err(ServiceError::TooManyRows { rows: rows.len(), cap });
                    }
                    ingest::Column {
                        name: name.unwrap_or_else(|| ingest::DEFAULT_COLUMN.to_string()),
                        rows,
                    }
                }
                (None, Some(data)) => ingest::parse(&data, req.format, name.as_deref(), cap)?,
                _ => return Err(ServiceError::BadRequest("give exactly one of `data` or `rows`".into())),
            };
            (column, req.k.or(query.k))
        }
        ct => {
            let format = match ct {
                "text/csv" => Format::Csv,
                _ => query.format.unwrap_or(Format::Lines),
            };
            let data = utf8(&body)?.to_string();
            (ingest::parse(&data, format, query.column.as_deref(), cap)?, query.k)
        }
    };
    let synth = SynthConfig {
        k: k.unwrap_or(base.k),
        ..base
    };
    let summary = blocking(move || Ok(store.create(column, Some(synth))?.summary())).await?;
    Ok((StatusCode::CREATED, Json(summary)).into_response())
}

async fn session_summary(State(store): State<AppState>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    Ok(Json(store.get(&id)?.summary()).into_response())
}

async fn hierarchy(State(store): State<AppState>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    let session = store.get(&id)?;
    let view = blocking(move || Ok(session.hierarchy_view())).await?;
    Ok(Json(view).into_response())
}

async fn label_target(
    State(store): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ServiceError> {
    let choice: TargetChoice = json_body(&body)?;
    let view = blocking(move || {
        let session = store.update(&id, |s| Ok(s.with_target(s.resolve_target(&choice)?)))?;
        session.label_view()
    })
    .await?;
    Ok(Json(view).into_response())
}

async fn program(State(store): State<AppState>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    Ok(Json(store.get(&id)?.program_view()?).into_response())
}

#[derive(Debug, Deserialize)]
struct PreviewQuery {
    limit: Option<usize>,
    branch: Option<usize>,
}

async fn preview(
    State(store): State<AppState>,
    Path(id): Path<String>,
    Query(query): Query<PreviewQuery>,
) -> Result<Response, ServiceError> {
    let session = store.get(&id)?;
    let limit = query.limit.unwrap_or(store.config().preview_limit);
    let view = blocking(move || session.preview(limit, query.branch)).await?;
    Ok(Json(view).into_response())
}

#[derive(Debug, Deserialize)]
struct RepairRequest {
    source: String,
    index: usize,
}

async fn repair(
    State(store): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ServiceError> {
    let req: RepairRequest = json_body(&body)?;
    let source = Pattern::parse(&req.source)?;
    let limit = store.config().preview_limit;
    let view = blocking(move || {
        let session = store.update(&id, |s| s.repaired(&source, req.index))?;
        let branch = session
            .synthesis
            .as_ref()
            .and_then(|r| r.per_source.iter().position(|p| p.source == source));
        Ok(serde_json::json!({
            "program": session.program_view()?,
            "preview": session.preview(limit, branch)?,
        }))
    })
    .await?;
    Ok(Json(view).into_response())
}

#[derive(Debug, Deserialize)]
struct ExportQuery {
    format: Option<String>,
}

/// The body of an export in `format`.
pub fn export_document(session: &Session, format: ExportFormat) -> Result<String, ServiceError> {
    match format {
        ExportFormat::TransformedData => Ok(transformed_csv(&session.rows, &session.program(), &session.column)),
        ExportFormat::Script => {
            let result = session.synthesis.as_ref().ok_or(ServiceError::NoSynthesis)?;
            Ok(script_text(result, &session.column))
        }
        ExportFormat::ProgramJson => {
            session.synthesis.as_ref().ok_or(ServiceError::NoSynthesis)?;
            Ok(program_json(&session.program()))
        }
    }
}

async fn export(
    State(store): State<AppState>,
    Path(id): Path<String>,
    Query(query): Query<ExportQuery>,
) -> Result<Response, ServiceError> {
    let format: ExportFormat = query.format.as_deref().unwrap_or("script").parse()?;
    let session = store.get(&id)?;
    let body = blocking(move || export_document(&session, format)).await?;
    Ok(([(header::CONTENT_TYPE, format.content_type())], body).into_response())
}
