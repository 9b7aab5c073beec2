//! HTTP session service: upload a column, inspect its pattern hierarchy,
//! label a target, review and repair the synthesized program, export.

pub mod api;
pub mod error;
pub mod export;
pub mod ingest;
pub mod session;
pub mod store;

use std::net::SocketAddr;
use std::sync::Arc;

pub use api::router;
pub use error::ServiceError;
pub use store::{ServiceConfig, SessionStore};

/// Serve until Ctrl-C.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let store = SessionStore::open(config).map_err(|e| std::io::Error::other(e.to_string()))?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(Arc::new(store)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
