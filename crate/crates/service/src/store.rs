//! Session registry. Readers take an `Arc` snapshot and never wait on a
//! writer; writers to the same session are serialized by a per-session lock.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use reshape_core::profile::ProfileConfig;
use reshape_core::SynthConfig;

use crate::error::ServiceError;
use crate::ingest::Column;
use crate::session::{Session, SessionRecord};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub row_cap: usize,
    pub preview_limit: usize,
    pub synth: SynthConfig,
    pub profile: ProfileConfig,
    /// Sessions are written here as JSON and reloaded on start.
    pub data_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            row_cap: 1_000_000,
            preview_limit: 20,
            synth: SynthConfig::default(),
            profile: ProfileConfig::default(),
            data_dir: None,
        }
    }
}

struct Slot {
    write: Mutex<()>,
    current: RwLock<Arc<Session>>,
}

pub struct SessionStore {
    config: ServiceConfig,
    sessions: RwLock<HashMap<String, Arc<Slot>>>,
}

impl SessionStore {
    /// Open the store, replaying every session found in the data directory.
    pub fn open(config: ServiceConfig) -> Result<Self, ServiceError> {
        let store = SessionStore {
            config,
            sessions: RwLock::new(HashMap::new()),
        };
        if let Some(dir) = &store.config.data_dir {
            fs::create_dir_all(dir).map_err(storage)?;
            for entry in fs::read_dir(dir).map_err(storage)? {
                let path = entry.map_err(storage)?.path();
                if path.extension().and_then(|e| e.to_str()) != Some("json") {
                    continue;
                }
                let text = fs::read_to_string(&path).map_err(storage)?;
                let record: SessionRecord = serde_json::from_str(&text)
                    .map_err(|e| ServiceError::Storage(format!("{}: {e}", path.display())))?;
                let session = Session::replay(record, &store.config.profile)?;
                store.insert(session);
            }
        }
        Ok(store)
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.sessions.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn insert(&self, session: Session) -> Arc<Session> {
        let session = Arc::new(session);
        let slot = Arc::new(Slot {
            write: Mutex::new(()),
            current: RwLock::new(session.clone()),
        });
        self.sessions.write().insert(session.id.clone(), slot);
        session
    }

    pub fn create(&self, column: Column, synth: Option<SynthConfig>) -> Result<Arc<Session>, ServiceError> {
        if column.rows.len() > self.config.row_cap {
            return Err(ServiceError::TooManyRows {
                rows: column.rows.len(),
                cap: self.config.row_cap,
            });
        }
        let id = uuid::Uuid::new_v4().to_string();
        let session = Session::new(
            id,
            column.name,
            column.rows,
            synth.unwrap_or(self.config.synth),
            &self.config.profile,
        );
        self.persist(&session)?;
        Ok(self.insert(session))
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>, ServiceError> {
        self.sessions
            .read()
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::SessionNotFound(id.to_string()))
    }

    pub fn get(&self, id: &str) -> Result<Arc<Session>, ServiceError> {
        Ok(self.slot(id)?.current.read().clone())
    }

    /// Replace the session with `f(current)`. The new snapshot is persisted
    /// before it becomes visible; on error nothing changes.
    pub fn update<F>(&self, id: &str, f: F) -> Result<Arc<Session>, ServiceError>
    where
        F: FnOnce(&Session) -> Result<Session, ServiceError>,
    {
        let slot = self.slot(id)?;
        let _guard = slot.write.lock();
        let current = slot.current.read().clone();
        let next = f(&current)?;
        self.persist(&next)?;
        let next = Arc::new(next);
        *slot.current.write() = next.clone();
        Ok(next)
    }

    fn persist(&self, session: &Session) -> Result<(), ServiceError> {
        let Some(dir) = &self.config.data_dir else {
            return Ok(());
        };
        write_atomic(&dir.join(format!("{}.json", session.id)), &session.record())
    }
}

fn write_atomic(path: &Path, record: &SessionRecord) -> Result<(), ServiceError> {
    let tmp = path.with_extension("json.tmp");
    let text = serde_json::to_vec(record).map_err(|e| ServiceError::Storage(e.to_string()))?;
    fs::write(&tmp, text).map_err(storage)?;
    fs::rename(&tmp, path).map_err(storage)
}

fn storage(e: std::io::Error) -> ServiceError {
    ServiceError::Storage(e.to_string())
}
