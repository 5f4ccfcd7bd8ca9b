//! Versioned, file-backed snapshot store.
//!
//! Each commit appends one JSON-Lines segment under `segments/`, writes a
//! query-order index under `indexes/`, and then atomically replaces
//! `MANIFEST.json`, which names the live version and its segments. A commit
//! interrupted before the manifest swap leaves the previous version intact.
//! Readers hold `Arc<Snapshot>` handles that never change.

mod disk;
mod query;
mod snapshot;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytics::{ConferenceStats, EngagementWeights};
use crate::cfp::{CfpEntry, Timeline};
use crate::classify::LabeledTweet;
use crate::ingest::{PaperRecord, Tweet};
use crate::linker::PaperLink;

pub use query::{query, Page, QueryPage, Selector, MAX_PAGE_LIMIT};
pub use snapshot::{Snapshot, SnapshotData};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt store: {0}")]
    Corrupt(String),
    #[error("unknown selector {0:?}")]
    UnknownSelector(String),
    #[error("page limit {0} exceeds {MAX_PAGE_LIMIT}")]
    PageTooLarge(usize),
}

/// Artifacts recomputed over the whole corpus on every pipeline run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DerivedArtifacts {
    pub timeline: Timeline,
    pub stats: BTreeMap<String, ConferenceStats>,
    pub popularity: BTreeMap<String, f64>,
    pub papers: BTreeMap<String, PaperRecord>,
    pub weights: EngagementWeights,
    pub computed_at: Option<DateTime<Utc>>,
}

/// Everything a single commit adds or replaces.
#[derive(Debug, Clone)]
pub struct CommitBatch {
    pub created_at: DateTime<Utc>,
    pub inserts: Vec<Tweet>,
    pub updates: Vec<Tweet>,
    /// Upserted by tweet id.
    pub labels: Vec<LabeledTweet>,
    /// Upserted by tweet id.
    pub conference_tags: BTreeMap<String, BTreeSet<String>>,
    /// Added; one link per (paper, tweet) is kept.
    pub links: Vec<PaperLink>,
    /// Upserted by tweet id.
    pub cfp_entries: Vec<CfpEntry>,
    /// Replaces the previous derived artifacts when present.
    pub derived: Option<DerivedArtifacts>,
}

impl CommitBatch {
    pub fn new(created_at: DateTime<Utc>) -> Self {
        Self {
            created_at,
            inserts: Vec::new(),
            updates: Vec::new(),
            labels: Vec::new(),
            conference_tags: BTreeMap::new(),
            links: Vec::new(),
            cfp_entries: Vec::new(),
            derived: None,
        }
    }
}

/// Where a simulated crash interrupts a commit.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrashPoint {
    AfterSegment,
    AfterIndex,
}

pub struct Store {
    dir: Option<PathBuf>,
    current: RwLock<Arc<Snapshot>>,
    writer: Mutex<()>,
}

impl Store {
    /// Opens or creates a store directory.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, StoreError> {
        let dir = dir.as_ref().to_path_buf();
        let snapshot = disk::load(&dir)?;
        Ok(Self {
            dir: Some(dir),
            current: RwLock::new(Arc::new(snapshot)),
            writer: Mutex::new(()),
        })
    }

    /// A store that never touches disk.
    pub fn in_memory() -> Self {
        Self {
            dir: None,
            current: RwLock::new(Arc::new(Snapshot::empty())),
            writer: Mutex::new(()),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.current.read().expect("snapshot lock").clone()
    }

    pub fn commit(&self, batch: CommitBatch) -> Result<Arc<Snapshot>, StoreError> {
        self.commit_inner(batch, None)
    }

    #[doc(hidden)]
    pub fn commit_with_crash(&self, batch: CommitBatch, crash: CrashPoint) -> Result<Arc<Snapshot>, StoreError> {
        self.commit_inner(batch, Some(crash))
    }

    fn commit_inner(&self, batch: CommitBatch, crash: Option<CrashPoint>) -> Result<Arc<Snapshot>, StoreError> {
        let _writer = self.writer.lock().expect("writer lock");
        let base = self.snapshot();
        let version = base.version() + 1;
        let mut data = base.data().clone();
        data.apply(&batch)?;
        let snapshot = Snapshot::build(version, batch.created_at, data, None);

        if let Some(dir) = &self.dir {
            disk::write_segment(dir, version, &batch)?;
            if crash == Some(CrashPoint::AfterSegment) {
                return Err(simulated_crash());
            }
            disk::write_index(dir, version, &snapshot)?;
            if crash == Some(CrashPoint::AfterIndex) {
                return Err(simulated_crash());
            }
            disk::write_manifest(dir, version, batch.created_at)?;
        }

        let snapshot = Arc::new(snapshot);
        *self.current.write().expect("snapshot lock") = snapshot.clone();
        Ok(snapshot)
    }
}

fn simulated_crash() -> StoreError {
    StoreError::Io(std::io::Error::other("simulated crash"))
}
