use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::{CommitBatch, DerivedArtifacts, Snapshot, SnapshotData, StoreError};
use crate::cfp::CfpEntry;
use crate::classify::LabeledTweet;
use crate::ingest::Tweet;
use crate::linker::PaperLink;

const MANIFEST: &str = "MANIFEST.json";
const INDEX_MAGIC: &[u8; 8] = b"NLPIDX01";

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    version: u64,
    created_at: DateTime<Utc>,
    segments: Vec<String>,
    index: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
enum Record {
    Header { version: u64, created_at: DateTime<Utc> },
    Insert(Tweet),
    Update(Tweet),
    Label(LabeledTweet),
    ConferenceTags { tweet_id: String, tags: BTreeSet<String> },
    Link(PaperLink),
    Cfp(CfpEntry),
    Derived(DerivedArtifacts),
}

fn segment_name(version: u64) -> String {
    format!("segments/{version:08}.jsonl")
}

fn index_name(version: u64) -> String {
    format!("indexes/{version:08}.bin")
}

fn sync_dir(dir: &Path) {
    // directory fsync is not supported everywhere
    if let Ok(d) = File::open(dir) {
        let _ = d.sync_all();
    }
}

fn write_file(path: &Path, bytes_fn: impl FnOnce(&mut BufWriter<&File>) -> std::io::Result<()>) -> Result<(), StoreError> {
    let file = File::create(path)?;
    {
        let mut w = BufWriter::new(&file);
        bytes_fn(&mut w)?;
        w.flush()?;
    }
    file.sync_all()?;
    Ok(())
}

pub(super) fn write_segment(dir: &Path, version: u64, batch: &CommitBatch) -> Result<(), StoreError> {
    fs::create_dir_all(dir.join("segments"))?;
    let mut records = vec![Record::Header {
        version,
        created_at: batch.created_at,
    }];
    records.extend(batch.inserts.iter().cloned().map(Record::Insert));
    records.extend(batch.updates.iter().cloned().map(Record::Update));
    records.extend(batch.labels.iter().cloned().map(Record::Label));
    records.extend(batch.conference_tags.iter().map(|(id, tags)| Record::ConferenceTags {
        tweet_id: id.clone(),
        tags: tags.clone(),
    }));
    records.extend(batch.links.iter().cloned().map(Record::Link));
    records.extend(batch.cfp_entries.iter().cloned().map(Record::Cfp));
    records.extend(batch.derived.iter().cloned().map(Record::Derived));

    write_file(&dir.join(segment_name(version)), |w| {
        for r in &records {
            serde_json::to_writer(&mut *w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    })?;
    sync_dir(&dir.join("segments"));
    Ok(())
}

pub(super) fn write_index(dir: &Path, version: u64, snapshot: &Snapshot) -> Result<(), StoreError> {
    fs::create_dir_all(dir.join("indexes"))?;
    write_file(&dir.join(index_name(version)), |w| {
        w.write_all(INDEX_MAGIC)?;
        w.write_all(&version.to_le_bytes())?;
        w.write_all(&(snapshot.ordered().len() as u64).to_le_bytes())?;
        for t in snapshot.ordered() {
            w.write_all(&(t.id.len() as u32).to_le_bytes())?;
            w.write_all(t.id.as_bytes())?;
        }
        Ok(())
    })
}

pub(super) fn write_manifest(dir: &Path, version: u64, created_at: DateTime<Utc>) -> Result<(), StoreError> {
    let manifest = Manifest {
        version,
        created_at,
        segments: (1..=version).map(segment_name).collect(),
        index: Some(index_name(version)),
    };
    let tmp = dir.join("MANIFEST.json.tmp");
    write_file(&tmp, |w| {
        serde_json::to_writer_pretty(&mut *w, &manifest)?;
        Ok(())
    })?;
    fs::rename(&tmp, dir.join(MANIFEST))?;
    sync_dir(dir);
    Ok(())
}

fn read_index(path: &Path, version: u64) -> Option<Vec<String>> {
    let mut bytes = Vec::new();
    File::open(path).ok()?.read_to_end(&mut bytes).ok()?;
    let mut rest = bytes.strip_prefix(INDEX_MAGIC.as_slice())?;
    let mut take = |n: usize| -> Option<&[u8]> {
        (rest.len() >= n).then(|| {
            let (head, tail) = rest.split_at(n);
            rest = tail;
            head
        })
    };
    let v = u64::from_le_bytes(take(8)?.try_into().ok()?);
    if v != version {
        return None;
    }
    let n = u64::from_le_bytes(take(8)?.try_into().ok()?) as usize;
    let mut ids = Vec::with_capacity(n.min(1 << 20));
    for _ in 0..n {
        let len = u32::from_le_bytes(take(4)?.try_into().ok()?) as usize;
        ids.push(String::from_utf8(take(len)?.to_vec()).ok()?);
    }
    Some(ids)
}

fn replay_segment(path: &Path, expect_version: u64, data: &mut SnapshotData) -> Result<DateTime<Utc>, StoreError> {
    let corrupt = |m: String| StoreError::Corrupt(format!("{}: {m}", path.display()));
    let reader = BufReader::new(File::open(path)?);
    let mut batch: Option<CommitBatch> = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line).map_err(|e| corrupt(format!("line {}: {e}", i + 1)))?;
        let b = match (&mut batch, record) {
            (None, Record::Header { version, created_at }) => {
                if version != expect_version {
                    return Err(corrupt(format!("header says version {version}, expected {expect_version}")));
                }
                batch = Some(CommitBatch::new(created_at));
                continue;
            }
            (None, _) => return Err(corrupt("missing header".into())),
            (Some(_), Record::Header { .. }) => return Err(corrupt("duplicate header".into())),
            (Some(b), r) => (b, r),
        };
        match b {
            (b, Record::Insert(t)) => b.inserts.push(t),
            (b, Record::Update(t)) => b.updates.push(t),
            (b, Record::Label(l)) => b.labels.push(l),
            (b, Record::ConferenceTags { tweet_id, tags }) => {
                b.conference_tags.insert(tweet_id, tags);
            }
            (b, Record::Link(l)) => b.links.push(l),
            (b, Record::Cfp(e)) => b.cfp_entries.push(e),
            (b, Record::Derived(d)) => b.derived = Some(d),
            (_, Record::Header { .. }) => unreachable!(),
        }
    }
    let batch = batch.ok_or_else(|| corrupt("empty segment".into()))?;
    data.apply(&batch)?;
    Ok(batch.created_at)
}

/// Rebuilds the live snapshot named by the manifest. Segments newer than the
/// manifest version are leftovers of an interrupted commit and are ignored.
pub(super) fn load(dir: &Path) -> Result<Snapshot, StoreError> {
    fs::create_dir_all(dir)?;
    let manifest_path = dir.join(MANIFEST);
    if !manifest_path.exists() {
        return Ok(Snapshot::empty());
    }
    let manifest: Manifest = serde_json::from_reader(BufReader::new(File::open(&manifest_path)?))
        .map_err(|e| StoreError::Corrupt(format!("manifest: {e}")))?;
    if manifest.segments.len() as u64 != manifest.version {
        return Err(StoreError::Corrupt("manifest segment count does not match version".into()));
    }

    let mut data = SnapshotData::default();
    for (i, seg) in manifest.segments.iter().enumerate() {
        let path: PathBuf = dir.join(seg);
        replay_segment(&path, i as u64 + 1, &mut data)?;
    }
    let order = manifest
        .index
        .as_ref()
        .and_then(|name| read_index(&dir.join(name), manifest.version));
    Ok(Snapshot::build(manifest.version, manifest.created_at, data, order))
}
