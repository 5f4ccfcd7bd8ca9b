use std::collections::HashSet;
use std::path::Path;

use serde_json::{Map, Value};
use thiserror::Error;

use super::{PaperRecord, VenueRecord};

#[derive(Debug, Error)]
pub enum MetadataError {
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("duplicate key {0:?}")]
    DuplicateKey(String),
    #[error("schema error in field {0:?}")]
    SchemaError(String),
}

fn read(path: &Path) -> Result<Vec<Value>, MetadataError> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => MetadataError::FileNotFound(path.display().to_string()),
        _ => MetadataError::Io(e),
    })?;
    match serde_json::from_str(&text)? {
        Value::Array(items) => Ok(items),
        _ => Err(MetadataError::SchemaError("$".into())),
    }
}

fn object(v: &Value) -> Result<&Map<String, Value>, MetadataError> {
    v.as_object().ok_or_else(|| MetadataError::SchemaError("$".into()))
}

fn schema(field: &str) -> MetadataError {
    MetadataError::SchemaError(field.to_string())
}

fn req_str(obj: &Map<String, Value>, field: &str) -> Result<String, MetadataError> {
    obj.get(field)
        .and_then(Value::as_str)
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .ok_or_else(|| schema(field))
}

fn opt_str(obj: &Map<String, Value>, field: &str) -> Result<Option<String>, MetadataError> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(schema(field)),
    }
}

pub fn parse_venues(items: &[Value]) -> Result<Vec<VenueRecord>, MetadataError> {
    let mut keys = HashSet::new();
    let mut venues = Vec::with_capacity(items.len());
    for item in items {
        let obj = object(item)?;
        let key = req_str(obj, "key")?.to_lowercase();
        let display_name = req_str(obj, "display_name")?;
        let aliases: Vec<String> = obj
            .get("aliases")
            .and_then(Value::as_array)
            .ok_or_else(|| schema("aliases"))?
            .iter()
            .map(|a| {
                a.as_str()
                    .map(|s| s.trim().to_uppercase())
                    .filter(|s| !s.is_empty())
                    .ok_or_else(|| schema("aliases"))
            })
            .collect::<Result<_, _>>()?;
        if aliases.is_empty() {
            return Err(schema("aliases"));
        }
        let is_workshop = match obj.get("is_workshop") {
            None | Some(Value::Null) => false,
            Some(Value::Bool(b)) => *b,
            Some(_) => return Err(schema("is_workshop")),
        };
        let url = opt_str(obj, "url")?;
        if !keys.insert(key.clone()) {
            return Err(MetadataError::DuplicateKey(key));
        }
        venues.push(VenueRecord {
            key,
            display_name,
            aliases,
            is_workshop,
            url,
        });
    }
    Ok(venues)
}

pub fn parse_papers(items: &[Value]) -> Result<Vec<PaperRecord>, MetadataError> {
    let mut ids = HashSet::new();
    let mut papers = Vec::with_capacity(items.len());
    for item in items {
        let obj = object(item)?;
        let paper_id = req_str(obj, "paper_id")?;
        let title = req_str(obj, "title")?;
        let url = req_str(obj, "url")?;
        let year = obj
            .get("year")
            .and_then(Value::as_i64)
            .filter(|y| (1960..=2100).contains(y))
            .ok_or_else(|| schema("year"))? as i32;
        let venue_key = req_str(obj, "venue_key")?.to_lowercase();
        if !ids.insert(paper_id.clone()) {
            return Err(MetadataError::DuplicateKey(paper_id));
        }
        papers.push(PaperRecord {
            paper_id,
            title,
            url,
            year,
            venue_key,
        });
    }
    Ok(papers)
}

pub fn load_venues(path: impl AsRef<Path>) -> Result<Vec<VenueRecord>, MetadataError> {
    parse_venues(&read(path.as_ref())?)
}

pub fn load_papers(path: impl AsRef<Path>) -> Result<Vec<PaperRecord>, MetadataError> {
    parse_papers(&read(path.as_ref())?)
}
