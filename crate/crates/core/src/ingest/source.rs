use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::Serialize;
use thiserror::Error;

use super::{parse_timestamp, RawTweetRecord};

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// A malformed line in a JSON-Lines dump. Lines are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineError {
    pub line: usize,
    pub reason: String,
}

/// Records read from a dump plus the lines that could not be parsed.
#[derive(Debug, Clone, Default)]
pub struct FixtureLoad {
    pub records: Vec<RawTweetRecord>,
    pub errors: Vec<LineError>,
}

pub fn parse_tweet_lines(text: &str) -> FixtureLoad {
    let mut out = FixtureLoad::default();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RawTweetRecord>(line) {
            Ok(rec) if rec.id.trim().is_empty() => out.errors.push(LineError {
                line: idx + 1,
                reason: "empty id".into(),
            }),
            Ok(rec) => out.records.push(rec),
            Err(e) => out.errors.push(LineError {
                line: idx + 1,
                reason: e.to_string(),
            }),
        }
    }
    out
}

pub fn load_tweet_fixtures(path: impl AsRef<Path>) -> Result<FixtureLoad, SourceError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => SourceError::FileNotFound(path.display().to_string()),
        _ => SourceError::Io {
            path: path.display().to_string(),
            source: e,
        },
    })?;
    Ok(parse_tweet_lines(&text))
}

/// Where raw tweets come from. Live scrapers implement this; the crate ships
/// the file-backed [`FileSource`].
pub trait TweetSource: Send + Sync {
    /// Records whose source tag matches `query` (empty matches all) and that
    /// were created at or after `since`.
    fn pull(&self, query: &str, since: Option<DateTime<Utc>>) -> Result<FixtureLoad, SourceError>;
}

/// Reads JSON-Lines dumps from disk on every pull.
#[derive(Debug, Clone, Default)]
pub struct FileSource {
    paths: Vec<PathBuf>,
}

impl FileSource {
    pub fn new(paths: impl IntoIterator<Item = impl Into<PathBuf>>) -> Self {
        Self {
            paths: paths.into_iter().map(Into::into).collect(),
        }
    }

    pub fn paths(&self) -> &[PathBuf] {
        &self.paths
    }
}

impl TweetSource for FileSource {
    fn pull(&self, query: &str, since: Option<DateTime<Utc>>) -> Result<FixtureLoad, SourceError> {
        let query = query.trim().trim_start_matches('#').to_lowercase();
        let mut out = FixtureLoad::default();
        for path in &self.paths {
            let loaded = load_tweet_fixtures(path)?;
            out.errors.extend(loaded.errors);
            out.records.extend(loaded.records.into_iter().filter(|r| {
                let tag_ok = query.is_empty()
                    || r.source_tag
                        .split(',')
                        .any(|t| t.trim().trim_start_matches('#').eq_ignore_ascii_case(&query));
                // unparseable timestamps pass through so normalization reports them
                let time_ok = match (since, parse_timestamp(&r.created_at)) {
                    (Some(since), Ok(t)) => t >= since,
                    _ => true,
                };
                tag_ok && time_ok
            }));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use std::io::Write;

    use super::*;

    const LINE: &str = r#"{"id":"1","created_at":"2021-01-01 00:00:00","username":"a","text":"hi","likes":1,"retweets":0,"replies":0,"language":"en","source_tag":"nlproc"}"#;

    #[test]
    fn empty_file() {
        let load = parse_tweet_lines("");
        assert!(load.records.is_empty() && load.errors.is_empty());
    }

    #[test]
    fn three_lines_in_order() {
        let text = (1..=3)
            .map(|i| LINE.replace(r#""id":"1""#, &format!(r#""id":"{i}""#)))
            .collect::<Vec<_>>()
            .join("\n");
        let load = parse_tweet_lines(&text);
        let ids: Vec<_> = load.records.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["1", "2", "3"]);
        assert!(load.errors.is_empty());
    }

    #[test]
    fn truncated_line_reported() {
        let text = format!("{LINE}\n{}", &LINE[..40]);
        let load = parse_tweet_lines(&text);
        assert_eq!(load.records.len(), 1);
        assert_eq!(load.errors.len(), 1);
        assert_eq!(load.errors[0].line, 2);
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            load_tweet_fixtures("/no/such/file.jsonl"),
            Err(SourceError::FileNotFound(_))
        ));
    }

    #[test]
    fn file_source_filters_by_tag() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "{LINE}").unwrap();
        writeln!(f, "{}", LINE.replace("nlproc", "acl2020").replace(r#""id":"1""#, r#""id":"2""#)).unwrap();
        let src = FileSource::new([f.path()]);
        assert_eq!(src.pull("", None).unwrap().records.len(), 2);
        let acl = src.pull("#ACL2020", None).unwrap();
        assert_eq!(acl.records.len(), 1);
        assert_eq!(acl.records[0].id, "2");
        let since = parse_timestamp("2022-01-01").unwrap();
        assert!(src.pull("", Some(since)).unwrap().records.is_empty());
    }
}
