use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ClassifyError, TopicLabel};
use crate::ingest::Tweet;

/// One line of a labeled-corpus file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub tweet: Tweet,
    pub label: TopicLabel,
}

pub fn parse_labeled(text: &str) -> Result<Vec<LabeledExample>, ClassifyError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| ClassifyError::Parse {
                line: i + 1,
                reason: e.to_string(),
            })
        })
        .collect()
}

pub fn load_labeled(path: impl AsRef<Path>) -> Result<Vec<LabeledExample>, ClassifyError> {
    parse_labeled(&std::fs::read_to_string(path)?)
}

pub fn write_labeled<W: Write>(mut w: W, examples: &[LabeledExample]) -> Result<(), ClassifyError> {
    for ex in examples {
        serde_json::to_writer(&mut w, ex)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
